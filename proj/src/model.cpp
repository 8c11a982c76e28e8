#include "rsm/model.hpp"

#include <algorithm>
#include <initializer_list>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "rsm/error.hpp"

namespace rsm {

namespace {

using Json = nlohmann::ordered_json;

std::string escape_pointer(const std::string& segment) {
  std::string out;
  for (char c : segment) {
    if (c == '~')
      out += "~0";
    else if (c == '/')
      out += "~1";
    else
      out += c;
  }
  return out;
}

[[noreturn]] void fail(const std::string& ptr, const std::string& msg) {
  throw Error(ErrorKind::parse, ptr + ": " + msg);
}

void expect_object(const Json& j, const std::string& ptr) {
  if (!j.is_object())
    fail(ptr, std::string("expected an object, found ") + j.type_name());
}

void expect_array(const Json& j, const std::string& ptr) {
  if (!j.is_array())
    fail(ptr, std::string("expected an array, found ") + j.type_name());
}

std::string expect_string(const Json& j, const std::string& ptr) {
  if (!j.is_string())
    fail(ptr, std::string("expected a string, found ") + j.type_name());
  return j.get<std::string>();
}

std::size_t expect_slot(const Json& j, const std::string& ptr,
                        std::size_t arity) {
  if (!j.is_number_unsigned())
    fail(ptr, "expected a box index");
  auto slot = j.get<std::size_t>();
  if (slot >= arity)
    fail(ptr, "box index " + std::to_string(slot) + " out of range for " +
                  std::to_string(arity) + " boxes");
  return slot;
}

const Json& get(const Json& obj, const std::string& ptr,
                const std::string& key) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(ptr, "missing key '" + key + "'");
  return *it;
}

const Json* get_opt(const Json& obj, const std::string& key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

void expect_keys(const Json& obj, const std::string& ptr,
                 std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed)
      if (item.key() == key) {
        known = true;
        break;
      }
    if (!known) fail(ptr, "unknown key '" + item.key() + "'");
  }
}

bool model_identifier(const std::string& s) {
  return is_identifier(s) && s.find('.') == std::string::npos;
}

std::string identifier_at(const Json& j, const std::string& ptr) {
  std::string s = expect_string(j, ptr);
  if (!model_identifier(s)) fail(ptr, "'" + s + "' is not a plain identifier");
  return s;
}

// Interfaces and apexes are objects mapping port names to types: "real" in
// the ODE doctrine, alphabet names in the automata doctrine.
TypedFinSet parse_ports(const Json& j, const std::string& ptr, Doctrine doc) {
  expect_object(j, ptr);
  std::vector<std::string> names, types;
  for (const auto& item : j.items()) {
    std::string p = ptr + "/" + escape_pointer(item.key());
    if (!model_identifier(item.key()))
      fail(p, "'" + item.key() + "' is not a plain identifier");
    std::string t = expect_string(item.value(), p);
    if (doc == Doctrine::ode) {
      if (t != "real") fail(p, "ODE ports have type 'real', found '" + t + "'");
      types.push_back(kRealType);
    } else {
      if (!model_identifier(t))
        fail(p, "'" + t + "' is not a plain identifier");
      types.push_back(t);
    }
    names.push_back(item.key());
  }
  return TypedFinSet(FinSet(std::move(names)), std::move(types));
}

Interface parse_interface(const Json& j, const std::string& ptr,
                          Doctrine doc) {
  expect_object(j, ptr);
  expect_keys(j, ptr, {"inputs", "outputs", "exposed"});
  auto section = [&](const char* key) {
    const Json* s = get_opt(j, key);
    return s ? parse_ports(*s, ptr + "/" + key, doc) : TypedFinSet();
  };
  return Interface(section("inputs"), section("outputs"), section("exposed"));
}

// Object mapping each name of `wanted` (exactly) to a string.
std::map<std::string, std::string> parse_assignment(const Json& j,
                                                    const std::string& ptr,
                                                    const FinSet& wanted,
                                                    const std::string& what) {
  expect_object(j, ptr);
  std::map<std::string, std::string> out;
  for (const auto& item : j.items()) {
    if (!wanted.contains(item.key()))
      fail(ptr + "/" + escape_pointer(item.key()),
           "'" + item.key() + "' is not " + what);
    out[item.key()] =
        expect_string(item.value(), ptr + "/" + escape_pointer(item.key()));
  }
  for (const auto& name : wanted)
    if (!out.count(name)) fail(ptr, "missing entry for '" + name + "'");
  return out;
}

FilledBox parse_ode_box(const Json& j, const std::string& ptr,
                        const FinSet& params) {
  expect_object(j, ptr);
  expect_keys(j, ptr, {"interface", "vars", "field", "readout", "ports"});
  Interface iface =
      parse_interface(get(j, ptr, "interface"), ptr + "/interface",
                      Doctrine::ode);

  const Json& jv = get(j, ptr, "vars");
  expect_array(jv, ptr + "/vars");
  std::vector<std::string> var_names;
  for (std::size_t i = 0; i < jv.size(); ++i)
    var_names.push_back(identifier_at(jv[i], ptr + "/vars/" + std::to_string(i)));

  OdeSystem sys;
  sys.iface = iface;
  try {
    sys.vars = FinSet(std::move(var_names));
    sys.params = params;

    auto comps_of = [&](const Json& obj, const std::string& p,
                        const FinSet& over, const std::string& what) {
      auto texts = parse_assignment(obj, p, over, what);
      std::vector<Polynomial> comps;
      for (const auto& name : over) {
        try {
          comps.push_back(parse_polynomial(texts.at(name)));
        } catch (const Error& e) {
          fail(p + "/" + escape_pointer(name), e.what());
        }
      }
      return comps;
    };

    sys.field = PolyMap(field_scope(sys.vars, iface.inputs, params), sys.vars,
                        comps_of(get(j, ptr, "field"), ptr + "/field", sys.vars,
                                 "a declared variable"));

    std::vector<Polynomial> readout_comps;
    const Json* jr = get_opt(j, "readout");
    if (jr || !iface.outputs.empty()) {
      if (!jr) fail(ptr, "missing key 'readout'");
      readout_comps = comps_of(*jr, ptr + "/readout", iface.outputs.base,
                               "an output port");
    }
    sys.readout = PolyMap(readout_scope(sys.vars, params), iface.outputs.base,
                          std::move(readout_comps));

    std::map<std::string, std::string> port_map;
    const Json* jp = get_opt(j, "ports");
    if (jp || !iface.exposed.empty()) {
      if (!jp) fail(ptr, "missing key 'ports'");
      port_map = parse_assignment(*jp, ptr + "/ports", iface.exposed.base,
                                  "an exposed port");
    }
    sys.ports = FinMap(iface.exposed.base, sys.vars, port_map);

    for (const auto& line : check_system(sys)) fail(ptr, line);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::parse) throw;
    fail(ptr, e.what());
  }
  return FilledBox(sys);
}

FilledBox parse_automata_box(const Json& j, const std::string& ptr,
                             const AlphabetMap& alphabets) {
  expect_object(j, ptr);
  expect_keys(j, ptr, {"interface", "states", "update", "readout", "observe"});
  Interface iface =
      parse_interface(get(j, ptr, "interface"), ptr + "/interface",
                      Doctrine::automata);
  for (const TypedFinSet* section :
       {&iface.inputs, &iface.outputs, &iface.exposed})
    for (const auto& type : section->types)
      if (!alphabets.count(type))
        fail(ptr + "/interface", "no alphabet named '" + type + "'");

  const Json& js = get(j, ptr, "states");
  expect_array(js, ptr + "/states");
  std::vector<std::string> state_names;
  for (std::size_t i = 0; i < js.size(); ++i) {
    std::string s = expect_string(js[i], ptr + "/states/" + std::to_string(i));
    if (s.empty()) fail(ptr + "/states/" + std::to_string(i), "empty state name");
    state_names.push_back(s);
  }

  Automaton a;
  a.iface = iface;
  a.alphabets = alphabets;
  try {
    a.states = FinSet(std::move(state_names));
  } catch (const Error& e) {
    fail(ptr + "/states", e.what());
  }

  auto letter_index = [&](const std::string& type, const std::string& letter,
                          const std::string& p) {
    const FinSet& letters = alphabets.at(type);
    auto idx = letters.find(letter);
    if (!idx)
      fail(p, "'" + letter + "' is not a letter of alphabet '" + type + "'");
    return *idx;
  };

  const auto radix = port_radix(iface.inputs, alphabets);
  const std::size_t ncombo = combo_count(radix);
  a.update.assign(a.states.size(),
                  std::vector<std::vector<std::size_t>>(ncombo));
  std::vector<std::vector<bool>> seen(a.states.size(),
                                      std::vector<bool>(ncombo, false));

  const Json& ju = get(j, ptr, "update");
  expect_array(ju, ptr + "/update");
  for (std::size_t i = 0; i < ju.size(); ++i) {
    std::string p = ptr + "/update/" + std::to_string(i);
    const Json& row = ju[i];
    expect_object(row, p);
    expect_keys(row, p, {"state", "input", "next"});

    std::string state = expect_string(get(row, p, "state"), p + "/state");
    auto s = a.states.find(state);
    if (!s) fail(p + "/state", "unknown state '" + state + "'");

    auto letters = parse_assignment(get(row, p, "input"), p + "/input",
                                    iface.inputs.base, "an input port");
    std::vector<std::size_t> digits;
    for (std::size_t k = 0; k < iface.inputs.size(); ++k)
      digits.push_back(letter_index(iface.inputs.type_at(k),
                                    letters.at(iface.inputs.base.at(k)),
                                    p + "/input"));
    std::size_t combo = combo_encode(digits, radix);
    if (seen[*s][combo]) fail(p, "duplicate update row");
    seen[*s][combo] = true;

    const Json& jn = get(row, p, "next");
    expect_array(jn, p + "/next");
    std::vector<std::size_t> next;
    for (std::size_t t = 0; t < jn.size(); ++t) {
      std::string target =
          expect_string(jn[t], p + "/next/" + std::to_string(t));
      auto ti = a.states.find(target);
      if (!ti) fail(p + "/next/" + std::to_string(t),
                    "unknown state '" + target + "'");
      next.push_back(*ti);
    }
    std::sort(next.begin(), next.end());
    if (std::adjacent_find(next.begin(), next.end()) != next.end())
      fail(p + "/next", "repeated successor");
    a.update[*s][combo] = std::move(next);
  }
  for (std::size_t s = 0; s < a.states.size(); ++s)
    for (std::size_t c = 0; c < ncombo; ++c)
      if (!seen[s][c])
        fail(ptr + "/update", "no row for state '" + a.states.at(s) + "'" +
                                  (ncombo > 1 ? " and one of its inputs" : ""));

  // per state, one letter per port; the key may be dropped with no ports
  auto parse_table = [&](const char* key, const TypedFinSet& ports) {
    std::vector<std::vector<std::size_t>> table(a.states.size());
    const Json* jt = get_opt(j, key);
    if (!jt) {
      if (!ports.empty()) fail(ptr, std::string("missing key '") + key + "'");
      return table;
    }
    std::string p = ptr + "/" + key;
    auto rows = [&] {
      expect_object(*jt, p);
      std::map<std::string, const Json*> by_state;
      for (const auto& item : jt->items()) {
        if (!a.states.contains(item.key()))
          fail(p + "/" + escape_pointer(item.key()),
               "unknown state '" + item.key() + "'");
        by_state[item.key()] = &item.value();
      }
      for (const auto& s : a.states)
        if (!by_state.count(s)) fail(p, "missing entry for state '" + s + "'");
      return by_state;
    }();
    for (std::size_t s = 0; s < a.states.size(); ++s) {
      std::string sp = p + "/" + escape_pointer(a.states.at(s));
      auto letters =
          parse_assignment(*rows.at(a.states.at(s)), sp, ports.base,
                           std::string("a port of '") + key + "'");
      for (std::size_t k = 0; k < ports.size(); ++k)
        table[s].push_back(letter_index(
            ports.type_at(k), letters.at(ports.base.at(k)), sp));
    }
    return table;
  };
  a.readout = parse_table("readout", iface.outputs);
  a.obs = parse_table("observe", iface.exposed);

  try {
    require_valid(a);
  } catch (const Error& e) {
    fail(ptr, e.what());
  }
  return FilledBox(a);
}

// Morphism shape problems throw parse errors; name resolution and leg
// construction problems are recorded as diagnostics and leave the morphism
// unbuilt.
void parse_morphism(const Json& j, const std::string& name, Model& m) {
  std::string ptr = "/morphisms/" + escape_pointer(name);
  expect_object(j, ptr);
  expect_keys(j, ptr,
              {"domain", "codomain", "feed", "out", "apex", "inner", "outer"});

  const Json& jd = get(j, ptr, "domain");
  expect_array(jd, ptr + "/domain");
  std::vector<DomainRef> refs;
  for (std::size_t i = 0; i < jd.size(); ++i) {
    std::string p = ptr + "/domain/" + std::to_string(i);
    if (jd[i].is_string()) {
      refs.push_back({false, jd[i].get<std::string>()});
    } else if (jd[i].is_object()) {
      expect_keys(jd[i], p, {"composite"});
      refs.push_back({true, expect_string(get(jd[i], p, "composite"),
                                          p + "/composite")});
    } else {
      fail(p, "expected a box name or {\"composite\": name}");
    }
  }
  const std::size_t arity = refs.size();

  Interface codomain = parse_interface(get(j, ptr, "codomain"),
                                       ptr + "/codomain", m.doctrine);
  TypedFinSet apex =
      parse_ports(get(j, ptr, "apex"), ptr + "/apex", m.doctrine);

  struct FeedEntry {
    std::string input;
    WireSource from;
  };
  std::vector<FeedEntry> feed_entries;
  if (const Json* jf = get_opt(j, "feed")) {
    expect_array(*jf, ptr + "/feed");
    for (std::size_t i = 0; i < jf->size(); ++i) {
      std::string p = ptr + "/feed/" + std::to_string(i);
      const Json& row = (*jf)[i];
      expect_object(row, p);
      expect_keys(row, p, {"box", "input", "from"});
      std::size_t slot = expect_slot(get(row, p, "box"), p + "/box", arity);
      std::string input = expect_string(get(row, p, "input"), p + "/input");
      const Json& from = get(row, p, "from");
      expect_object(from, p + "/from");
      WireSource src;
      if (get_opt(from, "output")) {
        expect_keys(from, p + "/from", {"box", "output"});
        std::size_t fs =
            expect_slot(get(from, p + "/from", "box"), p + "/from/box", arity);
        src = WireSource::from_output(
            slot_prefix(fs, arity) +
            expect_string(get(from, p + "/from", "output"), p + "/from/output"));
      } else {
        expect_keys(from, p + "/from", {"input"});
        src = WireSource::from_outer(
            expect_string(get(from, p + "/from", "input"), p + "/from/input"));
      }
      feed_entries.push_back({slot_prefix(slot, arity) + input, src});
    }
  }

  std::map<std::string, std::string> out_sel;
  if (const Json* jo = get_opt(j, "out")) {
    expect_object(*jo, ptr + "/out");
    for (const auto& item : jo->items()) {
      std::string p = ptr + "/out/" + escape_pointer(item.key());
      expect_object(item.value(), p);
      expect_keys(item.value(), p, {"box", "output"});
      std::size_t slot = expect_slot(get(item.value(), p, "box"), p + "/box", arity);
      out_sel[item.key()] =
          slot_prefix(slot, arity) +
          expect_string(get(item.value(), p, "output"), p + "/output");
    }
  }

  struct LegEntry {
    std::string port;
    std::string pool;
  };
  std::vector<LegEntry> inner_entries;
  if (const Json* ji = get_opt(j, "inner")) {
    expect_array(*ji, ptr + "/inner");
    for (std::size_t i = 0; i < ji->size(); ++i) {
      std::string p = ptr + "/inner/" + std::to_string(i);
      const Json& row = (*ji)[i];
      expect_object(row, p);
      expect_keys(row, p, {"box", "port", "pool"});
      std::size_t slot = expect_slot(get(row, p, "box"), p + "/box", arity);
      inner_entries.push_back(
          {slot_prefix(slot, arity) +
               expect_string(get(row, p, "port"), p + "/port"),
           expect_string(get(row, p, "pool"), p + "/pool")});
    }
  }

  std::map<std::string, std::string> outer_map;
  if (const Json* jo = get_opt(j, "outer")) {
    expect_object(*jo, ptr + "/outer");
    for (const auto& item : jo->items())
      outer_map[item.key()] = expect_string(
          item.value(), ptr + "/outer/" + escape_pointer(item.key()));
  }

  // shape done; resolve names
  m.declared_morphisms.push_back(name);
  auto diag = [&](const std::string& p, const std::string& msg) {
    m.diagnostics.push_back(p + ": " + msg);
  };

  std::vector<Interface> dom_ifaces;
  bool resolved = true;
  for (std::size_t i = 0; i < arity; ++i) {
    std::string p = ptr + "/domain/" + std::to_string(i);
    if (refs[i].composite) {
      const ModelMorphism* mm = m.find_morphism(refs[i].name);
      if (!mm) {
        bool declared =
            std::find(m.declared_morphisms.begin(), m.declared_morphisms.end(),
                      refs[i].name) != m.declared_morphisms.end();
        if (!declared)
          diag(p, "morphism '" + refs[i].name + "' is not defined before use");
        resolved = false;
        continue;
      }
      dom_ifaces.push_back(mm->morphism.codomain);
    } else {
      const FilledBox* box = m.find_box(refs[i].name);
      if (!box) {
        diag(p, "unknown box '" + refs[i].name + "'");
        resolved = false;
        continue;
      }
      dom_ifaces.push_back(box->iface());
    }
  }
  if (m.doctrine == Doctrine::automata)
    for (std::size_t k = 0; k < apex.size(); ++k)
      if (!m.alphabets.count(apex.type_at(k))) {
        diag(ptr + "/apex/" + escape_pointer(apex.base.at(k)),
             "no alphabet named '" + apex.type_at(k) + "'");
        resolved = false;
      }
  if (!resolved) return;

  RsmMorphism morphism;
  morphism.domain = dom_ifaces;
  morphism.codomain = codomain;
  for (auto& entry : feed_entries)
    if (!morphism.prism.feed.emplace(entry.input, entry.from).second) {
      diag(ptr + "/feed", "duplicate feed for input '" + entry.input + "'");
      return;
    }
  morphism.prism.out_sel = std::move(out_sel);

  morphism.ports.apex = apex;
  std::map<std::string, std::string> inner_map;
  for (auto& entry : inner_entries)
    if (!inner_map.emplace(entry.port, entry.pool).second) {
      diag(ptr + "/inner", "duplicate leg for port '" + entry.port + "'");
      return;
    }
  auto tensored = tensor_interfaces(dom_ifaces);
  try {
    morphism.ports.inner =
        FinMap(tensored.iface.exposed.base, apex.base, inner_map);
  } catch (const Error& e) {
    diag(ptr + "/inner", e.what());
    return;
  }
  try {
    morphism.ports.outer = FinMap(codomain.exposed.base, apex.base, outer_map);
  } catch (const Error& e) {
    diag(ptr + "/outer", e.what());
    return;
  }

  m.morphisms.emplace_back(name, ModelMorphism{std::move(refs), std::move(morphism)});
}

ComposeNode parse_tree(const Json& j, const std::string& ptr) {
  ComposeNode node;
  if (j.is_string()) {
    node.box = j.get<std::string>();
    if (node.box.empty()) fail(ptr, "empty box name");
    return node;
  }
  expect_object(j, ptr);
  expect_keys(j, ptr, {"morphism", "boxes"});
  node.morphism = expect_string(get(j, ptr, "morphism"), ptr + "/morphism");
  const Json& jb = get(j, ptr, "boxes");
  expect_array(jb, ptr + "/boxes");
  for (std::size_t i = 0; i < jb.size(); ++i)
    node.children.push_back(
        parse_tree(jb[i], ptr + "/boxes/" + std::to_string(i)));
  return node;
}

}  // namespace

const FilledBox* Model::find_box(const std::string& name) const {
  for (const auto& [n, box] : boxes)
    if (n == name) return &box;
  return nullptr;
}

const ModelMorphism* Model::find_morphism(const std::string& name) const {
  for (const auto& [n, mm] : morphisms)
    if (n == name) return &mm;
  return nullptr;
}

Model parse_model(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::parse, std::string("/: ") + e.what());
  }
  expect_object(j, "/");
  expect_keys(j, "/",
              {"doctrine", "parameters", "alphabets", "boxes", "morphisms",
               "compose"});

  Model m;
  std::string doctrine = expect_string(get(j, "/", "doctrine"), "/doctrine");
  if (doctrine == "ode")
    m.doctrine = Doctrine::ode;
  else if (doctrine == "automata")
    m.doctrine = Doctrine::automata;
  else
    fail("/doctrine", "unknown doctrine '" + doctrine + "'");

  if (m.doctrine == Doctrine::ode) {
    if (get_opt(j, "alphabets"))
      fail("/alphabets", "ODE models do not declare alphabets");
    if (const Json* jp = get_opt(j, "parameters")) {
      expect_array(*jp, "/parameters");
      std::vector<std::string> names;
      for (std::size_t i = 0; i < jp->size(); ++i)
        names.push_back(
            identifier_at((*jp)[i], "/parameters/" + std::to_string(i)));
      try {
        m.parameters = FinSet(std::move(names));
      } catch (const Error& e) {
        fail("/parameters", e.what());
      }
    }
  } else {
    if (get_opt(j, "parameters"))
      fail("/parameters", "automata models do not declare parameters");
    if (const Json* ja = get_opt(j, "alphabets")) {
      expect_object(*ja, "/alphabets");
      for (const auto& item : ja->items()) {
        std::string p = "/alphabets/" + escape_pointer(item.key());
        if (!model_identifier(item.key()))
          fail(p, "'" + item.key() + "' is not a plain identifier");
        expect_array(item.value(), p);
        std::vector<std::string> letters;
        for (std::size_t i = 0; i < item.value().size(); ++i) {
          std::string letter =
              expect_string(item.value()[i], p + "/" + std::to_string(i));
          if (letter.empty()) fail(p + "/" + std::to_string(i), "empty letter");
          letters.push_back(letter);
        }
        try {
          m.alphabets[item.key()] = FinSet(std::move(letters));
        } catch (const Error& e) {
          fail(p, e.what());
        }
      }
    }
  }

  const Json& jb = get(j, "/", "boxes");
  expect_object(jb, "/boxes");
  for (const auto& item : jb.items()) {
    std::string ptr = "/boxes/" + escape_pointer(item.key());
    if (!model_identifier(item.key()))
      fail(ptr, "'" + item.key() + "' is not a plain identifier");
    m.declared_boxes.push_back(item.key());
    m.boxes.emplace_back(
        item.key(),
        m.doctrine == Doctrine::ode
            ? parse_ode_box(item.value(), ptr, m.parameters)
            : parse_automata_box(item.value(), ptr, m.alphabets));
  }

  if (const Json* jm = get_opt(j, "morphisms")) {
    expect_object(*jm, "/morphisms");
    for (const auto& item : jm->items()) {
      if (!model_identifier(item.key()))
        fail("/morphisms/" + escape_pointer(item.key()),
             "'" + item.key() + "' is not a plain identifier");
      parse_morphism(item.value(), item.key(), m);
    }
  }

  m.root = parse_tree(get(j, "/", "compose"), "/compose");
  return m;
}

namespace {

// Resolves the interface a tree node composes to, adding diagnostics; nullopt
// when resolution already failed deeper down.
std::optional<Interface> walk_tree(const Model& m, const ComposeNode& node,
                                   const std::string& ptr,
                                   std::vector<std::string>& diags) {
  if (node.leaf()) {
    const FilledBox* box = m.find_box(node.box);
    if (!box) {
      diags.push_back(ptr + ": unknown box '" + node.box + "'");
      return std::nullopt;
    }
    return box->iface();
  }

  const ModelMorphism* mm = m.find_morphism(node.morphism);
  bool declared =
      std::find(m.declared_morphisms.begin(), m.declared_morphisms.end(),
                node.morphism) != m.declared_morphisms.end();
  if (!mm && !declared)
    diags.push_back(ptr + ": unknown morphism '" + node.morphism + "'");
  if (mm && node.children.empty())
    diags.push_back(ptr + ": a composition needs at least one box");
  if (mm && node.children.size() != mm->morphism.domain.size())
    diags.push_back(ptr + ": morphism '" + node.morphism + "' expects " +
                    std::to_string(mm->morphism.domain.size()) +
                    " boxes, got " + std::to_string(node.children.size()));

  bool ok = mm && node.children.size() == mm->morphism.domain.size() &&
            !node.children.empty();
  for (std::size_t i = 0; i < node.children.size(); ++i) {
    std::string p = ptr + "/boxes/" + std::to_string(i);
    auto child = walk_tree(m, node.children[i], p, diags);
    if (!child) {
      ok = false;
      continue;
    }
    if (mm && i < mm->morphism.domain.size() &&
        *child != mm->morphism.domain[i]) {
      diags.push_back(p + ": interface does not match slot " +
                      std::to_string(i) + " of morphism '" + node.morphism +
                      "'");
      ok = false;
    }
  }
  if (!ok) return std::nullopt;
  return mm->morphism.codomain;
}

FilledBox compose_walk(const Model& m, const ComposeNode& node) {
  if (node.leaf()) return *m.find_box(node.box);
  std::vector<FilledBox> fillings;
  fillings.reserve(node.children.size());
  for (const auto& child : node.children)
    fillings.push_back(compose_walk(m, child));
  return act(m.find_morphism(node.morphism)->morphism, fillings).box;
}

}  // namespace

std::vector<std::string> check_model(const Model& m) {
  std::vector<std::string> diags = m.diagnostics;
  for (const auto& [name, mm] : m.morphisms)
    for (const auto& line : validate(mm.morphism))
      diags.push_back("/morphisms/" + escape_pointer(name) + ": " + line);
  walk_tree(m, m.root, "/compose", diags);
  return diags;
}

FilledBox compose_model(const Model& m) { return compose_walk(m, m.root); }

Model composed_model(const Model& src, const FilledBox& box) {
  Model out;
  out.doctrine = src.doctrine;
  if (out.doctrine == Doctrine::ode)
    out.parameters = box.ode().params;
  else
    out.alphabets = box.aut().alphabets;
  out.boxes.emplace_back("composite", box);
  out.declared_boxes.push_back("composite");
  out.root.box = "composite";
  return out;
}

namespace {

std::string shown_type(const std::string& type, Doctrine doc) {
  return doc == Doctrine::ode ? "real" : type;
}

Json ports_json(const TypedFinSet& ports, Doctrine doc) {
  Json o = Json::object();
  for (std::size_t k = 0; k < ports.size(); ++k)
    o[ports.base.at(k)] = shown_type(ports.type_at(k), doc);
  return o;
}

Json interface_json(const Interface& iface, Doctrine doc) {
  Json o = Json::object();
  o["inputs"] = ports_json(iface.inputs, doc);
  o["outputs"] = ports_json(iface.outputs, doc);
  o["exposed"] = ports_json(iface.exposed, doc);
  return o;
}

Json ode_box_json(const OdeSystem& sys) {
  std::vector<std::string> factor_order;
  for (const auto& p : sys.params) factor_order.push_back(p);
  for (const auto& x : sys.iface.inputs.base) factor_order.push_back(x);
  for (const auto& v : sys.vars) factor_order.push_back(v);

  Json o = Json::object();
  o["interface"] = interface_json(sys.iface, Doctrine::ode);
  o["vars"] = sys.vars.elements();
  Json field = Json::object();
  for (const auto& v : sys.vars) field[v] = sys.field.at(v).str(factor_order);
  o["field"] = std::move(field);
  if (!sys.iface.outputs.empty()) {
    Json readout = Json::object();
    for (const auto& port : sys.iface.outputs.base)
      readout[port] = sys.readout.at(port).str(factor_order);
    o["readout"] = std::move(readout);
  }
  if (!sys.iface.exposed.empty()) {
    Json ports = Json::object();
    for (const auto& port : sys.iface.exposed.base) ports[port] = sys.ports(port);
    o["ports"] = std::move(ports);
  }
  return o;
}

Json automata_box_json(const Automaton& a) {
  Json o = Json::object();
  o["interface"] = interface_json(a.iface, Doctrine::automata);
  o["states"] = a.states.elements();

  const auto radix = port_radix(a.iface.inputs, a.alphabets);
  Json update = Json::array();
  for (std::size_t s = 0; s < a.states.size(); ++s)
    for (std::size_t c = 0; c < a.update[s].size(); ++c) {
      Json row = Json::object();
      row["state"] = a.states.at(s);
      Json input = Json::object();
      auto digits = combo_decode(c, radix);
      for (std::size_t k = 0; k < a.iface.inputs.size(); ++k)
        input[a.iface.inputs.base.at(k)] =
            a.alphabets.at(a.iface.inputs.type_at(k)).at(digits[k]);
      row["input"] = std::move(input);
      Json next = Json::array();
      for (std::size_t t : a.update[s][c]) next.push_back(a.states.at(t));
      row["next"] = std::move(next);
      update.push_back(std::move(row));
    }
  o["update"] = std::move(update);

  auto table_json = [&](const TypedFinSet& ports,
                        const std::vector<std::vector<std::size_t>>& table) {
    Json t = Json::object();
    for (std::size_t s = 0; s < a.states.size(); ++s) {
      Json row = Json::object();
      for (std::size_t k = 0; k < ports.size(); ++k)
        row[ports.base.at(k)] =
            a.alphabets.at(ports.type_at(k)).at(table[s][k]);
      t[a.states.at(s)] = std::move(row);
    }
    return t;
  };
  if (!a.iface.outputs.empty())
    o["readout"] = table_json(a.iface.outputs, a.readout);
  if (!a.iface.exposed.empty())
    o["observe"] = table_json(a.iface.exposed, a.obs);
  return o;
}

std::pair<std::size_t, std::string> unflatten(const std::string& flat,
                                              std::size_t arity) {
  if (arity == 1) return {0, flat};
  auto dot = flat.find('.');
  return {std::stoul(flat.substr(1, dot - 1)), flat.substr(dot + 1)};
}

Json morphism_json(const ModelMorphism& mm, Doctrine doc) {
  const std::size_t arity = mm.domain.size();
  Json o = Json::object();
  Json domain = Json::array();
  for (const auto& ref : mm.domain) {
    if (ref.composite)
      domain.push_back(Json{{"composite", ref.name}});
    else
      domain.push_back(ref.name);
  }
  o["domain"] = std::move(domain);
  o["codomain"] = interface_json(mm.morphism.codomain, doc);

  Json feed = Json::array();
  for (const auto& [input, src] : mm.morphism.prism.feed) {
    auto [slot, port] = unflatten(input, arity);
    Json row = Json::object();
    row["box"] = slot;
    row["input"] = port;
    if (src.kind == WireSource::Kind::inner_output) {
      auto [fs, fp] = unflatten(src.name, arity);
      row["from"] = Json{{"box", fs}, {"output", fp}};
    } else {
      row["from"] = Json{{"input", src.name}};
    }
    feed.push_back(std::move(row));
  }
  o["feed"] = std::move(feed);

  Json out = Json::object();
  for (const auto& [name, source] : mm.morphism.prism.out_sel) {
    auto [slot, port] = unflatten(source, arity);
    out[name] = Json{{"box", slot}, {"output", port}};
  }
  o["out"] = std::move(out);

  o["apex"] = ports_json(mm.morphism.ports.apex, doc);
  Json inner = Json::array();
  const FinMap& leg = mm.morphism.ports.inner;
  for (const auto& flat : leg.dom()) {
    auto [slot, port] = unflatten(flat, arity);
    inner.push_back(Json{{"box", slot}, {"port", port}, {"pool", leg(flat)}});
  }
  o["inner"] = std::move(inner);

  Json outer = Json::object();
  for (const auto& port : mm.morphism.ports.outer.dom())
    outer[port] = mm.morphism.ports.outer(port);
  o["outer"] = std::move(outer);
  return o;
}

Json tree_json(const ComposeNode& node) {
  if (node.leaf()) return node.box;
  Json boxes = Json::array();
  for (const auto& child : node.children) boxes.push_back(tree_json(child));
  Json o = Json::object();
  o["morphism"] = node.morphism;
  o["boxes"] = std::move(boxes);
  return o;
}

}  // namespace

std::string print_model(const Model& m) {
  Json o = Json::object();
  o["doctrine"] = m.doctrine == Doctrine::ode ? "ode" : "automata";
  if (m.doctrine == Doctrine::ode) {
    o["parameters"] = m.parameters.elements();
  } else {
    Json alphabets = Json::object();
    for (const auto& [name, letters] : m.alphabets)
      alphabets[name] = letters.elements();
    o["alphabets"] = std::move(alphabets);
  }
  Json boxes = Json::object();
  for (const auto& [name, box] : m.boxes)
    boxes[name] = m.doctrine == Doctrine::ode ? ode_box_json(box.ode())
                                              : automata_box_json(box.aut());
  o["boxes"] = std::move(boxes);
  if (!m.morphisms.empty()) {
    Json morphisms = Json::object();
    for (const auto& [name, mm] : m.morphisms)
      morphisms[name] = morphism_json(mm, m.doctrine);
    o["morphisms"] = std::move(morphisms);
  }
  o["compose"] = tree_json(m.root);
  return o.dump(2) + "\n";
}

}  // namespace rsm
