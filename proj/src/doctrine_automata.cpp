#include "rsm/doctrine_automata.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "rsm/error.hpp"

namespace rsm {

namespace {

constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

const FinSet& letters_of(const AlphabetMap& alphabets, const std::string& type,
                         const std::string& port) {
  auto it = alphabets.find(type);
  if (it == alphabets.end()) {
    throw Error(ErrorKind::unknown_name,
                "no alphabet named '" + type + "' for port '" + port + "'");
  }
  return it->second;
}

std::vector<std::string> decode_names(std::size_t code,
                                      const TypedFinSet& ports,
                                      const AlphabetMap& alphabets,
                                      std::span<const std::size_t> radix) {
  auto digits = combo_decode(code, radix);
  std::vector<std::string> parts;
  parts.reserve(digits.size());
  for (std::size_t k = 0; k < digits.size(); ++k) {
    const FinSet& letters =
        alphabets.at(ports.type_of(ports.base.at(k)));
    parts.push_back(letters.at(digits[k]));
  }
  return parts;
}

}  // namespace

std::string tuple_name(std::span<const std::string> parts) {
  if (parts.empty()) return "()";
  if (parts.size() == 1) return parts[0];
  std::string out = "(";
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += ",";
    out += parts[i];
  }
  out += ")";
  return out;
}

std::size_t combo_count(std::span<const std::size_t> radix) {
  std::size_t n = 1;
  for (std::size_t r : radix) n *= r;
  return n;
}

std::size_t combo_encode(std::span<const std::size_t> digits,
                         std::span<const std::size_t> radix) {
  std::size_t code = 0;
  for (std::size_t k = 0; k < radix.size(); ++k) {
    code = code * radix[k] + digits[k];
  }
  return code;
}

std::vector<std::size_t> combo_decode(std::size_t code,
                                      std::span<const std::size_t> radix) {
  std::vector<std::size_t> digits(radix.size(), 0);
  for (std::size_t k = radix.size(); k-- > 0;) {
    digits[k] = code % radix[k];
    code /= radix[k];
  }
  return digits;
}

std::vector<std::size_t> port_radix(const TypedFinSet& ports,
                                    const AlphabetMap& alphabets) {
  std::vector<std::size_t> radix;
  radix.reserve(ports.size());
  for (const auto& p : ports.base.elements()) {
    radix.push_back(letters_of(alphabets, ports.type_of(p), p).size());
  }
  return radix;
}

FinSet value_tuple_set(const TypedFinSet& ports,
                       const AlphabetMap& alphabets) {
  auto radix = port_radix(ports, alphabets);
  std::vector<std::string> names;
  std::size_t n = combo_count(radix);
  names.reserve(n);
  for (std::size_t code = 0; code < n; ++code) {
    auto parts = decode_names(code, ports, alphabets, radix);
    names.push_back(tuple_name(parts));
  }
  return FinSet(names);
}

FinMap restrict_valuations(const TypedFinSet& sub, const FinMap& assign,
                           const TypedFinSet& full,
                           const AlphabetMap& alphabets) {
  if (assign.dom() != sub.base || assign.cod() != full.base) {
    throw Error(ErrorKind::boundary_mismatch,
                "pool assignment does not connect the two pool sets");
  }
  auto full_rx = port_radix(full, alphabets);
  auto sub_rx = port_radix(sub, alphabets);
  FinSet full_val = value_tuple_set(full, alphabets);
  FinSet sub_val = value_tuple_set(sub, alphabets);
  std::vector<std::size_t> where(sub.size());
  for (std::size_t k = 0; k < where.size(); ++k) {
    where[k] = full.base.index_of(assign(sub.base.at(k)));
  }
  std::vector<std::size_t> table(full_val.size());
  for (std::size_t fc = 0; fc < full_val.size(); ++fc) {
    auto fd = combo_decode(fc, full_rx);
    std::vector<std::size_t> sd(where.size());
    for (std::size_t k = 0; k < where.size(); ++k) sd[k] = fd[where[k]];
    table[fc] = combo_encode(sd, sub_rx);
  }
  return FinMap(full_val, sub_val, table);
}

std::vector<std::string> check_automaton(const Automaton& a) {
  std::vector<std::string> diags;
  auto check_ports = [&](const TypedFinSet& ports, const std::string& what) {
    for (const auto& p : ports.base.elements()) {
      const std::string& t = ports.type_of(p);
      auto it = a.alphabets.find(t);
      if (it == a.alphabets.end()) {
        diags.push_back(what + " port '" + p + "' has no alphabet named '" +
                        t + "'");
      } else if (it->second.size() == 0) {
        diags.push_back("alphabet '" + t + "' is empty");
      }
    }
  };
  check_ports(a.iface.inputs, "input");
  check_ports(a.iface.outputs, "output");
  check_ports(a.iface.exposed, "exposed");
  if (!diags.empty()) return diags;

  auto in_radix = port_radix(a.iface.inputs, a.alphabets);
  std::size_t ncombo = combo_count(in_radix);
  std::size_t nstates = a.states.size();

  if (a.update.size() != nstates) {
    diags.push_back("update table has " + std::to_string(a.update.size()) +
                    " rows for " + std::to_string(nstates) + " states");
    return diags;
  }
  for (std::size_t s = 0; s < nstates; ++s) {
    if (a.update[s].size() != ncombo) {
      diags.push_back("state '" + a.states.at(s) + "' has " +
                      std::to_string(a.update[s].size()) +
                      " update entries for " + std::to_string(ncombo) +
                      " input tuples");
      continue;
    }
    for (const auto& succ : a.update[s]) {
      for (std::size_t i = 0; i < succ.size(); ++i) {
        if (succ[i] >= nstates) {
          diags.push_back("state '" + a.states.at(s) +
                          "' has an out-of-range successor index");
        } else if (i > 0 && succ[i - 1] >= succ[i]) {
          diags.push_back("state '" + a.states.at(s) +
                          "' has an unsorted or repeated successor set");
        }
      }
    }
  }

  auto check_rows =
      [&](const std::vector<std::vector<std::size_t>>& table,
          const TypedFinSet& ports, const std::string& what) {
        if (table.size() != nstates) {
          diags.push_back(what + " table has " + std::to_string(table.size()) +
                          " rows for " + std::to_string(nstates) + " states");
          return;
        }
        for (std::size_t s = 0; s < nstates; ++s) {
          if (table[s].size() != ports.size()) {
            diags.push_back("state '" + a.states.at(s) + "' has " +
                            std::to_string(table[s].size()) + " " + what +
                            " letters for " + std::to_string(ports.size()) +
                            " ports");
            continue;
          }
          for (std::size_t k = 0; k < ports.size(); ++k) {
            const auto& p = ports.base.at(k);
            const FinSet& letters = a.alphabets.at(ports.type_of(p));
            if (table[s][k] >= letters.size()) {
              diags.push_back("state '" + a.states.at(s) + "' " + what +
                              " on port '" + p +
                              "' is not a letter of its alphabet");
            }
          }
        }
      };
  check_rows(a.readout, a.iface.outputs, "readout");
  check_rows(a.obs, a.iface.exposed, "observation");
  return diags;
}

void require_valid(const Automaton& a) {
  auto diags = check_automaton(a);
  if (!diags.empty()) throw Error(ErrorKind::invalid_model, diags.front());
}

Automaton unit_automaton() {
  Automaton a;
  a.iface = Interface(TypedFinSet(), TypedFinSet(), TypedFinSet());
  a.states = FinSet(std::vector<std::string>{"*"});
  a.update = {{{0}}};
  a.readout = {{}};
  a.obs = {{}};
  return a;
}

AutShareResult share(const Automaton& a, const PortCospan& ports) {
  if (ports.inner.dom() != a.iface.exposed.base) {
    throw Error(ErrorKind::boundary_mismatch,
                "pooling leg domain does not match the exposed ports");
  }
  if (ports.inner.cod() != ports.apex.base ||
      ports.outer.cod() != ports.apex.base) {
    throw Error(ErrorKind::boundary_mismatch,
                "cospan legs do not land in the pool set");
  }
  for (const auto& p : a.iface.exposed.base.elements()) {
    const std::string& pt = a.iface.exposed.type_of(p);
    const std::string& qt = ports.apex.type_of(ports.inner(p));
    if (pt != qt) {
      throw Error(ErrorKind::type_mismatch,
                  "port '" + p + "' of type '" + pt +
                      "' pooled into '" + ports.inner(p) + "' of type '" + qt +
                      "'");
    }
  }
  for (const auto& q : ports.apex.base.elements()) {
    letters_of(a.alphabets, ports.apex.type_of(q), q);
  }
  for (const auto& m : ports.outer.dom().elements()) {
    letters_of(a.alphabets, ports.apex.type_of(ports.outer(m)), m);
  }

  // An empty cospan cannot constrain or rename anything.
  if (a.iface.exposed.base.size() == 0 && ports.apex.base.size() == 0) {
    AutShareResult r;
    r.aut = a;
    r.aut.iface =
        Interface(a.iface.inputs, a.iface.outputs, TypedFinSet());
    r.state_proj = FinMap::identity(a.states);
    FinSet unit_values(std::vector<std::string>{"()"});
    r.apex_proj = FinMap::constant(a.states, unit_values, "()");
    return r;
  }

  auto pool_rx = port_radix(ports.apex, a.alphabets);
  FinSet q_val = value_tuple_set(ports.apex, a.alphabets);
  auto m_rx = port_radix(a.iface.exposed, a.alphabets);
  FinSet m_val = value_tuple_set(a.iface.exposed, a.alphabets);

  std::size_t nstates = a.states.size();
  std::vector<std::size_t> obs_code(nstates);
  for (std::size_t s = 0; s < nstates; ++s) {
    obs_code[s] = combo_encode(a.obs[s], m_rx);
  }
  FinMap obs_map(a.states, m_val, obs_code);

  std::size_t nq = q_val.size();
  FinMap translate =
      restrict_valuations(a.iface.exposed, ports.inner, ports.apex,
                          a.alphabets);

  PullbackResult pb = pullback(obs_map, translate);
  std::size_t nnew = pb.apex.size();

  std::vector<std::vector<std::size_t>> pair_index(
      nstates, std::vector<std::size_t>(nq, npos));
  for (std::size_t z = 0; z < nnew; ++z) {
    pair_index[pb.proj1.at_index(z)][pb.proj2.at_index(z)] = z;
  }
  std::vector<std::vector<std::size_t>> fibre(m_val.size());
  for (std::size_t qc = 0; qc < nq; ++qc) {
    fibre[translate.at_index(qc)].push_back(qc);
  }

  Automaton out;
  out.alphabets = a.alphabets;
  out.states = pb.apex;
  std::vector<std::string> outer_types;
  outer_types.reserve(ports.outer.dom().size());
  for (const auto& m : ports.outer.dom().elements()) {
    outer_types.push_back(ports.apex.type_of(ports.outer(m)));
  }
  out.iface = Interface(a.iface.inputs, a.iface.outputs,
                        TypedFinSet(ports.outer.dom(), outer_types));

  auto in_rx = port_radix(a.iface.inputs, a.alphabets);
  std::size_t ncombo = combo_count(in_rx);
  out.update.assign(nnew, {});
  out.readout.assign(nnew, {});
  out.obs.assign(nnew, {});
  std::vector<std::size_t> outer_pool(ports.outer.dom().size());
  for (std::size_t k = 0; k < outer_pool.size(); ++k) {
    outer_pool[k] =
        ports.apex.base.index_of(ports.outer(ports.outer.dom().at(k)));
  }
  for (std::size_t z = 0; z < nnew; ++z) {
    std::size_t s = pb.proj1.at_index(z);
    std::size_t qc = pb.proj2.at_index(z);
    out.update[z].resize(ncombo);
    for (std::size_t c = 0; c < ncombo; ++c) {
      std::vector<std::size_t>& succ = out.update[z][c];
      for (std::size_t sn : a.update[s][c]) {
        for (std::size_t qn : fibre[obs_code[sn]]) {
          succ.push_back(pair_index[sn][qn]);
        }
      }
      std::sort(succ.begin(), succ.end());
    }
    out.readout[z] = a.readout[s];
    auto qd = combo_decode(qc, pool_rx);
    out.obs[z].resize(outer_pool.size());
    for (std::size_t k = 0; k < outer_pool.size(); ++k) {
      out.obs[z][k] = qd[outer_pool[k]];
    }
  }

  AutShareResult r;
  r.aut = std::move(out);
  r.state_proj = pb.proj1;
  r.apex_proj = pb.proj2;
  return r;
}

Automaton wire(const Automaton& a, const Prism& prism,
               const Interface& outer) {
  for (const auto& x : a.iface.inputs.base.elements()) {
    auto it = prism.feed.find(x);
    if (it == prism.feed.end()) {
      throw Error(ErrorKind::boundary_mismatch,
                  "inner input '" + x + "' is not fed");
    }
    const WireSource& src = it->second;
    std::string src_type;
    if (src.kind == WireSource::Kind::inner_output) {
      if (!a.iface.outputs.base.contains(src.name)) {
        throw Error(ErrorKind::boundary_mismatch,
                    "inner input '" + x + "' is fed from unknown output '" +
                        src.name + "'");
      }
      src_type = a.iface.outputs.type_of(src.name);
    } else {
      if (!outer.inputs.base.contains(src.name)) {
        throw Error(ErrorKind::boundary_mismatch,
                    "inner input '" + x +
                        "' is fed from unknown outer input '" + src.name +
                        "'");
      }
      src_type = outer.inputs.type_of(src.name);
    }
    if (src_type != a.iface.inputs.type_of(x)) {
      throw Error(ErrorKind::type_mismatch,
                  "inner input '" + x + "' of type '" +
                      a.iface.inputs.type_of(x) + "' is fed from '" +
                      src.name + "' of type '" + src_type + "'");
    }
  }
  for (const auto& o : outer.outputs.base.elements()) {
    auto it = prism.out_sel.find(o);
    if (it == prism.out_sel.end()) {
      throw Error(ErrorKind::boundary_mismatch,
                  "composite output '" + o + "' is not selected");
    }
    if (!a.iface.outputs.base.contains(it->second)) {
      throw Error(ErrorKind::boundary_mismatch,
                  "composite output '" + o +
                      "' selects unknown inner output '" + it->second + "'");
    }
    if (outer.outputs.type_of(o) !=
        a.iface.outputs.type_of(it->second)) {
      throw Error(ErrorKind::type_mismatch,
                  "composite output '" + o + "' of type '" +
                      outer.outputs.type_of(o) + "' selects '" + it->second +
                      "' of type '" + a.iface.outputs.type_of(it->second) +
                      "'");
    }
  }
  if (outer.exposed != a.iface.exposed) {
    throw Error(ErrorKind::boundary_mismatch,
                "machine composition does not change exposed ports");
  }
  for (const auto& y : outer.inputs.base.elements()) {
    letters_of(a.alphabets, outer.inputs.type_of(y), y);
  }

  struct Src {
    bool from_output;
    std::size_t idx;
  };
  std::vector<Src> srcs(a.iface.inputs.size());
  for (std::size_t k = 0; k < srcs.size(); ++k) {
    const WireSource& w = prism.feed.at(a.iface.inputs.base.at(k));
    if (w.kind == WireSource::Kind::inner_output) {
      srcs[k] = {true, a.iface.outputs.base.index_of(w.name)};
    } else {
      srcs[k] = {false, outer.inputs.base.index_of(w.name)};
    }
  }

  auto inner_rx = port_radix(a.iface.inputs, a.alphabets);
  auto outer_rx = port_radix(outer.inputs, a.alphabets);
  std::size_t nouter = combo_count(outer_rx);
  std::size_t nstates = a.states.size();

  Automaton out;
  out.iface = outer;
  out.alphabets = a.alphabets;
  out.states = a.states;
  out.obs = a.obs;
  out.update.assign(nstates, {});
  out.readout.assign(nstates, {});
  std::vector<std::size_t> digits(srcs.size());
  for (std::size_t s = 0; s < nstates; ++s) {
    out.update[s].resize(nouter);
    for (std::size_t oc = 0; oc < nouter; ++oc) {
      auto od = combo_decode(oc, outer_rx);
      for (std::size_t k = 0; k < srcs.size(); ++k) {
        digits[k] =
            srcs[k].from_output ? a.readout[s][srcs[k].idx] : od[srcs[k].idx];
      }
      out.update[s][oc] = a.update[s][combo_encode(digits, inner_rx)];
    }
    out.readout[s].resize(outer.outputs.size());
    for (std::size_t k = 0; k < outer.outputs.size(); ++k) {
      out.readout[s][k] = a.readout[s][a.iface.outputs.base.index_of(
          prism.out_sel.at(outer.outputs.base.at(k)))];
    }
  }
  return out;
}

AutTensorResult tensor_automata(std::span<const Automaton> slots) {
  AutTensorResult r;
  if (slots.empty()) {
    r.aut = unit_automaton();
    return r;
  }

  AlphabetMap alpha;
  for (const auto& a : slots) {
    for (const auto& [name, letters] : a.alphabets) {
      auto it = alpha.find(name);
      if (it == alpha.end()) {
        alpha.emplace(name, letters);
      } else if (it->second != letters) {
        throw Error(ErrorKind::type_mismatch,
                    "alphabet '" + name + "' disagrees between boxes");
      }
    }
  }

  if (slots.size() == 1) {
    r.aut = slots[0];
    r.aut.alphabets = std::move(alpha);
    r.state_proj = {FinMap::identity(slots[0].states)};
    return r;
  }

  std::vector<Interface> ifaces;
  ifaces.reserve(slots.size());
  for (const auto& a : slots) ifaces.push_back(a.iface);
  TensorInterfacesResult ti = tensor_interfaces(ifaces);

  std::vector<std::size_t> state_rx;
  state_rx.reserve(slots.size());
  for (const auto& a : slots) state_rx.push_back(a.states.size());
  std::size_t nstates = combo_count(state_rx);

  std::vector<std::string> names;
  names.reserve(nstates);
  std::vector<std::vector<std::size_t>> proj_tables(slots.size());
  for (std::size_t code = 0; code < nstates; ++code) {
    auto sd = combo_decode(code, state_rx);
    std::vector<std::string> parts(slots.size());
    for (std::size_t i = 0; i < slots.size(); ++i) {
      parts[i] = slots[i].states.at(sd[i]);
      proj_tables[i].push_back(sd[i]);
    }
    names.push_back(tuple_name(parts));
  }
  FinSet states(names);

  std::vector<std::vector<std::size_t>> slot_in_rx(slots.size());
  std::vector<std::size_t> slot_ncombo(slots.size());
  for (std::size_t i = 0; i < slots.size(); ++i) {
    slot_in_rx[i] = port_radix(slots[i].iface.inputs, alpha);
    slot_ncombo[i] = combo_count(slot_in_rx[i]);
  }
  std::size_t ncombo = 1;
  for (std::size_t n : slot_ncombo) ncombo *= n;

  Automaton out;
  out.iface = ti.iface;
  out.alphabets = alpha;
  out.states = states;
  out.update.assign(nstates, {});
  out.readout.assign(nstates, {});
  out.obs.assign(nstates, {});
  for (std::size_t code = 0; code < nstates; ++code) {
    auto sd = combo_decode(code, state_rx);
    out.update[code].resize(ncombo);
    for (std::size_t c = 0; c < ncombo; ++c) {
      auto cd = combo_decode(c, slot_ncombo);
      std::vector<const std::vector<std::size_t>*> parts(slots.size());
      bool empty = false;
      for (std::size_t i = 0; i < slots.size(); ++i) {
        parts[i] = &slots[i].update[sd[i]][cd[i]];
        if (parts[i]->empty()) empty = true;
      }
      if (empty) continue;
      // odometer over the per-slot successor sets; sorted sets make the
      // generated codes ascending
      std::vector<std::size_t> pick(slots.size(), 0);
      std::vector<std::size_t> succ_d(slots.size());
      bool exhausted = false;
      while (!exhausted) {
        for (std::size_t i = 0; i < slots.size(); ++i) {
          succ_d[i] = (*parts[i])[pick[i]];
        }
        out.update[code][c].push_back(combo_encode(succ_d, state_rx));
        std::size_t i = slots.size();
        while (true) {
          if (i == 0) {
            exhausted = true;
            break;
          }
          --i;
          if (++pick[i] < parts[i]->size()) break;
          pick[i] = 0;
        }
      }
    }
    for (std::size_t i = 0; i < slots.size(); ++i) {
      const auto& ro = slots[i].readout[sd[i]];
      out.readout[code].insert(out.readout[code].end(), ro.begin(), ro.end());
      const auto& ob = slots[i].obs[sd[i]];
      out.obs[code].insert(out.obs[code].end(), ob.begin(), ob.end());
    }
  }

  r.aut = std::move(out);
  r.state_proj.reserve(slots.size());
  for (std::size_t i = 0; i < slots.size(); ++i) {
    r.state_proj.emplace_back(states, slots[i].states, proj_tables[i]);
  }
  return r;
}

Automaton rename_states(const Automaton& a, const FinMap& bij) {
  if (bij.dom() != a.states) {
    throw Error(ErrorKind::domain_mismatch,
                "renaming domain does not match the states");
  }
  if (!bij.is_bijective()) {
    throw Error(ErrorKind::not_bijective, "state renaming is not bijective");
  }
  FinMap back = bij.inverse();
  const FinSet& fresh = bij.cod();
  std::size_t n = a.states.size();

  Automaton out;
  out.iface = a.iface;
  out.alphabets = a.alphabets;
  out.states = fresh;
  out.update.resize(n);
  out.readout.resize(n);
  out.obs.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t old = back.at_index(j);
    out.update[j] = a.update[old];
    for (auto& succ : out.update[j]) {
      for (auto& x : succ) x = bij.at_index(x);
      std::sort(succ.begin(), succ.end());
    }
    out.readout[j] = a.readout[old];
    out.obs[j] = a.obs[old];
  }
  return out;
}

}  // namespace rsm
