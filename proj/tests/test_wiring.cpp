#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "rsm/wiring.hpp"
#include "testutil.hpp"

using namespace rsm;
using testutil::pick;

namespace {

TypedFinSet tports(std::vector<std::pair<std::string, std::string>> entries) {
  std::vector<std::string> names, types;
  for (auto& [n, t] : entries) {
    names.push_back(n);
    types.push_back(t);
  }
  return TypedFinSet(FinSet(std::move(names)), std::move(types));
}

TypedFinSet rports(std::vector<std::string> names) {
  return TypedFinSet::uniform(FinSet(std::move(names)), "R");
}

Interface closed_interface() {
  return Interface(rports({}), rports({}), rports({}));
}

/// The four one-variable boxes of the predator-prey composite, wiring side
/// only: growth and decline of each population, with population readouts
/// crossing over as inputs and all four state ports folded to two pools.
struct LvFixture {
  Interface growth{rports({}), rports({"pop"}), rports({"share"})};
  Interface decline{rports({"h"}), rports({}), rports({"share"})};
  Interface fox_growth{rports({"e"}), rports({}), rports({"share"})};
  Interface fox_decline{rports({}), rports({"pop"}), rports({"share"})};

  std::vector<Interface> domain{growth, decline, fox_growth, fox_decline};

  RsmMorphism morphism() const {
    RsmMorphism m;
    m.domain = domain;
    m.codomain = closed_interface();
    m.prism.feed["b1.h"] = WireSource::from_output("b3.pop");
    m.prism.feed["b2.e"] = WireSource::from_output("b0.pop");
    m.ports.apex = rports({"R", "F"});
    m.ports.inner = FinMap(
        FinSet({"b0.share", "b1.share", "b2.share", "b3.share"}),
        m.ports.apex.base,
        {{"b0.share", "R"}, {"b1.share", "R"}, {"b2.share", "F"}, {"b3.share", "F"}});
    m.ports.outer = FinMap(FinSet(std::vector<std::string>{}),
                           m.ports.apex.base, std::map<std::string, std::string>{});
    return m;
  }
};

/// Pools as sets of tagged port names; the name-free content of a cospan.
std::set<std::set<std::string>> pool_partition(const PortCospan& c) {
  std::map<std::string, std::set<std::string>> by_pool;
  for (const auto& p : c.inner.dom()) by_pool[c.inner(p)].insert("in:" + p);
  for (const auto& p : c.outer.dom()) by_pool[c.outer(p)].insert("out:" + p);
  std::set<std::set<std::string>> out;
  for (auto& [pool, members] : by_pool) {
    (void)pool;
    out.insert(members);
  }
  return out;
}

/// One exposed port, nothing else; the shape folds are built from.
Interface port_box(const std::string& name) {
  return Interface(rports({}), rports({}), rports({name}));
}

/// Folds the two exposed ports of two port boxes onto one pool, re-exposed
/// as codomain port "m".
RsmMorphism fold2(const std::string& pool) {
  RsmMorphism m;
  m.domain = {port_box("m"), port_box("m")};
  m.codomain = port_box("m");
  m.ports.apex = rports({pool});
  m.ports.inner = FinMap(FinSet({"b0.m", "b1.m"}), m.ports.apex.base,
                         {{"b0.m", pool}, {"b1.m", pool}});
  m.ports.outer =
      FinMap(FinSet({"m"}), m.ports.apex.base, {{"m", pool}});
  return m;
}

Interface random_interface(std::mt19937& rng) {
  auto family = [&](const std::string& prefix) {
    std::vector<std::string> names, types;
    std::size_t n = pick(rng, 3);
    for (std::size_t k = 0; k < n; ++k) {
      names.push_back(prefix + std::to_string(k));
      types.push_back(pick(rng, 2) == 0 ? "R" : "bit");
    }
    return TypedFinSet(FinSet(std::move(names)), std::move(types));
  };
  return Interface(family("i"), family("o"), family("m"));
}

/// Valid-by-construction random morphism out of the given slots: the
/// codomain is grown to supply whatever the random choices need.
RsmMorphism random_morphism(std::mt19937& rng, std::vector<Interface> domain) {
  auto td = tensor_interfaces(domain);
  RsmMorphism m;
  m.domain = std::move(domain);

  std::map<std::string, std::vector<std::string>> outs_by_type;
  for (std::size_t k = 0; k < td.iface.outputs.size(); ++k) {
    outs_by_type[td.iface.outputs.type_at(k)].push_back(
        td.iface.outputs.base.at(k));
  }

  std::vector<std::string> in_names, in_types;
  for (std::size_t k = 0; k < td.iface.inputs.size(); ++k) {
    const std::string& name = td.iface.inputs.base.at(k);
    const std::string& type = td.iface.inputs.type_at(k);
    const auto& candidates = outs_by_type[type];
    if (!candidates.empty() && pick(rng, 2) == 0) {
      m.prism.feed[name] =
          WireSource::from_output(candidates[pick(rng, candidates.size())]);
    } else {
      std::string y = "y" + std::to_string(in_names.size());
      in_names.push_back(y);
      in_types.push_back(type);
      m.prism.feed[name] = WireSource::from_outer(y);
    }
  }

  std::vector<std::string> out_names, out_types;
  for (std::size_t k = 0; k < td.iface.outputs.size(); ++k) {
    if (pick(rng, 2) == 0) continue;
    std::string z = "z" + std::to_string(out_names.size());
    out_names.push_back(z);
    out_types.push_back(td.iface.outputs.type_at(k));
    m.prism.out_sel[z] = td.iface.outputs.base.at(k);
  }

  std::map<std::string, std::vector<std::string>> exposed_by_type;
  for (std::size_t k = 0; k < td.iface.exposed.size(); ++k) {
    exposed_by_type[td.iface.exposed.type_at(k)].push_back(
        td.iface.exposed.base.at(k));
  }
  std::vector<std::string> pool_names, pool_types;
  std::map<std::string, std::string> inner_assign;
  for (const auto& [type, ports] : exposed_by_type) {
    std::vector<std::string> pools_here;
    for (const auto& p : ports) {
      if (pools_here.empty() || pick(rng, 2) == 0) {
        std::string q = "q" + std::to_string(pool_names.size());
        pool_names.push_back(q);
        pool_types.push_back(type);
        pools_here.push_back(q);
      }
      inner_assign[p] = pools_here[pick(rng, pools_here.size())];
    }
  }
  std::vector<std::string> ex_names, ex_types;
  std::map<std::string, std::string> outer_assign;
  for (std::size_t k = 0; k < pool_names.size(); ++k) {
    if (pick(rng, 2) == 0) continue;
    std::string w = "w" + std::to_string(ex_names.size());
    ex_names.push_back(w);
    ex_types.push_back(pool_types[k]);
    outer_assign[w] = pool_names[k];
  }

  m.codomain = Interface(TypedFinSet(FinSet(in_names), in_types),
                         TypedFinSet(FinSet(out_names), out_types),
                         TypedFinSet(FinSet(ex_names), ex_types));
  m.ports.apex = TypedFinSet(FinSet(pool_names), pool_types);
  m.ports.inner =
      FinMap(td.iface.exposed.base, m.ports.apex.base, inner_assign);
  m.ports.outer =
      FinMap(m.codomain.exposed.base, m.ports.apex.base, outer_assign);
  return m;
}

bool mentions(const std::vector<std::string>& diags, const std::string& what) {
  for (const auto& d : diags) {
    if (d.find(what) != std::string::npos) return true;
  }
  return false;
}

}  // namespace

TEST_SUITE_BEGIN("wiring");

TEST_CASE("interface rejects a name used in two port families") {
  CHECK_THROWS_AS(Interface(rports({"x"}), rports({"x"}), rports({})), Error);
  CHECK_THROWS_AS(Interface(rports({"x"}), rports({}), rports({"x"})), Error);
  CHECK_THROWS_AS(Interface(rports({}), rports({"x"}), rports({"x"})), Error);
}

TEST_CASE("slot prefixes: bare for a single box, numbered otherwise") {
  CHECK(slot_prefix(0, 1) == "");
  CHECK(slot_prefix(0, 3) == "b0.");
  CHECK(slot_prefix(2, 3) == "b2.");
}

TEST_CASE("tensor of one box keeps its port names") {
  Interface a(tports({{"x", "R"}}), tports({{"y", "bit"}}), rports({"m"}));
  std::vector<Interface> one{a};
  auto td = tensor_interfaces(one);
  CHECK(td.iface == a);
  CHECK(td.embed_inputs[0] == FinMap::identity(a.inputs.base));
}

TEST_CASE("tensor cardinalities add and names carry slot prefixes") {
  Interface a(rports({"x"}), rports({}), rports({"m"}));
  Interface b(rports({}), rports({"y"}), rports({"m"}));
  Interface t = tensor_interfaces(a, b);
  CHECK(t.inputs.base == FinSet({"b0.x"}));
  CHECK(t.outputs.base == FinSet({"b1.y"}));
  CHECK(t.exposed.base == FinSet({"b0.m", "b1.m"}));
}

TEST_CASE("tensor with the trivial interface is a renaming") {
  Interface a(tports({{"x", "R"}, {"u", "bit"}}), rports({"y"}), rports({"m"}));
  std::vector<Interface> pair{a, closed_interface()};
  auto td = tensor_interfaces(pair);
  CHECK(td.iface.inputs.size() == a.inputs.size());
  CHECK(td.iface.outputs.size() == a.outputs.size());
  CHECK(td.iface.exposed.size() == a.exposed.size());
  for (const FinMap* embed :
       {&td.embed_inputs[0], &td.embed_outputs[0], &td.embed_exposed[0]}) {
    CHECK(embed->is_bijective());
  }
  CHECK(preserves_types(td.embed_inputs[0], a.inputs, td.iface.inputs));
  CHECK(td.iface.inputs.base == FinSet({"b0.x", "b0.u"}));
}

TEST_CASE("four predator-prey boxes tensor to 2 inputs, 2 outputs, 4 exposed") {
  LvFixture lv;
  auto td = tensor_interfaces(lv.domain);
  CHECK(td.iface.inputs.base == FinSet({"b1.h", "b2.e"}));
  CHECK(td.iface.outputs.base == FinSet({"b0.pop", "b3.pop"}));
  CHECK(td.iface.exposed.base ==
        FinSet({"b0.share", "b1.share", "b2.share", "b3.share"}));
}

TEST_CASE("predator-prey wiring validates clean") {
  LvFixture lv;
  RsmMorphism m = lv.morphism();
  CHECK(validate(m) == std::vector<std::string>{});
}

TEST_CASE("identity morphism validates clean") {
  Interface a(tports({{"x", "R"}}), tports({{"y", "bit"}}), rports({"m"}));
  CHECK(validate(identity_morphism(a)).empty());
  CHECK(validate(identity_morphism(closed_interface())).empty());
}

TEST_CASE("validate names an unfed input") {
  LvFixture lv;
  RsmMorphism m = lv.morphism();
  m.prism.feed.erase("b1.h");
  auto diags = validate(m);
  REQUIRE(diags.size() == 1);
  CHECK(mentions(diags, "'b1.h'"));
  CHECK(mentions(diags, "not fed"));
}

TEST_CASE("validate names a feed type mismatch") {
  LvFixture lv;
  lv.domain[2] =
      Interface(tports({{"e", "bit"}}), rports({}), rports({"share"}));
  RsmMorphism m = lv.morphism();
  m.domain = lv.domain;
  auto diags = validate(m);
  REQUIRE(diags.size() == 1);
  CHECK(mentions(diags, "'b2.e'"));
  CHECK(mentions(diags, "'bit'"));
  CHECK(mentions(diags, "'b0.pop'"));
  CHECK(mentions(diags, "'R'"));
}

TEST_CASE("validate names a feed from a nonexistent output") {
  LvFixture lv;
  RsmMorphism m = lv.morphism();
  m.prism.feed["b1.h"] = WireSource::from_output("b3.nope");
  auto diags = validate(m);
  REQUIRE(diags.size() == 1);
  CHECK(mentions(diags, "'b3.nope'"));
  CHECK(mentions(diags, "unknown inner output"));
}

TEST_CASE("validate names a missing and an unknown output selection") {
  Interface box(rports({}), rports({"y"}), rports({}));
  RsmMorphism m;
  m.domain = {box};
  m.codomain = Interface(rports({}), rports({"z"}), rports({}));
  auto diags = validate(m);
  CHECK(mentions(diags, "'z'"));
  CHECK(mentions(diags, "not selected"));

  m.prism.out_sel["z"] = "w";
  diags = validate(m);
  REQUIRE(diags.size() == 1);
  CHECK(mentions(diags, "unknown inner output 'w'"));
}

TEST_CASE("validate names a pool type mismatch") {
  LvFixture lv;
  RsmMorphism m = lv.morphism();
  m.ports.apex = tports({{"R", "R"}, {"F", "bit"}});
  auto diags = validate(m);
  REQUIRE(diags.size() == 2);
  CHECK(mentions(diags, "'b2.share'"));
  CHECK(mentions(diags, "'b3.share'"));
  CHECK(mentions(diags, "'F'"));
}

TEST_CASE("validate catches a pooling leg over the wrong port set") {
  LvFixture lv;
  RsmMorphism m = lv.morphism();
  m.ports.inner = FinMap(FinSet({"b0.share"}), m.ports.apex.base,
                         {{"b0.share", "R"}});
  auto diags = validate(m);
  REQUIRE(diags.size() == 1);
  CHECK(mentions(diags, "inner pooling leg"));
}

TEST_CASE("substituting identities into a morphism changes nothing") {
  LvFixture lv;
  RsmMorphism m = lv.morphism();
  std::vector<RsmMorphism> ids;
  for (const auto& d : m.domain) ids.push_back(identity_morphism(d));
  RsmMorphism composite = substitute(m, ids);
  CHECK(composite.domain == m.domain);
  CHECK(composite.codomain == m.codomain);
  CHECK(composite.prism == m.prism);
  CHECK(composite.ports == m.ports);
}

TEST_CASE("substituting a morphism into the identity changes nothing") {
  LvFixture lv;
  RsmMorphism m = lv.morphism();
  std::vector<RsmMorphism> just_m{m};
  RsmMorphism composite = substitute(identity_morphism(m.codomain), just_m);
  CHECK(composite.prism == m.prism);
  CHECK(composite.ports == m.ports);

  // Same law on a morphism whose codomain has exposed ports: the pools may
  // come back renamed, which is what the matching bijection absorbs.
  RsmMorphism f = fold2("pool");
  std::vector<RsmMorphism> just_f{f};
  RsmMorphism g = substitute(identity_morphism(f.codomain), just_f);
  CHECK(equivalent(g, f));
  CHECK(pool_partition(g.ports) == pool_partition(f.ports));
}

TEST_CASE("folding 4 ports via two layers equals the one-shot fold") {
  RsmMorphism top = fold2("tip");
  std::vector<RsmMorphism> layer{fold2("left"), fold2("right")};
  RsmMorphism two_layer = substitute(top, layer);

  RsmMorphism one_shot;
  one_shot.domain = {port_box("m"), port_box("m"), port_box("m"),
                     port_box("m")};
  one_shot.codomain = port_box("m");
  one_shot.ports.apex = rports({"tip"});
  one_shot.ports.inner =
      FinMap::constant(FinSet({"b0.m", "b1.m", "b2.m", "b3.m"}),
                       one_shot.ports.apex.base, "tip");
  one_shot.ports.outer =
      FinMap(FinSet({"m"}), one_shot.ports.apex.base, {{"m", "tip"}});

  CHECK(validate(two_layer).empty());
  CHECK(two_layer.domain == one_shot.domain);
  CHECK(two_layer.codomain == one_shot.codomain);
  CHECK(two_layer.prism == one_shot.prism);

  const std::set<std::set<std::string>> expected{
      {"in:b0.m", "in:b1.m", "in:b2.m", "in:b3.m", "out:m"}};
  CHECK(pool_partition(two_layer.ports) == expected);
  CHECK(pool_partition(one_shot.ports) == expected);
  CHECK(equivalent(two_layer, one_shot));

  // The outermost layer's pool name is the one that survives.
  CHECK(two_layer.ports.apex.base == FinSet({"tip"}));
}

TEST_CASE("wire chasing through a middle layer") {
  Interface box(rports({"x"}), rports({"y"}), rports({}));
  Interface mid(rports({"u"}), rports({"v"}), rports({}));

  RsmMorphism wrap;
  wrap.domain = {box};
  wrap.codomain = mid;
  wrap.prism.feed["x"] = WireSource::from_outer("u");
  wrap.prism.out_sel["v"] = "y";
  wrap.ports.apex = rports({});
  wrap.ports.inner = FinMap(FinSet(std::vector<std::string>{}),
                            wrap.ports.apex.base, std::map<std::string, std::string>{});
  wrap.ports.outer = wrap.ports.inner;
  REQUIRE(validate(wrap).empty());

  Interface top_iface(rports({"t"}), rports({"w"}), rports({}));
  RsmMorphism top;
  top.domain = {mid, mid};
  top.codomain = top_iface;
  top.prism.feed["b0.u"] = WireSource::from_outer("t");
  top.prism.feed["b1.u"] = WireSource::from_output("b0.v");
  top.prism.out_sel["w"] = "b1.v";
  top.ports.apex = rports({});
  top.ports.inner = FinMap(FinSet(std::vector<std::string>{}),
                           top.ports.apex.base, std::map<std::string, std::string>{});
  top.ports.outer = top.ports.inner;
  REQUIRE(validate(top).empty());

  std::vector<RsmMorphism> wraps{wrap, wrap};
  RsmMorphism chained = substitute(top, wraps);
  CHECK(validate(chained).empty());
  CHECK(chained.prism.feed.at("b0.x") == WireSource::from_outer("t"));
  CHECK(chained.prism.feed.at("b1.x") == WireSource::from_output("b0.y"));
  CHECK(chained.prism.out_sel.at("w") == "b1.y");
}

TEST_CASE("substitution rejects a boundary mismatch") {
  RsmMorphism f = fold2("pool");
  std::vector<RsmMorphism> wrong{f};
  RsmMorphism id_other = identity_morphism(closed_interface());
  CHECK_THROWS_AS((void)substitute(id_other, wrong), Error);

  std::vector<RsmMorphism> too_few;
  CHECK_THROWS_AS((void)substitute(f, too_few), Error);
}

TEST_CASE("random morphisms validate clean and compose associatively") {
  std::mt19937 rng(20260822);
  for (int round = 0; round < 10; ++round) {
    // Leaves, then two mid morphisms over their codomains, then a top.
    std::vector<std::vector<RsmMorphism>> bottoms(2);
    std::vector<RsmMorphism> mids;
    for (std::size_t i = 0; i < 2; ++i) {
      std::size_t n = 1 + pick(rng, 2);
      std::vector<Interface> mid_domain;
      for (std::size_t j = 0; j < n; ++j) {
        std::vector<Interface> leaves;
        std::size_t nleaves = 1 + pick(rng, 2);
        for (std::size_t l = 0; l < nleaves; ++l) {
          leaves.push_back(random_interface(rng));
        }
        bottoms[i].push_back(random_morphism(rng, leaves));
        mid_domain.push_back(bottoms[i].back().codomain);
      }
      mids.push_back(random_morphism(rng, mid_domain));
      CHECK(validate(mids.back()).empty());
      for (const auto& b : bottoms[i]) CHECK(validate(b).empty());
    }
    RsmMorphism top =
        random_morphism(rng, {mids[0].codomain, mids[1].codomain});
    CHECK(validate(top).empty());

    RsmMorphism mids_first = substitute(top, mids);
    std::vector<RsmMorphism> all_bottoms;
    for (const auto& group : bottoms) {
      all_bottoms.insert(all_bottoms.end(), group.begin(), group.end());
    }
    RsmMorphism lhs = substitute(mids_first, all_bottoms);

    std::vector<RsmMorphism> fused;
    for (std::size_t i = 0; i < 2; ++i) {
      fused.push_back(substitute(mids[i], bottoms[i]));
    }
    RsmMorphism rhs = substitute(top, fused);

    CHECK(validate(lhs).empty());
    CHECK(validate(rhs).empty());
    CHECK(lhs.domain == rhs.domain);
    CHECK(lhs.codomain == rhs.codomain);
    CHECK(lhs.prism == rhs.prism);
    CHECK(equivalent(lhs, rhs));
  }
}

TEST_CASE("pool matching: forced on hit pools, verified overall") {
  RsmMorphism f = fold2("a");
  RsmMorphism g = fold2("b");
  auto h = match_cospan_apexes(f.ports, g.ports);
  REQUIRE(h.has_value());
  CHECK((*h)("a") == "b");

  // Different partitions never match.
  RsmMorphism split;
  split.domain = {port_box("m"), port_box("m")};
  split.codomain = port_box("m");
  split.ports.apex = rports({"a", "b"});
  split.ports.inner = FinMap(FinSet({"b0.m", "b1.m"}), split.ports.apex.base,
                             {{"b0.m", "a"}, {"b1.m", "b"}});
  split.ports.outer =
      FinMap(FinSet({"m"}), split.ports.apex.base, {{"m", "a"}});
  CHECK(!match_cospan_apexes(f.ports, split.ports).has_value());
  CHECK(!equivalent(f, split));
}

TEST_SUITE_END();
