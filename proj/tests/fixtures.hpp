#pragma once

// Shared model fixtures: the predator-prey composite and the small automata
// used across the rsm, sim, and acceptance suites.

#include <map>
#include <string>
#include <vector>

#include "rsm/rsm.hpp"

namespace rsm::fixtures {

inline OdeSystem make_ode(Interface iface, std::vector<std::string> var_names,
                          std::vector<std::string> param_names,
                          const std::map<std::string, std::string>& field_exprs,
                          const std::map<std::string, std::string>& readout_exprs,
                          const std::map<std::string, std::string>& port_map) {
  OdeSystem sys;
  sys.iface = std::move(iface);
  sys.vars = FinSet(std::move(var_names));
  sys.params = FinSet(std::move(param_names));

  std::vector<Polynomial> field_comps;
  for (const auto& v : sys.vars) {
    field_comps.push_back(parse_polynomial(field_exprs.at(v)));
  }
  sys.field = PolyMap(field_scope(sys.vars, sys.iface.inputs, sys.params),
                      sys.vars, std::move(field_comps));

  std::vector<Polynomial> readout_comps;
  for (const auto& o : sys.iface.outputs.base) {
    readout_comps.push_back(parse_polynomial(readout_exprs.at(o)));
  }
  sys.readout = PolyMap(readout_scope(sys.vars, sys.params),
                        sys.iface.outputs.base, std::move(readout_comps));

  sys.ports = FinMap(sys.iface.exposed.base, sys.vars, port_map);
  return sys;
}

inline TypedFinSet real_ports(std::vector<std::string> names) {
  return TypedFinSet::uniform(FinSet(std::move(names)), kRealType);
}

// prey growth: r' = beta r, population shared and also read out
inline OdeSystem growth_box() {
  return make_ode(Interface(TypedFinSet(), real_ports({"pop"}),
                            real_ports({"share"})),
                  {"r"}, {"beta"}, {{"r", "beta*r"}}, {{"pop", "r"}},
                  {{"share", "r"}});
}

// prey decline under predation pressure h: r' = -gamma h r
inline OdeSystem decline_box() {
  return make_ode(Interface(real_ports({"h"}), TypedFinSet(),
                            real_ports({"share"})),
                  {"r"}, {"gamma"}, {{"r", "-gamma*h*r"}}, {}, {{"share", "r"}});
}

// predator growth from eaten prey e: f' = alpha e f
inline OdeSystem fox_growth_box() {
  return make_ode(Interface(real_ports({"e"}), TypedFinSet(),
                            real_ports({"share"})),
                  {"f"}, {"alpha"}, {{"f", "alpha*e*f"}}, {}, {{"share", "f"}});
}

// predator decline: f' = -delta f, population read out
inline OdeSystem fox_decline_box() {
  return make_ode(Interface(TypedFinSet(), real_ports({"pop"}),
                            real_ports({"share"})),
                  {"f"}, {"delta"}, {{"f", "-delta*f"}}, {{"pop", "f"}},
                  {{"share", "f"}});
}

inline std::vector<FilledBox> lv_boxes() {
  return {FilledBox(growth_box()), FilledBox(decline_box()),
          FilledBox(fox_growth_box()), FilledBox(fox_decline_box())};
}

/// Four boxes into one closed system: predation pressure is each other's
/// population readout, and the two prey (resp. predator) populations are
/// pooled into R (resp. F).
inline RsmMorphism lv_morphism() {
  RsmMorphism m;
  m.domain = {growth_box().iface, decline_box().iface, fox_growth_box().iface,
              fox_decline_box().iface};
  m.codomain = Interface(TypedFinSet(), TypedFinSet(), TypedFinSet());
  m.prism.feed["b1.h"] = WireSource::from_output("b3.pop");
  m.prism.feed["b2.e"] = WireSource::from_output("b0.pop");
  TypedFinSet apex(FinSet({"R", "F"}), {kRealType, kRealType});
  FinSet inner_ports({"b0.share", "b1.share", "b2.share", "b3.share"});
  m.ports.apex = apex;
  m.ports.inner = FinMap(inner_ports, apex.base,
                         std::map<std::string, std::string>{
                             {"b0.share", "R"},
                             {"b1.share", "R"},
                             {"b2.share", "F"},
                             {"b3.share", "F"}});
  m.ports.outer =
      FinMap(FinSet(std::vector<std::string>{}), apex.base,
             std::vector<std::size_t>{});
  return m;
}

inline FinSet numerals(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back(std::to_string(i));
  return FinSet(names);
}

// n-cycle advancing one step per tick, parity observed on port "p"
inline Automaton cycle_automaton(std::size_t n) {
  Automaton a;
  a.alphabets = {{"parity", FinSet({"even", "odd"})}};
  a.states = numerals(n);
  a.iface = Interface(TypedFinSet(), TypedFinSet(),
                      TypedFinSet(FinSet({"p"}), {"parity"}));
  for (std::size_t s = 0; s < n; ++s) {
    a.update.push_back({{(s + 1) % n}});
    a.readout.push_back({});
    a.obs.push_back({s % 2});
  }
  return a;
}

// two-state clock emitting its own state bit on output "o"
inline Automaton blinker_automaton() {
  Automaton a;
  a.alphabets = {{"bit", FinSet({"0", "1"})}};
  a.states = numerals(2);
  a.iface = Interface(TypedFinSet(), TypedFinSet(FinSet({"o"}), {"bit"}),
                      TypedFinSet());
  a.update = {{{1}}, {{0}}};
  a.readout = {{0}, {1}};
  a.obs = {{}, {}};
  return a;
}

// mod-2 accumulator: state += input letter
inline Automaton adder_automaton() {
  Automaton a;
  a.alphabets = {{"bit", FinSet({"0", "1"})}};
  a.states = numerals(2);
  a.iface = Interface(TypedFinSet(FinSet({"i"}), {"bit"}), TypedFinSet(),
                      TypedFinSet());
  a.update = {{{0}, {1}}, {{1}, {0}}};
  a.readout = {{}, {}};
  a.obs = {{}, {}};
  return a;
}

/// Accumulator driven by the clock; nothing pooled, nothing exposed.
inline RsmMorphism cascade_morphism() {
  RsmMorphism m;
  m.domain = {adder_automaton().iface, blinker_automaton().iface};
  m.codomain = Interface(TypedFinSet(), TypedFinSet(), TypedFinSet());
  m.prism.feed["b0.i"] = WireSource::from_output("b1.o");
  FinSet none(std::vector<std::string>{});
  m.ports.apex = TypedFinSet();
  m.ports.inner = FinMap(none, FinSet(), std::vector<std::size_t>{});
  m.ports.outer = FinMap(none, FinSet(), std::vector<std::size_t>{});
  return m;
}

/// Two cycles forced to share one parity observation; fully closed.
inline RsmMorphism parity_morphism(std::size_t n0, std::size_t n1) {
  RsmMorphism m;
  m.domain = {cycle_automaton(n0).iface, cycle_automaton(n1).iface};
  m.codomain = Interface(TypedFinSet(), TypedFinSet(), TypedFinSet());
  TypedFinSet apex(FinSet({"par"}), {"parity"});
  m.ports.apex = apex;
  m.ports.inner = FinMap(FinSet({"b0.p", "b1.p"}), apex.base,
                         std::map<std::string, std::string>{{"b0.p", "par"},
                                                            {"b1.p", "par"}});
  m.ports.outer =
      FinMap(FinSet(std::vector<std::string>{}), apex.base,
             std::vector<std::size_t>{});
  return m;
}

}  // namespace rsm::fixtures
