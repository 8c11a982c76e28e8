#include "rsm/rsm.hpp"

#include <optional>

#include "rsm/error.hpp"

namespace rsm {

const Interface& FilledBox::iface() const {
  if (const auto* sys = std::get_if<OdeSystem>(&value)) return sys->iface;
  return std::get<Automaton>(value).iface;
}

const OdeSystem& FilledBox::ode() const {
  if (const auto* sys = std::get_if<OdeSystem>(&value)) return *sys;
  throw Error(ErrorKind::doctrine_mismatch,
              "expected an ODE filling, found an automaton");
}

const Automaton& FilledBox::aut() const {
  if (const auto* aut = std::get_if<Automaton>(&value)) return *aut;
  throw Error(ErrorKind::doctrine_mismatch,
              "expected an automaton filling, found an ODE system");
}

ActResult act(const RsmMorphism& m, std::span<const FilledBox> fillings) {
  if (fillings.empty()) {
    throw Error(ErrorKind::doctrine_mismatch,
                "cannot infer a doctrine for zero boxes");
  }
  if (fillings.size() != m.domain.size()) {
    throw Error(ErrorKind::boundary_mismatch,
                "morphism expects " + std::to_string(m.domain.size()) +
                    " boxes, got " + std::to_string(fillings.size()));
  }
  Doctrine d = fillings[0].doctrine();
  for (std::size_t i = 1; i < fillings.size(); ++i) {
    if (fillings[i].doctrine() != d) {
      throw Error(ErrorKind::doctrine_mismatch,
                  "boxes mix doctrines; slot " + std::to_string(i) +
                      " disagrees with slot 0");
    }
  }
  for (std::size_t i = 0; i < fillings.size(); ++i) {
    if (fillings[i].iface() != m.domain[i]) {
      throw Error(ErrorKind::boundary_mismatch,
                  "box in slot " + std::to_string(i) +
                      " does not fill the morphism's domain interface");
    }
  }
  auto diags = validate(m);
  if (!diags.empty()) {
    throw Error(ErrorKind::boundary_mismatch, diags.front());
  }

  ActResult r;
  if (d == Doctrine::ode) {
    std::vector<OdeSystem> systems;
    systems.reserve(fillings.size());
    for (const auto& f : fillings) systems.push_back(f.ode());
    OdeTensorResult t = tensor_systems(systems);
    OdeShareResult s = share(t.sys, m.ports);
    OdeSystem w = wire(s.sys, m.prism, m.codomain);
    r.box = FilledBox(std::move(w));
    r.prov.slot = std::move(t.var_embed);
    r.prov.carrier = std::move(s.var_quotient);
    r.prov.pools = std::move(s.pool_embed);
  } else {
    std::vector<Automaton> automata;
    automata.reserve(fillings.size());
    for (const auto& f : fillings) automata.push_back(f.aut());
    AutTensorResult t = tensor_automata(automata);
    AutShareResult s = share(t.aut, m.ports);
    Automaton w = wire(s.aut, m.prism, m.codomain);
    r.box = FilledBox(std::move(w));
    r.prov.slot = std::move(t.state_proj);
    r.prov.carrier = std::move(s.state_proj);
    r.prov.pools = std::move(s.apex_proj);
  }
  return r;
}

bool act_identity_check(const FilledBox& box) {
  RsmMorphism id = identity_morphism(box.iface());
  std::vector<FilledBox> one = {box};
  ActResult r = act(id, one);
  if (!r.prov.carrier.is_bijective()) return false;
  if (box.doctrine() == Doctrine::ode) {
    return rename_vars(r.box.ode(), r.prov.carrier.inverse()) == box.ode();
  }
  return rename_states(r.box.aut(), r.prov.carrier) == box.aut();
}

namespace {

// Collect h(x) = y requirements into a table; false on conflict.
bool force(std::vector<std::optional<std::size_t>>& table, std::size_t x,
           std::size_t y) {
  if (table[x].has_value()) return *table[x] == y;
  table[x] = y;
  return true;
}

bool compose_check_ode(const ActResult& mid, const ActResult& seq,
                       const SubstituteResult& sub, const ActResult& one) {
  const OdeSystem& seq_sys = seq.box.ode();
  const OdeSystem& one_sys = one.box.ode();
  if (seq_sys.vars.size() != one_sys.vars.size()) return false;

  std::vector<std::optional<std::size_t>> table(seq_sys.vars.size());
  // every composite variable is a class of tensored variables and pools,
  // so chasing all three families through both sides forces h completely
  FinMap seq_total = mid.prov.carrier.then(seq.prov.carrier);
  for (std::size_t i = 0; i < seq_total.dom().size(); ++i) {
    if (!force(table, seq_total.at_index(i), one.prov.carrier.at_index(i))) {
      return false;
    }
  }
  FinMap seq_p1 = mid.prov.pools.then(seq.prov.carrier);
  FinMap one_p1 = sub.inner_apex_embed[0].then(one.prov.pools);
  for (std::size_t i = 0; i < seq_p1.dom().size(); ++i) {
    if (!force(table, seq_p1.at_index(i), one_p1.at_index(i))) return false;
  }
  FinMap one_p2 = sub.outer_apex_embed.then(one.prov.pools);
  for (std::size_t i = 0; i < seq.prov.pools.dom().size(); ++i) {
    if (!force(table, seq.prov.pools.at_index(i), one_p2.at_index(i))) {
      return false;
    }
  }

  std::vector<std::size_t> flat(table.size());
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (!table[i].has_value()) return false;
    flat[i] = *table[i];
  }
  FinMap h(seq_sys.vars, one_sys.vars, flat);
  if (!h.is_bijective()) return false;
  return rename_vars(seq_sys, h) == one_sys;
}

bool compose_check_automata(const ActResult& mid, const ActResult& seq,
                            const RsmMorphism& inner,
                            const RsmMorphism& outer,
                            const SubstituteResult& sub,
                            const ActResult& one) {
  const Automaton& seq_aut = seq.box.aut();
  const Automaton& one_aut = one.box.aut();
  const AlphabetMap& alphabets = one_aut.alphabets;

  // both sides are determined by the underlying tensored state together
  // with the two pool valuations, so those are the matching keys
  std::vector<FinMap> seq_keys = {
      seq.prov.carrier.then(mid.prov.carrier),
      seq.prov.carrier.then(mid.prov.pools),
      seq.prov.pools,
  };
  FinMap r1 = restrict_valuations(inner.ports.apex, sub.inner_apex_embed[0],
                                  sub.morphism.ports.apex, alphabets);
  FinMap r2 = restrict_valuations(outer.ports.apex, sub.outer_apex_embed,
                                  sub.morphism.ports.apex, alphabets);
  std::vector<FinMap> one_keys = {
      one.prov.carrier,
      one.prov.pools.then(r1),
      one.prov.pools.then(r2),
  };
  try {
    FinMap h = match_by_keys(seq_aut.states, seq_keys, one_aut.states,
                             one_keys);
    return rename_states(seq_aut, h) == one_aut;
  } catch (const Error&) {
    return false;
  }
}

}  // namespace

bool act_compose_check(const RsmMorphism& inner, const RsmMorphism& outer,
                       std::span<const FilledBox> fillings) {
  ActResult mid = act(inner, fillings);
  std::vector<FilledBox> staged = {mid.box};
  ActResult seq = act(outer, staged);
  SubstituteResult sub = substitute_full(outer, std::vector<RsmMorphism>{inner});
  ActResult one = act(sub.morphism, fillings);

  if (fillings[0].doctrine() == Doctrine::ode) {
    return compose_check_ode(mid, seq, sub, one);
  }
  return compose_check_automata(mid, seq, inner, outer, sub, one);
}

}  // namespace rsm
