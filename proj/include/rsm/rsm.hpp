#pragma once

#include <span>
#include <variant>
#include <vector>

#include "rsm/doctrine_automata.hpp"
#include "rsm/doctrine_ode.hpp"
#include "rsm/wiring.hpp"

namespace rsm {

enum class Doctrine { ode, automata };

/// A box filled with dynamics from one doctrine.
struct FilledBox {
  std::variant<OdeSystem, Automaton> value;

  FilledBox() = default;
  explicit FilledBox(OdeSystem sys) : value(std::move(sys)) {}
  explicit FilledBox(Automaton aut) : value(std::move(aut)) {}

  Doctrine doctrine() const {
    return value.index() == 0 ? Doctrine::ode : Doctrine::automata;
  }
  const Interface& iface() const;
  const OdeSystem& ode() const;    // throws doctrine_mismatch when automata
  const Automaton& aut() const;    // throws doctrine_mismatch when ode

  bool operator==(const FilledBox& other) const {
    return value == other.value;
  }
  bool operator!=(const FilledBox& other) const { return !(*this == other); }
};

/// How the composite's carrier relates to the inputs. The natural direction
/// differs by doctrine: variables are glued (a quotient), states are cut out
/// of a product (projections).
///   ODE:      slot[i]: slot vars -> tensored vars,
///             carrier: tensored vars -> composite vars,
///             pools:   cospan pools -> composite vars.
///   automata: slot[i]: tensored states -> slot states,
///             carrier: composite states -> tensored states,
///             pools:   composite states -> pool valuation tuples.
struct ActProvenance {
  std::vector<FinMap> slot;
  FinMap carrier;
  FinMap pools;
};

struct ActResult {
  FilledBox box;
  ActProvenance prov;
};

/// Apply a morphism to filled boxes: tensor the fillings, pool the observed
/// ports along the cospan, then wire the machine boundary through the prism.
ActResult act(const RsmMorphism& m, std::span<const FilledBox> fillings);

/// act(identity, [box]) reproduces box after undoing the canonical renaming.
bool act_identity_check(const FilledBox& box);

/// Acting in two stages equals acting by the substituted morphism, up to the
/// bijection forced by the provenance maps. outer must be unary on
/// inner.codomain.
bool act_compose_check(const RsmMorphism& inner, const RsmMorphism& outer,
                       std::span<const FilledBox> fillings);

}  // namespace rsm
