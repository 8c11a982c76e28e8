#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rsm/finset.hpp"

namespace rsm {

/// Boundary of a box: input ports, output ports, and exposed (shareable)
/// ports, each typed. Port names are disjoint across the three sets.
struct Interface {
  TypedFinSet inputs, outputs, exposed;

  Interface() = default;
  Interface(TypedFinSet inputs_in, TypedFinSet outputs_in, TypedFinSet exposed_in);

  bool trivial() const {
    return inputs.empty() && outputs.empty() && exposed.empty();
  }
  bool operator==(const Interface& other) const {
    return inputs == other.inputs && outputs == other.outputs &&
           exposed == other.exposed;
  }
  bool operator!=(const Interface& other) const { return !(*this == other); }
};

/// Where a wired inner input draws its value from: an inner output (named in
/// the tensored boundary) or an input of the composite boundary.
struct WireSource {
  enum class Kind { inner_output, outer_input };
  Kind kind = Kind::outer_input;
  std::string name;

  static WireSource from_output(std::string name) {
    return {Kind::inner_output, std::move(name)};
  }
  static WireSource from_outer(std::string name) {
    return {Kind::outer_input, std::move(name)};
  }
  bool operator==(const WireSource& other) const {
    return kind == other.kind && name == other.name;
  }
};

/// Machine-composition part of a wiring morphism, written on the tensored
/// (flattened) port names of the domain.
struct Prism {
  std::map<std::string, WireSource> feed;      // tensored inner input -> source
  std::map<std::string, std::string> out_sel;  // codomain output -> tensored inner output

  bool operator==(const Prism& other) const {
    return feed == other.feed && out_sel == other.out_sel;
  }
};

/// Resource-sharing part: inner and outer exposed ports mapping into a shared
/// typed apex of pools.
struct PortCospan {
  TypedFinSet apex;
  FinMap inner;  // tensored exposed ports -> apex
  FinMap outer;  // codomain exposed ports -> apex

  bool operator==(const PortCospan& other) const {
    return apex == other.apex && inner == other.inner && outer == other.outer;
  }
};

/// A wiring-with-sharing morphism: domain interfaces -> codomain interface.
struct RsmMorphism {
  std::vector<Interface> domain;
  Interface codomain;
  Prism prism;
  PortCospan ports;
};

/// Provenance prefix for slot `slot` in a tensor of `arity` boxes. Arity one
/// keeps bare names.
std::string slot_prefix(std::size_t slot, std::size_t arity);

struct TensorInterfacesResult {
  Interface iface;
  // Per slot, the renaming of that slot's ports into the tensored boundary.
  std::vector<FinMap> embed_inputs, embed_outputs, embed_exposed;
};

TensorInterfacesResult tensor_interfaces(std::span<const Interface> slots);
Interface tensor_interfaces(const Interface& a, const Interface& b);

/// Structural checks: the prism and cospan boundaries must match the declared
/// interfaces exactly, with preserved types. Returns human-readable
/// diagnostics naming each offending port; empty means valid.
std::vector<std::string> validate(const RsmMorphism& m);

RsmMorphism identity_morphism(const Interface& iface);

struct SubstituteResult {
  RsmMorphism morphism;
  /// Per outer slot, the inner morphism's pool set embedded into the composed
  /// pool set; and the outer pool set likewise.
  std::vector<FinMap> inner_apex_embed;
  FinMap outer_apex_embed;
};

/// Operadic substitution: plug `inner[i]` into slot i of `outer`. Inner
/// wires are chased through the middle boundary; port cospans compose by
/// pushout. Preconditions: arity match and inner[i].codomain ==
/// outer.domain[i].
SubstituteResult substitute_full(const RsmMorphism& outer,
                                 std::span<const RsmMorphism> inner);
RsmMorphism substitute(const RsmMorphism& outer,
                       std::span<const RsmMorphism> inner);

/// The bijection between two cospans' pool sets under which they are the same
/// cospan, if one exists: constructed from matching leg fibres, then verified.
std::optional<FinMap> match_cospan_apexes(const PortCospan& a, const PortCospan& b);

/// Same domain, codomain, and prism, and cospans equal up to a pool renaming.
bool equivalent(const RsmMorphism& a, const RsmMorphism& b);

}  // namespace rsm
