#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "rsm/wiring.hpp"

namespace rsm {

/// Alphabet registry: port type name -> letter set.
using AlphabetMap = std::map<std::string, FinSet>;

/// Nondeterministic automaton with a machine boundary and observed ports.
/// Tables are dense and index-based: states and port letters are addressed by
/// their position, input tuples by a mixed-radix code over the input ports in
/// interface order (first port most significant).
struct Automaton {
  Interface iface;
  AlphabetMap alphabets;
  FinSet states;
  // update[s][input code] = sorted successor state indices; empty is legal
  std::vector<std::vector<std::vector<std::size_t>>> update;
  // readout[s][k] = letter index on output port k
  std::vector<std::vector<std::size_t>> readout;
  // obs[s][k] = letter index on exposed port k
  std::vector<std::vector<std::size_t>> obs;

  bool operator==(const Automaton& other) const {
    return iface == other.iface && alphabets == other.alphabets &&
           states == other.states && update == other.update &&
           readout == other.readout && obs == other.obs;
  }
  bool operator!=(const Automaton& other) const { return !(*this == other); }
};

/// "()" for no parts, the part itself for one, "(a,b,...)" otherwise.
std::string tuple_name(std::span<const std::string> parts);

/// Mixed-radix tuple codes, first digit most significant.
std::size_t combo_count(std::span<const std::size_t> radix);
std::size_t combo_encode(std::span<const std::size_t> digits,
                         std::span<const std::size_t> radix);
std::vector<std::size_t> combo_decode(std::size_t code,
                                      std::span<const std::size_t> radix);

/// Letters per port, in port order. Throws if a port type has no alphabet.
std::vector<std::size_t> port_radix(const TypedFinSet& ports,
                                    const AlphabetMap& alphabets);

/// The product of the ports' letter sets as a FinSet of tuple names, in
/// mixed-radix code order.
FinSet value_tuple_set(const TypedFinSet& ports, const AlphabetMap& alphabets);

/// A pool assignment f: sub -> full induces a restriction of valuations the
/// other way: each full valuation reads off one letter per sub element.
FinMap restrict_valuations(const TypedFinSet& sub, const FinMap& assign,
                           const TypedFinSet& full,
                           const AlphabetMap& alphabets);

std::vector<std::string> check_automaton(const Automaton& a);
void require_valid(const Automaton& a);

Automaton unit_automaton();

struct AutShareResult {
  Automaton aut;
  FinMap state_proj;  // new states -> old states
  FinMap apex_proj;   // new states -> pool valuation tuples
};

/// Pool the observed ports along a cospan. The composite's states are the
/// pairs (s, pool valuation) whose translations agree on every port, and a
/// transition may move to any pair compatible with the successor's
/// observation. A cospan with no ports and no pools leaves the automaton
/// untouched (no pair renaming).
AutShareResult share(const Automaton& a, const PortCospan& ports);

/// Machine composition with simultaneous update: every inner input is
/// resolved against the pre-update readouts (or the supplied outer letter),
/// then the whole state steps at once.
Automaton wire(const Automaton& a, const Prism& prism, const Interface& outer);

struct AutTensorResult {
  Automaton aut;
  std::vector<FinMap> state_proj;  // tensored states -> slot states
};

/// Side-by-side product: tuple states, componentwise update sets (a product
/// of sets), concatenated readouts and observations. Alphabets merge by name
/// and must agree letter for letter.
AutTensorResult tensor_automata(std::span<const Automaton> slots);

/// Transport an automaton along a bijective renaming of its states; tables
/// are reindexed to the new state order.
Automaton rename_states(const Automaton& a, const FinMap& bij);

}  // namespace rsm
