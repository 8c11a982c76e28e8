#pragma once

#include <span>
#include <string>
#include <vector>

#include "rsm/expr.hpp"
#include "rsm/wiring.hpp"

namespace rsm {

/// Open continuous system: polynomial dynamics over named real variables.
/// Inputs appear as free names in the field, outputs carry polynomial
/// readouts, and each exposed port reads one state variable.
struct OdeSystem {
  Interface iface;
  FinSet vars;
  FinSet params;
  PolyMap field;    // cod = vars; components over vars + inputs + params
  PolyMap readout;  // cod = output ports; components over vars + params
  FinMap ports;     // exposed port -> variable

  bool operator==(const OdeSystem& other) const {
    return iface == other.iface && vars == other.vars &&
           params == other.params && field == other.field &&
           readout == other.readout && ports == other.ports;
  }
  bool operator!=(const OdeSystem& other) const { return !(*this == other); }
};

/// Port type carried by every wire of a continuous system.
inline const std::string kRealType = "R";

/// The name scope a field component may draw from, in the fixed order
/// variables, inputs, parameters. Throws on a cross-family name clash.
FinSet field_scope(const FinSet& vars, const TypedFinSet& inputs,
                   const FinSet& params);
FinSet readout_scope(const FinSet& vars, const FinSet& params);

/// Structural diagnostics; empty means well-formed.
std::vector<std::string> check_system(const OdeSystem& sys);
void require_valid(const OdeSystem& sys);

OdeSystem unit_system();

struct OdeShareResult {
  OdeSystem sys;
  FinMap var_quotient;  // old vars -> new vars
  FinMap pool_embed;    // cospan apex -> new vars
};

/// Pool the exposed ports along a cospan: variables whose ports land in a
/// common pool merge into one variable named by the pool, with their
/// velocity contributions added; unhit pools become fresh variables at rest.
/// The result exposes the cospan's outer ports.
OdeShareResult share(const OdeSystem& sys, const PortCospan& ports);

/// Machine composition: each input name in the field is replaced per the
/// prism, by the readout polynomial of an inner output or by a composite
/// input name; composite outputs pick inner readouts. Exposed ports must be
/// carried over unchanged.
OdeSystem wire(const OdeSystem& sys, const Prism& prism,
               const Interface& outer);

struct OdeTensorResult {
  OdeSystem sys;
  std::vector<FinMap> var_embed;  // slot vars -> tensored vars
};

/// Side-by-side product: disjoint union of everything, slot-prefixed names,
/// parameters merged by name (a shared name means a shared constant).
OdeTensorResult tensor_systems(std::span<const OdeSystem> slots);

/// Transport a system along a bijective renaming of its variables.
OdeSystem rename_vars(const OdeSystem& sys, const FinMap& bij);

}  // namespace rsm
