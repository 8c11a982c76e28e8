#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "rsm/doctrine_automata.hpp"
#include "rsm/doctrine_ode.hpp"

namespace rsm {

enum class Method { euler, rk4 };

// A sampled solution on a uniform time grid. values[k] is the series for
// vars.at(k); every series has the same length as times.
struct Trajectory {
  FinSet vars;
  std::vector<double> times;
  std::vector<std::vector<double>> values;
};

// Fixed-step explicit integration of a system with no free inputs. x0 must
// assign every variable and params every parameter, nothing else. The grid
// has floor(t_end/dt)+1 points (with a tiny tolerance so representable
// endpoints like t_end=1, dt=1e-3 keep their final step). Arithmetic is
// 64-bit throughout and sums run in canonical variable order, so results are
// reproducible bit for bit.
//
// Throws free_input naming the free inputs, unbound_name/unknown_name for
// missing or extra value assignments, invalid_model for a bad grid, and
// non_finite with the step index if the state leaves the floats.
Trajectory integrate(const OdeSystem& sys,
                     const std::map<std::string, double>& x0,
                     const std::map<std::string, double>& params, double t_end,
                     double dt, Method method);

// Header "t,var1,var2,..." then one row per grid point. Floats print in
// shortest round-trip form.
void write_csv(const Trajectory& tr, std::ostream& os);

// State graph of an automaton with trivial inputs: one node per state, one
// edge per transition.
struct TransitionGraph {
  FinSet nodes;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
};

// Throws free_input naming the inputs if the automaton is not closed.
TransitionGraph graph(const Automaton& a);

// States whose successor set is empty for every input combination, in state
// order.
std::vector<std::string> dead_states(const Automaton& a);

// Weakly connected components as sorted node-index lists, ordered by their
// smallest node.
std::vector<std::vector<std::size_t>> components(const TransitionGraph& g);

// DOT digraph with one line per node (so isolated states appear) and one per
// edge.
void write_dot(const TransitionGraph& g, std::ostream& os);

}  // namespace rsm
