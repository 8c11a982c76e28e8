#include "rsm/sim.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <ostream>

#include "rsm/error.hpp"
#include "rsm/kernels.hpp"

namespace rsm {

namespace {

std::string joined_names(const FinSet& s) {
  std::string out;
  for (const auto& name : s) {
    if (!out.empty()) out += ", ";
    out += name;
  }
  return out;
}

void check_assignment(const std::map<std::string, double>& given,
                      const FinSet& wanted, const std::string& what) {
  for (const auto& name : wanted)
    if (!given.count(name))
      throw Error(ErrorKind::unbound_name,
                  "no value for " + what + " '" + name + "'");
  for (const auto& [name, value] : given)
    if (!wanted.contains(name))
      throw Error(ErrorKind::unknown_name,
                  "'" + name + "' is not a " + what);
}

std::string shortest(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

Trajectory integrate(const OdeSystem& sys,
                     const std::map<std::string, double>& x0,
                     const std::map<std::string, double>& params, double t_end,
                     double dt, Method method) {
  require_valid(sys);
  if (sys.iface.inputs.base.size() != 0)
    throw Error(ErrorKind::free_input,
                "free inputs remain: " + joined_names(sys.iface.inputs.base));
  check_assignment(x0, sys.vars, "variable");
  check_assignment(params, sys.params, "parameter");
  if (!std::isfinite(dt) || dt <= 0.0)
    throw Error(ErrorKind::invalid_model, "dt must be positive and finite");
  if (!std::isfinite(t_end) || t_end < 0.0)
    throw Error(ErrorKind::invalid_model,
                "t_end must be nonnegative and finite");

  const CompiledField f = CompiledField::compile(sys.field);
  const std::size_t nv = sys.vars.size();
  std::vector<double> point(f.arity), stage(f.arity);
  std::vector<double> k1(nv), k2(nv), k3(nv), k4(nv);
  for (std::size_t k = 0; k < nv; ++k) point[k] = x0.at(sys.vars.at(k));
  for (std::size_t k = 0; k < sys.params.size(); ++k)
    point[nv + k] = params.at(sys.params.at(k));
  stage = point;

  // Nudge before flooring so representable endpoints such as t_end=1 with
  // dt=1e-3 keep their final step despite 1/dt rounding just below an
  // integer.
  const double raw = t_end / dt;
  const auto steps =
      static_cast<std::size_t>(std::floor(raw * (1.0 + 1e-15) + 1e-15));

  Trajectory tr;
  tr.vars = sys.vars;
  tr.times.reserve(steps + 1);
  tr.values.assign(nv, {});
  for (auto& col : tr.values) col.reserve(steps + 1);
  auto record = [&](double t) {
    tr.times.push_back(t);
    for (std::size_t k = 0; k < nv; ++k) tr.values[k].push_back(point[k]);
  };

  record(0.0);
  for (std::size_t i = 1; i <= steps; ++i) {
    if (method == Method::euler) {
      f.eval(point, k1);
      for (std::size_t k = 0; k < nv; ++k) point[k] += dt * k1[k];
    } else {
      f.eval(point, k1);
      for (std::size_t k = 0; k < nv; ++k)
        stage[k] = point[k] + 0.5 * dt * k1[k];
      f.eval(stage, k2);
      for (std::size_t k = 0; k < nv; ++k)
        stage[k] = point[k] + 0.5 * dt * k2[k];
      f.eval(stage, k3);
      for (std::size_t k = 0; k < nv; ++k) stage[k] = point[k] + dt * k3[k];
      f.eval(stage, k4);
      for (std::size_t k = 0; k < nv; ++k)
        point[k] += (dt / 6.0) * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);
    }
    for (std::size_t k = 0; k < nv; ++k)
      if (!std::isfinite(point[k]))
        throw Error(ErrorKind::non_finite, "variable '" + sys.vars.at(k) +
                                               "' is not finite at step " +
                                               std::to_string(i));
    record(static_cast<double>(i) * dt);
  }
  return tr;
}

void write_csv(const Trajectory& tr, std::ostream& os) {
  os << 't';
  for (const auto& v : tr.vars) os << ',' << v;
  os << '\n';
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    os << shortest(tr.times[i]);
    for (const auto& col : tr.values) os << ',' << shortest(col[i]);
    os << '\n';
  }
}

TransitionGraph graph(const Automaton& a) {
  require_valid(a);
  if (a.iface.inputs.base.size() != 0)
    throw Error(ErrorKind::free_input,
                "transition graphs need a closed automaton; free inputs: " +
                    joined_names(a.iface.inputs.base));
  std::vector<std::vector<std::size_t>> rows(a.states.size());
  for (std::size_t s = 0; s < a.states.size(); ++s) rows[s] = a.update[s][0];
  return {a.states, edge_list_serial(rows)};
}

std::vector<std::string> dead_states(const Automaton& a) {
  require_valid(a);
  std::vector<std::string> out;
  for (std::size_t s = 0; s < a.states.size(); ++s) {
    bool stuck = true;
    for (const auto& successors : a.update[s])
      if (!successors.empty()) {
        stuck = false;
        break;
      }
    if (stuck) out.push_back(a.states.at(s));
  }
  return out;
}

std::vector<std::vector<std::size_t>> components(const TransitionGraph& g) {
  std::vector<std::size_t> parent(g.nodes.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (const auto& [s, t] : g.edges) parent[find(s)] = find(t);

  std::vector<std::vector<std::size_t>> groups;
  std::vector<std::size_t> slot(g.nodes.size(), SIZE_MAX);
  for (std::size_t n = 0; n < g.nodes.size(); ++n) {
    std::size_t root = find(n);
    if (slot[root] == SIZE_MAX) {
      slot[root] = groups.size();
      groups.emplace_back();
    }
    groups[slot[root]].push_back(n);
  }
  return groups;
}

void write_dot(const TransitionGraph& g, std::ostream& os) {
  os << "digraph g {\n";
  for (const auto& name : g.nodes) os << "  \"" << name << "\";\n";
  for (const auto& [s, t] : g.edges)
    os << "  \"" << g.nodes.at(s) << "\" -> \"" << g.nodes.at(t) << "\";\n";
  os << "}\n";
}

}  // namespace rsm
