#include "rsm/doctrine_ode.hpp"

#include <algorithm>
#include <initializer_list>
#include <map>
#include <utility>

namespace rsm {

namespace {

std::string quoted(const std::string& s) { return "'" + s + "'"; }

std::vector<std::string> concat_names(
    std::initializer_list<const FinSet*> parts) {
  std::vector<std::string> names;
  for (const FinSet* part : parts) {
    names.insert(names.end(), part->begin(), part->end());
  }
  return names;
}

void check_fresh_names(const FinSet& names, const FinSet& taken,
                       const char* what, const char* taken_what) {
  for (const auto& name : names) {
    if (taken.contains(name)) {
      throw Error(ErrorKind::duplicate_name,
                  std::string(what) + " " + quoted(name) + " collides with " +
                      taken_what);
    }
  }
}

void check_real_ports(const TypedFinSet& ports, const char* family,
                      std::vector<std::string>& diags) {
  for (std::size_t k = 0; k < ports.size(); ++k) {
    if (ports.type_at(k) != kRealType) {
      diags.push_back(std::string(family) + " " + quoted(ports.base.at(k)) +
                      " has type " + quoted(ports.type_at(k)) +
                      "; continuous systems carry only " + quoted(kRealType));
    }
  }
}

}  // namespace

FinSet field_scope(const FinSet& vars, const TypedFinSet& inputs,
                   const FinSet& params) {
  return FinSet(concat_names({&vars, &inputs.base, &params}));
}

FinSet readout_scope(const FinSet& vars, const FinSet& params) {
  return FinSet(concat_names({&vars, &params}));
}

std::vector<std::string> check_system(const OdeSystem& sys) {
  std::vector<std::string> diags;

  check_real_ports(sys.iface.inputs, "input", diags);
  check_real_ports(sys.iface.outputs, "output", diags);
  check_real_ports(sys.iface.exposed, "exposed port", diags);

  bool disjoint = true;
  for (const auto& v : sys.vars) {
    if (sys.iface.inputs.base.contains(v)) {
      diags.push_back("name " + quoted(v) + " is both a variable and an input");
      disjoint = false;
    }
    if (sys.params.contains(v)) {
      diags.push_back("name " + quoted(v) +
                      " is both a variable and a parameter");
      disjoint = false;
    }
  }
  for (const auto& p : sys.params) {
    if (sys.iface.inputs.base.contains(p)) {
      diags.push_back("name " + quoted(p) +
                      " is both a parameter and an input");
      disjoint = false;
    }
  }

  if (sys.field.cod != sys.vars) {
    diags.push_back("field must have exactly one component per variable");
  }
  if (sys.readout.cod != sys.iface.outputs.base) {
    diags.push_back("readout must have exactly one component per output port");
  }
  if (disjoint) {
    if (sys.field.dom != field_scope(sys.vars, sys.iface.inputs, sys.params)) {
      diags.push_back(
          "field scope must list variables, then inputs, then parameters");
    }
    if (sys.readout.dom != readout_scope(sys.vars, sys.params)) {
      diags.push_back("readout scope must list variables, then parameters");
    }
  }
  for (const auto& [comp, name] : sys.field.undeclared_names()) {
    diags.push_back("field for " + quoted(comp) + " mentions undeclared name " +
                    quoted(name));
  }
  for (const auto& [comp, name] : sys.readout.undeclared_names()) {
    diags.push_back("readout for " + quoted(comp) +
                    " mentions undeclared name " + quoted(name));
  }

  if (sys.ports.dom() != sys.iface.exposed.base) {
    diags.push_back("ports must assign a variable to each exposed port");
  } else if (sys.ports.cod() != sys.vars) {
    diags.push_back("ports must land in the variable set");
  }

  return diags;
}

void require_valid(const OdeSystem& sys) {
  auto diags = check_system(sys);
  if (!diags.empty()) {
    throw Error(ErrorKind::invalid_model, diags.front());
  }
}

OdeSystem unit_system() {
  OdeSystem sys;
  FinSet none;
  TypedFinSet tnone;
  sys.iface = Interface(tnone, tnone, tnone);
  sys.vars = none;
  sys.params = none;
  sys.field = PolyMap(none, none, {});
  sys.readout = PolyMap(none, none, {});
  sys.ports = FinMap(none, none, std::vector<std::size_t>{});
  return sys;
}

OdeShareResult share(const OdeSystem& sys, const PortCospan& ports) {
  if (ports.inner.dom() != sys.iface.exposed.base) {
    throw Error(ErrorKind::boundary_mismatch,
                "cospan inner leg does not match the system's exposed ports");
  }
  if (ports.inner.cod() != ports.apex.base ||
      ports.outer.cod() != ports.apex.base) {
    throw Error(ErrorKind::boundary_mismatch,
                "cospan legs do not land in the declared pool set");
  }
  for (std::size_t k = 0; k < ports.apex.size(); ++k) {
    if (ports.apex.type_at(k) != kRealType) {
      throw Error(ErrorKind::type_mismatch,
                  "pool " + quoted(ports.apex.base.at(k)) + " has type " +
                      quoted(ports.apex.type_at(k)) +
                      "; continuous sharing needs " + quoted(kRealType));
    }
  }

  // Merged variable set: pools and variables glued along the ports that read
  // them. Pool names take precedence, so the composite's variables are named
  // by what the wiring calls the shared resources.
  PushoutResult po = pushout(ports.inner, sys.ports);
  const FinSet& new_vars = po.apex;
  check_fresh_names(new_vars, sys.iface.inputs.base, "merged variable",
                    "an input name");
  check_fresh_names(new_vars, sys.params, "merged variable",
                    "a parameter name");

  std::map<std::string, std::string> rename;
  for (const auto& v : sys.vars) rename[v] = po.inj2(v);

  std::vector<Polynomial> field_comps(new_vars.size());
  for (std::size_t i = 0; i < sys.vars.size(); ++i) {
    const std::size_t target = po.inj2.at_index(i);
    field_comps[target] =
        field_comps[target] + sys.field.at(sys.vars.at(i)).rename(rename);
  }

  std::vector<Polynomial> readout_comps;
  readout_comps.reserve(sys.readout.comps.size());
  for (const auto& comp : sys.readout.comps) {
    readout_comps.push_back(comp.rename(rename));
  }

  OdeShareResult result;
  result.sys.iface =
      Interface(sys.iface.inputs, sys.iface.outputs,
                TypedFinSet::uniform(ports.outer.dom(), kRealType));
  result.sys.vars = new_vars;
  result.sys.params = sys.params;
  result.sys.field =
      PolyMap(field_scope(new_vars, sys.iface.inputs, sys.params), new_vars,
              std::move(field_comps));
  result.sys.readout = PolyMap(readout_scope(new_vars, sys.params),
                               sys.iface.outputs.base, std::move(readout_comps));
  result.sys.ports = ports.outer.then(po.inj1);
  result.var_quotient = po.inj2;
  result.pool_embed = po.inj1;
  return result;
}

OdeSystem wire(const OdeSystem& sys, const Prism& prism,
               const Interface& outer) {
  for (const auto& name : sys.iface.inputs.base) {
    if (prism.feed.find(name) == prism.feed.end()) {
      throw Error(ErrorKind::boundary_mismatch,
                  "inner input " + quoted(name) + " is not fed");
    }
  }
  for (const auto& [name, src] : prism.feed) {
    if (!sys.iface.inputs.base.contains(name)) {
      throw Error(ErrorKind::boundary_mismatch,
                  "feed entry " + quoted(name) +
                      " does not name an input of the system");
    }
    if (src.kind == WireSource::Kind::inner_output) {
      if (!sys.iface.outputs.base.contains(src.name)) {
        throw Error(ErrorKind::boundary_mismatch,
                    "input " + quoted(name) + " is fed from unknown output " +
                        quoted(src.name));
      }
    } else if (!outer.inputs.base.contains(src.name)) {
      throw Error(ErrorKind::boundary_mismatch,
                  "input " + quoted(name) +
                      " is fed from unknown composite input " +
                      quoted(src.name));
    }
  }
  for (const auto& name : outer.outputs.base) {
    if (prism.out_sel.find(name) == prism.out_sel.end()) {
      throw Error(ErrorKind::boundary_mismatch,
                  "composite output " + quoted(name) + " is not selected");
    }
  }
  for (const auto& [name, target] : prism.out_sel) {
    if (!outer.outputs.base.contains(name)) {
      throw Error(ErrorKind::boundary_mismatch,
                  "output selection " + quoted(name) +
                      " does not name a composite output");
    }
    if (!sys.iface.outputs.base.contains(target)) {
      throw Error(ErrorKind::boundary_mismatch,
                  "composite output " + quoted(name) +
                      " selects unknown output " + quoted(target));
    }
  }
  if (outer.exposed != sys.iface.exposed) {
    throw Error(ErrorKind::boundary_mismatch,
                "machine composition does not change exposed ports");
  }
  std::vector<std::string> type_diags;
  check_real_ports(outer.inputs, "composite input", type_diags);
  check_real_ports(outer.outputs, "composite output", type_diags);
  if (!type_diags.empty()) {
    throw Error(ErrorKind::type_mismatch, type_diags.front());
  }
  check_fresh_names(outer.inputs.base, sys.vars, "composite input",
                    "a variable name");
  check_fresh_names(outer.inputs.base, sys.params, "composite input",
                    "a parameter name");

  std::map<std::string, Polynomial> table;
  for (const auto& [name, src] : prism.feed) {
    if (src.kind == WireSource::Kind::inner_output) {
      table.emplace(name, sys.readout.at(src.name));
    } else {
      table.emplace(name, Polynomial::variable(src.name));
    }
  }

  std::vector<Polynomial> field_comps;
  field_comps.reserve(sys.field.comps.size());
  for (const auto& comp : sys.field.comps) {
    field_comps.push_back(comp.substitute(table));
  }

  std::vector<Polynomial> readout_comps;
  readout_comps.reserve(outer.outputs.size());
  for (const auto& name : outer.outputs.base) {
    readout_comps.push_back(sys.readout.at(prism.out_sel.at(name)));
  }

  OdeSystem result;
  result.iface = outer;
  result.vars = sys.vars;
  result.params = sys.params;
  result.field = PolyMap(field_scope(sys.vars, outer.inputs, sys.params),
                         sys.vars, std::move(field_comps));
  result.readout = PolyMap(readout_scope(sys.vars, sys.params),
                           outer.outputs.base, std::move(readout_comps));
  result.ports = sys.ports;
  return result;
}

OdeTensorResult tensor_systems(std::span<const OdeSystem> slots) {
  const std::size_t arity = slots.size();
  std::vector<Interface> ifaces;
  ifaces.reserve(arity);
  for (const auto& slot : slots) ifaces.push_back(slot.iface);
  auto ti = tensor_interfaces(ifaces);

  std::vector<std::string> var_names;
  for (std::size_t i = 0; i < arity; ++i) {
    const std::string prefix = slot_prefix(i, arity);
    for (const auto& v : slots[i].vars) var_names.push_back(prefix + v);
  }
  FinSet vars(std::move(var_names));

  std::vector<std::string> param_names;
  FinSet params;
  for (const auto& slot : slots) {
    for (const auto& p : slot.params) {
      if (std::find(param_names.begin(), param_names.end(), p) ==
          param_names.end()) {
        param_names.push_back(p);
      }
    }
  }
  params = FinSet(std::move(param_names));

  OdeTensorResult result;
  std::vector<Polynomial> field_comps;
  std::vector<Polynomial> readout_comps(ti.iface.outputs.size());
  std::map<std::string, std::string> port_assign;
  for (std::size_t i = 0; i < arity; ++i) {
    const std::string prefix = slot_prefix(i, arity);
    const OdeSystem& slot = slots[i];

    std::map<std::string, std::string> rename;
    std::map<std::string, std::string> var_assign;
    for (const auto& v : slot.vars) {
      rename[v] = prefix + v;
      var_assign[v] = prefix + v;
    }
    for (const auto& x : slot.iface.inputs.base) rename[x] = prefix + x;
    result.var_embed.emplace_back(slot.vars, vars, var_assign);

    for (const auto& v : slot.vars) {
      field_comps.push_back(slot.field.at(v).rename(rename));
    }
    for (const auto& o : slot.iface.outputs.base) {
      readout_comps[ti.iface.outputs.base.index_of(prefix + o)] =
          slot.readout.at(o).rename(rename);
    }
    for (const auto& m : slot.iface.exposed.base) {
      port_assign[prefix + m] = prefix + slot.ports(m);
    }
  }

  result.sys.iface = ti.iface;
  result.sys.vars = vars;
  result.sys.params = params;
  result.sys.field = PolyMap(field_scope(vars, ti.iface.inputs, params), vars,
                             std::move(field_comps));
  result.sys.readout = PolyMap(readout_scope(vars, params),
                               ti.iface.outputs.base, std::move(readout_comps));
  result.sys.ports =
      FinMap(ti.iface.exposed.base, vars, port_assign);
  return result;
}

OdeSystem rename_vars(const OdeSystem& sys, const FinMap& bij) {
  if (bij.dom() != sys.vars) {
    throw Error(ErrorKind::domain_mismatch,
                "variable renaming must be defined on the variable set");
  }
  if (!bij.is_bijective()) {
    throw Error(ErrorKind::not_bijective,
                "variable renaming must be a bijection");
  }
  const FinSet& new_vars = bij.cod();
  check_fresh_names(new_vars, sys.iface.inputs.base, "renamed variable",
                    "an input name");
  check_fresh_names(new_vars, sys.params, "renamed variable",
                    "a parameter name");

  std::map<std::string, std::string> rename;
  for (const auto& v : sys.vars) rename[v] = bij(v);

  FinMap back = bij.inverse();
  std::vector<Polynomial> field_comps;
  field_comps.reserve(new_vars.size());
  for (const auto& c : new_vars) {
    field_comps.push_back(sys.field.at(back(c)).rename(rename));
  }
  std::vector<Polynomial> readout_comps;
  readout_comps.reserve(sys.readout.comps.size());
  for (const auto& comp : sys.readout.comps) {
    readout_comps.push_back(comp.rename(rename));
  }

  OdeSystem result;
  result.iface = sys.iface;
  result.vars = new_vars;
  result.params = sys.params;
  result.field = PolyMap(field_scope(new_vars, sys.iface.inputs, sys.params),
                         new_vars, std::move(field_comps));
  result.readout = PolyMap(readout_scope(new_vars, sys.params),
                           sys.iface.outputs.base, std::move(readout_comps));
  result.ports = sys.ports.then(bij);
  return result;
}

}  // namespace rsm
