#include "rsm/wiring.hpp"

#include <unordered_map>
#include <unordered_set>
#include <utility>

namespace rsm {

namespace {

std::string quoted(const std::string& s) { return "'" + s + "'"; }

void check_disjoint(const TypedFinSet& a, const TypedFinSet& b,
                    const char* what_a, const char* what_b) {
  for (const auto& name : a.base) {
    if (b.base.contains(name)) {
      throw Error(ErrorKind::duplicate_name,
                  "port " + quoted(name) + " is declared as both " + what_a +
                      " and " + what_b);
    }
  }
}

struct FamilyTensor {
  TypedFinSet total;
  std::vector<FinMap> embed;
};

FamilyTensor tensor_family(std::span<const Interface> slots,
                           TypedFinSet Interface::* family) {
  const std::size_t arity = slots.size();
  std::vector<std::string> names;
  std::vector<std::string> types;
  for (std::size_t i = 0; i < arity; ++i) {
    const TypedFinSet& part = slots[i].*family;
    const std::string prefix = slot_prefix(i, arity);
    for (std::size_t k = 0; k < part.size(); ++k) {
      names.push_back(prefix + part.base.at(k));
      types.push_back(part.type_at(k));
    }
  }
  FamilyTensor out;
  out.total = TypedFinSet(FinSet(std::move(names)), std::move(types));
  out.embed.reserve(arity);
  for (std::size_t i = 0; i < arity; ++i) {
    const TypedFinSet& part = slots[i].*family;
    const std::string prefix = slot_prefix(i, arity);
    std::map<std::string, std::string> assign;
    for (const auto& p : part.base) assign[p] = prefix + p;
    out.embed.emplace_back(part.base, out.total.base, assign);
  }
  return out;
}

}  // namespace

Interface::Interface(TypedFinSet inputs_in, TypedFinSet outputs_in,
                     TypedFinSet exposed_in)
    : inputs(std::move(inputs_in)),
      outputs(std::move(outputs_in)),
      exposed(std::move(exposed_in)) {
  check_disjoint(inputs, outputs, "an input", "an output");
  check_disjoint(inputs, exposed, "an input", "an exposed port");
  check_disjoint(outputs, exposed, "an output", "an exposed port");
}

std::string slot_prefix(std::size_t slot, std::size_t arity) {
  if (arity == 1) return "";
  return "b" + std::to_string(slot) + ".";
}

TensorInterfacesResult tensor_interfaces(std::span<const Interface> slots) {
  FamilyTensor ins = tensor_family(slots, &Interface::inputs);
  FamilyTensor outs = tensor_family(slots, &Interface::outputs);
  FamilyTensor exps = tensor_family(slots, &Interface::exposed);
  TensorInterfacesResult r;
  r.iface = Interface(std::move(ins.total), std::move(outs.total),
                      std::move(exps.total));
  r.embed_inputs = std::move(ins.embed);
  r.embed_outputs = std::move(outs.embed);
  r.embed_exposed = std::move(exps.embed);
  return r;
}

Interface tensor_interfaces(const Interface& a, const Interface& b) {
  const Interface slots[] = {a, b};
  return tensor_interfaces(std::span<const Interface>(slots, 2)).iface;
}

std::vector<std::string> validate(const RsmMorphism& m) {
  std::vector<std::string> diags;
  const Interface inner = tensor_interfaces(m.domain).iface;

  for (const auto& name : inner.inputs.base) {
    if (m.prism.feed.find(name) == m.prism.feed.end()) {
      diags.push_back("inner input " + quoted(name) + " is not fed");
    }
  }
  for (const auto& [name, src] : m.prism.feed) {
    if (!inner.inputs.base.contains(name)) {
      diags.push_back("feed entry " + quoted(name) +
                      " does not name an inner input");
      continue;
    }
    const std::string& want = inner.inputs.type_of(name);
    if (src.kind == WireSource::Kind::inner_output) {
      if (!inner.outputs.base.contains(src.name)) {
        diags.push_back("inner input " + quoted(name) +
                        " is fed from unknown inner output " + quoted(src.name));
      } else if (inner.outputs.type_of(src.name) != want) {
        diags.push_back("inner input " + quoted(name) + " of type " +
                        quoted(want) + " is fed from inner output " +
                        quoted(src.name) + " of type " +
                        quoted(inner.outputs.type_of(src.name)));
      }
    } else {
      if (!m.codomain.inputs.base.contains(src.name)) {
        diags.push_back("inner input " + quoted(name) +
                        " is fed from unknown composite input " +
                        quoted(src.name));
      } else if (m.codomain.inputs.type_of(src.name) != want) {
        diags.push_back("inner input " + quoted(name) + " of type " +
                        quoted(want) + " is fed from composite input " +
                        quoted(src.name) + " of type " +
                        quoted(m.codomain.inputs.type_of(src.name)));
      }
    }
  }

  for (const auto& name : m.codomain.outputs.base) {
    if (m.prism.out_sel.find(name) == m.prism.out_sel.end()) {
      diags.push_back("composite output " + quoted(name) + " is not selected");
    }
  }
  for (const auto& [name, target] : m.prism.out_sel) {
    if (!m.codomain.outputs.base.contains(name)) {
      diags.push_back("output selection " + quoted(name) +
                      " does not name a composite output");
      continue;
    }
    if (!inner.outputs.base.contains(target)) {
      diags.push_back("composite output " + quoted(name) +
                      " selects unknown inner output " + quoted(target));
    } else if (inner.outputs.type_of(target) !=
               m.codomain.outputs.type_of(name)) {
      diags.push_back("composite output " + quoted(name) + " of type " +
                      quoted(m.codomain.outputs.type_of(name)) +
                      " selects inner output " + quoted(target) + " of type " +
                      quoted(inner.outputs.type_of(target)));
    }
  }

  auto check_leg = [&](const FinMap& leg, const TypedFinSet& ports,
                       const char* which) {
    if (leg.dom() != ports.base) {
      diags.push_back(std::string(which) +
                      " pooling leg domain does not match the " + which +
                      " exposed ports");
      return;
    }
    if (leg.cod() != m.ports.apex.base) {
      diags.push_back(std::string(which) +
                      " pooling leg does not land in the pool set");
      return;
    }
    for (const auto& p : ports.base) {
      const std::string& pool = leg(p);
      if (ports.type_of(p) != m.ports.apex.type_of(pool)) {
        diags.push_back(std::string(which) + " exposed port " + quoted(p) +
                        " of type " + quoted(ports.type_of(p)) +
                        " pools into " + quoted(pool) + " of type " +
                        quoted(m.ports.apex.type_of(pool)));
      }
    }
  };
  check_leg(m.ports.inner, inner.exposed, "inner");
  check_leg(m.ports.outer, m.codomain.exposed, "outer");

  return diags;
}

RsmMorphism identity_morphism(const Interface& iface) {
  RsmMorphism m;
  m.domain = {iface};
  m.codomain = iface;
  for (const auto& name : iface.inputs.base) {
    m.prism.feed[name] = WireSource::from_outer(name);
  }
  for (const auto& name : iface.outputs.base) {
    m.prism.out_sel[name] = name;
  }
  m.ports.apex = iface.exposed;
  m.ports.inner = FinMap::identity(iface.exposed.base);
  m.ports.outer = FinMap::identity(iface.exposed.base);
  return m;
}

SubstituteResult substitute_full(const RsmMorphism& outer,
                                 std::span<const RsmMorphism> inner) {
  const std::size_t arity = outer.domain.size();
  if (inner.size() != arity) {
    throw Error(ErrorKind::boundary_mismatch,
                "substitution arity mismatch: outer morphism has " +
                    std::to_string(arity) + " slots, got " +
                    std::to_string(inner.size()) + " morphisms");
  }
  for (std::size_t i = 0; i < arity; ++i) {
    if (!(inner[i].codomain == outer.domain[i])) {
      throw Error(ErrorKind::boundary_mismatch,
                  "slot " + std::to_string(i) +
                      ": the plugged morphism's codomain does not match the "
                      "outer domain interface");
    }
  }
  if (auto bad = validate(outer); !bad.empty()) {
    throw Error(ErrorKind::boundary_mismatch,
                "outer morphism is not valid: " + bad.front());
  }
  for (std::size_t i = 0; i < arity; ++i) {
    if (auto bad = validate(inner[i]); !bad.empty()) {
      throw Error(ErrorKind::boundary_mismatch,
                  "morphism in slot " + std::to_string(i) +
                      " is not valid: " + bad.front());
    }
  }

  RsmMorphism comp;
  comp.codomain = outer.codomain;
  std::vector<std::size_t> offset(arity, 0);
  std::size_t total = 0;
  for (std::size_t i = 0; i < arity; ++i) {
    offset[i] = total;
    total += inner[i].domain.size();
    comp.domain.insert(comp.domain.end(), inner[i].domain.begin(),
                       inner[i].domain.end());
  }

  // Rename each inner morphism's tensored port names into the composite
  // tensor. Computed from slot positions, never by string surgery.
  std::vector<std::unordered_map<std::string, std::string>> to_global(arity);
  std::unordered_map<std::string, std::pair<std::size_t, std::string>>
      global_exposed_src;
  for (std::size_t i = 0; i < arity; ++i) {
    const std::size_t n = inner[i].domain.size();
    for (std::size_t j = 0; j < n; ++j) {
      const std::string local = slot_prefix(j, n);
      const std::string global = slot_prefix(offset[i] + j, total);
      const Interface& box = inner[i].domain[j];
      for (const TypedFinSet* fam : {&box.inputs, &box.outputs, &box.exposed}) {
        for (const auto& p : fam->base) {
          to_global[i][local + p] = global + p;
        }
      }
      for (const auto& p : box.exposed.base) {
        global_exposed_src[global + p] = {i, local + p};
      }
    }
  }

  std::unordered_map<std::string, std::pair<std::size_t, std::string>>
      mid_output;
  for (std::size_t i = 0; i < arity; ++i) {
    const std::string prefix = slot_prefix(i, arity);
    for (const auto& w : outer.domain[i].outputs.base) {
      mid_output[prefix + w] = {i, w};
    }
  }

  // Chase a middle-boundary input through the outer prism down to a composite
  // source: at most outer feed -> slot output selection -> inner output.
  auto resolve_mid_input = [&](std::size_t i,
                               const std::string& w) -> WireSource {
    const WireSource& osrc = outer.prism.feed.at(slot_prefix(i, arity) + w);
    if (osrc.kind == WireSource::Kind::outer_input) return osrc;
    const auto& [k, wk] = mid_output.at(osrc.name);
    const std::string& local_out = inner[k].prism.out_sel.at(wk);
    return WireSource::from_output(to_global[k].at(local_out));
  };

  for (std::size_t i = 0; i < arity; ++i) {
    for (const auto& [local_in, src] : inner[i].prism.feed) {
      const std::string& global_in = to_global[i].at(local_in);
      if (src.kind == WireSource::Kind::inner_output) {
        comp.prism.feed[global_in] =
            WireSource::from_output(to_global[i].at(src.name));
      } else {
        comp.prism.feed[global_in] = resolve_mid_input(i, src.name);
      }
    }
  }
  for (const auto& [o, mid_out] : outer.prism.out_sel) {
    const auto& [k, wk] = mid_output.at(mid_out);
    comp.prism.out_sel[o] = to_global[k].at(inner[k].prism.out_sel.at(wk));
  }

  // Pool side: sum the inner pool sets, then push out against the outer
  // cospan. Class names prefer the outer pools, so the outermost layer names
  // what the user sees.
  std::vector<std::string> sum_names;
  std::vector<std::string> sum_types;
  for (std::size_t i = 0; i < arity; ++i) {
    const std::string prefix = slot_prefix(i, arity);
    const TypedFinSet& ap = inner[i].ports.apex;
    for (std::size_t k = 0; k < ap.size(); ++k) {
      sum_names.push_back(prefix + ap.base.at(k));
      sum_types.push_back(ap.type_at(k));
    }
  }
  TypedFinSet apex_sum(FinSet(std::move(sum_names)), std::move(sum_types));

  const Interface comp_inner = tensor_interfaces(comp.domain).iface;
  std::map<std::string, std::string> left_assign;
  for (const auto& g : comp_inner.exposed.base) {
    const auto& [i, local] = global_exposed_src.at(g);
    left_assign[g] = slot_prefix(i, arity) + inner[i].ports.inner(local);
  }
  FinMap c1_left(comp_inner.exposed.base, apex_sum.base, left_assign);

  const Interface mid = tensor_interfaces(outer.domain).iface;
  std::map<std::string, std::string> right_assign;
  for (std::size_t i = 0; i < arity; ++i) {
    const std::string prefix = slot_prefix(i, arity);
    for (const auto& p : outer.domain[i].exposed.base) {
      right_assign[prefix + p] = prefix + inner[i].ports.outer(p);
    }
  }
  FinMap c1_right(mid.exposed.base, apex_sum.base, right_assign);

  PushoutResult po = pushout(outer.ports.inner, c1_right);

  std::vector<std::string> z_types(po.apex.size());
  std::vector<bool> have(po.apex.size(), false);
  auto record_types = [&](const FinMap& inj, const TypedFinSet& src) {
    for (std::size_t k = 0; k < src.size(); ++k) {
      const std::size_t z = inj.at_index(k);
      if (!have[z]) {
        z_types[z] = src.type_at(k);
        have[z] = true;
      } else if (z_types[z] != src.type_at(k)) {
        throw Error(ErrorKind::internal,
                    "composed pool " + quoted(po.apex.at(z)) +
                        " mixes types " + quoted(z_types[z]) + " and " +
                        quoted(src.type_at(k)));
      }
    }
  };
  record_types(po.inj1, outer.ports.apex);
  record_types(po.inj2, apex_sum);

  comp.ports.apex = TypedFinSet(po.apex, std::move(z_types));
  comp.ports.inner = c1_left.then(po.inj2);
  comp.ports.outer = outer.ports.outer.then(po.inj1);

  SubstituteResult result;
  result.morphism = std::move(comp);
  result.inner_apex_embed.reserve(arity);
  for (std::size_t i = 0; i < arity; ++i) {
    const std::string prefix = slot_prefix(i, arity);
    std::map<std::string, std::string> assign;
    for (const auto& a : inner[i].ports.apex.base) assign[a] = prefix + a;
    FinMap into_sum(inner[i].ports.apex.base, apex_sum.base, assign);
    result.inner_apex_embed.push_back(into_sum.then(po.inj2));
  }
  result.outer_apex_embed = po.inj1;
  return result;
}

RsmMorphism substitute(const RsmMorphism& outer,
                       std::span<const RsmMorphism> inner) {
  return substitute_full(outer, inner).morphism;
}

std::optional<FinMap> match_cospan_apexes(const PortCospan& a,
                                          const PortCospan& b) {
  if (a.apex.size() != b.apex.size()) return std::nullopt;
  if (a.inner.dom() != b.inner.dom() || a.outer.dom() != b.outer.dom()) {
    return std::nullopt;
  }

  // On pools hit by a leg the renaming is forced; leftover pools are paired
  // by type, in order. Everything is verified afterwards, so a bad pairing
  // just fails.
  std::map<std::string, std::string> assign;
  for (const auto& p : a.inner.dom()) assign[a.inner(p)] = b.inner(p);
  for (const auto& p : a.outer.dom()) assign[a.outer(p)] = b.outer(p);

  std::unordered_set<std::string> hit_b;
  for (const auto& [from, to] : assign) {
    (void)from;
    hit_b.insert(to);
  }
  std::map<std::string, std::vector<std::string>> loose_a, loose_b;
  for (const auto& q : a.apex.base) {
    if (assign.find(q) == assign.end()) loose_a[a.apex.type_of(q)].push_back(q);
  }
  for (const auto& q : b.apex.base) {
    if (hit_b.find(q) == hit_b.end()) loose_b[b.apex.type_of(q)].push_back(q);
  }
  if (loose_a.size() != loose_b.size()) return std::nullopt;
  for (const auto& [type, qs_a] : loose_a) {
    auto it = loose_b.find(type);
    if (it == loose_b.end() || it->second.size() != qs_a.size()) {
      return std::nullopt;
    }
    for (std::size_t k = 0; k < qs_a.size(); ++k) {
      assign[qs_a[k]] = it->second[k];
    }
  }
  if (assign.size() != a.apex.size()) return std::nullopt;

  FinMap h;
  try {
    h = FinMap(a.apex.base, b.apex.base, assign);
  } catch (const Error&) {
    return std::nullopt;
  }
  if (!h.is_bijective()) return std::nullopt;
  if (!(a.inner.then(h) == b.inner) || !(a.outer.then(h) == b.outer)) {
    return std::nullopt;
  }
  for (const auto& q : a.apex.base) {
    if (a.apex.type_of(q) != b.apex.type_of(h(q))) return std::nullopt;
  }
  return h;
}

bool equivalent(const RsmMorphism& a, const RsmMorphism& b) {
  if (a.domain != b.domain) return false;
  if (!(a.codomain == b.codomain)) return false;
  if (!(a.prism == b.prism)) return false;
  return match_cospan_apexes(a.ports, b.ports).has_value();
}

}  // namespace rsm
