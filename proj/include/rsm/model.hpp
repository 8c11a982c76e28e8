#pragma once

#include <string>
#include <utility>
#include <vector>

#include "rsm/rsm.hpp"

namespace rsm {

// One node of a composition expression: either a leaf naming a box or a
// morphism applied to child nodes.
struct ComposeNode {
  std::string box;       // set on leaves
  std::string morphism;  // set on applications
  std::vector<ComposeNode> children;

  bool leaf() const { return morphism.empty(); }
};

// How a morphism's domain slot was written in the file: a box name or a
// reference to another morphism's codomain.
struct DomainRef {
  bool composite = false;
  std::string name;

  bool operator==(const DomainRef& other) const {
    return composite == other.composite && name == other.name;
  }
};

struct ModelMorphism {
  std::vector<DomainRef> domain;
  RsmMorphism morphism;
};

// In-memory form of a model file: one doctrine, shared declarations, named
// boxes and morphisms, and a root composition expression. Definitions whose
// construction failed are kept as names only, with the failure recorded in
// `diagnostics`.
struct Model {
  Doctrine doctrine = Doctrine::ode;
  FinSet parameters;      // ODE models; the shared constant registry
  AlphabetMap alphabets;  // automata models
  std::vector<std::pair<std::string, FilledBox>> boxes;
  std::vector<std::pair<std::string, ModelMorphism>> morphisms;
  std::vector<std::string> declared_boxes, declared_morphisms;
  std::vector<std::string> diagnostics;  // from construction, location-first
  ComposeNode root;

  const FilledBox* find_box(const std::string& name) const;
  const ModelMorphism* find_morphism(const std::string& name) const;
};

// Parses the JSON dialect. Structural problems (invalid JSON, missing or
// mistyped fields, malformed polynomial text, bad identifiers) throw
// Error(parse) with a JSON-pointer location. Name resolution and algebra
// problems do not throw; they surface through check_model.
Model parse_model(const std::string& text);

// Semantic diagnostics, each starting with a JSON-pointer location; empty
// means every definition built, every morphism validates, and the
// composition expression is well-typed.
std::vector<std::string> check_model(const Model& m);

// Runs the composition expression. Call only on a model check_model accepts.
FilledBox compose_model(const Model& m);

// Wraps a composite back into a single-box model with a leaf root, keeping
// the declarations it needs.
Model composed_model(const Model& src, const FilledBox& box);

// Canonical serialization; parsing the result reproduces the model.
std::string print_model(const Model& m);

}  // namespace rsm
