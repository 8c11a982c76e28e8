#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "rsm/error.hpp"

namespace rsm {

/// Ordered finite set of distinct names. Element order is part of the value:
/// it fixes enumeration order everywhere downstream (pullback pairs, pushout
/// classes, tensor slots), which is what makes composite naming deterministic.
class FinSet {
 public:
  FinSet() = default;
  explicit FinSet(std::vector<std::string> elements);

  std::size_t size() const { return elems_.size(); }
  bool empty() const { return elems_.empty(); }
  bool contains(const std::string& name) const;
  std::optional<std::size_t> find(const std::string& name) const;
  std::size_t index_of(const std::string& name) const;
  const std::string& at(std::size_t i) const;
  const std::vector<std::string>& elements() const { return elems_; }

  auto begin() const { return elems_.begin(); }
  auto end() const { return elems_.end(); }

  bool operator==(const FinSet& other) const { return elems_ == other.elems_; }
  bool operator!=(const FinSet& other) const { return !(*this == other); }

 private:
  std::vector<std::string> elems_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Total map between FinSets, stored as an index table over dom order.
class FinMap {
 public:
  FinMap() = default;
  FinMap(FinSet dom, FinSet cod, std::vector<std::size_t> table);
  FinMap(FinSet dom, FinSet cod,
         const std::map<std::string, std::string>& assignment);

  static FinMap identity(FinSet s);
  static FinMap constant(FinSet dom, FinSet cod, const std::string& value);

  const FinSet& dom() const { return dom_; }
  const FinSet& cod() const { return cod_; }

  const std::string& operator()(const std::string& x) const;
  std::size_t at_index(std::size_t i) const;

  /// Diagrammatic composition: (this ; g)(x) = g(this(x)).
  FinMap then(const FinMap& g) const;

  std::vector<std::string> preimage(const std::string& y) const;
  bool is_bijective() const;
  FinMap inverse() const;

  bool operator==(const FinMap& other) const;
  bool operator!=(const FinMap& other) const { return !(*this == other); }

 private:
  FinSet dom_, cod_;
  std::vector<std::size_t> table_;
};

/// FinSet with a type name attached to each element (port types, pool types).
struct TypedFinSet {
  FinSet base;
  std::vector<std::string> types;

  TypedFinSet() = default;
  TypedFinSet(FinSet base_in, std::vector<std::string> types_in);
  static TypedFinSet uniform(FinSet base_in, const std::string& type);

  std::size_t size() const { return base.size(); }
  bool empty() const { return base.empty(); }
  const std::string& type_of(const std::string& name) const;
  const std::string& type_at(std::size_t i) const { return types.at(i); }

  bool operator==(const TypedFinSet& other) const {
    return base == other.base && types == other.types;
  }
  bool operator!=(const TypedFinSet& other) const { return !(*this == other); }
};

/// f preserves types when type(f(x)) = type(x) for every x.
bool preserves_types(const FinMap& f, const TypedFinSet& dom,
                     const TypedFinSet& cod);

/// Two legs out of a shared apex: left: apex -> L, right: apex -> R.
struct Span {
  FinMap left, right;

  Span() = default;
  Span(FinMap left_in, FinMap right_in);
  const FinSet& apex() const { return left.dom(); }
};

/// Two legs into a shared apex: left: L -> apex, right: R -> apex.
struct Cospan {
  FinMap left, right;

  Cospan() = default;
  Cospan(FinMap left_in, FinMap right_in);
  const FinSet& apex() const { return left.cod(); }
};

/// "(s,q)", the canonical name of a pair.
std::string pair_name(const std::string& s, const std::string& q);

struct PullbackResult {
  FinSet apex;
  FinMap proj1, proj2;
};

/// Pullback of p: S -> M and i: Q -> M. Apex elements are the matching pairs,
/// named "(s,q)", enumerated s-major in dom order of p then dom order of i.
PullbackResult pullback(const FinMap& p, const FinMap& i);

struct PushoutResult {
  FinSet apex;
  FinMap inj1, inj2;
};

/// Pushout of pi: P -> A and a: P -> B. Apex elements are the classes of the
/// equivalence generated by pi(m) ~ a(m); each class is named by its least
/// member in the order "all of pi.cod, then all of a.cod" (primes appended on
/// the rare name collision between unidentified A- and B-elements), and
/// classes are listed in order of that least member.
PushoutResult pushout(const FinMap& pi, const FinMap& a);

/// Span composition via pullback of the middle legs.
Span compose_spans(const Span& s1, const Span& s2);

/// Cospan composition via pushout of the middle legs.
Cospan compose_cospans(const Cospan& c1, const Cospan& c2);

/// Pull a labelling of the codomain back along f: result(m) = sigma(f(m)).
std::map<std::string, std::string> label_pull(
    const FinMap& f, const std::map<std::string, std::string>& sigma);

/// The unique bijection h: X -> Y with keys_y(h(x)) = keys_x(x), where each
/// element's key is the tuple of its images under the given maps. Throws if
/// the key tuples do not match up bijectively. This is how "equal up to the
/// canonical renaming" is checked: the renaming is constructed from the
/// projections, never guessed from names.
FinMap match_by_keys(const FinSet& x, std::span<const FinMap> keys_x,
                     const FinSet& y, std::span<const FinMap> keys_y);

}  // namespace rsm
