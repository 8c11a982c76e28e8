#include "rsm/finset.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace rsm {

namespace {

std::string describe(const FinSet& s, std::size_t max_shown = 4) {
  std::ostringstream out;
  out << "{";
  for (std::size_t i = 0; i < s.size() && i < max_shown; ++i) {
    if (i > 0) out << ",";
    out << s.at(i);
  }
  if (s.size() > max_shown) out << ",...";
  out << "}";
  return out.str();
}

/// Plain union-find over indices, path halving.
struct UnionFind {
  std::vector<std::size_t> parent;

  explicit UnionFind(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b) std::swap(a, b);
    parent[a] = b;  // keep the least index as representative
  }
};

}  // namespace

FinSet::FinSet(std::vector<std::string> elements) : elems_(std::move(elements)) {
  index_.reserve(elems_.size());
  for (std::size_t i = 0; i < elems_.size(); ++i) {
    auto [it, inserted] = index_.emplace(elems_[i], i);
    if (!inserted) {
      throw Error(ErrorKind::duplicate_name,
                  "duplicate element '" + elems_[i] + "' in finite set");
    }
  }
}

bool FinSet::contains(const std::string& name) const {
  return index_.count(name) > 0;
}

std::optional<std::size_t> FinSet::find(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t FinSet::index_of(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) {
    throw Error(ErrorKind::unknown_name,
                "element '" + name + "' not in set " + describe(*this));
  }
  return it->second;
}

const std::string& FinSet::at(std::size_t i) const {
  if (i >= elems_.size()) {
    throw Error(ErrorKind::internal, "finite set index out of range");
  }
  return elems_[i];
}

FinMap::FinMap(FinSet dom, FinSet cod, std::vector<std::size_t> table)
    : dom_(std::move(dom)), cod_(std::move(cod)), table_(std::move(table)) {
  if (table_.size() != dom_.size()) {
    throw Error(ErrorKind::internal, "map table size does not match domain");
  }
  for (std::size_t v : table_) {
    if (v >= cod_.size()) {
      throw Error(ErrorKind::internal, "map table entry out of codomain range");
    }
  }
}

FinMap::FinMap(FinSet dom, FinSet cod,
               const std::map<std::string, std::string>& assignment)
    : dom_(std::move(dom)), cod_(std::move(cod)) {
  table_.reserve(dom_.size());
  for (const auto& x : dom_) {
    auto it = assignment.find(x);
    if (it == assignment.end()) {
      throw Error(ErrorKind::unbound_name, "no image given for '" + x + "'");
    }
    auto idx = cod_.find(it->second);
    if (!idx) {
      throw Error(ErrorKind::unknown_name,
                  "image '" + it->second + "' of '" + x + "' not in codomain " +
                      describe(cod_));
    }
    table_.push_back(*idx);
  }
  for (const auto& [key, value] : assignment) {
    (void)value;
    if (!dom_.contains(key)) {
      throw Error(ErrorKind::unknown_name,
                  "assignment mentions '" + key + "' which is not in the domain");
    }
  }
}

FinMap FinMap::identity(FinSet s) {
  std::vector<std::size_t> table(s.size());
  std::iota(table.begin(), table.end(), std::size_t{0});
  FinSet copy = s;
  return FinMap(std::move(copy), std::move(s), std::move(table));
}

FinMap FinMap::constant(FinSet dom, FinSet cod, const std::string& value) {
  std::size_t idx = cod.index_of(value);
  return FinMap(std::move(dom), std::move(cod),
                std::vector<std::size_t>(dom.size(), idx));
}

const std::string& FinMap::operator()(const std::string& x) const {
  return cod_.at(table_[dom_.index_of(x)]);
}

std::size_t FinMap::at_index(std::size_t i) const {
  if (i >= table_.size()) {
    throw Error(ErrorKind::internal, "map index out of range");
  }
  return table_[i];
}

FinMap FinMap::then(const FinMap& g) const {
  if (cod_ != g.dom()) {
    throw Error(ErrorKind::codomain_mismatch,
                "cannot compose: codomain " + describe(cod_) +
                    " differs from domain " + describe(g.dom()));
  }
  std::vector<std::size_t> table(dom_.size());
  for (std::size_t i = 0; i < dom_.size(); ++i) {
    table[i] = g.table_[table_[i]];
  }
  return FinMap(dom_, g.cod(), std::move(table));
}

std::vector<std::string> FinMap::preimage(const std::string& y) const {
  std::size_t target = cod_.index_of(y);
  std::vector<std::string> result;
  for (std::size_t i = 0; i < dom_.size(); ++i) {
    if (table_[i] == target) result.push_back(dom_.at(i));
  }
  return result;
}

bool FinMap::is_bijective() const {
  if (dom_.size() != cod_.size()) return false;
  std::vector<bool> hit(cod_.size(), false);
  for (std::size_t v : table_) {
    if (hit[v]) return false;
    hit[v] = true;
  }
  return true;
}

FinMap FinMap::inverse() const {
  if (!is_bijective()) {
    throw Error(ErrorKind::not_bijective, "map is not a bijection");
  }
  std::vector<std::size_t> table(cod_.size());
  for (std::size_t i = 0; i < dom_.size(); ++i) table[table_[i]] = i;
  return FinMap(cod_, dom_, std::move(table));
}

bool FinMap::operator==(const FinMap& other) const {
  return dom_ == other.dom_ && cod_ == other.cod_ && table_ == other.table_;
}

TypedFinSet::TypedFinSet(FinSet base_in, std::vector<std::string> types_in)
    : base(std::move(base_in)), types(std::move(types_in)) {
  if (base.size() != types.size()) {
    throw Error(ErrorKind::internal, "type list size does not match set size");
  }
}

TypedFinSet TypedFinSet::uniform(FinSet base_in, const std::string& type) {
  std::vector<std::string> types(base_in.size(), type);
  return TypedFinSet(std::move(base_in), std::move(types));
}

const std::string& TypedFinSet::type_of(const std::string& name) const {
  return types.at(base.index_of(name));
}

bool preserves_types(const FinMap& f, const TypedFinSet& dom,
                     const TypedFinSet& cod) {
  if (f.dom() != dom.base || f.cod() != cod.base) return false;
  for (std::size_t i = 0; i < dom.size(); ++i) {
    if (dom.type_at(i) != cod.type_at(f.at_index(i))) return false;
  }
  return true;
}

Span::Span(FinMap left_in, FinMap right_in)
    : left(std::move(left_in)), right(std::move(right_in)) {
  if (left.dom() != right.dom()) {
    throw Error(ErrorKind::domain_mismatch,
                "span legs must share their apex: " + describe(left.dom()) +
                    " vs " + describe(right.dom()));
  }
}

Cospan::Cospan(FinMap left_in, FinMap right_in)
    : left(std::move(left_in)), right(std::move(right_in)) {
  if (left.cod() != right.cod()) {
    throw Error(ErrorKind::codomain_mismatch,
                "cospan legs must share their apex: " + describe(left.cod()) +
                    " vs " + describe(right.cod()));
  }
}

std::string pair_name(const std::string& s, const std::string& q) {
  return "(" + s + "," + q + ")";
}

PullbackResult pullback(const FinMap& p, const FinMap& i) {
  if (p.cod() != i.cod()) {
    throw Error(ErrorKind::codomain_mismatch,
                "pullback legs land in different sets: " + describe(p.cod()) +
                    " vs " + describe(i.cod()));
  }
  std::vector<std::string> names;
  std::vector<std::size_t> t1, t2;
  for (std::size_t si = 0; si < p.dom().size(); ++si) {
    for (std::size_t qi = 0; qi < i.dom().size(); ++qi) {
      if (p.at_index(si) == i.at_index(qi)) {
        names.push_back(pair_name(p.dom().at(si), i.dom().at(qi)));
        t1.push_back(si);
        t2.push_back(qi);
      }
    }
  }
  FinSet apex(std::move(names));
  FinMap proj1(apex, p.dom(), std::move(t1));
  FinMap proj2(apex, i.dom(), std::move(t2));
  return {std::move(apex), std::move(proj1), std::move(proj2)};
}

PushoutResult pushout(const FinMap& pi, const FinMap& a) {
  if (pi.dom() != a.dom()) {
    throw Error(ErrorKind::foot_mismatch,
                "pushout legs start from different sets: " +
                    describe(pi.dom()) + " vs " + describe(a.dom()));
  }
  const std::size_t na = pi.cod().size();
  const std::size_t nb = a.cod().size();
  UnionFind uf(na + nb);
  for (std::size_t m = 0; m < pi.dom().size(); ++m) {
    uf.unite(pi.at_index(m), na + a.at_index(m));
  }
  // Classes ordered by least member index; named by that member, with primes
  // appended if two distinct classes would otherwise collide.
  std::vector<std::size_t> class_of(na + nb);
  std::vector<std::size_t> roots;
  for (std::size_t v = 0; v < na + nb; ++v) {
    if (uf.find(v) == v) roots.push_back(v);
  }
  std::vector<std::string> names;
  std::set<std::string> used;
  std::vector<std::size_t> root_class(na + nb, 0);
  for (std::size_t c = 0; c < roots.size(); ++c) {
    std::size_t v = roots[c];
    root_class[v] = c;
    std::string name = v < na ? pi.cod().at(v) : a.cod().at(v - na);
    while (used.count(name)) name += "'";
    used.insert(name);
    names.push_back(std::move(name));
  }
  for (std::size_t v = 0; v < na + nb; ++v) class_of[v] = root_class[uf.find(v)];
  FinSet apex(std::move(names));
  std::vector<std::size_t> t1(class_of.begin(), class_of.begin() + na);
  std::vector<std::size_t> t2(class_of.begin() + na, class_of.end());
  FinMap inj1(pi.cod(), apex, std::move(t1));
  FinMap inj2(a.cod(), apex, std::move(t2));
  return {std::move(apex), std::move(inj1), std::move(inj2)};
}

Span compose_spans(const Span& s1, const Span& s2) {
  auto pb = pullback(s1.right, s2.left);
  return Span(pb.proj1.then(s1.left), pb.proj2.then(s2.right));
}

Cospan compose_cospans(const Cospan& c1, const Cospan& c2) {
  if (c1.right.dom() != c2.left.dom()) {
    throw Error(ErrorKind::foot_mismatch,
                "cospans do not share a middle boundary: " +
                    describe(c1.right.dom()) + " vs " + describe(c2.left.dom()));
  }
  auto po = pushout(c1.right, c2.left);
  return Cospan(c1.left.then(po.inj1), c2.right.then(po.inj2));
}

std::map<std::string, std::string> label_pull(
    const FinMap& f, const std::map<std::string, std::string>& sigma) {
  std::map<std::string, std::string> result;
  for (const auto& y : f.cod()) {
    if (!sigma.count(y)) {
      throw Error(ErrorKind::unbound_name,
                  "no label given for codomain element '" + y + "'");
    }
  }
  for (const auto& x : f.dom()) {
    result[x] = sigma.at(f(x));
  }
  return result;
}

FinMap match_by_keys(const FinSet& x, std::span<const FinMap> keys_x,
                     const FinSet& y, std::span<const FinMap> keys_y) {
  if (keys_x.size() != keys_y.size()) {
    throw Error(ErrorKind::internal, "key map lists differ in length");
  }
  for (std::size_t k = 0; k < keys_x.size(); ++k) {
    if (keys_x[k].dom() != x || keys_y[k].dom() != y) {
      throw Error(ErrorKind::domain_mismatch,
                  "key maps must start from the sets being matched");
    }
    if (keys_x[k].cod() != keys_y[k].cod()) {
      throw Error(ErrorKind::codomain_mismatch,
                  "key maps must land in the same sets on both sides");
    }
  }
  auto key_of = [&](std::span<const FinMap> maps, std::size_t i) {
    std::vector<std::size_t> key(maps.size());
    for (std::size_t k = 0; k < maps.size(); ++k) key[k] = maps[k].at_index(i);
    return key;
  };
  std::map<std::vector<std::size_t>, std::size_t> by_key;
  for (std::size_t j = 0; j < y.size(); ++j) {
    auto [it, inserted] = by_key.emplace(key_of(keys_y, j), j);
    if (!inserted) {
      throw Error(ErrorKind::not_bijective,
                  "key tuples do not separate elements of " + describe(y));
    }
  }
  if (x.size() != y.size()) {
    throw Error(ErrorKind::not_bijective,
                "no bijection between sets of sizes " +
                    std::to_string(x.size()) + " and " + std::to_string(y.size()));
  }
  std::vector<std::size_t> table(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    auto it = by_key.find(key_of(keys_x, i));
    if (it == by_key.end()) {
      throw Error(ErrorKind::not_bijective,
                  "element '" + x.at(i) + "' has no key-matching partner");
    }
    table[i] = it->second;
  }
  return FinMap(x, y, std::move(table));
}

}  // namespace rsm
