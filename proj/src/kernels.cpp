#include "rsm/kernels.hpp"

#include <algorithm>
#include <numeric>

#include "rsm/error.hpp"

namespace rsm {

namespace {

// Graded lexicographic order on dense exponent rows.
bool row_less(std::span<const unsigned> a, std::span<const unsigned> b) {
  unsigned da = std::accumulate(a.begin(), a.end(), 0u);
  unsigned db = std::accumulate(b.begin(), b.end(), 0u);
  if (da != db) return da < db;
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

CompiledField CompiledField::compile(const PolyMap& map) {
  CompiledField f;
  f.arity = map.dom.size();
  f.ncomp = map.cod.size();
  f.comp_begin.assign(f.ncomp + 1, 0);

  for (std::size_t c = 0; c < f.ncomp; ++c) {
    struct Row {
      double coef;
      std::vector<unsigned> expo;
    };
    std::vector<Row> rows;
    for (const Monomial& m : map.comps[c].monomials()) {
      Row r;
      r.coef = rational_to_double(m.coeff);
      r.expo.assign(f.arity, 0);
      for (const auto& [name, power] : m.powers) {
        auto k = map.dom.find(name);
        if (!k)
          throw Error(ErrorKind::unbound_name,
                      "component '" + map.cod.at(c) + "' mentions '" + name +
                          "' which is not in scope");
        r.expo[*k] = power;
      }
      rows.push_back(std::move(r));
    }
    // The storage order inside Polynomial sorts monomials by name, which is
    // sensitive to renaming. Sorting by exponent row instead keeps the
    // evaluation order stable under any scope-position-preserving renaming.
    std::sort(rows.begin(), rows.end(),
              [](const Row& a, const Row& b) { return row_less(a.expo, b.expo); });
    for (Row& r : rows) {
      f.coef.push_back(r.coef);
      f.expo.insert(f.expo.end(), r.expo.begin(), r.expo.end());
    }
    f.comp_begin[c + 1] = f.coef.size();
  }
  return f;
}

void CompiledField::eval(std::span<const double> point,
                         std::span<double> out) const {
  for (std::size_t c = 0; c < ncomp; ++c) {
    double acc = 0.0;
    for (std::size_t m = comp_begin[c]; m < comp_begin[c + 1]; ++m) {
      double term = coef[m];
      const unsigned* row = expo.data() + m * arity;
      for (std::size_t k = 0; k < arity; ++k)
        for (unsigned e = 0; e < row[k]; ++e) term *= point[k];
      acc += term;
    }
    out[c] = acc;
  }
}

void eval_batch_serial(const CompiledField& f, std::span<const double> points,
                       std::span<double> out) {
  std::size_t n = f.arity == 0 ? out.size() / std::max<std::size_t>(f.ncomp, 1)
                               : points.size() / f.arity;
  for (std::size_t i = 0; i < n; ++i)
    f.eval(points.subspan(i * f.arity, f.arity),
           out.subspan(i * f.ncomp, f.ncomp));
}

void eval_batch_parallel(const CompiledField& f, std::span<const double> points,
                         std::span<double> out) {
  std::size_t n = f.arity == 0 ? out.size() / std::max<std::size_t>(f.ncomp, 1)
                               : points.size() / f.arity;
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (std::size_t i = 0; i < n; ++i)
    f.eval(points.subspan(i * f.arity, f.arity),
           out.subspan(i * f.ncomp, f.ncomp));
}

std::vector<std::pair<std::size_t, std::size_t>> edge_list_serial(
    std::span<const std::vector<std::size_t>> rows) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t s = 0; s < rows.size(); ++s)
    for (std::size_t t : rows[s]) edges.emplace_back(s, t);
  return edges;
}

std::vector<std::pair<std::size_t, std::size_t>> edge_list_parallel(
    std::span<const std::vector<std::size_t>> rows) {
  std::vector<std::size_t> offset(rows.size() + 1, 0);
  for (std::size_t s = 0; s < rows.size(); ++s)
    offset[s + 1] = offset[s] + rows[s].size();
  std::vector<std::pair<std::size_t, std::size_t>> edges(offset.back());
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (std::size_t s = 0; s < rows.size(); ++s)
    for (std::size_t j = 0; j < rows[s].size(); ++j)
      edges[offset[s] + j] = {s, rows[s][j]};
  return edges;
}

}  // namespace rsm
