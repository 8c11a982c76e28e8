#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "rsm/expr.hpp"

namespace rsm {

// A polynomial map flattened for repeated numeric evaluation. Each component
// stores its monomials as dense exponent rows over the domain scope, ordered
// by total degree and then lexicographically by exponent vector. Evaluation
// multiplies factors in scope order and skips zero exponents, so two fields
// whose scopes list the same polynomials in the same relative positions
// produce bit-identical results.
struct CompiledField {
  std::size_t arity = 0;  // scope size, one slot per domain name
  std::size_t ncomp = 0;
  std::vector<double> coef;             // one per monomial
  std::vector<unsigned> expo;           // arity entries per monomial
  std::vector<std::size_t> comp_begin;  // ncomp+1 monomial offsets

  // Flattens a map whose components mention only domain names. Throws
  // unbound_name otherwise.
  static CompiledField compile(const PolyMap& map);

  // Evaluates one point given in scope order.
  void eval(std::span<const double> point, std::span<double> out) const;
};

// Batch twins. points is row-major npoints x arity, out npoints x ncomp.
// The parallel kernel splits rows across threads; each row runs the same
// instruction sequence as the serial kernel, so results match bit for bit.
void eval_batch_serial(const CompiledField& f, std::span<const double> points,
                       std::span<double> out);
void eval_batch_parallel(const CompiledField& f, std::span<const double> points,
                         std::span<double> out);

// Batch twins for flattening per-state successor lists into (src, dst) edge
// pairs, in row order. Offsets come from a prefix sum, so the parallel kernel
// writes disjoint slots and the output order is identical to the serial one.
std::vector<std::pair<std::size_t, std::size_t>> edge_list_serial(
    std::span<const std::vector<std::size_t>> rows);
std::vector<std::pair<std::size_t, std::size_t>> edge_list_parallel(
    std::span<const std::vector<std::size_t>> rows);

}  // namespace rsm
