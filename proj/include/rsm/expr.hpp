#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "rsm/finset.hpp"

namespace rsm {

/// Exact arbitrary-precision rational, kept normalized by the backend.
using Rational = boost::multiprecision::cpp_rational;

std::string rational_str(const Rational& r);
double rational_to_double(const Rational& r);

struct Monomial {
  Rational coeff;
  std::map<std::string, unsigned> powers;  // name -> exponent, no zeros stored

  unsigned degree() const;
  bool operator==(const Monomial& other) const {
    return coeff == other.coeff && powers == other.powers;
  }
};

/// Multivariate polynomial with exact rational coefficients, kept in canonical
/// form: monomials with distinct power maps, zero coefficients dropped, sorted
/// graded-lexicographically (total degree ascending, ties by the power map).
/// Structural equality is therefore semantic equality.
class Polynomial {
 public:
  Polynomial() = default;  // zero
  static Polynomial constant(const Rational& c);
  static Polynomial variable(const std::string& name);
  static Polynomial monomial(const Rational& coeff,
                             const std::map<std::string, unsigned>& powers);
  static Polynomial sum_of(std::vector<Monomial> terms);

  bool is_zero() const { return terms_.empty(); }
  const std::vector<Monomial>& monomials() const { return terms_; }
  std::set<std::string> names() const;

  Polynomial operator+(const Polynomial& other) const;
  Polynomial operator-() const;
  Polynomial operator-(const Polynomial& other) const;
  Polynomial operator*(const Polynomial& other) const;
  Polynomial pow(unsigned k) const;

  /// Simultaneous substitution; names not in the table stay themselves.
  Polynomial substitute(const std::map<std::string, Polynomial>& table) const;
  Polynomial rename(const std::map<std::string, std::string>& table) const;

  /// Float evaluation: monomials in canonical order, factors by repeated
  /// multiplication, so the result is reproducible bit for bit.
  double evaluate(const std::map<std::string, double>& point) const;
  Rational evaluate_exact(const std::map<std::string, Rational>& point) const;

  bool operator==(const Polynomial& other) const { return terms_ == other.terms_; }
  bool operator!=(const Polynomial& other) const { return !(*this == other); }

  /// Canonical printing: positive monomials before negative ones (each group
  /// in storage order); within a monomial, factors follow `factor_order`
  /// first (parameters, then declared variables), remaining names sorted.
  std::string str(const std::vector<std::string>& factor_order = {}) const;

 private:
  std::vector<Monomial> terms_;
};

/// Grammar: identifiers, integer/decimal/rational literals, + - * ^ and
/// parentheses. Identifiers start with a letter or '_' and may continue with
/// letters, digits, '_', '.', '\''. Throws Error(parse) with a position.
Polynomial parse_polynomial(const std::string& text);

bool is_identifier(const std::string& name);

/// Named tuple of polynomials: one component per codomain element.
struct PolyMap {
  FinSet dom;  // names the components may mention
  FinSet cod;
  std::vector<Polynomial> comps;  // aligned with cod order

  PolyMap() = default;
  PolyMap(FinSet dom_in, FinSet cod_in, std::vector<Polynomial> comps_in);

  const Polynomial& at(const std::string& name) const;
  /// Component names outside dom, as (component, offending name) pairs.
  std::vector<std::pair<std::string, std::string>> undeclared_names() const;

  bool operator==(const PolyMap& other) const {
    return dom == other.dom && cod == other.cod && comps == other.comps;
  }
};

}  // namespace rsm
