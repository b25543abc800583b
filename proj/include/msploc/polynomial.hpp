#pragma once

#include "msploc/rational.hpp"
#include "msploc/variable.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace msploc {

/// Assigns an integer degree to every variable.
using Grading = std::function<std::int64_t(const Variable&)>;

/// t, h, psi have degree 1; lambda_i has degree i; correlator tokens degree 0.
Grading standard_grading();

/// A product of variables with positive exponents, stored sorted by Variable.
class Monomial {
public:
  using Factor = std::pair<Variable, int>;

  Monomial() = default;
  explicit Monomial(const Variable& v, int exponent = 1);
  /// Factors may be unsorted and repeated; zero exponents are dropped.
  static Monomial from_factors(std::vector<Factor> factors);

  const std::vector<Factor>& factors() const noexcept { return factors_; }
  bool is_one() const noexcept { return factors_.empty(); }
  int degree() const noexcept;
  std::int64_t degree(const Grading& grading) const;
  int exponent(const Variable& v) const noexcept;

  Monomial operator*(const Monomial& other) const;
  bool divides(const Monomial& other) const noexcept;
  /// Requires divides(other) to hold.
  Monomial quotient(const Monomial& divisor) const;
  static Monomial gcd(const Monomial& a, const Monomial& b);

  std::string to_string() const;

  friend bool operator==(const Monomial&, const Monomial&) = default;

private:
  std::vector<Factor> factors_;
};

/// Graded lexicographic order: higher total degree first, ties broken by
/// comparing exponents variable by variable in increasing Variable order.
/// Returns true when a precedes b in the canonical (descending) listing.
bool grlex_greater(const Monomial& a, const Monomial& b);

struct Term {
  Monomial monomial;
  Rational coeff;
};

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Terms are kept in descending grlex order with no zero coefficients, so the
/// representation of every value is unique and equality is structural.
class Polynomial {
public:
  Polynomial() = default;
  Polynomial(const Rational& c);  // NOLINT(google-explicit-constructor)
  Polynomial(long c) : Polynomial(Rational(c)) {}  // NOLINT
  static Polynomial variable(const Variable& v);
  static Polynomial monomial(const Monomial& m, const Rational& c = 1);
  /// Arbitrary term list; like monomials are merged and zeros dropped.
  static Polynomial from_terms(std::vector<Term> terms);

  const std::vector<Term>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_constant() const noexcept;
  /// Constant value; requires is_constant().
  Rational constant_value() const;
  const Term& leading_term() const;

  int total_degree() const;
  /// Degree under the grading when every term has the same degree.
  std::optional<std::int64_t> homogeneous_degree(const Grading& grading) const;
  /// True when no variable outside the predicate occurs.
  bool only_uses(const std::function<bool(const Variable&)>& pred) const;
  std::vector<Variable> variables() const;

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(const Polynomial& o);
  Polynomial& operator*=(const Rational& c);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
  friend Polynomial operator*(const Rational& c, Polynomial a) { return a *= c; }
  Polynomial pow(unsigned e) const;

  /// Greatest monomial dividing every term (one for the zero polynomial).
  Monomial monomial_content() const;
  /// Exact division by a monomial that divides every term.
  Polynomial divide_monomial(const Monomial& m) const;
  /// If other == c * this for a nonzero rational c, returns c.
  std::optional<Rational> scalar_ratio_to(const Polynomial& other) const;

  /// Keeps only the terms for which keep(monomial) is true.
  Polynomial filter(const std::function<bool(const Monomial&)>& keep) const;

  /// Sorted-monomial rendering with explicit '*' and '^', e.g. "3/2*t[1]^2 - h[0] + 1".
  std::string to_string() const;

  friend bool operator==(const Polynomial& a, const Polynomial& b);

private:
  std::vector<Term> terms_;
};

}  // namespace msploc
