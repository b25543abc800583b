#pragma once

#include "msploc/polynomial.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace msploc {

/// Exact multivariate rational function num/den.
///
/// Canonical shape: the denominator is nonzero with leading coefficient 1, a
/// common monomial factor of num and den is cancelled, and a denominator that
/// is a scalar multiple of the numerator collapses to that scalar. No general
/// polynomial GCD is taken, so two equal values may be stored differently;
/// equality therefore cross-multiplies.
class RatFunc {
public:
  RatFunc() : den_(1) {}
  RatFunc(const Polynomial& p) : num_(p), den_(1) {}  // NOLINT(google-explicit-constructor)
  RatFunc(const Rational& c) : num_(c), den_(1) {}    // NOLINT
  RatFunc(long c) : num_(c), den_(1) {}               // NOLINT
  /// Throws DivisionByZero when den is zero.
  RatFunc(Polynomial num, Polynomial den);

  static RatFunc variable(const Variable& v) { return RatFunc(Polynomial::variable(v)); }

  const Polynomial& numerator() const noexcept { return num_; }
  const Polynomial& denominator() const noexcept { return den_; }
  bool is_zero() const noexcept { return num_.is_zero(); }
  bool is_polynomial() const noexcept { return den_.is_constant(); }
  bool is_constant() const noexcept { return num_.is_constant() && den_.is_constant(); }
  /// Requires is_constant().
  Rational constant_value() const;

  RatFunc operator-() const;
  /// Throws DivisionByZero on zero.
  RatFunc inverse() const;
  RatFunc& operator+=(const RatFunc& o);
  RatFunc& operator-=(const RatFunc& o);
  RatFunc& operator*=(const RatFunc& o);
  RatFunc& operator/=(const RatFunc& o);
  friend RatFunc operator+(RatFunc a, const RatFunc& b) { return a += b; }
  friend RatFunc operator-(RatFunc a, const RatFunc& b) { return a -= b; }
  friend RatFunc operator*(RatFunc a, const RatFunc& b) { return a *= b; }
  friend RatFunc operator/(RatFunc a, const RatFunc& b) { return a /= b; }
  RatFunc pow(int e) const;

  friend bool operator==(const RatFunc& a, const RatFunc& b);

  bool only_uses(const std::function<bool(const Variable&)>& pred) const {
    return num_.only_uses(pred) && den_.only_uses(pred);
  }
  std::vector<Variable> variables() const;

  /// "num" for polynomials, otherwise "(num)/(den)".
  std::string to_string() const;

private:
  void canonicalize();

  Polynomial num_;
  Polynomial den_;
};

enum class ArithOp { Add, Sub, Mul, Div, Neg, Inv };

/// Unary ops (Neg, Inv) act on lhs and ignore rhs.
RatFunc rat_arith(const RatFunc& lhs, const RatFunc& rhs, ArithOp op);

using Bindings = std::map<Variable, RatFunc>;

/// Substitutes bound variables; unbound ones pass through. Throws
/// DenominatorVanishes when the substituted denominator is identically zero.
RatFunc substitute(const RatFunc& f, const Bindings& bindings);
RatFunc substitute(const Polynomial& p, const Bindings& bindings);

/// deg(num) - deg(den) when both parts are homogeneous, else nullopt. The
/// zero function has no degree.
std::optional<std::int64_t> homogeneous_degree(const RatFunc& f, const Grading& grading);

/// Sum over i = 0..g of s_i * lam[vertex,i] * c^(g-i), lam_0 = 1, with
/// s_i = (-1)^i when dual and +1 otherwise.
Polynomial hodge_euler(int genus, const Polynomial& c, bool dual, int vertex);

/// Parses the rendering produced by to_string (and ordinary infix with
/// + - * / ^, parentheses and integer literals). Throws ParseError.
RatFunc parse_ratfunc(std::string_view text);

}  // namespace msploc
