#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace msploc {

using Integer = mpz_class;
using Rational = mpq_class;

/// Parses "p", "-p" or "p/q" (surrounding whitespace allowed). The result is
/// canonicalized; a zero denominator or trailing garbage raises ParseError.
Rational parse_rational(std::string_view text);

/// "p/q" in lowest terms, or "p" when the denominator is one.
std::string to_string(const Rational& q);

/// p/q reduced to lowest terms. GMP arithmetic requires canonical operands,
/// so every quotient built from two integers goes through here.
inline Rational frac(const Integer& p, const Integer& q) {
  Rational r(p, q);
  r.canonicalize();
  return r;
}

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

/// floor and ceiling as exact integers.
Integer floor(const Rational& q);
Integer ceil(const Rational& q);

/// Converts to int64, throwing InvalidData when the value does not fit or is
/// not integral.
std::int64_t to_int64(const Rational& q);
std::int64_t to_int64(const Integer& z);

}  // namespace msploc
