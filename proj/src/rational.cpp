#include "msploc/rational.hpp"

#include "msploc/error.hpp"

#include <cctype>

namespace msploc {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::DenominatorVanishes: return "DenominatorVanishes";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvalidWeights: return "InvalidWeights";
    case ErrorCode::InvalidMarking: return "InvalidMarking";
    case ErrorCode::InvalidData: return "InvalidData";
    case ErrorCode::InvalidGraph: return "InvalidGraph";
    case ErrorCode::WrongEdgeType: return "WrongEdgeType";
    case ErrorCode::NotAValenceTwoVertex: return "NotAValenceTwoVertex";
    case ErrorCode::NotFlat: return "NotFlat";
    case ErrorCode::NotRegular: return "NotRegular";
    case ErrorCode::UnsupportedEdgeType: return "UnsupportedEdgeType";
    case ErrorCode::BroadInfinityNode: return "BroadInfinityNode";
    case ErrorCode::CapExceeded: return "CapExceeded";
    case ErrorCode::CapTooLarge: return "CapTooLarge";
    case ErrorCode::MissingCorrelator: return "MissingCorrelator";
    case ErrorCode::DuplicateClass: return "DuplicateClass";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::FileMalformed: return "FileMalformed";
  }
  return "Unknown";
}

namespace {

bool parse_integer(std::string_view s, Integer& out) {
  if (s.empty()) return false;
  std::size_t i = 0;
  if (s[0] == '-' || s[0] == '+') i = 1;
  if (i == s.size()) return false;
  for (std::size_t j = i; j < s.size(); ++j)
    if (!std::isdigit(static_cast<unsigned char>(s[j]))) return false;
  std::string buf(s[0] == '+' ? s.substr(1) : s);
  return out.set_str(buf, 10) == 0;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  auto s = trim(text);
  auto slash = s.find('/');
  Integer num, den = 1;
  bool ok = slash == std::string_view::npos
                ? parse_integer(s, num)
                : parse_integer(trim(s.substr(0, slash)), num) &&
                      parse_integer(trim(s.substr(slash + 1)), den);
  if (!ok) throw Error(ErrorCode::ParseError, "not a rational: '" + std::string(text) + "'");
  if (den == 0) throw Error(ErrorCode::ParseError, "zero denominator: '" + std::string(text) + "'");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(10); }

Integer floor(const Rational& q) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

Integer ceil(const Rational& q) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

std::int64_t to_int64(const Integer& z) {
  if (!z.fits_slong_p()) throw Error(ErrorCode::InvalidData, "integer out of range: " + z.get_str());
  return z.get_si();
}

std::int64_t to_int64(const Rational& q) {
  if (!is_integer(q)) throw Error(ErrorCode::InvalidData, "expected an integer, got " + to_string(q));
  return to_int64(q.get_num());
}

}  // namespace msploc
