#include "msploc/ratfunc.hpp"

#include "msploc/error.hpp"

#include <algorithm>
#include <cctype>

namespace msploc {

RatFunc::RatFunc(Polynomial num, Polynomial den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw Error(ErrorCode::DivisionByZero, "zero denominator");
  canonicalize();
}

void RatFunc::canonicalize() {
  if (num_.is_zero()) {
    den_ = Polynomial(1);
    return;
  }
  if (!den_.is_constant()) {
    Monomial g = Monomial::gcd(num_.monomial_content(), den_.monomial_content());
    if (!g.is_one()) {
      num_ = num_.divide_monomial(g);
      den_ = den_.divide_monomial(g);
    }
    if (auto c = den_.scalar_ratio_to(num_)) {
      num_ = Polynomial(*c);
      den_ = Polynomial(1);
      return;
    }
  }
  Rational lc = den_.leading_term().coeff;
  if (lc != 1) {
    Rational inv = 1 / lc;
    num_ *= inv;
    den_ *= inv;
  }
}

Rational RatFunc::constant_value() const {
  if (!is_constant()) throw Error(ErrorCode::InvalidData, "rational function is not constant");
  return num_.constant_value();
}

RatFunc RatFunc::operator-() const {
  RatFunc r = *this;
  r.num_ = -r.num_;
  return r;
}

RatFunc RatFunc::inverse() const {
  if (is_zero()) throw Error(ErrorCode::DivisionByZero, "inverse of zero");
  return RatFunc(den_, num_);
}

RatFunc& RatFunc::operator+=(const RatFunc& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = o;
  if (den_ == o.den_) {
    *this = RatFunc(num_ + o.num_, den_);
  } else {
    *this = RatFunc(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
  }
  return *this;
}

RatFunc& RatFunc::operator-=(const RatFunc& o) { return *this += -o; }

RatFunc& RatFunc::operator*=(const RatFunc& o) {
  if (is_zero() || o.is_zero()) return *this = RatFunc();
  // Cross-cancel exact scalar multiples before multiplying out.
  Polynomial n1 = num_, d1 = den_, n2 = o.num_, d2 = o.den_;
  Rational scale = 1;
  if (!d2.is_constant())
    if (auto c = d2.scalar_ratio_to(n1)) {
      scale *= *c;
      n1 = Polynomial(1);
      d2 = Polynomial(1);
    }
  if (!d1.is_constant())
    if (auto c = d1.scalar_ratio_to(n2)) {
      scale *= *c;
      n2 = Polynomial(1);
      d1 = Polynomial(1);
    }
  *this = RatFunc(n1 * n2 * scale, d1 * d2);
  return *this;
}

RatFunc& RatFunc::operator/=(const RatFunc& o) { return *this *= o.inverse(); }

RatFunc RatFunc::pow(int e) const {
  if (e < 0) return inverse().pow(-e);
  return RatFunc(num_.pow(static_cast<unsigned>(e)), den_.pow(static_cast<unsigned>(e)));
}

bool operator==(const RatFunc& a, const RatFunc& b) {
  if (a.num_ == b.num_ && a.den_ == b.den_) return true;
  if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
  auto cn = a.num_.scalar_ratio_to(b.num_);
  auto cd = a.den_.scalar_ratio_to(b.den_);
  if (cn && cd) return *cn == *cd;
  return a.num_ * b.den_ == b.num_ * a.den_;
}

std::vector<Variable> RatFunc::variables() const {
  auto v = num_.variables();
  auto w = den_.variables();
  v.insert(v.end(), w.begin(), w.end());
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::string RatFunc::to_string() const {
  if (den_.is_constant()) return num_.to_string();
  return "(" + num_.to_string() + ")/(" + den_.to_string() + ")";
}

RatFunc rat_arith(const RatFunc& lhs, const RatFunc& rhs, ArithOp op) {
  switch (op) {
    case ArithOp::Add: return lhs + rhs;
    case ArithOp::Sub: return lhs - rhs;
    case ArithOp::Mul: return lhs * rhs;
    case ArithOp::Div:
      if (rhs.is_zero()) throw Error(ErrorCode::DivisionByZero, "division by zero");
      return lhs / rhs;
    case ArithOp::Neg: return -lhs;
    case ArithOp::Inv: return lhs.inverse();
  }
  throw Error(ErrorCode::InvalidData, "unknown arithmetic op");
}

namespace {

// Substitutes into a polynomial, returning numerator and denominator
// separately so that the caller can detect a vanishing denominator.
std::pair<Polynomial, Polynomial> substitute_parts(const Polynomial& p, const Bindings& b) {
  // Common denominator: product over bound variables of den^max_exponent.
  std::map<Variable, int> max_exp;
  for (const auto& t : p.terms())
    for (const auto& [v, e] : t.monomial.factors())
      if (auto it = b.find(v); it != b.end() && !it->second.is_polynomial())
        max_exp[v] = std::max(max_exp[v], e);

  std::map<std::pair<Variable, int>, Polynomial> num_pow_cache, den_pow_cache;
  auto num_pow = [&](const Variable& v, int e) -> const Polynomial& {
    auto key = std::make_pair(v, e);
    auto it = num_pow_cache.find(key);
    if (it == num_pow_cache.end())
      it = num_pow_cache.emplace(key, b.at(v).numerator().pow(static_cast<unsigned>(e))).first;
    return it->second;
  };
  auto den_pow = [&](const Variable& v, int e) -> const Polynomial& {
    auto key = std::make_pair(v, e);
    auto it = den_pow_cache.find(key);
    if (it == den_pow_cache.end())
      it = den_pow_cache.emplace(key, b.at(v).denominator().pow(static_cast<unsigned>(e))).first;
    return it->second;
  };

  Polynomial total;
  for (const auto& t : p.terms()) {
    std::vector<Monomial::Factor> kept;
    Polynomial term(t.coeff);
    for (const auto& [v, e] : t.monomial.factors()) {
      auto it = b.find(v);
      if (it == b.end()) {
        kept.emplace_back(v, e);
        continue;
      }
      term *= num_pow(v, e);
      if (auto m = max_exp.find(v); m != max_exp.end() && m->second > e)
        term *= den_pow(v, m->second - e);
    }
    for (const auto& [v, m] : max_exp)
      if (t.monomial.exponent(v) == 0) term *= den_pow(v, m);
    term *= Polynomial::monomial(Monomial::from_factors(std::move(kept)));
    total += term;
  }
  Polynomial den(1);
  for (const auto& [v, m] : max_exp) den *= den_pow(v, m);
  return {std::move(total), std::move(den)};
}

}  // namespace

RatFunc substitute(const Polynomial& p, const Bindings& bindings) {
  auto [n, d] = substitute_parts(p, bindings);
  return RatFunc(std::move(n), std::move(d));
}

RatFunc substitute(const RatFunc& f, const Bindings& bindings) {
  auto [dn, dd] = substitute_parts(f.denominator(), bindings);
  if (dn.is_zero()) throw Error(ErrorCode::DenominatorVanishes, "denominator vanishes under substitution");
  auto [nn, nd] = substitute_parts(f.numerator(), bindings);
  return RatFunc(nn * dd, nd * dn);
}

std::optional<std::int64_t> homogeneous_degree(const RatFunc& f, const Grading& grading) {
  auto dn = f.numerator().homogeneous_degree(grading);
  auto dd = f.denominator().homogeneous_degree(grading);
  if (!dn || !dd) return std::nullopt;
  return *dn - *dd;
}

Polynomial hodge_euler(int genus, const Polynomial& c, bool dual, int vertex) {
  if (genus < 0) throw Error(ErrorCode::InvalidData, "negative genus");
  Polynomial out;
  for (int i = 0; i <= genus; ++i) {
    Polynomial term = c.pow(static_cast<unsigned>(genus - i));
    if (i > 0) term *= Polynomial::variable(Variable::lambda(vertex, i));
    if (dual && (i % 2 == 1)) term = -term;
    out += term;
  }
  return out;
}

// ------------------------------------------------------------------ parser

namespace {

class Parser {
public:
  explicit Parser(std::string_view s) : s_(s) {}

  RatFunc parse() {
    RatFunc r = expr();
    skip_ws();
    if (pos_ != s_.size()) fail("trailing input");
    return r;
  }

private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::ParseError, what + " at offset " + std::to_string(pos_) + " in '" +
                                           std::string(s_) + "'");
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  RatFunc expr() {
    RatFunc r = term();
    for (;;) {
      if (accept('+')) r += term();
      else if (accept('-')) r -= term();
      else return r;
    }
  }

  RatFunc term() {
    RatFunc r = unary();
    for (;;) {
      if (accept('*')) {
        r *= unary();
      } else if (accept('/')) {
        RatFunc d = unary();
        if (d.is_zero()) throw Error(ErrorCode::ParseError, "division by zero in expression");
        r /= d;
      } else {
        return r;
      }
    }
  }

  RatFunc unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  RatFunc power() {
    RatFunc base = atom();
    if (accept('^')) {
      bool neg = accept('-');
      long e = integer();
      if (e > 100000) fail("exponent too large");
      if (neg && base.is_zero()) throw Error(ErrorCode::ParseError, "zero to a negative power");
      return base.pow(static_cast<int>(neg ? -e : e));
    }
    return base;
  }

  long integer() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer");
    if (pos_ - start > 9) fail("integer too long here");
    return std::stol(std::string(s_.substr(start, pos_ - start)));
  }

  int signed_int() {
    bool neg = accept('-');
    long v = integer();
    return static_cast<int>(neg ? -v : v);
  }

  std::string ident() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
      ++pos_;
    return std::string(s_.substr(start, pos_ - start));
  }

  RatFunc atom() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      RatFunc r = expr();
      expect(')');
      return r;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      Integer z(std::string(s_.substr(start, pos_ - start)), 10);
      return RatFunc(Rational(z));
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t at = pos_;
      std::string name = ident();
      expect('[');
      Variable v = Variable::equiv(1);
      try {
        if (name == "t") {
          v = Variable::equiv(signed_int());
        } else if (name == "h") {
          v = Variable::hyperplane(signed_int());
        } else if (name == "psi" || name == "lam") {
          int a = signed_int();
          expect(',');
          int b = signed_int();
          v = name == "psi" ? Variable::psi(a, b) : Variable::lambda(a, b);
        } else if (name == "tok") {
          v = Variable::token(ident());
        } else {
          pos_ = at;
          fail("unknown variable '" + name + "'");
        }
      } catch (const Error& e) {
        if (e.code() == ErrorCode::ParseError) throw;
        fail(e.what());
      }
      expect(']');
      return RatFunc::variable(v);
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

RatFunc parse_ratfunc(std::string_view text) { return Parser(text).parse(); }

}  // namespace msploc
