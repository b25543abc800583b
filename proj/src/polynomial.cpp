#include "msploc/polynomial.hpp"

#include "msploc/error.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace msploc {

// ---------------------------------------------------------------- Variable

Variable Variable::equiv(int alpha) { return Variable(Kind::EquivParam, alpha, 0, {}); }
Variable Variable::hyperplane(int edge) { return Variable(Kind::Hyperplane, edge, 0, {}); }
Variable Variable::psi(int edge, int vertex) { return Variable(Kind::Psi, edge, vertex, {}); }
Variable Variable::lambda(int vertex, int index) {
  if (index < 1) throw Error(ErrorCode::InvalidData, "lambda index must be >= 1");
  return Variable(Kind::Lambda, vertex, index, {});
}
Variable Variable::token(std::string name) {
  if (name.empty()) throw Error(ErrorCode::InvalidData, "empty token name");
  for (char c : name)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_'))
      throw Error(ErrorCode::InvalidData, "bad token name '" + name + "'");
  return Variable(Kind::CorrelatorToken, 0, 0, std::move(name));
}

std::string Variable::to_string() const {
  switch (kind_) {
    case Kind::EquivParam: return "t[" + std::to_string(first_) + "]";
    case Kind::Hyperplane: return "h[" + std::to_string(first_) + "]";
    case Kind::Psi: return "psi[" + std::to_string(first_) + "," + std::to_string(second_) + "]";
    case Kind::Lambda: return "lam[" + std::to_string(first_) + "," + std::to_string(second_) + "]";
    case Kind::CorrelatorToken: return "tok[" + name_ + "]";
  }
  return "?";
}

Grading standard_grading() {
  return [](const Variable& v) -> std::int64_t {
    switch (v.kind()) {
      case Variable::Kind::Lambda: return v.second();
      case Variable::Kind::CorrelatorToken: return 0;
      default: return 1;
    }
  };
}

// ---------------------------------------------------------------- Monomial

Monomial::Monomial(const Variable& v, int exponent) {
  if (exponent < 0) throw Error(ErrorCode::InvalidData, "negative exponent");
  if (exponent > 0) factors_.emplace_back(v, exponent);
}

Monomial Monomial::from_factors(std::vector<Factor> factors) {
  std::sort(factors.begin(), factors.end(),
            [](const Factor& a, const Factor& b) { return a.first < b.first; });
  Monomial m;
  for (auto& f : factors) {
    if (f.second < 0) throw Error(ErrorCode::InvalidData, "negative exponent");
    if (f.second == 0) continue;
    if (!m.factors_.empty() && m.factors_.back().first == f.first)
      m.factors_.back().second += f.second;
    else
      m.factors_.push_back(std::move(f));
  }
  return m;
}

int Monomial::degree() const noexcept {
  int d = 0;
  for (const auto& f : factors_) d += f.second;
  return d;
}

std::int64_t Monomial::degree(const Grading& grading) const {
  std::int64_t d = 0;
  for (const auto& f : factors_) d += grading(f.first) * f.second;
  return d;
}

int Monomial::exponent(const Variable& v) const noexcept {
  for (const auto& f : factors_)
    if (f.first == v) return f.second;
  return 0;
}

Monomial Monomial::operator*(const Monomial& other) const {
  Monomial r;
  r.factors_.reserve(factors_.size() + other.factors_.size());
  auto a = factors_.begin(), b = other.factors_.begin();
  while (a != factors_.end() && b != other.factors_.end()) {
    if (a->first < b->first) r.factors_.push_back(*a++);
    else if (b->first < a->first) r.factors_.push_back(*b++);
    else {
      r.factors_.emplace_back(a->first, a->second + b->second);
      ++a;
      ++b;
    }
  }
  r.factors_.insert(r.factors_.end(), a, factors_.end());
  r.factors_.insert(r.factors_.end(), b, other.factors_.end());
  return r;
}

bool Monomial::divides(const Monomial& other) const noexcept {
  for (const auto& f : factors_)
    if (other.exponent(f.first) < f.second) return false;
  return true;
}

Monomial Monomial::quotient(const Monomial& divisor) const {
  std::vector<Factor> out;
  for (const auto& f : factors_) {
    int e = f.second - divisor.exponent(f.first);
    if (e < 0) throw Error(ErrorCode::InvalidData, "monomial does not divide");
    if (e > 0) out.emplace_back(f.first, e);
  }
  Monomial m;
  m.factors_ = std::move(out);
  return m;
}

Monomial Monomial::gcd(const Monomial& a, const Monomial& b) {
  Monomial m;
  for (const auto& f : a.factors_) {
    int e = std::min(f.second, b.exponent(f.first));
    if (e > 0) m.factors_.emplace_back(f.first, e);
  }
  return m;
}

std::string Monomial::to_string() const {
  std::string s;
  for (const auto& [v, e] : factors_) {
    if (!s.empty()) s += '*';
    s += v.to_string();
    if (e != 1) s += '^' + std::to_string(e);
  }
  return s.empty() ? "1" : s;
}

bool grlex_greater(const Monomial& a, const Monomial& b) {
  int da = a.degree(), db = b.degree();
  if (da != db) return da > db;
  const auto& fa = a.factors();
  const auto& fb = b.factors();
  std::size_t i = 0;
  for (; i < fa.size() && i < fb.size(); ++i) {
    if (fa[i].first != fb[i].first) return fa[i].first < fb[i].first;
    if (fa[i].second != fb[i].second) return fa[i].second > fb[i].second;
  }
  return i < fa.size() && i == fb.size();
}

// -------------------------------------------------------------- Polynomial

Polynomial::Polynomial(const Rational& c) {
  if (c != 0) {
    terms_.push_back({Monomial{}, c});
    terms_.back().coeff.canonicalize();
  }
}

Polynomial Polynomial::variable(const Variable& v) { return monomial(Monomial(v), 1); }

Polynomial Polynomial::monomial(const Monomial& m, const Rational& c) {
  Polynomial p;
  if (c != 0) {
    p.terms_.push_back({m, c});
    p.terms_.back().coeff.canonicalize();
  }
  return p;
}

Polynomial Polynomial::from_terms(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return grlex_greater(a.monomial, b.monomial); });
  Polynomial p;
  p.terms_.reserve(terms.size());
  for (auto& t : terms) {
    t.coeff.canonicalize();
    if (!p.terms_.empty() && p.terms_.back().monomial == t.monomial) {
      p.terms_.back().coeff += t.coeff;
    } else {
      if (!p.terms_.empty() && p.terms_.back().coeff == 0) p.terms_.pop_back();
      p.terms_.push_back(std::move(t));
    }
  }
  if (!p.terms_.empty() && p.terms_.back().coeff == 0) p.terms_.pop_back();
  return p;
}

bool Polynomial::is_constant() const noexcept {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].monomial.is_one());
}

Rational Polynomial::constant_value() const {
  if (!is_constant()) throw Error(ErrorCode::InvalidData, "polynomial is not constant");
  return terms_.empty() ? Rational(0) : terms_[0].coeff;
}

const Term& Polynomial::leading_term() const {
  if (terms_.empty()) throw Error(ErrorCode::InvalidData, "zero polynomial has no leading term");
  return terms_.front();
}

int Polynomial::total_degree() const { return terms_.empty() ? 0 : terms_.front().monomial.degree(); }

std::optional<std::int64_t> Polynomial::homogeneous_degree(const Grading& grading) const {
  if (terms_.empty()) return std::nullopt;
  std::int64_t d = terms_.front().monomial.degree(grading);
  for (const auto& t : terms_)
    if (t.monomial.degree(grading) != d) return std::nullopt;
  return d;
}

bool Polynomial::only_uses(const std::function<bool(const Variable&)>& pred) const {
  for (const auto& t : terms_)
    for (const auto& f : t.monomial.factors())
      if (!pred(f.first)) return false;
  return true;
}

std::vector<Variable> Polynomial::variables() const {
  std::vector<Variable> vs;
  for (const auto& t : terms_)
    for (const auto& f : t.monomial.factors()) vs.push_back(f.first);
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  return vs;
}

Polynomial Polynomial::operator-() const {
  Polynomial r = *this;
  for (auto& t : r.terms_) t.coeff = -t.coeff;
  return r;
}

namespace {

// Merge two descending term lists; sign = +1 or -1 applied to b.
std::vector<Term> merge_terms(const std::vector<Term>& a, const std::vector<Term>& b, int sign) {
  std::vector<Term> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].monomial == b[j].monomial) {
      Rational c = sign > 0 ? Rational(a[i].coeff + b[j].coeff) : Rational(a[i].coeff - b[j].coeff);
      if (c != 0) out.push_back({a[i].monomial, std::move(c)});
      ++i;
      ++j;
    } else if (grlex_greater(a[i].monomial, b[j].monomial)) {
      out.push_back(a[i++]);
    } else {
      out.push_back(b[j++]);
      if (sign < 0) out.back().coeff = -out.back().coeff;
    }
  }
  for (; i < a.size(); ++i) out.push_back(a[i]);
  for (; j < b.size(); ++j) {
    out.push_back(b[j]);
    if (sign < 0) out.back().coeff = -out.back().coeff;
  }
  return out;
}

}  // namespace

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  terms_ = merge_terms(terms_, o.terms_, +1);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  terms_ = merge_terms(terms_, o.terms_, -1);
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  if (a.terms_.size() == 1 && a.terms_[0].monomial.is_one()) return b * a.terms_[0].coeff;
  if (b.terms_.size() == 1 && b.terms_[0].monomial.is_one()) return a * b.terms_[0].coeff;
  std::vector<Term> prod;
  prod.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& x : a.terms_)
    for (const auto& y : b.terms_) prod.push_back({x.monomial * y.monomial, x.coeff * y.coeff});
  return Polynomial::from_terms(std::move(prod));
}

Polynomial& Polynomial::operator*=(const Polynomial& o) {
  *this = *this * o;
  return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.coeff *= c;
  return *this;
}

Polynomial Polynomial::pow(unsigned e) const {
  Polynomial result(1), base = *this;
  while (e) {
    if (e & 1u) result *= base;
    e >>= 1u;
    if (e) base = base * base;
  }
  return result;
}

Monomial Polynomial::monomial_content() const {
  if (terms_.empty()) return {};
  Monomial g = terms_.front().monomial;
  for (const auto& t : terms_) {
    if (g.is_one()) break;
    g = Monomial::gcd(g, t.monomial);
  }
  return g;
}

Polynomial Polynomial::divide_monomial(const Monomial& m) const {
  if (m.is_one()) return *this;
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) out.push_back({t.monomial.quotient(m), t.coeff});
  // Dividing by a common monomial preserves the relative grlex order.
  Polynomial p;
  p.terms_ = std::move(out);
  return p;
}

std::optional<Rational> Polynomial::scalar_ratio_to(const Polynomial& other) const {
  if (terms_.size() != other.terms_.size() || terms_.empty()) return std::nullopt;
  Rational c = other.terms_[0].coeff / terms_[0].coeff;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (!(terms_[i].monomial == other.terms_[i].monomial)) return std::nullopt;
    if (terms_[i].coeff * c != other.terms_[i].coeff) return std::nullopt;
  }
  return c;
}

Polynomial Polynomial::filter(const std::function<bool(const Monomial&)>& keep) const {
  Polynomial p;
  for (const auto& t : terms_)
    if (keep(t.monomial)) p.terms_.push_back(t);
  return p;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  bool first = true;
  for (const auto& t : terms_) {
    Rational c = t.coeff;
    bool neg = c < 0;
    if (neg) c = -c;
    if (first) {
      if (neg) s += '-';
    } else {
      s += neg ? " - " : " + ";
    }
    first = false;
    if (t.monomial.is_one()) {
      s += msploc::to_string(c);
    } else {
      if (c != 1) s += msploc::to_string(c) + "*";
      s += t.monomial.to_string();
    }
  }
  return s;
}

bool operator==(const Polynomial& a, const Polynomial& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i)
    if (!(a.terms_[i].monomial == b.terms_[i].monomial) || a.terms_[i].coeff != b.terms_[i].coeff)
      return false;
  return true;
}

}  // namespace msploc
