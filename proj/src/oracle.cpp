#include "msploc/oracle.hpp"

#include "msploc/canonical.hpp"
#include "msploc/error.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

namespace msploc {

std::string CorrelatorQuery::key() const {
  std::string s = descriptor + " [";
  for (std::size_t i = 0; i < insertions.size(); ++i) s += (i ? "," : "") + insertions[i];
  return s + "] " + lambda;
}

CorrelatorOracle::CorrelatorOracle(Mode mode, Resolver resolver, bool serial)
    : mode_(mode), resolver_(std::move(resolver)), serial_(serial), lock_(std::make_shared<std::mutex>()),
      count_(std::make_shared<long>(0)) {}

CorrelatorOracle CorrelatorOracle::symbolic() { return CorrelatorOracle(Mode::Symbolic, nullptr, false); }

CorrelatorOracle CorrelatorOracle::zero() {
  return CorrelatorOracle(Mode::Zero, [](const CorrelatorQuery&) { return RatFunc(0); }, false);
}

CorrelatorOracle CorrelatorOracle::tabulated(std::map<CorrelatorQuery, RatFunc> table) {
  auto shared = std::make_shared<const std::map<CorrelatorQuery, RatFunc>>(std::move(table));
  return CorrelatorOracle(
      Mode::Tabulated,
      [shared](const CorrelatorQuery& q) {
        auto it = shared->find(q);
        if (it == shared->end()) throw Error(ErrorCode::MissingCorrelator, q.key());
        return it->second;
      },
      false);
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

CorrelatorOracle CorrelatorOracle::from_tsv(std::istream& in) {
  std::map<CorrelatorQuery, RatFunc> table;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto fields = split(line, '\t');
    auto fail = [&](const std::string& why) {
      throw Error(ErrorCode::FileMalformed, "correlator table line " + std::to_string(lineno) + ": " + why);
    };
    if (fields.size() != 4) fail("expected 4 tab-separated fields");
    CorrelatorQuery q;
    q.descriptor = fields[0];
    if (fields[1] != "-") q.insertions = split(fields[1], ',');
    std::sort(q.insertions.begin(), q.insertions.end());
    q.lambda = fields[2];
    RatFunc value;
    try {
      value = parse_ratfunc(fields[3]);
    } catch (const Error& e) {
      fail(e.what());
    }
    if (!table.emplace(q, value).second) fail("duplicate key " + q.key());
  }
  return tabulated(std::move(table));
}

CorrelatorOracle CorrelatorOracle::from_tsv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::FileMalformed, "cannot read correlator table " + path);
  return from_tsv(in);
}

CorrelatorOracle CorrelatorOracle::callback(Resolver resolver, bool serial) {
  return CorrelatorOracle(Mode::Tabulated, std::move(resolver), serial);
}

RatFunc CorrelatorOracle::resolve(const CorrelatorQuery& q) const {
  if (mode_ == Mode::Symbolic) throw Error(ErrorCode::MissingCorrelator, "symbolic oracle cannot resolve " + q.key());
  if (serial_) {
    std::lock_guard<std::mutex> g(*lock_);
    ++*count_;
    return resolver_(q);
  }
  {
    std::lock_guard<std::mutex> g(*lock_);
    ++*count_;
  }
  return resolver_(q);
}

long CorrelatorOracle::queries() const {
  std::lock_guard<std::mutex> g(*lock_);
  return *count_;
}

namespace {

using Series = std::map<std::vector<Monomial::Factor>, Polynomial>;

bool nilpotent(const Variable& v) {
  return v.kind() == Variable::Kind::Psi || v.kind() == Variable::Kind::Lambda || v.kind() == Variable::Kind::Hyperplane;
}

int nil_degree(const Variable& v) { return v.kind() == Variable::Kind::Lambda ? v.second() : 1; }

// Splits every term into its nilpotent monomial and a t-coefficient.
Series split_nilpotent(const Polynomial& p) {
  Series s;
  for (const Term& t : p.terms()) {
    std::vector<Monomial::Factor> nil, rest;
    for (const auto& f : t.monomial.factors()) (nilpotent(f.first) ? nil : rest).push_back(f);
    s[nil] += Polynomial::monomial(Monomial::from_factors(rest), t.coeff);
  }
  return s;
}

struct Integrator {
  const GraphContribution& c;
  const CorrelatorOracle& oracle;
  std::map<Variable, std::size_t> owner_of;
  std::map<CorrelatorQuery, RatFunc> memo;

  Integrator(const GraphContribution& c_, const CorrelatorOracle& o) : c(c_), oracle(o) {
    for (std::size_t i = 0; i < c.owners.size(); ++i) {
      const Owner& ow = c.owners[i];
      for (const auto& p : ow.points) {
        if (p.psi) owner_of[*p.psi] = i;
        if (p.hyperplane) owner_of[*p.hyperplane] = i;
      }
    }
  }

  std::size_t owner(const Variable& v) const {
    if (v.kind() == Variable::Kind::Lambda) {
      for (std::size_t i = 0; i < c.owners.size(); ++i)
        for (int x : c.owners[i].vertices)
          if (x == v.first()) return i;
    } else if (auto it = owner_of.find(v); it != owner_of.end()) {
      return it->second;
    }
    throw Error(ErrorCode::InvalidGraph, "no moduli space owns " + v.to_string());
  }

  bool admissible(const std::vector<Monomial::Factor>& m) const {
    std::vector<int> deg(c.owners.size(), 0);
    for (const auto& [v, e] : m) {
      std::size_t o = owner(v);
      deg[o] += e * nil_degree(v);
      if (deg[o] > c.owners[o].budget) return false;
    }
    return true;
  }

  Series mul(const Series& a, const Series& b) const {
    Series out;
    for (const auto& [ma, ca] : a)
      for (const auto& [mb, cb] : b) {
        Monomial m = Monomial::from_factors(ma) * Monomial::from_factors(mb);
        if (!admissible(m.factors())) continue;
        out[m.factors()] += ca * cb;
      }
    for (auto it = out.begin(); it != out.end();) it = it->second.is_zero() ? out.erase(it) : std::next(it);
    return out;
  }

  // Product over owners of the correlator of the owner's share of m; zero
  // when an exact-dimension owner receives the wrong degree.
  RatFunc correlate(const std::vector<Monomial::Factor>& m) {
    const Monomial mono = Monomial::from_factors(m);
    RatFunc value(1);
    for (std::size_t i = 0; i < c.owners.size(); ++i) {
      const Owner& ow = c.owners[i];
      int deg = 0;
      CorrelatorQuery q;
      q.descriptor = ow.descriptor;
      for (const auto& p : ow.points) {
        int a = p.psi ? mono.exponent(*p.psi) : 0;
        int b = p.hyperplane ? mono.exponent(*p.hyperplane) : 0;
        deg += a + b;
        q.insertions.push_back(std::to_string(a) + ":" + std::to_string(b) + ":" + p.tag);
      }
      std::sort(q.insertions.begin(), q.insertions.end());
      std::string lam;
      for (const auto& [v, e] : m) {
        if (v.kind() != Variable::Kind::Lambda || owner(v) != i) continue;
        deg += e * v.second();
        lam += (lam.empty() ? "" : "*") + ("lam" + std::to_string(v.second())) + (e > 1 ? "^" + std::to_string(e) : "");
      }
      q.lambda = lam.empty() ? "1" : lam;
      if (ow.exact && deg != ow.budget) return RatFunc(0);
      auto it = memo.find(q);
      if (it == memo.end()) it = memo.emplace(q, oracle.resolve(q)).first;
      if (it->second.is_zero()) return RatFunc(0);
      value *= it->second;
    }
    return value;
  }

  RatFunc run() {
    Polynomial num = c.inverse_euler.numerator();
    std::vector<Monomial::Factor> tokens;
    const Monomial content = num.monomial_content();
    for (const auto& f : content.factors())
      if (f.first.kind() == Variable::Kind::CorrelatorToken) tokens.push_back(f);
    num = num.divide_monomial(Monomial::from_factors(tokens));
    for (const Term& t : num.terms())
      for (const auto& f : t.monomial.factors())
        if (f.first.kind() == Variable::Kind::CorrelatorToken)
          throw Error(ErrorCode::InvalidData, "token " + f.first.to_string() + " is not a factor");

    Series P = split_nilpotent(num);
    Series Q = split_nilpotent(c.inverse_euler.denominator());
    auto it0 = Q.find({});
    if (it0 == Q.end() || it0->second.is_zero())
      throw Error(ErrorCode::DenominatorVanishes, "denominator vanishes when the classes are set to zero");
    const Polynomial q0 = it0->second;
    Q.erase(it0);

    int nmax = 0;
    for (const Owner& o : c.owners) nmax += std::max(o.budget, 0);
    for (auto it = P.begin(); it != P.end();) it = admissible(it->first) ? std::next(it) : P.erase(it);

    // 1/den = sum_n (-X)^n / q0^(n+1), brought over the common q0^(nmax+1).
    Series S;
    Series xpow{{{}, Polynomial(1)}};
    for (int n = 0; n <= nmax && !xpow.empty(); ++n) {
      const Polynomial scale = q0.pow(static_cast<unsigned>(nmax - n)) * Rational(n % 2 ? -1 : 1);
      for (const auto& [m, coeff] : xpow) S[m] += coeff * scale;
      xpow = mul(xpow, Q);
    }
    const Series R = mul(P, S);
    RatFunc total(0);
    for (const auto& [m, coeff] : R) {
      RatFunc v = correlate(m);
      if (!v.is_zero()) total += v * RatFunc(coeff);
    }
    total /= RatFunc(q0.pow(static_cast<unsigned>(nmax + 1)));
    return total * RatFunc(c.prefactor * c.sign);
  }
};

}  // namespace

std::optional<RatFunc> integrate(const GraphContribution& c, const CorrelatorOracle& oracle) {
  if (oracle.mode() == CorrelatorOracle::Mode::Symbolic) return std::nullopt;
  if (oracle.mode() == CorrelatorOracle::Mode::Zero && !c.owners.empty()) return RatFunc(0);
  return Integrator(c, oracle).run();
}

SumReport sum_graphs(const std::vector<DecoratedGraph>& graphs, const DiscreteData& dd, const LocalizationContext& ctx,
                     const CorrelatorOracle& oracle, int threads) {
  const std::size_t n = graphs.size();
  std::vector<std::optional<ContributionReport>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        ContributionReport r{assemble_graph(graphs[i], dd, ctx), std::nullopt};
        r.value = integrate(r.contribution, oracle);
        slots[i] = std::move(r);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int nt = std::max(1, std::min<int>(threads, static_cast<int>(n)));
  std::vector<std::thread> pool;
  for (int t = 1; t < nt; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  SumReport rep;
  for (auto& s : slots) rep.graphs.push_back(std::move(*s));
  std::sort(rep.graphs.begin(), rep.graphs.end(),
            [](const ContributionReport& a, const ContributionReport& b) { return a.contribution.form < b.contribution.form; });
  for (std::size_t i = 1; i < rep.graphs.size(); ++i)
    if (rep.graphs[i].contribution.form == rep.graphs[i - 1].contribution.form)
      throw Error(ErrorCode::DuplicateClass, "two graphs share canonical form " + form_id(rep.graphs[i].contribution.form));

  RatFunc total(0);
  for (const auto& g : rep.graphs) {
    if (g.value) {
      total += *g.value;
      continue;
    }
    const GraphContribution& c = g.contribution;
    const bool t_only = c.owners.empty() &&
                        c.inverse_euler.only_uses([](const Variable& v) { return v.kind() == Variable::Kind::EquivParam; });
    if (!t_only) return rep;
    total += c.inverse_euler * RatFunc(c.prefactor * c.sign);
  }
  rep.total = total;
  return rep;
}

}  // namespace msploc
