#include "msploc/weights.hpp"

#include "msploc/error.hpp"

#include <numeric>

namespace msploc {

WeightSystem::WeightSystem(std::array<int, 5> a) : a_(a), b_{}, k_(0) {
  for (int ai : a_) {
    if (ai <= 0) throw Error(ErrorCode::InvalidWeights, "weights must be positive");
    k_ += ai;
  }
  for (std::size_t i = 0; i < 5; ++i) {
    if (k_ % a_[i] != 0)
      throw Error(ErrorCode::InvalidWeights,
                  "weight " + std::to_string(a_[i]) + " does not divide k = " + std::to_string(k_));
    b_[i] = k_ / a_[i];
  }
}

const std::vector<std::string>& WeightSystem::preset_names() {
  static const std::vector<std::string> names{"11112", "11114", "11125", "11111"};
  return names;
}

WeightSystem WeightSystem::preset(const std::string& name) {
  if (name == "11112") return WeightSystem({1, 1, 1, 1, 2});
  if (name == "11114") return WeightSystem({1, 1, 1, 1, 4});
  if (name == "11125") return WeightSystem({1, 1, 1, 2, 5});
  if (name == "11111") return WeightSystem({1, 1, 1, 1, 1});
  throw Error(ErrorCode::InvalidWeights, "unknown preset '" + name + "'");
}

int WeightSystem::a_product() const noexcept {
  return std::accumulate(a_.begin(), a_.end(), 1, std::multiplies<>());
}

bool WeightSystem::is_cross_check_only() const noexcept { return a_ == std::array<int, 5>{1, 1, 1, 1, 1}; }

std::string WeightSystem::name() const {
  std::string s;
  bool compact = true;
  for (int ai : a_) compact = compact && ai < 10;
  for (std::size_t i = 0; i < 5; ++i) {
    if (!compact && i > 0) s += ',';
    s += std::to_string(a_[i]);
  }
  return s;
}

bool WeightSystem::is_narrow_exponent(int m) const noexcept {
  if (m <= 0 || m >= k_) return false;
  for (int ai : a_)
    if ((static_cast<long>(m) * ai) % k_ == 0) return false;
  return true;
}

void Marking::validate(const WeightSystem& ws) const {
  if (is_rho_unit()) return;
  if (m_ < 1 || m_ >= ws.k())
    throw Error(ErrorCode::InvalidMarking, "narrow exponent " + std::to_string(m_) + " out of range");
  if (!ws.is_narrow_exponent(m_))
    throw Error(ErrorCode::InvalidMarking, "exponent " + std::to_string(m_) + " is broad for weights " + ws.name());
}

std::string Marking::to_string() const { return is_rho_unit() ? "rho" : std::to_string(m_); }

void DiscreteData::validate(const WeightSystem& ws) const {
  if (g < 0) throw Error(ErrorCode::InvalidData, "negative genus");
  if (N < 1) throw Error(ErrorCode::InvalidData, "N must be positive");
  for (const Rational* d : {&d0, &dinf}) {
    Rational kd = *d * ws.k();
    if (!is_integer(kd)) throw Error(ErrorCode::InvalidData, "degree " + to_string(*d) + " not in (1/k)Z");
  }
  for (const auto& m : markings) m.validate(ws);
}

Rational virtual_dimension(const WeightSystem& ws, const DiscreteData& dd) {
  for (const auto& m : dd.markings) m.validate(ws);
  Rational v = dd.N * dd.d0 + Rational(dd.N * (1 - dd.g)) + dd.dinf + Rational(static_cast<long>(dd.markings.size()));
  for (const auto& m : dd.markings)
    if (m.is_narrow()) v -= frac(4 * m.m(), ws.k());
  v.canonicalize();
  return v;
}

Rational cosection_pairing(const WeightSystem& ws, const std::array<Rational, 5>& phi,
                           const Rational& rho, const std::array<Rational, 5>& phidot,
                           const Rational& rhodot) {
  Rational first = 0, w = 0;
  for (std::size_t i = 0; i < 5; ++i) {
    int b = ws.b()[i];
    Rational p = 1;
    for (int j = 0; j < b - 1; ++j) p *= phi[i];
    first += b * rho * p * phidot[i];
    w += p * phi[i];
  }
  return first + rhodot * w;
}

NarrownessReport is_narrow(const WeightSystem& ws, const DiscreteData& dd) {
  NarrownessReport r;
  for (const auto& m : dd.markings) {
    if (m.is_rho_unit()) {
      r.per_marking.push_back(MarkingClass::RhoUnit);
    } else if (ws.is_narrow_exponent(m.m())) {
      r.per_marking.push_back(MarkingClass::Narrow);
      ++r.stacky_insertions;
    } else {
      r.per_marking.push_back(MarkingClass::Broad);
      r.narrow = false;
    }
  }
  return r;
}

}  // namespace msploc
