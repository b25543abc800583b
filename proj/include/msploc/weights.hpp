#pragma once

#include "msploc/rational.hpp"

#include <array>
#include <string>
#include <vector>

namespace msploc {

/// Weights a_1..a_5 of the ambient weighted projective space, their sum k and
/// the Fermat exponents b_i = k / a_i.
class WeightSystem {
public:
  /// Throws InvalidWeights unless every a_i is positive and divides k.
  explicit WeightSystem(std::array<int, 5> a);

  /// "11112", "11114", "11125" and the quintic "11111", kept for cross-checks.
  static WeightSystem preset(const std::string& name);
  static const std::vector<std::string>& preset_names();

  const std::array<int, 5>& a() const noexcept { return a_; }
  const std::array<int, 5>& b() const noexcept { return b_; }
  int k() const noexcept { return k_; }
  /// Product of the a_i.
  int a_product() const noexcept;
  /// True for the quintic preset, which is accepted for cross-checks only.
  bool is_cross_check_only() const noexcept;
  /// Compact name, e.g. "11112".
  std::string name() const;

  /// zeta_k^m lies in no mu_{a_i}: m * a_i is not divisible by k for every i.
  bool is_narrow_exponent(int m) const noexcept;

  friend bool operator==(const WeightSystem&, const WeightSystem&) = default;

private:
  std::array<int, 5> a_;
  std::array<int, 5> b_;
  int k_;
};

/// A leg decoration: either the unit (1, rho) or a narrow zeta_k^m.
class Marking {
public:
  static Marking rho_unit() { return Marking(0); }
  /// Validity against a weight system is checked by validate().
  static Marking narrow(int m) { return Marking(m); }

  bool is_rho_unit() const noexcept { return m_ == 0; }
  bool is_narrow() const noexcept { return m_ != 0; }
  /// The exponent m of a narrow marking (0 for the rho unit).
  int m() const noexcept { return m_; }

  /// Throws InvalidMarking when a narrow exponent is out of range or broad.
  void validate(const WeightSystem& ws) const;

  /// "rho" or the decimal exponent.
  std::string to_string() const;

  friend auto operator<=>(const Marking&, const Marking&) = default;

private:
  explicit Marking(int m) : m_(m) {}
  int m_;
};

struct DiscreteData {
  int g = 0;
  std::vector<Marking> markings;
  Rational d0 = 0;
  Rational dinf = 0;
  int N = 1;

  /// Throws InvalidData or InvalidMarking when the data do not fit ws.
  void validate(const WeightSystem& ws) const;
};

/// N d0 + N(1-g) + dinf + l - 4 * sum over narrow markings of m/k.
Rational virtual_dimension(const WeightSystem& ws, const DiscreteData& dd);

/// sum_i b_i rho phi_i^(b_i - 1) phidot_i + rhodot * sum_i phi_i^(b_i).
Rational cosection_pairing(const WeightSystem& ws, const std::array<Rational, 5>& phi,
                           const Rational& rho, const std::array<Rational, 5>& phidot,
                           const Rational& rhodot);

enum class MarkingClass { RhoUnit, Narrow, Broad };

struct NarrownessReport {
  /// True when every non-unit marking is narrow.
  bool narrow = true;
  int stacky_insertions = 0;
  std::vector<MarkingClass> per_marking;
};

NarrownessReport is_narrow(const WeightSystem& ws, const DiscreteData& dd);

}  // namespace msploc
