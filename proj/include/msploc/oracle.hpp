#pragma once

#include "msploc/localization.hpp"

#include <functional>
#include <istream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace msploc {

/// A single moduli integral: the owner's descriptor, one sorted
/// "psi_power:h_power:tag" entry per special point, and the lambda monomial
/// ("1", "lam1^2*lam3", ...).
struct CorrelatorQuery {
  std::string descriptor;
  std::vector<std::string> insertions;
  std::string lambda = "1";

  /// Tab-free single-line key used by tables and error messages.
  std::string key() const;
  friend auto operator<=>(const CorrelatorQuery&, const CorrelatorQuery&) = default;
};

/// Resolves correlators to exact values (rational functions of the t_alpha).
class CorrelatorOracle {
public:
  enum class Mode : std::uint8_t { Symbolic, Tabulated, Zero };
  using Resolver = std::function<RatFunc(const CorrelatorQuery&)>;

  /// Leaves tokens and classes untouched.
  static CorrelatorOracle symbolic();
  /// Every correlator is zero.
  static CorrelatorOracle zero();
  /// Looks queries up in the table; a missing key throws MissingCorrelator.
  static CorrelatorOracle tabulated(std::map<CorrelatorQuery, RatFunc> table);
  /// Rows "descriptor<TAB>insertions<TAB>lambda<TAB>value", insertions
  /// comma-separated or "-". Blank lines and lines starting with '#' are
  /// skipped. Throws FileMalformed.
  static CorrelatorOracle from_tsv(std::istream& in);
  static CorrelatorOracle from_tsv_file(const std::string& path);
  /// A user callback; serial callbacks are called under a lock.
  static CorrelatorOracle callback(Resolver resolver, bool serial);

  Mode mode() const noexcept { return mode_; }
  RatFunc resolve(const CorrelatorQuery& q) const;
  /// Number of resolve calls so far.
  long queries() const;

private:
  CorrelatorOracle(Mode mode, Resolver resolver, bool serial);

  Mode mode_;
  Resolver resolver_;
  bool serial_;
  std::shared_ptr<std::mutex> lock_;
  std::shared_ptr<long> count_;
};

/// Integrates a contribution against the oracle. Returns nullopt in Symbolic
/// mode; otherwise the value prefactor * sign * integral, a rational function
/// of the t_alpha alone.
std::optional<RatFunc> integrate(const GraphContribution& c, const CorrelatorOracle& oracle);

struct ContributionReport {
  GraphContribution contribution;
  /// Integrated value when the oracle resolves correlators.
  std::optional<RatFunc> value;
};

struct SumReport {
  /// Sorted by canonical form.
  std::vector<ContributionReport> graphs;
  /// Sum of the values, or of the token-free symbolic terms; nullopt when a
  /// symbolic term still carries classes or tokens.
  std::optional<RatFunc> total;
};

/// Assembles and integrates every graph. Throws DuplicateClass when two
/// graphs share a canonical form, MissingCorrelator on a table miss.
SumReport sum_graphs(const std::vector<DecoratedGraph>& graphs, const DiscreteData& dd,
                     const LocalizationContext& ctx, const CorrelatorOracle& oracle, int threads = 1);

}  // namespace msploc
