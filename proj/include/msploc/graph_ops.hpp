#pragma once

#include "msploc/graph.hpp"

#include <functional>
#include <string>
#include <vector>

namespace msploc {

struct Violation {
  /// Short rule key, e.g. "E11 hours equal".
  std::string rule;
  /// The offending element, e.g. "edge 2".
  std::string where;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const noexcept { return violations.empty(); }
  bool has(const std::string& rule) const;
  std::string to_string() const;
};

ValidationReport validate(const DecoratedGraph& graph, const WeightSystem& ws, const DiscreteData& dd);

/// b in [1, k] with b = k * q mod k; b = k is the trivial tag.
int monodromy_exponent(const Rational& q, int k);

struct FlagMonodromy {
  enum class Tag : std::uint8_t { Rho, Phi, Plain };
  int b = 0;
  Tag tag = Tag::Plain;
  /// Non-trivial monodromy at a point where the degeneracy locus is empty.
  bool degeneracy_empty = false;
  bool trivial(int k) const noexcept { return b == k; }
  friend bool operator==(const FlagMonodromy&, const FlagMonodromy&) = default;
};

/// Flags on E01, E1Inf and E0Inf edges; WrongEdgeType otherwise.
FlagMonodromy flag_monodromy(const DecoratedGraph& graph, const Flag& flag, const WeightSystem& ws);

/// Whether vertex v (two edges, no legs) is a T-balanced node. Throws
/// NotAValenceTwoVertex when the shape precondition fails.
bool is_balanced(const DecoratedGraph& graph, int v);
/// Vertices that are valence-2, leg-free and balanced.
std::vector<int> balanced_vertices(const DecoratedGraph& graph);
bool is_flat(const DecoratedGraph& graph);

/// Replaces every balanced node and its two edges by one E0Inf edge.
DecoratedGraph flatten(const DecoratedGraph& graph);

enum class GraphClass : std::uint8_t { Regular, Irregular, PureLoop };
std::string to_string(GraphClass c);

/// Throws NotFlat when a balanced node is present.
GraphClass classify(const DecoratedGraph& graph, const WeightSystem& ws);

/// Conventions for the edge automorphism group order |G_e| and the stacky
/// order k_e. Both are injectable; the defaults are documented below.
struct EdgePolicies {
  using Fn = std::function<Integer(const Edge&, const WeightSystem&)>;
  /// Default: numerator of |dL| (E01, E11, E1Inf) or of d0 (E0Inf);
  /// UnsupportedEdgeType for EInfInf.
  Fn group_order;
  /// Default: least positive q with q * dL integral.
  Fn k_e;
  static EdgePolicies defaults();
};

Integer edge_group_order(const DecoratedGraph& graph, int edge, const WeightSystem& ws,
                         const EdgePolicies& policies = EdgePolicies::defaults());

}  // namespace msploc
