#pragma once

#include "msploc/graph_ops.hpp"
#include "msploc/ratfunc.hpp"

#include <optional>
#include <string>
#include <vector>

namespace msploc {

/// How the rho-twist flags delta_rho, delta'_rho are derived.
enum class RhoFlagMode : std::uint8_t {
  /// delta_rho follows delta at v, delta'_rho follows delta' at v'.
  Keyed,
  /// Both rho flags read the unprimed end v, as printed.
  LiteralPrint,
  /// Both rho flags are zero.
  Suppressed,
};

/// Numerator of the E11 edge factor.
enum class E11Numerator : std::uint8_t {
  /// Weights k t_a - j (t_a - t_b)/d, invariant under swapping the ends.
  Symmetric,
  /// Adds the printed shift -(delta + delta_rho) t_a / d to every factor.
  AsPrinted,
};

/// Index range of the E01 numerator product.
enum class E01Range : std::uint8_t {
  /// j = 1 .. k d - 1 - delta' - delta'_rho.
  FinalDisplay,
  /// j = 1 + delta + delta_rho .. k d - 1 - delta - delta'_rho.
  PushforwardDisplay,
};

struct Conventions {
  RhoFlagMode rho_flags = RhoFlagMode::Keyed;
  E11Numerator e11_numerator = E11Numerator::Symmetric;
  E01Range e01_range = E01Range::FinalDisplay;
  EdgePolicies policies = EdgePolicies::defaults();
};

std::string to_string(RhoFlagMode m);
std::string to_string(E11Numerator m);
std::string to_string(E01Range m);
RhoFlagMode parse_rho_flag_mode(const std::string& s);
E11Numerator parse_e11_numerator(const std::string& s);
E01Range parse_e01_range(const std::string& s);

/// The delta flags of an edge seen from its hour-alpha end v' and other end v.
struct DeltaFlags {
  int delta = 0;
  int delta_prime = 0;
  int delta_rho = 0;
  int delta_rho_prime = 0;
};

/// Everything the formulas need besides the graph.
struct LocalizationContext {
  WeightSystem ws;
  int N = 1;
  Conventions conventions;
};

/// The alpha end v' of an edge: the level-1 end of E01/E1Inf, e.u for E11.
int alpha_end(const DecoratedGraph& graph, int edge);

/// Flags of edge e from end v' (which must be the level-1 end unless e is E11).
DeltaFlags delta_flags(const DecoratedGraph& graph, int edge, int vprime, const Conventions& conv);

/// h_e, shared by the two edges of a level-0 V^{0,2} vertex.
Variable hyperplane_variable(const DecoratedGraph& graph, int edge);

/// Tangent weight of the edge branch at the flag. UnsupportedEdgeType for
/// E0Inf and EInfInf.
RatFunc tangent_weight(const DecoratedGraph& graph, const Flag& flag, const LocalizationContext& ctx);

/// A'_e for E01, E1Inf and E11 edges. For E11 the hour-alpha end may be
/// chosen with vprime (default e.u). UnsupportedEdgeType otherwise.
RatFunc edge_contribution(const DecoratedGraph& graph, int edge, const LocalizationContext& ctx,
                          std::optional<int> vprime = std::nullopt);

/// A'_{(e,v)} at a stable vertex or a V^{0,2} vertex. BroadInfinityNode when
/// a level-infinity node is not narrow.
RatFunc node_contribution(const DecoratedGraph& graph, const Flag& flag, const LocalizationContext& ctx);

/// A'_{(e,v)} / (w_{(e,v)} - psi_{(e,v)}).
RatFunc flag_factor(const DecoratedGraph& graph, const Flag& flag, const LocalizationContext& ctx);

/// A_v. Level-1 stable vertices are explicit; level-0 and level-infinity
/// stable vertices carry the opaque pushforward token times their explicit
/// part; unstable vertices follow the A_v table.
RatFunc vertex_contribution(const DecoratedGraph& graph, int v, const LocalizationContext& ctx);

/// Token standing for the pushforward class of a stable level-0 or
/// level-infinity vertex.
Variable vertex_token(const DecoratedGraph& graph, int v);
/// Token standing for the inverse normal Euler class of web i.
Variable web_token(int web);

/// Connected pieces of the level-infinity subgraph other than a lone
/// unstable leaf; each is a list of vertex ids, increasing.
std::vector<std::vector<int>> webs(const DecoratedGraph& graph);

/// One moduli integral the oracle has to resolve.
struct Owner {
  enum class Kind : std::uint8_t { GromovWitten, Hodge, Z, Web };
  /// A special point: the psi and hyperplane variables attached to it and a tag.
  struct Point {
    std::optional<Variable> psi;
    std::optional<Variable> hyperplane;
    std::string tag;
  };
  Kind kind = Kind::Z;
  std::string descriptor;
  std::vector<int> vertices;
  std::vector<Point> points;
  /// Dimension of the moduli space; integrands of higher degree vanish.
  int budget = 0;
  /// Only integrands of degree exactly budget integrate to nonzero values.
  bool exact = false;
  /// Opaque token absorbed by the integral.
  std::optional<Variable> token;
  /// Sign of the fixed-part class.
  int sign = 1;
};

std::string to_string(Owner::Kind k);

struct FactorEntry {
  std::string label;
  RatFunc value;
};

struct GraphContribution {
  DecoratedGraph graph;
  std::string form;
  Integer automorphisms;
  Integer group_order;
  /// 1 / (|Aut| |G_E|).
  Rational prefactor;
  /// Product of the fixed-part signs.
  int sign = 1;
  std::vector<Owner> owners;
  std::vector<FactorEntry> factors;
  RatFunc inverse_euler;
  /// Degree of inverse_euler under the standard grading.
  std::optional<std::int64_t> degree;
};

/// Assembles every product block for a flat regular graph. Throws
/// InvalidGraph, NotFlat or NotRegular when the graph is not admissible.
GraphContribution assemble_graph(const DecoratedGraph& graph, const DiscreteData& dd,
                                 const LocalizationContext& ctx);

}  // namespace msploc
