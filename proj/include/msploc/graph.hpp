#pragma once

#include "msploc/weights.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace msploc {

enum class Level : std::uint8_t { L0, L1, LInf };
enum class EdgeType : std::uint8_t { E01, E11, E1Inf, E0Inf, EInfInf };

std::string to_string(Level level);
std::string to_string(EdgeType type);
Level parse_level(const std::string& s);
EdgeType parse_edge_type(const std::string& s);

/// A marked point: its index into DiscreteData::markings and its decoration.
struct Leg {
  int label = 0;
  Marking marking = Marking::rho_unit();
  friend bool operator==(const Leg&, const Leg&) = default;
};

struct Vertex {
  Level level = Level::L0;
  /// Torus index alpha in 1..N for levels 1 and infinity; 0 at level 0.
  int hour = 0;
  int genus = 0;
  Rational d0 = 0;
  Rational dinf = 0;
  std::vector<Leg> legs;
  friend bool operator==(const Vertex&, const Vertex&) = default;
};

/// Edge endpoints are stored lower level first: (L0, L1) for E01, (L1, LInf)
/// for E1Inf and (L0, LInf) for E0Inf. E11 and EInfInf are unordered.
struct Edge {
  int u = 0;
  int v = 0;
  EdgeType type = EdgeType::E01;
  /// deg(L (x) N) and deg N on the edge curve.
  Rational d0 = 0;
  Rational dinf = 0;
  /// deg L = d0 - dinf.
  Rational dL() const { return d0 - dinf; }
  int other(int w) const { return w == u ? v : u; }
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Unstable vertex classes V^{legs,edges}; V00 only for the lone trivial graph.
enum class VertexClass : std::uint8_t { Stable, V00, V01, V11, V02 };
std::string to_string(VertexClass c);

class DecoratedGraph {
public:
  std::vector<Vertex> vertices;
  std::vector<Edge> edges;

  int add_vertex(Vertex v);
  int add_edge(Edge e);

  /// Ids of edges incident to vertex w, increasing.
  std::vector<int> incident(int w) const;
  int valence(int w) const;
  VertexClass vertex_class(int w) const;
  bool is_stable(int w) const { return vertex_class(w) == VertexClass::Stable; }
  /// Edges minus vertices plus connected components.
  int first_betti() const;
  bool connected() const;
  int total_genus() const;
  Rational total_d0() const;
  Rational total_dinf() const;

  friend bool operator==(const DecoratedGraph&, const DecoratedGraph&) = default;
};

/// A flag (e, v): the edge id and the vertex id of one of its ends.
struct Flag {
  int edge = 0;
  int vertex = 0;
};

}  // namespace msploc
