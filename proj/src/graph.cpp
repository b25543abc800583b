#include "msploc/graph.hpp"

#include "msploc/error.hpp"

#include <numeric>

namespace msploc {

std::string to_string(Level level) {
  switch (level) {
    case Level::L0: return "0";
    case Level::L1: return "1";
    case Level::LInf: return "inf";
  }
  return "?";
}

std::string to_string(EdgeType type) {
  switch (type) {
    case EdgeType::E01: return "E01";
    case EdgeType::E11: return "E11";
    case EdgeType::E1Inf: return "E1inf";
    case EdgeType::E0Inf: return "E0inf";
    case EdgeType::EInfInf: return "Einfinf";
  }
  return "?";
}

Level parse_level(const std::string& s) {
  if (s == "0") return Level::L0;
  if (s == "1") return Level::L1;
  if (s == "inf") return Level::LInf;
  throw Error(ErrorCode::FileMalformed, "bad level '" + s + "'");
}

EdgeType parse_edge_type(const std::string& s) {
  for (auto t : {EdgeType::E01, EdgeType::E11, EdgeType::E1Inf, EdgeType::E0Inf, EdgeType::EInfInf})
    if (to_string(t) == s) return t;
  throw Error(ErrorCode::FileMalformed, "bad edge type '" + s + "'");
}

std::string to_string(VertexClass c) {
  switch (c) {
    case VertexClass::Stable: return "stable";
    case VertexClass::V00: return "V00";
    case VertexClass::V01: return "V01";
    case VertexClass::V11: return "V11";
    case VertexClass::V02: return "V02";
  }
  return "?";
}

int DecoratedGraph::add_vertex(Vertex v) {
  vertices.push_back(std::move(v));
  return static_cast<int>(vertices.size()) - 1;
}

int DecoratedGraph::add_edge(Edge e) {
  edges.push_back(std::move(e));
  return static_cast<int>(edges.size()) - 1;
}

std::vector<int> DecoratedGraph::incident(int w) const {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(edges.size()); ++i)
    if (edges[i].u == w || edges[i].v == w) out.push_back(i);
  return out;
}

int DecoratedGraph::valence(int w) const {
  int n = 0;
  for (const auto& e : edges) n += (e.u == w) + (e.v == w);
  return n;
}

VertexClass DecoratedGraph::vertex_class(int w) const {
  const Vertex& v = vertices.at(static_cast<std::size_t>(w));
  int n_edges = valence(w);
  int n_legs = static_cast<int>(v.legs.size());
  // A vertex is a point (unstable) exactly when it carries no genus, no
  // degree and at most two special points.
  if (v.genus > 0 || v.d0 != 0 || v.dinf != 0 || n_edges + n_legs > 2) return VertexClass::Stable;
  if (n_legs == 0 && n_edges == 0) return VertexClass::V00;
  if (n_legs == 0 && n_edges == 1) return VertexClass::V01;
  if (n_legs == 1 && n_edges == 1) return VertexClass::V11;
  if (n_legs == 0 && n_edges == 2) return VertexClass::V02;
  // Two legs and no edge, or a lone leg: unstable but outside the table.
  return VertexClass::V00;
}

namespace {

int find_root(std::vector<int>& parent, int x) {
  while (parent[static_cast<std::size_t>(x)] != x) {
    parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
    x = parent[static_cast<std::size_t>(x)];
  }
  return x;
}

int components(const DecoratedGraph& g) {
  std::vector<int> parent(g.vertices.size());
  std::iota(parent.begin(), parent.end(), 0);
  int comps = static_cast<int>(g.vertices.size());
  for (const auto& e : g.edges) {
    int a = find_root(parent, e.u), b = find_root(parent, e.v);
    if (a != b) {
      parent[static_cast<std::size_t>(a)] = b;
      --comps;
    }
  }
  return comps;
}

}  // namespace

int DecoratedGraph::first_betti() const {
  return static_cast<int>(edges.size()) - static_cast<int>(vertices.size()) + components(*this);
}

bool DecoratedGraph::connected() const { return vertices.empty() || components(*this) == 1; }

int DecoratedGraph::total_genus() const {
  int g = first_betti();
  for (const auto& v : vertices) g += v.genus;
  return g;
}

Rational DecoratedGraph::total_d0() const {
  Rational d = 0;
  for (const auto& v : vertices) d += v.d0;
  for (const auto& e : edges) d += e.d0;
  return d;
}

Rational DecoratedGraph::total_dinf() const {
  Rational d = 0;
  for (const auto& v : vertices) d += v.dinf;
  for (const auto& e : edges) d += e.dinf;
  return d;
}

}  // namespace msploc
