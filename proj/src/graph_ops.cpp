#include "msploc/graph_ops.hpp"

#include "msploc/error.hpp"

#include <algorithm>

namespace msploc {

bool ValidationReport::has(const std::string& rule) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.rule == rule; });
}

std::string ValidationReport::to_string() const {
  std::string s;
  for (const auto& v : violations) {
    if (!s.empty()) s += "; ";
    s += v.rule + " (" + v.where + ")";
  }
  return s.empty() ? "valid" : s;
}

int monodromy_exponent(const Rational& q, int k) {
  Rational kq = q * k;
  if (!is_integer(kq)) throw Error(ErrorCode::InvalidGraph, "degree " + msploc::to_string(q) + " not in (1/k)Z");
  Integer r;
  mpz_fdiv_r_ui(r.get_mpz_t(), kq.get_num_mpz_t(), static_cast<unsigned long>(k));
  long b = r.get_si();
  return b == 0 ? k : static_cast<int>(b);
}

namespace {

std::string vname(int i) { return "vertex " + std::to_string(i); }
std::string ename(int i) { return "edge " + std::to_string(i); }

bool in_kz(const Rational& q, int k) { return is_integer(q * k); }

struct Expected {
  Level lo, hi;
};

Expected endpoint_levels(EdgeType t) {
  switch (t) {
    case EdgeType::E01: return {Level::L0, Level::L1};
    case EdgeType::E11: return {Level::L1, Level::L1};
    case EdgeType::E1Inf: return {Level::L1, Level::LInf};
    case EdgeType::E0Inf: return {Level::L0, Level::LInf};
    case EdgeType::EInfInf: return {Level::LInf, Level::LInf};
  }
  return {Level::L0, Level::L0};
}

// Monodromy exponent seen by a leg sitting at the end of this flag, or
// nullopt when the flag carries no comparable monodromy.
std::optional<int> flag_b_for_leg(const DecoratedGraph& g, const Flag& f, const WeightSystem& ws) {
  const Edge& e = g.edges[static_cast<std::size_t>(f.edge)];
  switch (e.type) {
    case EdgeType::E11: return ws.k();
    case EdgeType::EInfInf: return std::nullopt;
    default: return flag_monodromy(g, f, ws).b;
  }
}

int leg_b(const Marking& m, int k) { return m.is_rho_unit() ? k : m.m(); }

}  // namespace

ValidationReport validate(const DecoratedGraph& g, const WeightSystem& ws, const DiscreteData& dd) {
  ValidationReport rep;
  auto bad = [&](std::string rule, std::string where) { rep.violations.push_back({std::move(rule), std::move(where)}); };
  const int k = ws.k();
  const int nv = static_cast<int>(g.vertices.size());

  if (nv == 0) {
    bad("empty graph", "graph");
    return rep;
  }

  // Vertices.
  for (int i = 0; i < nv; ++i) {
    const Vertex& v = g.vertices[static_cast<std::size_t>(i)];
    if (v.level == Level::L0 ? v.hour != 0 : (v.hour < 1 || v.hour > dd.N)) bad("vertex hour", vname(i));
    if (v.genus < 0) bad("negative genus", vname(i));
    if (!in_kz(v.d0, k) || !in_kz(v.dinf, k)) bad("degree quantization", vname(i));
    switch (v.level) {
      case Level::L0:
        if (v.dinf != 0 || v.d0 < 0) bad("level-0 vertex degree", vname(i));
        break;
      case Level::L1:
        if (v.d0 != 0 || v.dinf != 0) bad("level-1 vertex degree", vname(i));
        break;
      case Level::LInf: {
        int n = g.valence(i) + static_cast<int>(v.legs.size());
        bool stable = g.is_stable(i);
        Rational want = stable ? Rational(-frac(2 * v.genus - 2 + n, k)) : Rational(0);
        if (v.d0 != 0 || v.dinf != want || (stable && 2 * v.genus - 2 + n <= 0))
          bad("level-inf vertex degree", vname(i));
        break;
      }
    }
  }

  // Edges.
  bool endpoints_ok = true;
  for (int i = 0; i < static_cast<int>(g.edges.size()); ++i) {
    const Edge& e = g.edges[static_cast<std::size_t>(i)];
    if (e.u < 0 || e.u >= nv || e.v < 0 || e.v >= nv || e.u == e.v) {
      bad("edge endpoints", ename(i));
      endpoints_ok = false;
      continue;
    }
    const Vertex& a = g.vertices[static_cast<std::size_t>(e.u)];
    const Vertex& b = g.vertices[static_cast<std::size_t>(e.v)];
    Expected lv = endpoint_levels(e.type);
    if (a.level != lv.lo || b.level != lv.hi) {
      bad("edge endpoints", ename(i));
      endpoints_ok = false;
      continue;
    }
    if (!in_kz(e.d0, k) || !in_kz(e.dinf, k)) {
      bad("degree quantization", ename(i));
      continue;
    }
    Rational dL = e.dL();
    switch (e.type) {
      case EdgeType::E01:
        if (dL <= 0 || e.dinf != 0) bad("E01 degree must be positive", ename(i));
        break;
      case EdgeType::E11:
        if (a.hour == b.hour) bad("E11 hours equal", ename(i));
        if (!is_integer(e.d0) || e.d0 <= 0 || e.dinf != 0) bad("E11 degree", ename(i));
        break;
      case EdgeType::E1Inf:
        if (a.hour != b.hour) bad("E1Inf hours differ", ename(i));
        if (e.d0 != 0 || dL >= 0) bad("E1Inf degree must be negative", ename(i));
        break;
      case EdgeType::E0Inf:
        if (e.d0 <= 0 || e.dinf <= 0) bad("E0Inf degree", ename(i));
        break;
      case EdgeType::EInfInf:
        if (a.hour == b.hour) bad("Einfinf hours equal", ename(i));
        // deg(L (x) N) > 0, and rho nonvanishing along the curve forces deg L <= 0.
        if (e.d0 <= 0 || dL > 0) bad("Einfinf degree", ename(i));
        break;
    }
  }

  // Legs: every label exactly once, matching dd, placed on an allowed level.
  std::vector<int> seen(dd.markings.size(), 0);
  for (int i = 0; i < nv; ++i) {
    const Vertex& v = g.vertices[static_cast<std::size_t>(i)];
    for (const Leg& l : v.legs) {
      if (l.label < 0 || l.label >= static_cast<int>(dd.markings.size()) ||
          !(dd.markings[static_cast<std::size_t>(l.label)] == l.marking)) {
        bad("legs", vname(i));
        continue;
      }
      ++seen[static_cast<std::size_t>(l.label)];
      try {
        l.marking.validate(ws);
      } catch (const Error&) {
        bad("marking validity", vname(i));
      }
      bool allowed = l.marking.is_rho_unit() ? v.level != Level::LInf : v.level != Level::L1;
      if (!allowed) bad("leg placement", vname(i));
    }
  }
  for (std::size_t j = 0; j < seen.size(); ++j)
    if (seen[j] != 1) bad("legs", "label " + std::to_string(j));

  if (!g.connected()) bad("connected", "graph");
  if (g.total_genus() != dd.g) bad("genus conservation", "graph");
  if (g.total_d0() != dd.d0 || g.total_dinf() != dd.dinf) bad("degree conservation", "graph");

  if (!endpoints_ok || rep.has("degree quantization")) return rep;

  // Unstable vertices and monodromy compatibility at special points.
  for (int i = 0; i < nv; ++i) {
    const Vertex& v = g.vertices[static_cast<std::size_t>(i)];
    int n_edges = g.valence(i);
    int n_legs = static_cast<int>(v.legs.size());
    VertexClass c = g.vertex_class(i);
    if (c == VertexClass::Stable) continue;
    if (c == VertexClass::V00) {
      bool lone_trivial = nv == 1 && n_legs == 0 && v.level == Level::L0;
      if (!lone_trivial) bad("unstable vertex", vname(i));
      continue;
    }
    if (n_edges == 0) {
      bad("unstable vertex", vname(i));
      continue;
    }
    auto inc = g.incident(i);
    if (c == VertexClass::V11) {
      auto b = flag_b_for_leg(g, {inc[0], i}, ws);
      if (b && *b != leg_b(v.legs[0].marking, ws.k())) bad("V11 monodromy", vname(i));
    }
    if (c == VertexClass::V02 && v.level == Level::LInf) {
      const Edge& e0 = g.edges[static_cast<std::size_t>(inc[0])];
      const Edge& e1 = g.edges[static_cast<std::size_t>(inc[1])];
      if (e0.type == EdgeType::E1Inf && e1.type == EdgeType::E1Inf) {
        int b0 = flag_monodromy(g, {inc[0], i}, ws).b;
        int b1 = flag_monodromy(g, {inc[1], i}, ws).b;
        if ((b0 + b1) % ws.k() != 0) bad("V02 node monodromy", vname(i));
      }
    }
    if (c == VertexClass::V01 && v.level == Level::LInf) {
      const Edge& e = g.edges[static_cast<std::size_t>(inc[0])];
      if (e.type == EdgeType::E1Inf && !is_integer(e.dL())) bad("E1Inf at V01 must be integral", vname(i));
    }
  }
  return rep;
}

FlagMonodromy flag_monodromy(const DecoratedGraph& g, const Flag& f, const WeightSystem& ws) {
  const Edge& e = g.edges.at(static_cast<std::size_t>(f.edge));
  if (f.vertex != e.u && f.vertex != e.v) throw Error(ErrorCode::InvalidGraph, "flag vertex not on edge");
  const int k = ws.k();
  const bool low_end = f.vertex == e.u;
  FlagMonodromy m;
  switch (e.type) {
    case EdgeType::E01:
      m.tag = FlagMonodromy::Tag::Rho;
      m.b = low_end ? monodromy_exponent(e.dL(), k) : k;
      m.degeneracy_empty = m.b != k;
      return m;
    case EdgeType::E1Inf:
      m.tag = FlagMonodromy::Tag::Phi;
      m.b = low_end ? k : monodromy_exponent(e.dL(), k);
      return m;
    case EdgeType::E0Inf:
      m.tag = FlagMonodromy::Tag::Plain;
      if (low_end) {
        m.b = monodromy_exponent(e.d0, k);
      } else {
        m.b = monodromy_exponent(e.dinf, k);
        m.degeneracy_empty = m.b != k;
      }
      return m;
    default:
      throw Error(ErrorCode::WrongEdgeType, "no monodromy rule for " + to_string(e.type) + " flags");
  }
}

bool is_balanced(const DecoratedGraph& g, int v) {
  auto inc = g.incident(v);
  if (inc.size() != 2 || !g.vertices.at(static_cast<std::size_t>(v)).legs.empty())
    throw Error(ErrorCode::NotAValenceTwoVertex, "vertex " + std::to_string(v) + " is not a leg-free valence-2 vertex");
  // Only a contracted genus-0 point can be a node.
  if (g.vertex_class(v) != VertexClass::V02) return false;
  const Edge* e01 = nullptr;
  const Edge* e1i = nullptr;
  for (int id : inc) {
    const Edge& e = g.edges[static_cast<std::size_t>(id)];
    if (e.type == EdgeType::E01) e01 = &e;
    if (e.type == EdgeType::E1Inf) e1i = &e;
  }
  if (!e01 || !e1i || e01->v != v || e1i->u != v) return false;
  if (e01->dL() + e1i->dL() != 0) return false;
  // The infinity end must be a special point of the level-infinity curve.
  return g.vertex_class(e1i->v) != VertexClass::V01;
}

std::vector<int> balanced_vertices(const DecoratedGraph& g) {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(g.vertices.size()); ++i)
    if (g.valence(i) == 2 && g.vertices[static_cast<std::size_t>(i)].legs.empty() && is_balanced(g, i))
      out.push_back(i);
  return out;
}

bool is_flat(const DecoratedGraph& g) { return balanced_vertices(g).empty(); }

DecoratedGraph flatten(const DecoratedGraph& g) {
  auto balanced = balanced_vertices(g);
  if (balanced.empty()) return g;
  std::vector<char> removed(g.vertices.size(), 0);
  for (int v : balanced) removed[static_cast<std::size_t>(v)] = 1;
  std::vector<int> remap(g.vertices.size(), -1);
  DecoratedGraph out;
  for (std::size_t i = 0; i < g.vertices.size(); ++i)
    if (!removed[i]) remap[i] = out.add_vertex(g.vertices[i]);
  for (const Edge& e : g.edges) {
    if (removed[static_cast<std::size_t>(e.u)] || removed[static_cast<std::size_t>(e.v)]) continue;
    Edge f = e;
    f.u = remap[static_cast<std::size_t>(e.u)];
    f.v = remap[static_cast<std::size_t>(e.v)];
    out.add_edge(f);
  }
  for (int v : balanced) {
    const Edge* e01 = nullptr;
    const Edge* e1i = nullptr;
    for (int id : g.incident(v)) {
      const Edge& e = g.edges[static_cast<std::size_t>(id)];
      (e.type == EdgeType::E01 ? e01 : e1i) = &e;
    }
    Edge merged;
    merged.type = EdgeType::E0Inf;
    merged.u = remap[static_cast<std::size_t>(e01->u)];
    merged.v = remap[static_cast<std::size_t>(e1i->v)];
    merged.d0 = e01->d0;
    merged.dinf = e1i->dinf;
    out.add_edge(merged);
  }
  return out;
}

std::string to_string(GraphClass c) {
  switch (c) {
    case GraphClass::Regular: return "regular";
    case GraphClass::Irregular: return "irregular";
    case GraphClass::PureLoop: return "pure_loop";
  }
  return "?";
}

GraphClass classify(const DecoratedGraph& g, const WeightSystem& ws) {
  if (!is_flat(g)) throw Error(ErrorCode::NotFlat, "graph has a balanced node; flatten it first");
  const int nv = static_cast<int>(g.vertices.size());
  const int k = ws.k();

  bool any_stable = false, all_two = nv > 0;
  for (int i = 0; i < nv; ++i) {
    any_stable = any_stable || g.is_stable(i);
    all_two = all_two && g.valence(i) == 2;
  }
  if (!any_stable && all_two) return GraphClass::PureLoop;

  for (const Edge& e : g.edges)
    if (e.type == EdgeType::E0Inf) return GraphClass::Irregular;

  auto admissible = [&](int b) { return b == 1 || (b == 2 && ws.is_narrow_exponent(2)); };
  for (int i = 0; i < nv; ++i) {
    const Vertex& v = g.vertices[static_cast<std::size_t>(i)];
    if (v.level != Level::LInf) continue;
    auto inc = g.incident(i);
    if (g.is_stable(i)) {
      for (const Leg& l : v.legs)
        if (l.marking.is_rho_unit() || !admissible(l.marking.m())) return GraphClass::Irregular;
      for (int id : inc)
        if (g.edges[static_cast<std::size_t>(id)].type == EdgeType::E1Inf &&
            !admissible(flag_monodromy(g, {id, i}, ws).b))
          return GraphClass::Irregular;
    } else {
      for (int id : inc)
        if (g.edges[static_cast<std::size_t>(id)].type == EdgeType::E1Inf &&
            flag_monodromy(g, {id, i}, ws).trivial(k))
          return GraphClass::Irregular;
    }
  }
  return GraphClass::Regular;
}

EdgePolicies EdgePolicies::defaults() {
  EdgePolicies p;
  p.group_order = [](const Edge& e, const WeightSystem&) -> Integer {
    switch (e.type) {
      case EdgeType::E0Inf: return e.d0.get_num();
      case EdgeType::EInfInf:
        throw Error(ErrorCode::UnsupportedEdgeType, "web-internal edges have no |G_e|");
      default: {
        Integer n = e.dL().get_num();
        return n < 0 ? Integer(-n) : n;
      }
    }
  };
  p.k_e = [](const Edge& e, const WeightSystem&) -> Integer { return e.dL().get_den(); };
  return p;
}

Integer edge_group_order(const DecoratedGraph& g, int edge, const WeightSystem& ws, const EdgePolicies& policies) {
  const Edge& e = g.edges.at(static_cast<std::size_t>(edge));
  if (e.type == EdgeType::EInfInf) throw Error(ErrorCode::UnsupportedEdgeType, "web-internal edges have no |G_e|");
  Integer n = policies.group_order(e, ws);
  if (n <= 0) throw Error(ErrorCode::InvalidData, "edge group order must be positive");
  return n;
}

}  // namespace msploc
