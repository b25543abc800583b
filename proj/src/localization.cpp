#include "msploc/localization.hpp"

#include "msploc/canonical.hpp"
#include "msploc/enumerate.hpp"
#include "msploc/error.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace msploc {

namespace {

const Edge& edge_at(const DecoratedGraph& g, int id) {
  if (id < 0 || id >= static_cast<int>(g.edges.size())) throw Error(ErrorCode::InvalidGraph, "no edge " + std::to_string(id));
  return g.edges[static_cast<std::size_t>(id)];
}

const Vertex& vertex_at(const DecoratedGraph& g, int id) {
  if (id < 0 || id >= static_cast<int>(g.vertices.size()))
    throw Error(ErrorCode::InvalidGraph, "no vertex " + std::to_string(id));
  return g.vertices[static_cast<std::size_t>(id)];
}

Polynomial T(int alpha) { return Polynomial::variable(Variable::equiv(alpha)); }

int int_degree(const Rational& d, const char* what) {
  if (!is_integer(d) || d <= 0) throw Error(ErrorCode::InvalidGraph, std::string(what) + " degree must be a positive integer");
  return static_cast<int>(to_int64(d.get_num()));
}

void require_on_edge(const Edge& e, int v) {
  if (v != e.u && v != e.v) throw Error(ErrorCode::InvalidGraph, "flag vertex not on edge");
}

// Accumulates a product as a numerator and a denominator polynomial.
struct Product {
  Polynomial num{1};
  Polynomial den{1};
  void mul(const Polynomial& p) { num *= p; }
  void div(const Polynomial& p) { den *= p; }
  RatFunc value() const { return RatFunc(num, den); }
};

}  // namespace

std::string to_string(RhoFlagMode m) {
  switch (m) {
    case RhoFlagMode::Keyed: return "keyed";
    case RhoFlagMode::LiteralPrint: return "literal";
    case RhoFlagMode::Suppressed: return "suppressed";
  }
  return "?";
}

std::string to_string(E11Numerator m) { return m == E11Numerator::Symmetric ? "symmetric" : "as-printed"; }

std::string to_string(E01Range m) { return m == E01Range::FinalDisplay ? "final" : "pushforward"; }

RhoFlagMode parse_rho_flag_mode(const std::string& s) {
  for (auto m : {RhoFlagMode::Keyed, RhoFlagMode::LiteralPrint, RhoFlagMode::Suppressed})
    if (to_string(m) == s) return m;
  throw Error(ErrorCode::ConfigInvalid, "unknown rho flag mode '" + s + "'");
}

E11Numerator parse_e11_numerator(const std::string& s) {
  for (auto m : {E11Numerator::Symmetric, E11Numerator::AsPrinted})
    if (to_string(m) == s) return m;
  throw Error(ErrorCode::ConfigInvalid, "unknown E11 numerator '" + s + "'");
}

E01Range parse_e01_range(const std::string& s) {
  for (auto m : {E01Range::FinalDisplay, E01Range::PushforwardDisplay})
    if (to_string(m) == s) return m;
  throw Error(ErrorCode::ConfigInvalid, "unknown E01 range '" + s + "'");
}

std::string to_string(Owner::Kind k) {
  switch (k) {
    case Owner::Kind::GromovWitten: return "GW";
    case Owner::Kind::Hodge: return "Hodge";
    case Owner::Kind::Z: return "Z";
    case Owner::Kind::Web: return "Web";
  }
  return "?";
}

int alpha_end(const DecoratedGraph& g, int edge) {
  const Edge& e = edge_at(g, edge);
  switch (e.type) {
    case EdgeType::E01: return e.v;
    case EdgeType::E1Inf: return e.u;
    case EdgeType::E11: return e.u;
    default: throw Error(ErrorCode::UnsupportedEdgeType, "no level-1 end on " + to_string(e.type) + " edge");
  }
}

DeltaFlags delta_flags(const DecoratedGraph& g, int edge, int vprime, const Conventions& conv) {
  const Edge& e = edge_at(g, edge);
  require_on_edge(e, vprime);
  if (e.type != EdgeType::E11 && vprime != alpha_end(g, edge))
    throw Error(ErrorCode::InvalidGraph, "v' must be the level-1 end of edge " + std::to_string(edge));
  const int v = e.other(vprime);
  DeltaFlags f;
  f.delta = g.vertex_class(v) == VertexClass::V01 ? -1 : 0;
  f.delta_prime = g.vertex_class(vprime) == VertexClass::V01 ? -1 : 0;
  switch (conv.rho_flags) {
    case RhoFlagMode::Keyed:
      f.delta_rho = f.delta;
      f.delta_rho_prime = f.delta_prime;
      break;
    case RhoFlagMode::LiteralPrint:
      f.delta_rho = f.delta;
      f.delta_rho_prime = f.delta;
      break;
    case RhoFlagMode::Suppressed: break;
  }
  return f;
}

Variable hyperplane_variable(const DecoratedGraph& g, int edge) {
  const Edge& e = edge_at(g, edge);
  if (e.type == EdgeType::E01 && g.vertex_class(e.u) == VertexClass::V02) {
    auto inc = g.incident(e.u);
    return Variable::hyperplane(inc.front());
  }
  return Variable::hyperplane(edge);
}

RatFunc tangent_weight(const DecoratedGraph& g, const Flag& flag, const LocalizationContext& ctx) {
  const Edge& e = edge_at(g, flag.edge);
  require_on_edge(e, flag.vertex);
  const Rational d = e.dL();
  const int k = ctx.ws.k();
  switch (e.type) {
    case EdgeType::E01: {
      Polynomial s = (Polynomial::variable(hyperplane_variable(g, flag.edge)) + T(vertex_at(g, e.v).hour)) * (1 / d);
      return flag.vertex == e.u ? s : -s;
    }
    case EdgeType::E1Inf: {
      const Polynomial t = T(vertex_at(g, e.u).hour);
      if (g.vertex_class(e.v) == VertexClass::V01) {
        Polynomial w = t * frac(k, 1) * (1 / (k * d + 1));
        return flag.vertex == e.v ? w : -w;
      }
      if (flag.vertex == e.u) return t * (-1 / d);
      const Integer ke = ctx.conventions.policies.k_e(e, ctx.ws);
      return t * (1 / (Rational(ke) * d));
    }
    case EdgeType::E11: {
      const int here = vertex_at(g, flag.vertex).hour;
      const int there = vertex_at(g, e.other(flag.vertex)).hour;
      return (T(there) - T(here)) * (1 / d);
    }
    default:
      throw Error(ErrorCode::UnsupportedEdgeType, "no tangent weight on " + to_string(e.type) + " edge");
  }
}

RatFunc edge_contribution(const DecoratedGraph& g, int edge, const LocalizationContext& ctx, std::optional<int> vprime) {
  const Edge& e = edge_at(g, edge);
  const WeightSystem& ws = ctx.ws;
  const int k = ws.k();
  Product p;
  switch (e.type) {
    case EdgeType::E01: {
      const int d = int_degree(e.dL(), "E01");
      const int alpha = vertex_at(g, e.v).hour;
      const DeltaFlags f = delta_flags(g, edge, e.v, ctx.conventions);
      const int D = f.delta + f.delta_rho;
      const int Dp = f.delta_prime + f.delta_rho_prime;
      const Polynomial h = Polynomial::variable(hyperplane_variable(g, edge));
      const Polynomial t = T(alpha);
      const Polynomial s = (h + t) * frac(1, d);
      int lo = 1, hi = k * d - 1 - Dp;
      if (ctx.conventions.e01_range == E01Range::PushforwardDisplay) {
        lo = 1 + D;
        hi = k * d - 1 - f.delta - f.delta_rho_prime;
      }
      const Polynomial hshift = h * (Rational(-k) + frac(Dp, d));
      for (int j = lo; j <= hi; ++j) p.mul(hshift + s * Rational(j));
      for (int ai : ws.a())
        for (int j = 1; j <= ai * d; ++j) p.div(h * Rational(ai) - s * Rational(j));
      for (int j = 1; j <= d; ++j) p.div(s * Rational(j));
      for (int beta = 1; beta <= ctx.N; ++beta) {
        if (beta == alpha) continue;
        for (int j = 1; j <= d; ++j) p.div(s * Rational(j) + T(beta) - t);
      }
      return p.value();
    }
    case EdgeType::E1Inf: {
      const Rational d = e.dL();
      if (d >= 0) throw Error(ErrorCode::InvalidGraph, "E1Inf degree must be negative");
      const int alpha = vertex_at(g, e.u).hour;
      const DeltaFlags f = delta_flags(g, edge, e.u, ctx.conventions);
      const int Dp = f.delta_prime + f.delta_rho_prime;
      const Polynomial t = T(alpha);
      const Rational kd = k * d;
      if (!is_integer(kd)) throw Error(ErrorCode::InvalidGraph, "E1Inf degree not in (1/k)Z");
      const Rational c = Rational(k) / (kd - f.delta);
      for (int ai : ws.a()) {
        const auto top = to_int64(ceil(-ai * d)) - 1;
        for (std::int64_t j = 1; j <= top; ++j) p.mul(t * (Rational(-ai) + c * Rational(j)));
      }
      const Rational mkd = -kd;
      const auto top1 = to_int64(mkd.get_num()) + Dp;
      for (std::int64_t j = 1; j <= top1; ++j) p.div(t * (-c * Rational(j)));
      const auto top2 = to_int64(floor(-d));
      for (std::int64_t j = 1; j <= top2; ++j) p.div(t * (c * Rational(j)));
      for (int beta = 1; beta <= ctx.N; ++beta)
        if (beta != alpha) p.div(T(beta) - t);
      return p.value();
    }
    case EdgeType::E11: {
      const int d = int_degree(e.dL(), "E11");
      const int va = vprime.value_or(e.u);
      require_on_edge(e, va);
      const int alpha = vertex_at(g, va).hour;
      const int beta = vertex_at(g, e.other(va)).hour;
      const DeltaFlags f = delta_flags(g, edge, va, ctx.conventions);
      const int D = f.delta + f.delta_rho;
      const int Dp = f.delta_prime + f.delta_rho_prime;
      const Polynomial ta = T(alpha), tb = T(beta);
      Integer fact = 1;
      for (int j = 2; j <= d; ++j) fact *= j;
      Integer dpow = 1;
      for (int j = 0; j < 2 * d; ++j) dpow *= d;
      if (d % 2) dpow = -dpow;
      p.mul(Polynomial(frac(dpow, fact * fact)));
      p.div((tb - ta).pow(static_cast<unsigned>(2 * d)));
      Polynomial base = ta * Rational(k);
      if (ctx.conventions.e11_numerator == E11Numerator::AsPrinted) base -= ta * frac(D, d);
      const Polynomial step = (ta - tb) * frac(1, d);
      for (int j = 1 + Dp; j <= k * d - 1 - D; ++j) p.mul(base - step * Rational(j));
      for (int ai : ws.a())
        for (int a = 0; a <= ai * d; ++a) p.div(ta * frac(-a, d) - tb * frac(ai * d - a, d));
      for (int gamma = 1; gamma <= ctx.N; ++gamma) {
        if (gamma == alpha || gamma == beta) continue;
        for (int a = 0; a <= d; ++a) p.div(T(gamma) - ta * frac(a, d) - tb * frac(d - a, d));
      }
      return p.value();
    }
    default:
      throw Error(ErrorCode::UnsupportedEdgeType, "no edge factor for " + to_string(e.type) + " edge");
  }
}

RatFunc node_contribution(const DecoratedGraph& g, const Flag& flag, const LocalizationContext& ctx) {
  const Edge& e = edge_at(g, flag.edge);
  require_on_edge(e, flag.vertex);
  const VertexClass cls = g.vertex_class(flag.vertex);
  if (cls != VertexClass::Stable && cls != VertexClass::V02)
    throw Error(ErrorCode::InvalidGraph, "node factor needs a stable or V02 vertex");
  if (e.type == EdgeType::E0Inf || e.type == EdgeType::EInfInf)
    throw Error(ErrorCode::UnsupportedEdgeType, "no node factor on " + to_string(e.type) + " edge");
  const Vertex& v = vertex_at(g, flag.vertex);
  const WeightSystem& ws = ctx.ws;
  Polynomial r(1);
  switch (v.level) {
    case Level::L0: {
      const Polynomial h = Polynomial::variable(hyperplane_variable(g, flag.edge));
      for (int alpha = 1; alpha <= ctx.N; ++alpha) r *= h + T(alpha);
      return r;
    }
    case Level::L1: {
      const Polynomial t = T(v.hour);
      r = t.pow(6) * Rational(-ws.k() * ws.a_product());
      for (int beta = 1; beta <= ctx.N; ++beta)
        if (beta != v.hour) r *= t - T(beta);
      return r;
    }
    case Level::LInf: {
      const int b = flag_monodromy(g, flag, ws).b;
      if (!ws.is_narrow_exponent(b))
        throw Error(ErrorCode::BroadInfinityNode,
                    "node at vertex " + std::to_string(flag.vertex) + " has monodromy " + std::to_string(b));
      for (int beta = 1; beta <= ctx.N; ++beta)
        if (beta != v.hour) r *= T(beta) - T(v.hour);
      return r;
    }
  }
  return r;
}

RatFunc flag_factor(const DecoratedGraph& g, const Flag& flag, const LocalizationContext& ctx) {
  RatFunc w = tangent_weight(g, flag, ctx);
  return node_contribution(g, flag, ctx) / (w - RatFunc::variable(Variable::psi(flag.edge, flag.vertex)));
}

Variable vertex_token(const DecoratedGraph& g, int v) {
  const Vertex& x = vertex_at(g, v);
  return Variable::token((x.level == Level::L0 ? "A0_v" : "Ainf_v") + std::to_string(v));
}

Variable web_token(int web) { return Variable::token("Web_" + std::to_string(web)); }

RatFunc vertex_contribution(const DecoratedGraph& g, int v, const LocalizationContext& ctx) {
  const Vertex& x = vertex_at(g, v);
  const auto inc = g.incident(v);
  switch (g.vertex_class(v)) {
    case VertexClass::Stable: break;
    case VertexClass::V01: return tangent_weight(g, {inc[0], v}, ctx);
    case VertexClass::V02: {
      RatFunc w = tangent_weight(g, {inc[0], v}, ctx) + tangent_weight(g, {inc[1], v}, ctx);
      return node_contribution(g, {inc[0], v}, ctx) / w;
    }
    case VertexClass::V11:
    case VertexClass::V00: return RatFunc(1);
  }
  if (x.level == Level::L0) return RatFunc::variable(vertex_token(g, v));

  const Polynomial t = T(x.hour);
  Product p;
  auto hour_block = [&] {
    for (int beta = 1; beta <= ctx.N; ++beta) {
      if (beta == x.hour) continue;
      const Polynomial c = T(beta) - t;
      p.mul(hodge_euler(x.genus, c, true, v));
      p.div(c);
    }
  };
  if (x.level == Level::LInf) {
    p.mul(Polynomial::variable(vertex_token(g, v)));
    hour_block();
    return p.value();
  }
  const int k = ctx.ws.k();
  for (int ai : ctx.ws.a()) {
    const Polynomial c = t * Rational(-ai);
    p.mul(hodge_euler(x.genus, c, true, v));
    p.div(c);
  }
  const Polynomial kt = t * Rational(k);
  p.mul(kt);
  p.div(hodge_euler(x.genus, kt, false, v));
  p.div(kt.pow(static_cast<unsigned>(inc.size())));
  hour_block();
  return p.value();
}

std::vector<std::vector<int>> webs(const DecoratedGraph& g) {
  const int n = static_cast<int>(g.vertices.size());
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
    return x;
  };
  for (const Edge& e : g.edges)
    if (e.type == EdgeType::EInfInf) parent[static_cast<std::size_t>(find(e.u))] = find(e.v);
  std::map<int, std::vector<int>> comps;
  for (int i = 0; i < n; ++i)
    if (g.vertices[static_cast<std::size_t>(i)].level == Level::LInf) comps[find(i)].push_back(i);
  std::vector<std::vector<int>> out;
  for (auto& [root, members] : comps) {
    if (members.size() == 1) {
      VertexClass c = g.vertex_class(members[0]);
      if (c == VertexClass::V01 || c == VertexClass::V11) continue;
    }
    out.push_back(std::move(members));
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

std::string leg_tag(const Leg& l) { return "leg:" + l.marking.to_string(); }

// The web as a standalone graph (its vertices and EInfInf edges), with the
// E1Inf flags recorded as extra legs labelled -1.
DecoratedGraph web_subgraph(const DecoratedGraph& g, const std::vector<int>& members, const WeightSystem& ws) {
  DecoratedGraph sub;
  std::map<int, int> pos;
  for (int v : members) {
    Vertex x = g.vertices[static_cast<std::size_t>(v)];
    for (int id : g.incident(v)) {
      const Edge& e = g.edges[static_cast<std::size_t>(id)];
      if (e.type == EdgeType::E1Inf) x.legs.push_back({-1, Marking::narrow(flag_monodromy(g, {id, v}, ws).b)});
    }
    pos[v] = sub.add_vertex(std::move(x));
  }
  for (const Edge& e : g.edges)
    if (e.type == EdgeType::EInfInf && pos.count(e.u) && pos.count(e.v)) {
      Edge c = e;
      c.u = pos[e.u];
      c.v = pos[e.v];
      sub.add_edge(c);
    }
  return sub;
}

std::vector<Owner> collect_owners(const DecoratedGraph& g, const LocalizationContext& ctx) {
  std::vector<Owner> owners;
  const int n = static_cast<int>(g.vertices.size());
  for (int v = 0; v < n; ++v) {
    const Vertex& x = g.vertices[static_cast<std::size_t>(v)];
    if (x.level == Level::LInf) continue;
    const auto inc = g.incident(v);
    const bool stable = g.is_stable(v);
    Owner o;
    o.vertices = {v};
    const int npts = static_cast<int>(inc.size() + x.legs.size());
    if (x.level == Level::L0 && !stable) {
      o.kind = Owner::Kind::Z;
      o.descriptor = "Z";
      o.budget = 3;
      o.exact = true;
      o.sign = -1;
      if (!inc.empty()) o.points.push_back({std::nullopt, hyperplane_variable(g, inc[0]), "node"});
    } else if (!stable) {
      continue;
    } else if (x.level == Level::L0) {
      o.kind = Owner::Kind::GromovWitten;
      o.descriptor = "GW:g" + std::to_string(x.genus) + ":d" + to_string(x.d0) + ":n" + std::to_string(npts) +
                     ":N" + std::to_string(ctx.N);
      o.budget = npts;
      o.token = vertex_token(g, v);
      o.sign = (1 - x.genus) % 2 == 0 ? 1 : -1;
      for (int id : inc) o.points.push_back({Variable::psi(id, v), hyperplane_variable(g, id), "node"});
    } else {
      o.kind = Owner::Kind::Hodge;
      o.descriptor = "Hodge:g" + std::to_string(x.genus) + ":n" + std::to_string(npts);
      o.budget = 3 * x.genus - 3 + npts;
      o.exact = true;
      for (int id : inc) o.points.push_back({Variable::psi(id, v), std::nullopt, "node"});
    }
    for (const Leg& l : x.legs) o.points.push_back({std::nullopt, std::nullopt, leg_tag(l)});
    owners.push_back(std::move(o));
  }
  const auto ws_list = webs(g);
  for (std::size_t i = 0; i < ws_list.size(); ++i) {
    const auto& members = ws_list[i];
    const DecoratedGraph sub = web_subgraph(g, members, ctx.ws);
    const CanonicalLabeling lab = canonical_labeling(sub);
    std::vector<int> position(members.size());
    for (std::size_t p = 0; p < lab.order.size(); ++p) position[static_cast<std::size_t>(lab.order[p])] = static_cast<int>(p);
    Owner o;
    o.kind = Owner::Kind::Web;
    o.descriptor = "Web:N" + std::to_string(ctx.N) + ":" + form_id(lab.form);
    o.vertices = members;
    o.token = web_token(static_cast<int>(i));
    for (std::size_t m = 0; m < members.size(); ++m) {
      const int v = members[m];
      const Vertex& x = g.vertices[static_cast<std::size_t>(v)];
      const std::string at = "v" + std::to_string(position[m]) + ":";
      const bool stable = g.is_stable(v);
      if (stable) o.budget += 3 * x.genus - 3 + g.valence(v) + static_cast<int>(x.legs.size());
      for (int id : g.incident(v)) {
        const Edge& e = g.edges[static_cast<std::size_t>(id)];
        if (e.type != EdgeType::E1Inf) continue;
        std::optional<Variable> psi;
        if (stable) psi = Variable::psi(id, v);
        o.points.push_back({psi, std::nullopt, at + "node:b" + std::to_string(flag_monodromy(g, {id, v}, ctx.ws).b)});
      }
      for (const Leg& l : x.legs) o.points.push_back({std::nullopt, std::nullopt, at + leg_tag(l)});
    }
    owners.push_back(std::move(o));
  }
  return owners;
}

}  // namespace

GraphContribution assemble_graph(const DecoratedGraph& g, const DiscreteData& dd, const LocalizationContext& ctx) {
  if (dd.N != ctx.N) throw Error(ErrorCode::InvalidData, "context N differs from the discrete data");
  const ValidationReport rep = validate(g, ctx.ws, dd);
  if (!rep.ok()) throw Error(ErrorCode::InvalidGraph, rep.to_string());
  if (!is_flat(g)) throw Error(ErrorCode::NotFlat, "graph has a balanced node");
  for (const Edge& e : g.edges)
    if (e.type == EdgeType::E0Inf) throw Error(ErrorCode::NotRegular, "graph has an E0inf edge");
  if (degeneracy_empty(g, ctx.ws)) throw Error(ErrorCode::NotRegular, "graph has an empty degeneracy locus");
  const GraphClass cls = classify(g, ctx.ws);
  if (cls != GraphClass::Regular) throw Error(ErrorCode::NotRegular, "graph is " + to_string(cls));

  GraphContribution c;
  c.graph = g;
  const CanonicalLabeling lab = canonical_labeling(g);
  c.form = lab.form;
  c.automorphisms = lab.automorphisms;
  c.group_order = 1;
  for (int id = 0; id < static_cast<int>(g.edges.size()); ++id)
    if (g.edges[static_cast<std::size_t>(id)].type != EdgeType::EInfInf)
      c.group_order *= edge_group_order(g, id, ctx.ws, ctx.conventions.policies);
  c.prefactor = frac(1, c.automorphisms * c.group_order);

  for (int id = 0; id < static_cast<int>(g.edges.size()); ++id)
    if (g.edges[static_cast<std::size_t>(id)].type != EdgeType::EInfInf)
      c.factors.push_back({"edge " + std::to_string(id), edge_contribution(g, id, ctx)});
  for (int v = 0; v < static_cast<int>(g.vertices.size()); ++v) {
    if (g.vertices[static_cast<std::size_t>(v)].level == Level::LInf) continue;
    c.factors.push_back({"vertex " + std::to_string(v), vertex_contribution(g, v, ctx)});
  }
  for (int v = 0; v < static_cast<int>(g.vertices.size()); ++v) {
    if (!g.is_stable(v)) continue;
    for (int id : g.incident(v))
      if (g.edges[static_cast<std::size_t>(id)].type != EdgeType::EInfInf)
        c.factors.push_back({"flag " + std::to_string(id) + "@" + std::to_string(v), flag_factor(g, {id, v}, ctx)});
  }
  const auto web_list = webs(g);
  for (std::size_t i = 0; i < web_list.size(); ++i)
    c.factors.push_back({"web " + std::to_string(i), RatFunc::variable(web_token(static_cast<int>(i)))});

  c.inverse_euler = RatFunc(1);
  for (const FactorEntry& f : c.factors) c.inverse_euler *= f.value;
  c.degree = homogeneous_degree(c.inverse_euler, standard_grading());
  c.owners = collect_owners(g, ctx);
  for (const Owner& o : c.owners) c.sign *= o.sign;
  return c;
}

}  // namespace msploc
