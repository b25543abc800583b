#include "corpus.hpp"
#include "msploc/canonical.hpp"
#include "msploc/error.hpp"

#include <doctest.h>

using namespace msploc;

namespace {

const WeightSystem W6 = WeightSystem::preset("11112");

Vertex vtx(Level level, int hour = 0, int genus = 0) {
  Vertex v;
  v.level = level;
  v.hour = hour;
  v.genus = genus;
  return v;
}

Edge edge(int u, int v, EdgeType t, Rational d0, Rational dinf) {
  Edge e;
  e.u = u;
  e.v = v;
  e.type = t;
  e.d0 = d0;
  e.dinf = dinf;
  return e;
}

// 0 --E01(d)-- 1 --E1Inf(-d)-- 2, the infinity end a stable genus-1 vertex.
DecoratedGraph chain(Rational d01, Rational dinf) {
  DecoratedGraph g;
  g.add_vertex(vtx(Level::L0, 0, 1));
  g.add_vertex(vtx(Level::L1, 1));
  Vertex inf = vtx(Level::LInf, 1, 1);
  inf.dinf = -frac(1, 6);
  g.add_vertex(inf);
  g.add_edge(edge(0, 1, EdgeType::E01, d01, 0));
  g.add_edge(edge(1, 2, EdgeType::E1Inf, 0, dinf));
  return g;
}

}  // namespace

TEST_CASE("validate examples") {
  DiscreteData dd;
  dd.g = 2;
  dd.N = 1;
  dd.d0 = 3;
  DecoratedGraph g;
  Vertex v = vtx(Level::L0, 0, 2);
  v.d0 = 3;
  g.add_vertex(v);
  CHECK(validate(g, W6, dd).ok());

  DecoratedGraph h;
  h.add_vertex(vtx(Level::L1, 1, 1));
  h.add_vertex(vtx(Level::L1, 1, 1));
  h.add_edge(edge(0, 1, EdgeType::E11, 1, 0));
  DiscreteData dh{2, {}, 1, 0, 2};
  CHECK(validate(h, W6, dh).has("E11 hours equal"));
  h.vertices[1].hour = 2;
  CHECK(validate(h, W6, dh).ok());

  DecoratedGraph bad;
  bad.add_vertex(vtx(Level::L0, 0, 1));
  bad.add_vertex(vtx(Level::L1, 1, 1));
  bad.add_edge(edge(0, 1, EdgeType::E01, -frac(1, 6), 0));
  DiscreteData db{2, {}, -frac(1, 6), 0, 1};
  CHECK(validate(bad, W6, db).has("E01 degree must be positive"));
}

TEST_CASE("flag monodromy") {
  DecoratedGraph g = chain(2, frac(5, 6));
  auto m = flag_monodromy(g, {0, 0}, W6);
  CHECK(m.b == 6);
  CHECK(m.tag == FlagMonodromy::Tag::Rho);
  CHECK_FALSE(m.degeneracy_empty);
  auto inf = flag_monodromy(g, {1, 2}, W6);
  CHECK(inf.b == 1);
  CHECK(inf.tag == FlagMonodromy::Tag::Phi);
  auto one = flag_monodromy(g, {1, 1}, W6);
  CHECK(one.b == 6);
  CHECK(one.tag == FlagMonodromy::Tag::Phi);
  CHECK(flag_monodromy(chain(frac(1, 6), 1), {0, 0}, W6).degeneracy_empty);

  DecoratedGraph h;
  h.add_vertex(vtx(Level::L1, 1));
  h.add_vertex(vtx(Level::L1, 2));
  h.add_edge(edge(0, 1, EdgeType::E11, 1, 0));
  try {
    flag_monodromy(h, {0, 0}, W6);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::WrongEdgeType);
  }
}

TEST_CASE("balanced nodes and flattening") {
  DecoratedGraph g = chain(frac(1, 6), frac(1, 6));
  CHECK(is_balanced(g, 1));
  CHECK_FALSE(is_balanced(chain(frac(1, 6), frac(2, 6)), 1));
  DecoratedGraph stable_mid = g;
  stable_mid.vertices[1].genus = 1;
  CHECK_FALSE(is_balanced(stable_mid, 1));
  CHECK(flatten(stable_mid) == stable_mid);
  try {
    is_balanced(g, 0);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotAValenceTwoVertex);
  }

  DecoratedGraph f = flatten(g);
  REQUIRE(f.vertices.size() == 2);
  REQUIRE(f.edges.size() == 1);
  CHECK(f.edges[0].type == EdgeType::E0Inf);
  CHECK(f.edges[0].d0 == frac(1, 6));
  CHECK(f.edges[0].dinf == frac(1, 6));
  CHECK(flatten(f) == f);
  CHECK(classify(f, W6) == GraphClass::Irregular);
  CHECK_THROWS_AS(classify(g, W6), Error);

  // Two E0Inf edges at a level-0 vertex are never balanced.
  DecoratedGraph two;
  two.add_vertex(vtx(Level::LInf, 1, 1));
  two.add_vertex(vtx(Level::L0));
  two.add_vertex(vtx(Level::LInf, 2, 1));
  two.add_edge(edge(1, 0, EdgeType::E0Inf, 1, 1));
  two.add_edge(edge(1, 2, EdgeType::E0Inf, 1, 1));
  CHECK_FALSE(is_balanced(two, 1));
}

TEST_CASE("flatten properties on random graphs") {
  corpus::Generator gen(2024);
  for (int i = 0; i < 60; ++i) {
    auto s = gen.with_balanced(5);
    DecoratedGraph f = flatten(s.graph);
    CHECK(is_flat(f));
    CHECK(flatten(f) == f);
    CHECK(f.total_d0() == s.graph.total_d0());
    CHECK(f.total_dinf() == s.graph.total_dinf());
    CHECK(f.total_genus() == s.graph.total_genus());
    CHECK(validate(f, s.ws, s.dd).ok());
  }
}

TEST_CASE("classify examples") {
  DecoratedGraph single;
  single.add_vertex(vtx(Level::L0, 0, 1));
  CHECK(classify(single, W6) == GraphClass::Regular);

  // A 4-cycle of unstable level-1 / level-infinity points.
  DecoratedGraph loop;
  loop.add_vertex(vtx(Level::L1, 1));
  loop.add_vertex(vtx(Level::L1, 2));
  loop.add_vertex(vtx(Level::L1, 3));
  loop.add_edge(edge(0, 1, EdgeType::E11, 1, 0));
  loop.add_edge(edge(1, 2, EdgeType::E11, 1, 0));
  loop.add_edge(edge(2, 0, EdgeType::E11, 1, 0));
  CHECK(classify(loop, W6) == GraphClass::PureLoop);

  // Stable infinity vertex with admissible flag monodromy b = 1.
  DecoratedGraph reg = chain(1, frac(5, 6));
  CHECK(classify(reg, W6) == GraphClass::Regular);
  // b = 3 is not admissible.
  DecoratedGraph irr = chain(1, frac(3, 6));
  CHECK(classify(irr, W6) == GraphClass::Irregular);
}

TEST_CASE("edge group order defaults") {
  DecoratedGraph h;
  h.add_vertex(vtx(Level::L1, 1));
  h.add_vertex(vtx(Level::L1, 2));
  h.add_edge(edge(0, 1, EdgeType::E11, 1, 0));
  h.add_edge(edge(0, 1, EdgeType::E11, 3, 0));
  CHECK(edge_group_order(h, 0, W6) == 1);
  CHECK(edge_group_order(h, 1, W6) == 3);
  CHECK(edge_group_order(chain(1, 1), 0, W6) == 1);
  DecoratedGraph w;
  w.add_vertex(vtx(Level::LInf, 1));
  w.add_vertex(vtx(Level::LInf, 2));
  w.add_edge(edge(0, 1, EdgeType::EInfInf, 1, 0));
  CHECK_THROWS_AS(edge_group_order(w, 0, W6), Error);
}

TEST_CASE("automorphisms examples") {
  DecoratedGraph one;
  one.add_vertex(vtx(Level::L0, 0, 1));
  CHECK(automorphism_order(one) == 1);

  DecoratedGraph par;
  par.add_vertex(vtx(Level::L1, 1));
  par.add_vertex(vtx(Level::L1, 2));
  par.add_edge(edge(0, 1, EdgeType::E11, 1, 0));
  par.add_edge(edge(0, 1, EdgeType::E11, 1, 0));
  CHECK(automorphism_order(par) == 2);
  CHECK(brute_automorphism_order(par) == 2);

  DecoratedGraph path;
  path.add_vertex(vtx(Level::L1, 1));
  path.add_vertex(vtx(Level::L1, 2));
  path.add_vertex(vtx(Level::L1, 1));
  path.add_edge(edge(0, 1, EdgeType::E11, 1, 0));
  path.add_edge(edge(1, 2, EdgeType::E11, 2, 0));
  CHECK(automorphism_order(path) == 1);
  CHECK(brute_automorphism_order(path) == 1);
  path.edges[1].d0 = 1;
  CHECK(automorphism_order(path) == 2);
}

TEST_CASE("canonical form agrees with brute force") {
  corpus::Generator gen(31337);
  std::vector<DecoratedGraph> gs;
  for (int i = 0; i < 80; ++i) gs.push_back(gen.valid(5, 3).graph);
  for (const auto& g : gs) {
    CHECK(automorphism_order(g) == brute_automorphism_order(g));
    auto h = corpus::shuffled(g, gen.rng());
    CHECK(canonical_form(h) == canonical_form(g));
    CHECK(canonical_relabel(h) == canonical_relabel(g));
  }
  for (std::size_t i = 0; i + 1 < gs.size(); ++i)
    CHECK((canonical_form(gs[i]) == canonical_form(gs[i + 1])) == brute_isomorphic(gs[i], gs[i + 1]));
}
