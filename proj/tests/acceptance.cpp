// Acceptance suite: one PASS/FAIL line per criterion. A criterion passes only
// when every check holds, the corpus reaches its minimum size and the run
// stays inside its time budget.
#include "audit.hpp"
#include "corpus.hpp"
#include "decorations.hpp"

#include "msploc/canonical.hpp"
#include "msploc/enumerate.hpp"
#include "msploc/error.hpp"
#include "msploc/localization.hpp"
#include "msploc/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <set>

using namespace msploc;

namespace {

struct Verdict {
  bool ok = true;
  std::string detail;
  void require(bool cond) { ok = ok && cond; }
};

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<Verdict()> run;
};

const std::vector<std::string> kPresets{"11112", "11114", "11125"};

// Criterion 1 thresholds.
constexpr int kDimConfigs = 50;
// Criterion 2.
constexpr int kCosectionPoints = 100;
// Criterion 3.
constexpr int kFlattenCorpus = 200;
// Criterion 4.
constexpr int kCanonicalCorpus = 500;
constexpr int kCanonicalMaxVertices = 6;
// Criterion 5.
constexpr int kEnumerationConfigs = 5;
// Criterion 6.
constexpr int kDecorations = 20;
// Criteria 7 and 8.
constexpr int kSymmetryContributions = 100;
constexpr int kHomogeneityGraphs = 100;
// Criterion 9.
constexpr int kMutants = 20;
// Criterion 10.
const std::vector<int> kParallelism{1, 4, 16};

Rational random_rational(std::mt19937& rng, int lo, int hi, int max_den) {
  std::uniform_int_distribution<int> n(lo, hi), d(1, max_den);
  return frac(n(rng), d(rng));
}

// ---------------------------------------------------------------- 1

Verdict virtual_dimension_suite() {
  std::mt19937 rng(101);
  Verdict v;
  int mismatches = 0;
  for (int i = 0; i < kDimConfigs; ++i) {
    const std::string& name = kPresets[static_cast<std::size_t>(i) % kPresets.size()];
    const WeightSystem ws = WeightSystem::preset(name);
    const int k = ws.k();
    std::vector<int> narrow;
    for (int m = 1; m < k; ++m) {
      bool ok = true;
      for (char c : name) ok = ok && (m * (c - '0')) % k != 0;
      if (ok) narrow.push_back(m);
    }
    DiscreteData dd;
    dd.N = std::uniform_int_distribution<int>(1, 5)(rng);
    dd.g = std::uniform_int_distribution<int>(0, 4)(rng);
    dd.d0 = frac(std::uniform_int_distribution<int>(0, 3 * k)(rng), k);
    dd.dinf = frac(std::uniform_int_distribution<int>(0, 3 * k)(rng), k);
    const int legs = std::uniform_int_distribution<int>(0, 4)(rng);
    Rational expected = Rational(dd.N) * dd.d0 + Rational(dd.N * (1 - dd.g)) + dd.dinf + Rational(legs);
    for (int l = 0; l < legs; ++l) {
      if (rng() % 2) {
        dd.markings.push_back(Marking::rho_unit());
      } else {
        const int m = narrow[rng() % narrow.size()];
        dd.markings.push_back(Marking::narrow(m));
        expected -= frac(4 * m, k);
      }
    }
    if (virtual_dimension(ws, dd) != expected) ++mismatches;
  }
  v.require(mismatches == 0);
  v.detail = std::to_string(kDimConfigs) + " configurations, " + std::to_string(mismatches) + " mismatches";
  return v;
}

// ---------------------------------------------------------------- 2

Verdict cosection_suite() {
  std::mt19937 rng(202);
  Verdict v;
  int points = 0, nonzero = 0, off_direction_nonzero = 0;
  for (const auto& name : kPresets) {
    const WeightSystem ws = WeightSystem::preset(name);
    for (int i = 0; i < kCosectionPoints; ++i) {
      std::array<Rational, 5> phi, euler, other;
      for (std::size_t j = 0; j < 5; ++j) {
        phi[j] = random_rational(rng, -9, 9, 7);
        euler[j] = Rational(ws.a()[j]) * phi[j];
        other[j] = random_rational(rng, -9, 9, 7);
      }
      const Rational rho = random_rational(rng, -9, 9, 7);
      ++points;
      if (cosection_pairing(ws, phi, rho, euler, -Rational(ws.k()) * rho) != 0) ++nonzero;
      if (cosection_pairing(ws, phi, rho, other, random_rational(rng, -9, 9, 7)) != 0) ++off_direction_nonzero;
    }
  }
  v.require(nonzero == 0);
  v.require(points >= 3 * kCosectionPoints);
  // The pairing must not vanish identically away from the Euler direction.
  v.require(off_direction_nonzero > 0);
  v.detail = std::to_string(points) + " points, " + std::to_string(nonzero) + " non-vanishing";
  return v;
}

// ---------------------------------------------------------------- 3

Verdict flattening_suite() {
  corpus::Generator gen(303);
  Verdict v;
  int bad = 0, balanced_total = 0;
  for (int i = 0; i < kFlattenCorpus; ++i) {
    const auto s = gen.with_balanced(6);
    balanced_total += static_cast<int>(balanced_vertices(s.graph).size());
    const DecoratedGraph f = flatten(s.graph);
    const bool ok = !balanced_vertices(s.graph).empty() && balanced_vertices(f).empty() && is_flat(f) && flatten(f) == f &&
                    f.total_d0() == s.graph.total_d0() && f.total_dinf() == s.graph.total_dinf() &&
                    f.total_genus() == s.graph.total_genus() && validate(f, s.ws, s.dd).ok();
    if (!ok) ++bad;
  }
  v.require(bad == 0);
  v.detail = std::to_string(kFlattenCorpus) + " graphs with " + std::to_string(balanced_total) + " balanced nodes, " +
             std::to_string(bad) + " failures";
  return v;
}

// ---------------------------------------------------------------- 4

Verdict canonical_suite() {
  corpus::Generator gen(404);
  Verdict v;
  std::vector<DecoratedGraph> gs;
  std::set<std::string> forms;
  while (static_cast<int>(gs.size()) < kCanonicalCorpus) {
    auto g = gen.valid(kCanonicalMaxVertices, 3).graph;
    if (forms.insert(canonical_form(g)).second) gs.push_back(std::move(g));
  }
  int bad = 0, iso_pairs = 0;
  for (std::size_t i = 0; i < gs.size(); ++i) {
    const DecoratedGraph& g = gs[i];
    const DecoratedGraph h = corpus::shuffled(g, gen.rng());
    if (automorphism_order(g) != brute_automorphism_order(g)) ++bad;
    if (canonical_form(h) != canonical_form(g) || !brute_isomorphic(g, h)) ++bad;
    // Distinct forms must be non-isomorphic under brute force.
    const DecoratedGraph& other = gs[(i + 1) % gs.size()];
    if (brute_isomorphic(g, other)) ++bad;
    ++iso_pairs;
  }
  v.require(bad == 0);
  v.detail = std::to_string(gs.size()) + " distinct graphs (<= " + std::to_string(kCanonicalMaxVertices) + " vertices), " +
             std::to_string(iso_pairs) + " pair checks, " + std::to_string(bad) + " disagreements";
  return v;
}

// ---------------------------------------------------------------- 5

struct SmallConfig {
  const char* ws;
  int g;
  Rational d0, dinf;
  int N;
  int max_vertices, max_edges, max_degree;
  std::vector<Marking> markings;
};

std::set<std::string> form_set(const std::vector<DecoratedGraph>& gs) {
  std::set<std::string> s;
  for (const auto& g : gs) s.insert(canonical_form(g));
  return s;
}

Verdict enumeration_suite() {
  const std::vector<SmallConfig> configs{
      {"11112", 0, 1, 0, 1, 3, 3, 6, {}},
      {"11112", 0, 2, 0, 2, 3, 3, 12, {}},
      {"11125", 1, 0, 1, 1, 3, 3, 10, {}},
      {"11112", 1, 1, 0, 2, 3, 3, 6, {}},
      {"11112", 0, 1, 0, 2, 3, 3, 6, {Marking::rho_unit()}},
      {"11112", 2, 0, frac(2, 6), 1, 3, 3, 6, {}},
      {"11112", 1, 0, frac(4, 6), 1, 3, 3, 6, {}},
  };
  Verdict v;
  int agree = 0;
  std::size_t graphs = 0;
  for (const auto& c : configs) {
    const WeightSystem ws = WeightSystem::preset(c.ws);
    DiscreteData dd;
    dd.g = c.g;
    dd.d0 = c.d0;
    dd.dinf = c.dinf;
    dd.N = c.N;
    dd.markings = c.markings;
    EnumerationCaps caps;
    caps.max_vertices = c.max_vertices;
    caps.max_edges = c.max_edges;
    caps.max_edge_degree_numerator = c.max_degree;
    const auto a = enumerate_flat_regular(ws, dd, caps, 4);
    const auto b = brute_force_enumerate(ws, dd, caps);
    if (form_set(a.regular) == form_set(b.regular) && form_set(a.pure_loops) == form_set(b.pure_loops) && !a.regular.empty())
      ++agree;
    graphs += a.regular.size();
  }
  v.require(agree == static_cast<int>(configs.size()));
  v.require(agree >= kEnumerationConfigs);
  v.detail = std::to_string(agree) + "/" + std::to_string(configs.size()) + " configurations agree, " + std::to_string(graphs) +
             " regular graphs";
  return v;
}

// ---------------------------------------------------------------- 6

Verdict formula_audit_suite() {
  Verdict v;
  audit::Outcome out;
  std::size_t decorations = 0;
  // (edge type, delta at v, delta at v') combinations exercised.
  std::set<std::tuple<int, int, int>> combos;
  for (const auto& name : kPresets) {
    const WeightSystem ws = WeightSystem::preset(name);
    for (const auto& dec : decorations::all(ws.k())) {
      ++decorations;
      audit::decoration(dec, ws, out);
      const Edge& e = dec.graph.edges[0];
      combos.insert({static_cast<int>(e.type), oracle::leaf(dec.graph, e.u), oracle::leaf(dec.graph, e.v)});
    }
  }
  v.require(out.failures.empty());
  v.require(static_cast<int>(decorations) >= kDecorations);
  // Every delta-flag combination on each of E01, E1Inf and E11.
  v.require(combos.size() == 12);
  v.detail = std::to_string(decorations) + " decorations, " + std::to_string(combos.size()) + " delta combinations, " +
             std::to_string(out.checks) + " comparisons, " + std::to_string(out.failures.size()) + " failures";
  if (!out.failures.empty()) v.detail += "; first: " + out.failures.front();
  return v;
}

// ---------------------------------------------------------------- 7, 8

struct Family {
  WeightSystem ws;
  DiscreteData dd;
  std::vector<DecoratedGraph> graphs;
};

const std::vector<Family>& families() {
  static const std::vector<Family> fams = [] {
    struct Setup {
      const char* ws;
      int N, g;
      Rational d0, dinf;
    };
    const std::vector<Setup> specs{
        {"11112", 2, 0, 2, 0}, {"11112", 2, 0, 3, 0}, {"11125", 3, 1, 0, 1}, {"11125", 2, 1, 0, 1}, {"11114", 2, 1, 0, 1},
        {"11112", 2, 1, 1, 0}, {"11112", 3, 0, 1, 0}, {"11114", 2, 0, 1, 0}, {"11125", 2, 0, 1, 0},
    };
    std::vector<Family> out;
    for (const auto& s : specs) {
      Family f{WeightSystem::preset(s.ws), {}, {}};
      f.dd.N = s.N;
      f.dd.g = s.g;
      f.dd.d0 = s.d0;
      f.dd.dinf = s.dinf;
      EnumerationCaps caps;
      caps.max_vertices = 3;
      caps.max_edges = 3;
      caps.max_edge_degree_numerator = 12;
      f.graphs = enumerate_flat_regular(f.ws, f.dd, caps, 4).regular;
      out.push_back(std::move(f));
    }
    return out;
  }();
  return fams;
}

Verdict symmetry_suite() {
  std::mt19937 rng(707);
  Verdict v;
  int contributions = 0, relabel_bad = 0, e11 = 0, e11_bad = 0;
  for (const auto& f : families()) {
    const LocalizationContext ctx{f.ws, f.dd.N, {}};
    for (const auto& g : f.graphs) {
      const GraphContribution gc = assemble_graph(g, f.dd, ctx);
      std::vector<int> sigma(static_cast<std::size_t>(f.dd.N));
      std::iota(sigma.begin(), sigma.end(), 1);
      do std::shuffle(sigma.begin(), sigma.end(), rng);
      while (f.dd.N > 1 && std::is_sorted(sigma.begin(), sigma.end()));
      DecoratedGraph h = g;
      for (auto& x : h.vertices)
        if (x.level != Level::L0) x.hour = sigma[static_cast<std::size_t>(x.hour - 1)];
      Bindings b;
      for (int a = 1; a <= f.dd.N; ++a)
        b[Variable::equiv(a)] = RatFunc::variable(Variable::equiv(sigma[static_cast<std::size_t>(a - 1)]));
      ++contributions;
      if (!(substitute(gc.inverse_euler, b) == assemble_graph(h, f.dd, ctx).inverse_euler)) ++relabel_bad;
      for (int id = 0; id < static_cast<int>(g.edges.size()); ++id) {
        const Edge& e = g.edges[static_cast<std::size_t>(id)];
        if (e.type != EdgeType::E11) continue;
        // The literal rho-flag reading uses delta(v) for both ends and is
        // orientation-dependent by construction; it is not a library default.
        for (auto mode : {RhoFlagMode::Keyed, RhoFlagMode::Suppressed}) {
          LocalizationContext c = ctx;
          c.conventions.rho_flags = mode;
          ++e11;
          if (!(edge_contribution(g, id, c, e.u) == edge_contribution(g, id, c, e.v))) ++e11_bad;
        }
      }
    }
  }
  v.require(relabel_bad == 0 && e11_bad == 0);
  v.require(contributions >= kSymmetryContributions);
  v.require(e11 > 0);
  v.detail = std::to_string(contributions) + " relabelled contributions (" + std::to_string(relabel_bad) + " failures), " +
             std::to_string(e11) + " E11 orientation checks (" + std::to_string(e11_bad) + " failures)";
  return v;
}

Verdict homogeneity_suite() {
  Verdict v;
  int graphs = 0, bad = 0;
  const Grading grading = standard_grading();
  for (const auto& f : families()) {
    const LocalizationContext ctx{f.ws, f.dd.N, {}};
    for (const auto& g : f.graphs) {
      ++graphs;
      const GraphContribution gc = assemble_graph(g, f.dd, ctx);
      std::int64_t sum = 0;
      bool ok = true;
      for (const auto& fac : gc.factors) {
        const auto d = homogeneous_degree(fac.value, grading);
        ok = ok && d.has_value();
        if (d) sum += *d;
      }
      const auto total = homogeneous_degree(gc.inverse_euler, grading);
      ok = ok && total && *total == sum && gc.degree && *gc.degree == sum;
      if (!ok) ++bad;
    }
  }
  v.require(bad == 0);
  v.require(graphs >= kHomogeneityGraphs);
  v.detail = std::to_string(graphs) + " graphs, " + std::to_string(bad) + " non-homogeneous or non-additive";
  return v;
}

// ---------------------------------------------------------------- 9

bool has_broad_infinity(const DecoratedGraph& g, const WeightSystem& ws) {
  for (int id = 0; id < static_cast<int>(g.edges.size()); ++id) {
    const Edge& e = g.edges[static_cast<std::size_t>(id)];
    for (int end : {e.u, e.v}) {
      const Vertex& x = g.vertices[static_cast<std::size_t>(end)];
      if (x.level != Level::LInf || !g.is_stable(end)) continue;
      if (e.type != EdgeType::E1Inf && e.type != EdgeType::E0Inf) continue;
      if (!ws.is_narrow_exponent(flag_monodromy(g, {id, end}, ws).b)) return true;
    }
  }
  return false;
}

Verdict pruning_suite() {
  corpus::Generator gen(909);
  Verdict v;
  int e0inf = 0, broad = 0, bad = 0;
  const int half = kMutants / 2;
  for (long tries = 0; (e0inf < half || broad < half) && tries < 200000; ++tries) {
    auto s = gen.valid(5, 2, true);
    if (!is_flat(s.graph)) continue;
    const bool has_e0inf = std::any_of(s.graph.edges.begin(), s.graph.edges.end(),
                                       [](const Edge& e) { return e.type == EdgeType::E0Inf; });
    const bool is_broad = !has_e0inf && has_broad_infinity(s.graph, s.ws);
    if (has_e0inf ? e0inf >= half : (!is_broad || broad >= half)) continue;
    (has_e0inf ? e0inf : broad)++;
    bool refused = false;
    try {
      assemble_graph(s.graph, s.dd, LocalizationContext{s.ws, s.dd.N, {}});
    } catch (const Error&) {
      refused = true;
    }
    if (classify(s.graph, s.ws) != GraphClass::Irregular || !refused) ++bad;
  }
  v.require(bad == 0);
  v.require(e0inf + broad >= kMutants);
  v.detail = std::to_string(e0inf) + " E0inf + " + std::to_string(broad) + " broad-infinity graphs, " + std::to_string(bad) +
             " not pruned";
  return v;
}

// ---------------------------------------------------------------- 10

Verdict determinism_suite() {
  Verdict v;
  nlohmann::json j{{"weights", "11112"}, {"N", 2},      {"genus", 0},
                   {"d0", "3"},          {"dinf", "0"}, {"caps", {{"max_vertices", 3}, {"max_edges", 3}, {"max_edge_degree_numerator", 12}}},
                   {"oracle", "zero"},   {"formats", {"json", "csv", "dot"}}};
  std::optional<std::map<std::string, std::string>> first;
  std::size_t bytes = 0;
  int identical = 0;
  for (int threads : kParallelism) {
    j["threads"] = threads;
    PipelineOptions opt;
    opt.evaluate = true;
    opt.use_cache = false;
    const auto r = run_pipeline(parse_config(j), opt);
    if (!first) {
      first = r.artifacts;
      for (const auto& [name, content] : r.artifacts) bytes += content.size();
      ++identical;
    } else if (r.artifacts == *first) {
      ++identical;
    }
  }
  v.require(identical == static_cast<int>(kParallelism.size()));
  v.require(first && first->count("graphs.json") && first->count("contributions.json") && first->count("summary.csv"));
  v.detail = std::to_string(identical) + "/" + std::to_string(kParallelism.size()) + " runs identical at parallelism 1/4/16, " +
             std::to_string(first ? first->size() : 0) + " files, " + std::to_string(bytes) + " bytes";
  return v;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "virtual-dimension suite", 1, virtual_dimension_suite},
      {2, "cosection Euler identity", 1, cosection_suite},
      {3, "flattening", 10, flattening_suite},
      {4, "automorphism and canonical-form oracle", 60, canonical_suite},
      {5, "enumeration oracle equivalence", 120, enumeration_suite},
      {6, "formula audits", 30, formula_audit_suite},
      {7, "symmetry suite", 30, symmetry_suite},
      {8, "homogeneity suite", 30, homogeneity_suite},
      {9, "pruning", 5, pruning_suite},
      {10, "determinism", 300, determinism_suite},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v.ok = false;
      v.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.budget_seconds;
    const bool pass = v.ok && in_time;
    failed += !pass;
    std::printf("%s [%d] %s: %s (%.2f s, limit %.0f s%s)\n", pass ? "PASS" : "FAIL", c.id, c.name, v.detail.c_str(), secs,
                c.budget_seconds, in_time ? "" : ", over budget");
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
