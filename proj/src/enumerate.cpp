#include "msploc/enumerate.hpp"

#include "msploc/canonical.hpp"
#include "msploc/error.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <set>
#include <numeric>
#include <thread>

namespace msploc {

bool within_caps(const DecoratedGraph& g, const WeightSystem& ws, const EnumerationCaps& caps) {
  if (static_cast<int>(g.vertices.size()) > caps.max_vertices) return false;
  if (static_cast<int>(g.edges.size()) > caps.max_edges) return false;
  int web = 0;
  for (const Edge& e : g.edges) {
    Rational kd = e.dL() * ws.k();
    if (abs(kd) > caps.max_edge_degree_numerator) return false;
    web += e.type == EdgeType::EInfInf;
  }
  if (web > caps.max_web_edges) return false;
  for (const Vertex& v : g.vertices)
    if (v.genus > caps.max_vertex_genus) return false;
  return true;
}

bool degeneracy_empty(const DecoratedGraph& g, const WeightSystem& ws) {
  for (int i = 0; i < static_cast<int>(g.edges.size()); ++i) {
    const Edge& e = g.edges[static_cast<std::size_t>(i)];
    if (e.type != EdgeType::E01 && e.type != EdgeType::E0Inf) continue;
    if (flag_monodromy(g, {i, e.u}, ws).degeneracy_empty || flag_monodromy(g, {i, e.v}, ws).degeneracy_empty)
      return true;
  }
  return false;
}

namespace {

struct Slot {
  Level level;
  int hour;
  friend auto operator<=>(const Slot&, const Slot&) = default;
};

std::string slot_name(const Slot& s) { return to_string(s.level) + (s.hour ? "/" + std::to_string(s.hour) : ""); }

// Edge type joining two slots, with the lower level first; nullopt for
// pairs that cannot occur in a flat regular graph.
std::optional<EdgeType> join_type(const Slot& a, const Slot& b) {
  if (a.level == Level::L0 && b.level == Level::L1) return EdgeType::E01;
  if (a.level == Level::L1 && b.level == Level::L1 && a.hour != b.hour) return EdgeType::E11;
  if (a.level == Level::L1 && b.level == Level::LInf && a.hour == b.hour) return EdgeType::E1Inf;
  if (a.level == Level::LInf && b.level == Level::LInf && a.hour != b.hour) return EdgeType::EInfInf;
  return std::nullopt;
}

struct Collector {
  std::map<std::string, DecoratedGraph> regular;
  std::map<std::string, DecoratedGraph> loops;
  long candidates = 0;
};

// Shared final filter for both enumerators.
void accept(const DecoratedGraph& g, const WeightSystem& ws, const DiscreteData& dd, const EnumerationCaps& caps,
            Collector& out) {
  if (!within_caps(g, ws, caps)) return;
  if (!validate(g, ws, dd).ok()) return;
  if (!is_flat(g) || degeneracy_empty(g, ws)) return;
  GraphClass c = classify(g, ws);
  if (c == GraphClass::Irregular) return;
  auto lab = canonical_labeling(g);
  auto& bucket = c == GraphClass::Regular ? out.regular : out.loops;
  if (!bucket.count(lab.form)) bucket.emplace(lab.form, canonical_relabel(g));
}

class ShardSearch {
public:
  ShardSearch(const WeightSystem& ws, const DiscreteData& dd, const EnumerationCaps& caps, std::vector<Slot> profile,
              int shard)
      : ws_(ws), dd_(dd), caps_(caps), profile_(std::move(profile)), shard_(shard), k_(ws.k()) {
    n_ = static_cast<int>(profile_.size());
    d0_num_ = to_int64(dd.d0 * k_);
    for (int i = 0; i < n_; ++i)
      for (int j = i + 1; j < n_; ++j) {
        const Slot& a = profile_[static_cast<std::size_t>(i)];
        const Slot& b = profile_[static_cast<std::size_t>(j)];
        if (auto t = join_type(a, b)) pairs_.push_back({i, j, *t});
        else if (auto t2 = join_type(b, a)) pairs_.push_back({j, i, *t2});
      }
  }

  Collector run() {
    std::vector<int> mult(pairs_.size(), 0);
    skeletons(0, 0, mult);
    return std::move(out_);
  }

private:
  struct Pair {
    int u, v;
    EdgeType type;
  };

  // Stage 2: edge multisets over compatible vertex pairs.
  void skeletons(std::size_t idx, int m, std::vector<int>& mult) {
    if (idx == pairs_.size()) {
      if (m >= n_ - 1 && m - n_ + 1 <= dd_.g) build_skeleton(mult, m);
      return;
    }
    int room = std::min(caps_.max_edges, n_ - 1 + dd_.g) - m;
    for (int c = 0; c <= room; ++c) {
      mult[idx] = c;
      skeletons(idx + 1, m + c, mult);
    }
    mult[idx] = 0;
  }

  void build_skeleton(const std::vector<int>& mult, int m) {
    DecoratedGraph sk;
    for (const Slot& s : profile_) {
      Vertex v;
      v.level = s.level;
      v.hour = s.hour;
      sk.add_vertex(v);
    }
    long d0_edges = 0;
    int web = 0;
    for (std::size_t p = 0; p < pairs_.size(); ++p)
      for (int c = 0; c < mult[p]; ++c) {
        Edge e;
        e.u = pairs_[p].u;
        e.v = pairs_[p].v;
        e.type = pairs_[p].type;
        sk.add_edge(e);
        if (e.type == EdgeType::E01 || e.type == EdgeType::E11) d0_edges += k_;
        if (e.type == EdgeType::EInfInf) {
          d0_edges += 1;
          ++web;
        }
      }
    (void)m;
    if (!sk.connected() || web > caps_.max_web_edges || d0_edges > d0_num_) return;
    if (!seen_.insert(canonical_form(sk)).second) return;
    skel_ = sk;
    genus_.assign(static_cast<std::size_t>(n_), 0);
    genera(0, dd_.g - sk.first_betti());
  }

  // Stage 3: genus distribution.
  void genera(int v, int left) {
    if (v == n_) {
      if (left == 0) {
        leg_at_.assign(dd_.markings.size(), -1);
        legs(0);
      }
      return;
    }
    for (int gv = 0; gv <= std::min(left, caps_.max_vertex_genus); ++gv) {
      genus_[static_cast<std::size_t>(v)] = gv;
      genera(v + 1, left - gv);
    }
  }

  // Stage 4: leg placement.
  void legs(std::size_t label) {
    if (label == dd_.markings.size()) {
      degrees_start();
      return;
    }
    const Marking& mk = dd_.markings[label];
    for (int v = 0; v < n_; ++v) {
      Level lv = profile_[static_cast<std::size_t>(v)].level;
      bool ok = mk.is_rho_unit() ? lv != Level::LInf : lv != Level::L1;
      if (!ok) continue;
      leg_at_[label] = v;
      legs(label + 1);
    }
  }

  void degrees_start() {
    graph_ = skel_;
    for (int v = 0; v < n_; ++v) graph_.vertices[static_cast<std::size_t>(v)].genus = genus_[static_cast<std::size_t>(v)];
    for (std::size_t l = 0; l < leg_at_.size(); ++l)
      graph_.vertices[static_cast<std::size_t>(leg_at_[l])].legs.push_back({static_cast<int>(l), dd_.markings[l]});
    // Forced level-infinity vertex degrees.
    Rational forced = 0;
    for (int v = 0; v < n_; ++v) {
      Vertex& vx = graph_.vertices[static_cast<std::size_t>(v)];
      if (vx.level != Level::LInf) continue;
      int n = graph_.valence(v) + static_cast<int>(vx.legs.size());
      int chi = 2 * vx.genus - 2 + n;
      bool stable = vx.genus > 0 || n > 2;
      if (stable && chi <= 0) return;
      vx.dinf = stable ? Rational(-frac(chi, k_)) : Rational(0);
      forced += vx.dinf;
    }
    Rational t = (dd_.dinf - forced) * k_;
    if (!is_integer(t)) return;
    dinf_edges_left_ = 0;
    for (const Edge& e : graph_.edges) dinf_edges_left_ += e.type == EdgeType::E1Inf || e.type == EdgeType::EInfInf;
    edge_degrees(0, d0_num_, to_int64(t));
  }

  // Stage 5: edge degrees, tracking the k-scaled d0 and dinf budgets.
  void edge_degrees(std::size_t i, long d0_left, long dinf_left) {
    if (d0_left < 0 || dinf_left < dinf_edges_left_) return;
    if (i == graph_.edges.size()) {
      if (dinf_left == 0) vertex_degrees(d0_left);
      return;
    }
    Edge& e = graph_.edges[i];
    const int R = caps_.max_edge_degree_numerator;
    switch (e.type) {
      case EdgeType::E01:
      case EdgeType::E11:
        for (long d = 1; d * k_ <= R && d * k_ <= d0_left; ++d) {
          e.d0 = Rational(d);
          e.dinf = 0;
          edge_degrees(i + 1, d0_left - d * k_, dinf_left);
        }
        break;
      case EdgeType::E1Inf:
        --dinf_edges_left_;
        for (long n = 1; n <= R && n <= dinf_left; ++n) {
          e.d0 = 0;
          e.dinf = frac(n, k_);
          edge_degrees(i + 1, d0_left, dinf_left - n);
        }
        ++dinf_edges_left_;
        break;
      case EdgeType::EInfInf:
        --dinf_edges_left_;
        for (long p = 1; p <= d0_left; ++p)
          for (long q = 0; q >= -R; --q) {
            if (p - q > dinf_left) break;
            e.d0 = frac(p, k_);
            e.dinf = frac(p - q, k_);
            edge_degrees(i + 1, d0_left - p, dinf_left - (p - q));
          }
        ++dinf_edges_left_;
        break;
      default:
        break;
    }
  }

  // Stage 6: split the remaining d0 over level-0 vertices.
  void vertex_degrees(long left) {
    std::vector<int> zeros;
    for (int v = 0; v < n_; ++v)
      if (profile_[static_cast<std::size_t>(v)].level == Level::L0) zeros.push_back(v);
    if (zeros.empty()) {
      if (left == 0) emit();
      return;
    }
    compose(zeros, 0, left);
  }

  void compose(const std::vector<int>& zeros, std::size_t i, long left) {
    Vertex& v = graph_.vertices[static_cast<std::size_t>(zeros[i])];
    if (i + 1 == zeros.size()) {
      v.d0 = frac(left, k_);
      emit();
      v.d0 = 0;
      return;
    }
    for (long x = 0; x <= left; ++x) {
      v.d0 = frac(x, k_);
      compose(zeros, i + 1, left - x);
    }
    v.d0 = 0;
  }

  void emit() {
    if (++out_.candidates > caps_.max_candidates) {
      std::string prof;
      for (const Slot& s : profile_) prof += (prof.empty() ? "" : ",") + slot_name(s);
      throw Error(ErrorCode::CapExceeded,
                  "shard " + std::to_string(shard_) + " [" + prof + "] exceeded max_candidates");
    }
    accept(graph_, ws_, dd_, caps_, out_);
  }

  const WeightSystem& ws_;
  const DiscreteData& dd_;
  const EnumerationCaps& caps_;
  std::vector<Slot> profile_;
  int shard_;
  int k_;
  int n_ = 0;
  long d0_num_ = 0;
  std::vector<Pair> pairs_;
  std::set<std::string> seen_;
  DecoratedGraph skel_, graph_;
  std::vector<int> genus_, leg_at_;
  long dinf_edges_left_ = 0;
  Collector out_;
};

std::vector<Slot> all_slots(int N) {
  std::vector<Slot> s{{Level::L0, 0}};
  for (int a = 1; a <= N; ++a) s.push_back({Level::L1, a});
  for (int a = 1; a <= N; ++a) s.push_back({Level::LInf, a});
  return s;
}

// Stage 1: vertex profiles as non-decreasing slot sequences.
void profiles(const std::vector<Slot>& slots, int n, std::size_t from, std::vector<Slot>& cur,
              std::vector<std::vector<Slot>>& out) {
  if (static_cast<int>(cur.size()) == n) {
    out.push_back(cur);
    return;
  }
  for (std::size_t s = from; s < slots.size(); ++s) {
    cur.push_back(slots[s]);
    profiles(slots, n, s, cur, out);
    cur.pop_back();
  }
}

bool profile_feasible(const std::vector<Slot>& p, const DiscreteData& dd) {
  std::size_t n = p.size();
  if (n > 1)
    for (std::size_t i = 0; i < n; ++i) {
      bool partner = false;
      for (std::size_t j = 0; j < n && !partner; ++j)
        if (i != j) partner = join_type(p[i], p[j]) || join_type(p[j], p[i]);
      if (!partner) return false;
    }
  bool has0 = false, has1 = false, hasInf = false;
  for (const Slot& s : p) {
    has0 = has0 || s.level == Level::L0;
    has1 = has1 || s.level == Level::L1;
    hasInf = hasInf || s.level == Level::LInf;
  }
  for (const Marking& m : dd.markings)
    if (m.is_rho_unit() ? !(has0 || has1) : !(has0 || hasInf)) return false;
  return true;
}

EnumerationResult finish(std::vector<Collector>& parts) {
  std::map<std::string, DecoratedGraph> reg, loops;
  EnumerationResult r;
  for (auto& c : parts) {
    r.candidates += c.candidates;
    reg.merge(c.regular);
    loops.merge(c.loops);
  }
  for (auto& [f, g] : reg) r.regular.push_back(std::move(g));
  for (auto& [f, g] : loops) r.pure_loops.push_back(std::move(g));
  r.shards = static_cast<int>(parts.size());
  return r;
}

}  // namespace

EnumerationResult enumerate_flat_regular(const WeightSystem& ws, const DiscreteData& dd, const EnumerationCaps& caps,
                                         int threads) {
  dd.validate(ws);
  std::vector<std::vector<Slot>> shards;
  if (dd.d0 >= 0) {
    auto slots = all_slots(dd.N);
    for (int n = 1; n <= caps.max_vertices; ++n) {
      std::vector<std::vector<Slot>> ps;
      std::vector<Slot> cur;
      profiles(slots, n, 0, cur, ps);
      for (auto& p : ps)
        if (profile_feasible(p, dd)) shards.push_back(std::move(p));
    }
  }
  std::vector<Collector> parts(shards.size());
  std::vector<std::exception_ptr> errors(shards.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < shards.size();) {
      try {
        parts[i] = ShardSearch(ws, dd, caps, shards[i], static_cast<int>(i)).run();
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  int nt = std::max(1, std::min<int>(threads, static_cast<int>(shards.size())));
  if (nt == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nt; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return finish(parts);
}

// ------------------------------------------------------------- brute force

namespace {

class Brute {
public:
  Brute(const WeightSystem& ws, const DiscreteData& dd, const EnumerationCaps& caps)
      : ws_(ws), dd_(dd), caps_(caps), k_(ws.k()) {}

  std::vector<Collector> run() {
    if (dd_.d0 < 0) return {};
    d0_num_ = to_int64(dd_.d0 * k_);
    dinf_num_ = to_int64(dd_.dinf * k_);
    max_g_ = std::min(dd_.g, caps_.max_vertex_genus);
    inf_floor_ = -(2 * max_g_ - 2 + caps_.max_edges + static_cast<int>(dd_.markings.size()));
    for (int n = 1; n <= caps_.max_vertices; ++n) {
      g_ = DecoratedGraph();
      g_.vertices.resize(static_cast<std::size_t>(n));
      levels(0);
    }
    std::vector<Collector> out;
    out.push_back(std::move(out_));
    return out;
  }

private:
  void levels(std::size_t v) {
    if (v == g_.vertices.size()) {
      pairs_.clear();
      int n = static_cast<int>(g_.vertices.size());
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          Level a = g_.vertices[static_cast<std::size_t>(i)].level, b = g_.vertices[static_cast<std::size_t>(j)].level;
          if (a == Level::L0 && b == Level::L0) continue;
          if (static_cast<int>(a) <= static_cast<int>(b)) pairs_.push_back({i, j});
          else pairs_.push_back({j, i});
        }
      g_.edges.clear();
      edges(0);
      return;
    }
    Vertex& x = g_.vertices[v];
    x = Vertex();
    x.level = Level::L0;
    levels(v + 1);
    for (Level lv : {Level::L1, Level::LInf})
      for (int h = 1; h <= dd_.N; ++h) {
        x = Vertex();
        x.level = lv;
        x.hour = h;
        levels(v + 1);
      }
  }

  static EdgeType type_for(Level a, Level b) {
    if (a == Level::L0 && b == Level::L1) return EdgeType::E01;
    if (a == Level::L1 && b == Level::L1) return EdgeType::E11;
    if (a == Level::L1 && b == Level::LInf) return EdgeType::E1Inf;
    if (a == Level::L0 && b == Level::LInf) return EdgeType::E0Inf;
    return EdgeType::EInfInf;
  }

  // Multisets of vertex pairs as non-decreasing pair indices.
  void edges(std::size_t from) {
    if (g_.connected()) genera(0);
    if (static_cast<int>(g_.edges.size()) == caps_.max_edges) return;
    for (std::size_t p = from; p < pairs_.size(); ++p) {
      Edge e;
      e.u = pairs_[p].first;
      e.v = pairs_[p].second;
      e.type = type_for(g_.vertices[static_cast<std::size_t>(e.u)].level, g_.vertices[static_cast<std::size_t>(e.v)].level);
      g_.edges.push_back(e);
      edges(p);
      g_.edges.pop_back();
    }
  }

  void genera(std::size_t v) {
    if (v == g_.vertices.size()) {
      if (g_.total_genus() != dd_.g) return;
      for (auto& x : g_.vertices) x.legs.clear();
      legs(0);
      return;
    }
    for (int gv = 0; gv <= max_g_; ++gv) {
      g_.vertices[v].genus = gv;
      genera(v + 1);
    }
    g_.vertices[v].genus = 0;
  }

  void legs(std::size_t label) {
    if (label == dd_.markings.size()) {
      carriers_.clear();
      for (std::size_t v = 0; v < g_.vertices.size(); ++v)
        if (g_.vertices[v].level == Level::L0) carriers_.push_back({true, v});
      for (std::size_t e = 0; e < g_.edges.size(); ++e)
        if (g_.edges[e].type != EdgeType::E1Inf) carriers_.push_back({false, e});
      d0_split(0, d0_num_);
      return;
    }
    for (auto& x : g_.vertices) {
      x.legs.push_back({static_cast<int>(label), dd_.markings[label]});
      legs(label + 1);
      x.legs.pop_back();
    }
  }

  // d0 numerators over every element that may carry d0.
  void d0_split(std::size_t i, long left) {
    if (i == carriers_.size()) {
      if (left != 0) return;
      dinf_elems_.clear();
      for (std::size_t v = 0; v < g_.vertices.size(); ++v)
        if (g_.vertices[v].level == Level::LInf) dinf_elems_.push_back({true, v});
      for (std::size_t e = 0; e < g_.edges.size(); ++e)
        if (g_.edges[e].type != EdgeType::E01 && g_.edges[e].type != EdgeType::E11) dinf_elems_.push_back({false, e});
      dinf_split(0, dinf_num_);
      return;
    }
    auto [is_v, idx] = carriers_[i];
    Rational& slot = is_v ? g_.vertices[idx].d0 : g_.edges[idx].d0;
    for (long x = 0; x <= left; ++x) {
      slot = frac(x, k_);
      d0_split(i + 1, left - x);
    }
    slot = 0;
  }

  // dinf numerators: infinity vertices in [inf_floor, 0]; E1Inf and E0Inf
  // in [1, R]; EInfInf as d0 - dL with k dL in [-R, 0].
  void dinf_split(std::size_t i, long left) {
    if (i == dinf_elems_.size()) {
      if (left == 0) check();
      return;
    }
    const int R = caps_.max_edge_degree_numerator;
    auto [is_v, idx] = dinf_elems_[i];
    if (is_v) {
      for (long x = inf_floor_; x <= 0; ++x) {
        g_.vertices[idx].dinf = frac(x, k_);
        dinf_split(i + 1, left - x);
      }
      g_.vertices[idx].dinf = 0;
      return;
    }
    Edge& e = g_.edges[idx];
    if (e.type == EdgeType::EInfInf) {
      long d0n = to_int64(e.d0 * k_);
      for (long q = -R; q <= 0; ++q) {
        e.dinf = frac(d0n - q, k_);
        dinf_split(i + 1, left - (d0n - q));
      }
    } else {
      for (long x = 1; x <= R; ++x) {
        e.dinf = frac(x, k_);
        dinf_split(i + 1, left - x);
      }
    }
    e.dinf = 0;
  }

  void check() {
    ++out_.candidates;
    if (!within_caps(g_, ws_, caps_) || !validate(g_, ws_, dd_).ok()) return;
    if (!is_flat(g_) || degeneracy_empty(g_, ws_)) return;
    GraphClass c = classify(g_, ws_);
    if (c == GraphClass::Irregular) return;
    auto& kept = c == GraphClass::Regular ? regular_ : loops_;
    for (const auto& h : kept)
      if (brute_isomorphic(h, g_)) return;
    kept.push_back(g_);
    auto& bucket = c == GraphClass::Regular ? out_.regular : out_.loops;
    bucket.emplace(canonical_form(g_), canonical_relabel(g_));
  }

  const WeightSystem& ws_;
  const DiscreteData& dd_;
  const EnumerationCaps& caps_;
  int k_;
  long d0_num_ = 0, dinf_num_ = 0;
  int max_g_ = 0;
  long inf_floor_ = 0;
  DecoratedGraph g_;
  std::vector<std::pair<int, int>> pairs_;
  std::vector<std::pair<bool, std::size_t>> carriers_, dinf_elems_;
  std::vector<DecoratedGraph> regular_, loops_;
  Collector out_;
};

}  // namespace

EnumerationResult brute_force_enumerate(const WeightSystem& ws, const DiscreteData& dd, const EnumerationCaps& caps) {
  if (caps.max_vertices > 5 || caps.max_edges > 5)
    throw Error(ErrorCode::CapTooLarge, "brute force is limited to 5 vertices and 5 edges");
  dd.validate(ws);
  auto parts = Brute(ws, dd, caps).run();
  return finish(parts);
}

}  // namespace msploc
