#include "msploc/canonical.hpp"

#include "msploc/error.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <map>
#include <numeric>

namespace msploc {

namespace {

std::string vertex_key(const Vertex& v) {
  std::vector<Leg> legs = v.legs;
  std::sort(legs.begin(), legs.end(), [](const Leg& a, const Leg& b) { return a.label < b.label; });
  std::string s = "L" + to_string(v.level) + "|H" + std::to_string(v.hour) + "|G" + std::to_string(v.genus) +
                  "|D" + to_string(v.d0) + "," + to_string(v.dinf) + "|";
  for (const Leg& l : legs) s += std::to_string(l.label) + ":" + l.marking.to_string() + ";";
  return s;
}

std::string edge_key(const Edge& e) { return to_string(e.type) + "," + to_string(e.d0) + "," + to_string(e.dinf); }

std::vector<int> rank_of(const std::vector<std::string>& keys) {
  std::vector<std::string> sorted = keys;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<int> r(keys.size());
  for (std::size_t i = 0; i < keys.size(); ++i)
    r[i] = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), keys[i]) - sorted.begin());
  return r;
}

Integer factorial(long n) {
  Integer f = 1;
  for (long i = 2; i <= n; ++i) f *= i;
  return f;
}

class Canonizer {
public:
  explicit Canonizer(const DecoratedGraph& g) : g_(g), n_(static_cast<int>(g.vertices.size())) {
    std::vector<std::string> vk, ek;
    for (const auto& v : g.vertices) vk.push_back(vertex_key(v));
    for (const auto& e : g.edges) ek.push_back(edge_key(e));
    vkey_ = vk;
    ekey_ = ek;
    vrank_ = rank_of(vk);
    erank_ = rank_of(ek);
    adj_.resize(static_cast<std::size_t>(n_));
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
      adj_[static_cast<std::size_t>(g.edges[i].u)].push_back({g.edges[i].v, erank_[i]});
      adj_[static_cast<std::size_t>(g.edges[i].v)].push_back({g.edges[i].u, erank_[i]});
    }
  }

  CanonicalLabeling run() {
    CanonicalLabeling out;
    if (n_ == 0) {
      out.form = "empty";
      out.automorphisms = 1;
      return out;
    }
    search(refine(vrank_));
    out.form = best_;
    out.order = best_order_;
    out.automorphisms = Integer(best_count_) * parallel_factor();
    return out;
  }

private:
  // Equitable refinement: repeatedly split colour classes by the multiset of
  // (neighbour colour, edge decoration).
  std::vector<int> refine(std::vector<int> colors) const {
    int classes = count_classes(colors);
    for (;;) {
      std::vector<std::string> sig(static_cast<std::size_t>(n_));
      for (int v = 0; v < n_; ++v) {
        std::vector<std::pair<int, int>> nb;
        for (auto [w, er] : adj_[static_cast<std::size_t>(v)]) nb.emplace_back(colors[static_cast<std::size_t>(w)], er);
        std::sort(nb.begin(), nb.end());
        std::string s = pad(colors[static_cast<std::size_t>(v)]) + ":";
        for (auto [c, er] : nb) s += pad(c) + "." + pad(er) + ",";
        sig[static_cast<std::size_t>(v)] = std::move(s);
      }
      colors = rank_of(sig);
      int c = count_classes(colors);
      if (c == classes) return colors;
      classes = c;
    }
  }

  static std::string pad(int x) {
    std::string s = std::to_string(x);
    return std::string(s.size() < 6 ? 6 - s.size() : 0, '0') + s;
  }

  static int count_classes(const std::vector<int>& c) {
    return c.empty() ? 0 : *std::max_element(c.begin(), c.end()) + 1;
  }

  void search(const std::vector<int>& colors) {
    if (count_classes(colors) == n_) {
      leaf(colors);
      return;
    }
    // First non-singleton cell.
    std::vector<int> size(static_cast<std::size_t>(n_), 0);
    for (int c : colors) ++size[static_cast<std::size_t>(c)];
    int cell = 0;
    while (size[static_cast<std::size_t>(cell)] < 2) ++cell;
    for (int x = 0; x < n_; ++x) {
      if (colors[static_cast<std::size_t>(x)] != cell) continue;
      std::vector<int> next(static_cast<std::size_t>(n_));
      for (int v = 0; v < n_; ++v) {
        int c = colors[static_cast<std::size_t>(v)];
        next[static_cast<std::size_t>(v)] = 2 * c + (c == cell && v != x ? 1 : 0);
      }
      std::vector<std::string> keys;
      for (int c : next) keys.push_back(pad(c));
      search(refine(rank_of(keys)));
    }
  }

  void leaf(const std::vector<int>& colors) {
    std::vector<int> order(static_cast<std::size_t>(n_));
    for (int v = 0; v < n_; ++v) order[static_cast<std::size_t>(colors[static_cast<std::size_t>(v)])] = v;
    std::string enc = encode(colors, order);
    if (best_count_ == 0 || enc < best_) {
      best_ = std::move(enc);
      best_order_ = order;
      best_count_ = 1;
    } else if (enc == best_) {
      ++best_count_;
    }
  }

  std::string encode(const std::vector<int>& pos, const std::vector<int>& order) const {
    std::string s = "V" + std::to_string(n_) + "[";
    for (int v : order) s += vkey_[static_cast<std::size_t>(v)] + "/";
    s += "]E[";
    std::vector<std::tuple<int, int, std::string>> es;
    for (std::size_t i = 0; i < g_.edges.size(); ++i) {
      int a = pos[static_cast<std::size_t>(g_.edges[i].u)], b = pos[static_cast<std::size_t>(g_.edges[i].v)];
      es.emplace_back(std::min(a, b), std::max(a, b), ekey_[i]);
    }
    std::sort(es.begin(), es.end());
    for (const auto& [a, b, k] : es) s += std::to_string(a) + "-" + std::to_string(b) + ":" + k + "/";
    return s + "]";
  }

  Integer parallel_factor() const {
    std::map<std::tuple<int, int, int>, long> mult;
    for (std::size_t i = 0; i < g_.edges.size(); ++i) {
      int a = g_.edges[i].u, b = g_.edges[i].v;
      ++mult[{std::min(a, b), std::max(a, b), erank_[i]}];
    }
    Integer f = 1;
    for (const auto& [key, m] : mult) f *= factorial(m);
    return f;
  }

  const DecoratedGraph& g_;
  int n_;
  std::vector<std::string> vkey_, ekey_;
  std::vector<int> vrank_, erank_;
  std::vector<std::vector<std::pair<int, int>>> adj_;
  std::string best_;
  std::vector<int> best_order_;
  long best_count_ = 0;
};

}  // namespace

CanonicalLabeling canonical_labeling(const DecoratedGraph& graph) { return Canonizer(graph).run(); }

std::string canonical_form(const DecoratedGraph& graph) { return canonical_labeling(graph).form; }

Integer automorphism_order(const DecoratedGraph& graph) { return canonical_labeling(graph).automorphisms; }

DecoratedGraph canonical_relabel(const DecoratedGraph& graph) {
  auto lab = canonical_labeling(graph);
  std::vector<int> pos(graph.vertices.size());
  for (std::size_t i = 0; i < lab.order.size(); ++i) pos[static_cast<std::size_t>(lab.order[i])] = static_cast<int>(i);
  DecoratedGraph out;
  for (int v : lab.order) {
    Vertex vx = graph.vertices[static_cast<std::size_t>(v)];
    std::sort(vx.legs.begin(), vx.legs.end(), [](const Leg& a, const Leg& b) { return a.label < b.label; });
    out.add_vertex(std::move(vx));
  }
  std::vector<Edge> es;
  for (const Edge& e : graph.edges) {
    Edge f = e;
    f.u = pos[static_cast<std::size_t>(e.u)];
    f.v = pos[static_cast<std::size_t>(e.v)];
    // Unordered types are stored with the smaller position first.
    if ((f.type == EdgeType::E11 || f.type == EdgeType::EInfInf) && f.u > f.v) std::swap(f.u, f.v);
    es.push_back(f);
  }
  std::sort(es.begin(), es.end(), [](const Edge& a, const Edge& b) {
    if (a.u != b.u) return a.u < b.u;
    if (a.v != b.v) return a.v < b.v;
    return edge_key(a) < edge_key(b);
  });
  for (auto& e : es) out.add_edge(std::move(e));
  return out;
}

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw Error(ErrorCode::InvalidData, "SHA-256 failed");
  static const char* hex = "0123456789abcdef";
  std::string s;
  for (unsigned int i = 0; i < len; ++i) {
    s += hex[md[i] >> 4];
    s += hex[md[i] & 15];
  }
  return s;
}

std::string form_id(const std::string& form) { return sha256_hex(form).substr(0, 16); }

// ------------------------------------------------------------- brute force

namespace {

// Number of bijections of a's edges onto b's edges compatible with the
// vertex map p.
long count_edge_bijections(const DecoratedGraph& a, const DecoratedGraph& b, const std::vector<int>& p, bool first_only) {
  std::size_t m = a.edges.size();
  std::vector<char> used(m, 0);
  long count = 0;
  auto rec = [&](auto&& self, std::size_t i) -> bool {
    if (i == m) {
      ++count;
      return first_only;
    }
    const Edge& e = a.edges[i];
    int pu = p[static_cast<std::size_t>(e.u)], pv = p[static_cast<std::size_t>(e.v)];
    for (std::size_t j = 0; j < m; ++j) {
      if (used[j]) continue;
      const Edge& f = b.edges[j];
      bool ends = (f.u == pu && f.v == pv) || (f.u == pv && f.v == pu);
      if (!ends || f.type != e.type || f.d0 != e.d0 || f.dinf != e.dinf) continue;
      used[j] = 1;
      if (self(self, i + 1)) return true;
      used[j] = 0;
    }
    return false;
  };
  rec(rec, 0);
  return count;
}

bool same_vertex(const Vertex& x, const Vertex& y) { return vertex_key(x) == vertex_key(y); }

}  // namespace

bool brute_isomorphic(const DecoratedGraph& a, const DecoratedGraph& b) {
  if (a.vertices.size() != b.vertices.size() || a.edges.size() != b.edges.size()) return false;
  std::vector<int> p(a.vertices.size());
  std::iota(p.begin(), p.end(), 0);
  do {
    bool ok = true;
    for (std::size_t i = 0; i < p.size() && ok; ++i) ok = same_vertex(a.vertices[i], b.vertices[static_cast<std::size_t>(p[i])]);
    if (ok && count_edge_bijections(a, b, p, true) > 0) return true;
  } while (std::next_permutation(p.begin(), p.end()));
  return false;
}

Integer brute_automorphism_order(const DecoratedGraph& g) {
  std::vector<int> p(g.vertices.size());
  std::iota(p.begin(), p.end(), 0);
  Integer total = 0;
  do {
    bool ok = true;
    for (std::size_t i = 0; i < p.size() && ok; ++i) ok = same_vertex(g.vertices[i], g.vertices[static_cast<std::size_t>(p[i])]);
    if (ok) total += count_edge_bijections(g, g, p, false);
  } while (std::next_permutation(p.begin(), p.end()));
  return total;
}

}  // namespace msploc
