#include "msploc/cache.hpp"

#include "msploc/canonical.hpp"
#include "msploc/error.hpp"
#include "msploc/graph_json.hpp"

#include <cstdlib>
#include <fstream>
#include <unistd.h>

namespace msploc {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr int kFormatVersion = 1;

json graphs_to_json(const std::vector<DecoratedGraph>& gs) {
  json a = json::array();
  for (const auto& g : gs) a.push_back(graph_to_json(g));
  return a;
}

bool sound(const std::vector<DecoratedGraph>& gs, const WeightSystem& ws, const DiscreteData& dd, GraphClass want) {
  std::string last;
  for (const auto& g : gs) {
    if (!validate(g, ws, dd).ok() || !is_flat(g) || classify(g, ws) != want) return false;
    const std::string form = canonical_form(g);
    if (!last.empty() && !(last < form)) return false;
    if (graph_to_json(canonical_relabel(g)) != graph_to_json(g)) return false;
    last = form;
  }
  return true;
}

}  // namespace

EnumerationCache::EnumerationCache(fs::path root) : root_(std::move(root)) {}

fs::path EnumerationCache::default_root() {
  if (const char* p = std::getenv("MSPLOC_CACHE_DIR"); p && *p) return p;
  if (const char* p = std::getenv("XDG_CACHE_HOME"); p && *p) return fs::path(p) / "msploc";
  if (const char* p = std::getenv("HOME"); p && *p) return fs::path(p) / ".cache" / "msploc";
  return fs::temp_directory_path() / "msploc-cache";
}

json EnumerationCache::key_material(const WeightSystem& ws, const DiscreteData& dd, const EnumerationCaps& caps) {
  json m;
  m["version"] = kFormatVersion;
  m["weights"] = ws.a();
  m["N"] = dd.N;
  m["genus"] = dd.g;
  m["markings"] = json::array();
  for (const auto& x : dd.markings) m["markings"].push_back(marking_to_json(x));
  m["d0"] = to_string(dd.d0);
  m["dinf"] = to_string(dd.dinf);
  m["caps"] = {caps.max_vertices,  caps.max_edges,     caps.max_edge_degree_numerator,
               caps.max_vertex_genus, caps.max_web_edges, caps.max_candidates};
  return m;
}

std::string EnumerationCache::key(const WeightSystem& ws, const DiscreteData& dd, const EnumerationCaps& caps) {
  return sha256_hex(key_material(ws, dd, caps).dump());
}

fs::path EnumerationCache::entry_path(const std::string& key) const { return root_ / key.substr(0, 2) / (key + ".json"); }

std::optional<EnumerationResult> EnumerationCache::load(const WeightSystem& ws, const DiscreteData& dd,
                                                        const EnumerationCaps& caps) const {
  const fs::path p = entry_path(key(ws, dd, caps));
  std::ifstream in(p);
  if (!in) return std::nullopt;
  try {
    const json j = json::parse(in);
    if (j.at("key") != key_material(ws, dd, caps)) throw Error(ErrorCode::FileMalformed, "key mismatch");
    EnumerationResult r;
    for (const auto& g : j.at("regular")) r.regular.push_back(graph_from_json(g));
    for (const auto& g : j.at("pure_loops")) r.pure_loops.push_back(graph_from_json(g));
    r.candidates = j.at("candidates").get<long>();
    r.shards = j.at("shards").get<int>();
    if (!sound(r.regular, ws, dd, GraphClass::Regular) || !sound(r.pure_loops, ws, dd, GraphClass::PureLoop))
      throw Error(ErrorCode::FileMalformed, "entry fails re-validation");
    return r;
  } catch (const std::exception&) {
    std::error_code ec;
    in.close();
    fs::remove(p, ec);
    return std::nullopt;
  }
}

void EnumerationCache::store(const WeightSystem& ws, const DiscreteData& dd, const EnumerationCaps& caps,
                             const EnumerationResult& r) const {
  json j;
  j["key"] = key_material(ws, dd, caps);
  j["regular"] = graphs_to_json(r.regular);
  j["pure_loops"] = graphs_to_json(r.pure_loops);
  j["candidates"] = r.candidates;
  j["shards"] = r.shards;
  const fs::path p = entry_path(key(ws, dd, caps));
  fs::create_directories(p.parent_path());
  write_file_atomic(p, j.dump());
}

EnumerationCache::GcReport EnumerationCache::gc(bool all) const {
  GcReport rep;
  std::error_code ec;
  if (!fs::exists(root_, ec)) return rep;
  std::vector<fs::path> doomed;
  for (const auto& e : fs::recursive_directory_iterator(root_, ec)) {
    if (!e.is_regular_file()) continue;
    const fs::path& p = e.path();
    bool keep = !all && p.extension() == ".json";
    if (keep) {
      std::ifstream in(p);
      try {
        const json j = json::parse(in);
        keep = j.at("key").at("version") == kFormatVersion && sha256_hex(j.at("key").dump()) == p.stem().string();
      } catch (const std::exception&) {
        keep = false;
      }
    }
    if (keep)
      ++rep.kept;
    else
      doomed.push_back(p);
  }
  for (const auto& p : doomed)
    if (fs::remove(p, ec)) ++rep.removed;
  return rep;
}

void write_file_atomic(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

}  // namespace msploc
