#include "msploc/pipeline.hpp"

#include "msploc/cache.hpp"
#include "msploc/canonical.hpp"
#include "msploc/error.hpp"
#include "msploc/graph_json.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace msploc {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

/// The parts of the config that determine the results; threads and paths are
/// left out so that artifacts do not depend on them.
json run_inputs(const RunConfig& c) {
  json j = config_to_json(c);
  for (const char* k : {"threads", "cache_dir", "output_dir", "formats"}) j.erase(k);
  return j;
}

json graph_entry(const DecoratedGraph& g) {
  const CanonicalLabeling cl = canonical_labeling(g);
  return {{"form_id", form_id(cl.form)},
          {"form", cl.form},
          {"automorphisms", cl.automorphisms.get_str()},
          {"levels", level_profile(g)},
          {"edges", edge_profile(g)},
          {"graph", graph_to_json(g)}};
}

json owner_entry(const Owner& o) {
  json j{{"kind", to_string(o.kind)},
         {"descriptor", o.descriptor},
         {"vertices", o.vertices},
         {"budget", o.budget},
         {"exact", o.exact},
         {"sign", o.sign}};
  j["token"] = o.token ? json(o.token->to_string()) : json(nullptr);
  return j;
}

json contribution_entry(const ContributionReport& r) {
  const GraphContribution& c = r.contribution;
  json j{{"form_id", form_id(c.form)},
         {"automorphisms", c.automorphisms.get_str()},
         {"group_order", c.group_order.get_str()},
         {"prefactor", to_string(c.prefactor)},
         {"sign", c.sign}};
  j["degree"] = c.degree ? json(*c.degree) : json(nullptr);
  j["owners"] = json::array();
  for (const auto& o : c.owners) j["owners"].push_back(owner_entry(o));
  j["factors"] = json::array();
  for (const auto& f : c.factors) j["factors"].push_back({{"label", f.label}, {"value", f.value.to_string()}});
  j["value"] = r.value ? json(r.value->to_string()) : json(nullptr);
  return j;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

std::string summary_csv(const EnumerationResult& e, const std::optional<SumReport>& sum) {
  std::map<std::string, const ContributionReport*> by_form;
  if (sum)
    for (const auto& r : sum->graphs) by_form[r.contribution.form] = &r;
  std::string s = "form_id,levels,edges,automorphisms,group_order,degree,value\n";
  for (const auto& g : e.regular) {
    const CanonicalLabeling cl = canonical_labeling(g);
    std::string group, degree, value;
    if (auto it = by_form.find(cl.form); it != by_form.end()) {
      const GraphContribution& c = it->second->contribution;
      group = c.group_order.get_str();
      if (c.degree) degree = std::to_string(*c.degree);
      if (it->second->value) value = it->second->value->to_string();
    }
    s += form_id(cl.form) + "," + level_profile(g) + "," + csv_field(edge_profile(g)) + "," + cl.automorphisms.get_str() + "," +
         group + "," + degree + "," + csv_field(value) + "\n";
  }
  if (sum && sum->total) s += "total,,,,,," + csv_field(sum->total->to_string()) + "\n";
  return s;
}

[[noreturn]] void malformed(const std::string& what) { throw Error(ErrorCode::FileMalformed, what); }

}  // namespace

std::string level_profile(const DecoratedGraph& g) {
  int n[3] = {0, 0, 0};
  for (const auto& v : g.vertices) ++n[v.level == Level::L0 ? 0 : v.level == Level::L1 ? 1 : 2];
  return std::to_string(n[0]) + "/" + std::to_string(n[1]) + "/" + std::to_string(n[2]);
}

std::string edge_profile(const DecoratedGraph& g) {
  std::vector<std::string> types;
  for (const auto& e : g.edges) types.push_back(to_string(e.type));
  if (types.empty()) return "-";
  std::sort(types.begin(), types.end());
  std::string s;
  for (const auto& t : types) s += (s.empty() ? "" : ",") + t;
  return s;
}

PipelineResult run_pipeline(const RunConfig& config, const PipelineOptions& options) {
  const WeightSystem ws = config.weight_system();
  const DiscreteData dd = config.discrete_data();
  auto log = [&](const std::string& line) {
    if (options.log) *options.log << line << '\n';
  };

  PipelineResult res;
  std::optional<EnumerationCache> cache;
  if (options.use_cache)
    cache.emplace(config.cache_dir ? config.resolve(*config.cache_dir) : EnumerationCache::default_root());
  const std::string key = EnumerationCache::key(ws, dd, config.caps);
  if (cache) {
    if (auto hit = cache->load(ws, dd, config.caps)) {
      res.enumeration = std::move(*hit);
      res.cache_hit = true;
      log("cache hit " + key);
    }
  }
  if (!res.cache_hit) {
    res.enumeration = enumerate_flat_regular(ws, dd, config.caps, config.threads);
    log("enumerated " + std::to_string(res.enumeration.regular.size()) + " regular graphs from " +
        std::to_string(res.enumeration.candidates) + " candidates in " + std::to_string(res.enumeration.shards) + " shards");
    if (cache) {
      cache->store(ws, dd, config.caps, res.enumeration);
      log("cache store " + key);
    }
  }

  if (options.evaluate) {
    const LocalizationContext ctx{ws, dd.N, config.conventions};
    res.sum = sum_graphs(res.enumeration.regular, dd, ctx, config.make_oracle(), config.threads);
  }

  const json inputs = run_inputs(config);
  if (config.wants("json")) {
    json g{{"input", inputs}, {"graphs", json::array()}, {"pure_loops", json::array()}};
    for (const auto& x : res.enumeration.regular) g["graphs"].push_back(graph_entry(x));
    for (const auto& x : res.enumeration.pure_loops) g["pure_loops"].push_back(graph_entry(x));
    res.artifacts["graphs.json"] = g.dump(1) + "\n";
    if (res.sum) {
      json c{{"input", inputs}, {"graphs", json::array()}};
      for (const auto& r : res.sum->graphs) c["graphs"].push_back(contribution_entry(r));
      c["total"] = res.sum->total ? json(res.sum->total->to_string()) : json(nullptr);
      res.artifacts["contributions.json"] = c.dump(1) + "\n";
    }
  }
  if (config.wants("csv")) res.artifacts["summary.csv"] = summary_csv(res.enumeration, res.sum);
  if (config.wants("dot"))
    for (const auto& x : res.enumeration.regular) {
      const std::string id = form_id(canonical_form(x));
      res.artifacts["dot/" + id + ".dot"] = graph_to_dot(x, id);
    }
  return res;
}

void write_artifacts(const fs::path& dir, const std::map<std::string, std::string>& artifacts) {
  std::vector<std::pair<fs::path, fs::path>> staged;
  try {
    for (const auto& [name, content] : artifacts) {
      const fs::path target = dir / name;
      fs::create_directories(target.parent_path());
      fs::path tmp = target;
      tmp += ".partial";
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      out << content;
      out.close();
      if (!out) throw std::runtime_error("cannot write " + tmp.string());
      staged.emplace_back(tmp, target);
    }
  } catch (...) {
    std::error_code ec;
    for (const auto& [tmp, target] : staged) fs::remove(tmp, ec);
    throw;
  }
  for (const auto& [tmp, target] : staged) fs::rename(tmp, target);
}

std::vector<InspectRow> inspect(const json& artifact, const InspectFilter& filter) {
  if (!artifact.is_object() || !artifact.contains("graphs") || !artifact["graphs"].is_array())
    malformed("expected an object with a \"graphs\" array");
  std::vector<InspectRow> rows;
  for (const auto& entry : artifact["graphs"]) {
    if (!entry.is_object() || !entry.contains("graph")) malformed("graph entry without \"graph\"");
    InspectRow r;
    r.graph = graph_from_json(entry["graph"]);
    const CanonicalLabeling cl = canonical_labeling(r.graph);
    r.form_id = form_id(cl.form);
    r.levels = level_profile(r.graph);
    r.edges = edge_profile(r.graph);
    r.automorphisms = cl.automorphisms;
    if (filter.levels && r.levels != *filter.levels) continue;
    bool edges_ok = true;
    for (EdgeType t : filter.has_edges)
      edges_ok = edges_ok && std::any_of(r.graph.edges.begin(), r.graph.edges.end(), [&](const Edge& e) { return e.type == t; });
    if (!edges_ok) continue;
    if (filter.automorphisms && r.automorphisms != *filter.automorphisms) continue;
    if (filter.form && cl.form != *filter.form && r.form_id.rfind(*filter.form, 0) != 0) continue;
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string inspect_table(const std::vector<InspectRow>& rows) {
  std::ostringstream s;
  s << "form_id\tlevels\tedges\taut\n";
  for (const auto& r : rows) s << r.form_id << '\t' << r.levels << '\t' << r.edges << '\t' << r.automorphisms.get_str() << '\n';
  return s.str();
}

}  // namespace msploc
