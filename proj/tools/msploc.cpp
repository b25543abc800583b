// Command-line front end: enumerate, evaluate, inspect and cache gc.
#include "msploc/cache.hpp"
#include "msploc/error.hpp"
#include "msploc/graph_json.hpp"
#include "msploc/pipeline.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace msploc;
namespace fs = std::filesystem;

namespace {

enum Exit { Ok = 0, Other = 1, Config = 2, Cap = 3, OracleMiss = 4, Malformed = 5 };

int exit_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::ConfigInvalid:
    case ErrorCode::InvalidWeights:
    case ErrorCode::InvalidMarking:
    case ErrorCode::InvalidData: return Config;
    case ErrorCode::CapExceeded:
    case ErrorCode::CapTooLarge: return Cap;
    case ErrorCode::MissingCorrelator: return OracleMiss;
    case ErrorCode::FileMalformed:
    case ErrorCode::ParseError: return Malformed;
    default: return Other;
  }
}

struct RunFlags {
  std::string config;
  std::optional<int> threads;
  std::optional<std::string> output;
  std::vector<std::string> formats;
  std::optional<std::string> oracle;
  bool no_cache = false;
  std::optional<int> max_vertices, max_edges, max_degree, max_genus;
  std::optional<long> max_candidates;
};

void add_run_flags(CLI::App* sub, RunFlags& f, bool evaluate) {
  sub->add_option("config", f.config, "Run configuration (JSON)")->required();
  sub->add_option("-j,--threads", f.threads, "Worker threads")->check(CLI::Range(1, 256));
  sub->add_option("-o,--output", f.output, "Output directory (overrides output_dir)");
  sub->add_option("--formats", f.formats, "Artifact formats: json, csv, dot")->delimiter(',')->check(CLI::IsMember({"json", "csv", "dot"}));
  sub->add_flag("--no-cache", f.no_cache, "Skip the enumeration cache");
  sub->add_option("--max-vertices", f.max_vertices, "Cap on vertices");
  sub->add_option("--max-edges", f.max_edges, "Cap on edges");
  sub->add_option("--max-degree", f.max_degree, "Cap on k |deg L| per edge");
  sub->add_option("--max-genus", f.max_genus, "Cap on vertex genus");
  sub->add_option("--max-candidates", f.max_candidates, "Candidate budget per shard");
  if (evaluate) sub->add_option("--oracle", f.oracle, "symbolic, zero or tabulated:<path>");
}

RunConfig apply(const RunFlags& f) {
  RunConfig c = load_config(f.config);
  nlohmann::json j = config_to_json(c);
  if (f.threads) j["threads"] = *f.threads;
  if (!f.formats.empty()) j["formats"] = f.formats;
  if (f.oracle) j["oracle"] = *f.oracle;
  if (f.max_vertices) j["caps"]["max_vertices"] = *f.max_vertices;
  if (f.max_edges) j["caps"]["max_edges"] = *f.max_edges;
  if (f.max_degree) j["caps"]["max_edge_degree_numerator"] = *f.max_degree;
  if (f.max_genus) j["caps"]["max_vertex_genus"] = *f.max_genus;
  if (f.max_candidates) j["caps"]["max_candidates"] = *f.max_candidates;
  RunConfig out = parse_config(j, c.base_dir);
  // Paths given on the command line are relative to the working directory.
  if (f.oracle && f.oracle->rfind("tabulated:", 0) == 0 && !fs::path(f.oracle->substr(10)).is_absolute())
    out.oracle = "tabulated:" + fs::absolute(f.oracle->substr(10)).string();
  out.output_dir = f.output ? fs::absolute(*f.output).string() : out.resolve(out.output_dir).string();
  return out;
}

int run(const RunFlags& f, bool evaluate) {
  const RunConfig c = apply(f);
  PipelineOptions opt;
  opt.evaluate = evaluate;
  opt.use_cache = !f.no_cache;
  opt.log = &std::cerr;
  const PipelineResult r = run_pipeline(c, opt);
  write_artifacts(c.output_dir, r.artifacts);
  std::cerr << r.enumeration.regular.size() << " regular graphs, " << r.enumeration.pure_loops.size()
            << " pure loops; artifacts in " << c.output_dir << '\n';
  if (r.sum) {
    if (r.sum->total)
      std::cout << "total " << r.sum->total->to_string() << '\n';
    else
      std::cout << "total symbolic (" << r.sum->graphs.size() << " graph contributions)\n";
  }
  return Ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fixed-locus graph enumeration and localization contributions"};
  app.require_subcommand(1);

  RunFlags ef, vf;
  auto* enumerate = app.add_subcommand("enumerate", "Enumerate flat regular graphs");
  add_run_flags(enumerate, ef, false);
  auto* evaluate = app.add_subcommand("evaluate", "Enumerate and assemble contributions");
  add_run_flags(evaluate, vf, true);

  std::string artifact;
  std::optional<std::string> levels, form, dot_dir;
  std::vector<std::string> has_edges;
  std::optional<long> aut;
  auto* insp = app.add_subcommand("inspect", "Filter a graphs.json artifact");
  insp->add_option("artifact", artifact, "graphs.json")->required();
  insp->add_option("--levels", levels, "Vertex counts per level, n0/n1/ninf");
  insp->add_option("--has-edge", has_edges, "Edge type that must occur (repeatable)");
  insp->add_option("--aut", aut, "Automorphism group order");
  insp->add_option("--form", form, "Canonical form or form id prefix");
  insp->add_option("--dot", dot_dir, "Write one DOT file per listed graph");

  auto* cache = app.add_subcommand("cache", "Enumeration cache maintenance");
  cache->require_subcommand(1);
  auto* gc = cache->add_subcommand("gc", "Remove stale entries");
  bool gc_all = false;
  std::optional<std::string> cache_dir;
  gc->add_flag("--all", gc_all, "Remove every entry");
  gc->add_option("--cache-dir", cache_dir, "Cache root (default: MSPLOC_CACHE_DIR)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return Config;
  }

  try {
    if (*enumerate) return run(ef, false);
    if (*evaluate) return run(vf, true);
    if (*insp) {
      std::ifstream in(artifact);
      if (!in) throw Error(ErrorCode::FileMalformed, "cannot read " + artifact);
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(in);
      } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::FileMalformed, artifact + ": " + e.what());
      }
      InspectFilter filter;
      filter.levels = levels;
      filter.form = form;
      if (aut) filter.automorphisms = Integer(*aut);
      for (const auto& t : has_edges) {
        try {
          filter.has_edges.push_back(parse_edge_type(t));
        } catch (const Error& e) {
          throw Error(ErrorCode::ConfigInvalid, e.what());
        }
      }
      const auto rows = inspect(j, filter);
      std::cout << inspect_table(rows);
      if (dot_dir) {
        std::map<std::string, std::string> files;
        for (const auto& r : rows) files[r.form_id + ".dot"] = graph_to_dot(r.graph, r.form_id);
        write_artifacts(*dot_dir, files);
      }
      return Ok;
    }
    if (*gc) {
      EnumerationCache c(cache_dir ? fs::path(*cache_dir) : EnumerationCache::default_root());
      const auto rep = c.gc(gc_all);
      std::cout << "removed " << rep.removed << ", kept " << rep.kept << " in " << c.root().string() << '\n';
      return Ok;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return Other;
  }
  return Other;
}
