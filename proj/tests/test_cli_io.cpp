#include "corpus.hpp"

#include "msploc/cache.hpp"
#include "msploc/canonical.hpp"
#include "msploc/error.hpp"
#include "msploc/graph_json.hpp"
#include "msploc/pipeline.hpp"

#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace msploc;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    std::string tmpl = (fs::temp_directory_path() / "msploc-test-XXXXXX").string();
    path = ::mkdtemp(tmpl.data());
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::ParseError;
}

json base() {
  return json{{"weights", "11112"}, {"N", 2}, {"genus", 0}, {"d0", "1"}, {"dinf", "0"},
              {"caps", {{"max_vertices", 3}, {"max_edges", 3}, {"max_edge_degree_numerator", 12}}}};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(MSPLOC_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("config parsing is strict") {
  CHECK_NOTHROW(parse_config(base()));

  json j = base();
  j["colour"] = "blue";
  CHECK(code_of([&] { parse_config(j); }) == ErrorCode::ConfigInvalid);

  j = base();
  j["d0"] = 0.5;
  CHECK(code_of([&] { parse_config(j); }) == ErrorCode::ConfigInvalid);

  j = base();
  j["weights"] = {1, 1, 1, 1, 3};
  CHECK(code_of([&] { parse_config(j); }) == ErrorCode::ConfigInvalid);

  j = base();
  j["caps"]["max_loops"] = 1;
  CHECK(code_of([&] { parse_config(j); }) == ErrorCode::ConfigInvalid);

  j = base();
  j["oracle"] = "guess";
  CHECK(code_of([&] { parse_config(j); }) == ErrorCode::ConfigInvalid);

  j = base();
  j["formats"] = {"json", "xml"};
  CHECK(code_of([&] { parse_config(j); }) == ErrorCode::ConfigInvalid);

  j = base();
  j["markings"] = {"rho", 3};
  CHECK(code_of([&] { parse_config(j); }) == ErrorCode::ConfigInvalid);

  j = base();
  j.erase("N");
  CHECK(code_of([&] { parse_config(j); }) == ErrorCode::ConfigInvalid);

  j = base();
  j["conventions"] = {{"rho_flags", "sideways"}};
  CHECK(code_of([&] { parse_config(j); }) == ErrorCode::ConfigInvalid);
}

TEST_CASE("config round trip is idempotent") {
  std::vector<json> samples{base()};
  json j = base();
  j["weights"] = {1, 1, 1, 2, 5};
  j["markings"] = {"rho", 1, 3};
  j["dinf"] = "2/10";
  j["oracle"] = "tabulated:table.tsv";
  j["formats"] = {"dot", "json", "dot"};
  j["conventions"] = {{"rho_flags", "literal"}, {"e11_numerator", "as-printed"}, {"e01_range", "pushforward"}};
  j["cache_dir"] = "c";
  samples.push_back(j);
  for (const auto& s : samples) {
    const json once = config_to_json(parse_config(s));
    CHECK(config_to_json(parse_config(once)) == once);
  }
  CHECK(config_to_json(parse_config(j))["dinf"] == "1/5");
}

TEST_CASE("config files resolve paths against their directory") {
  TempDir dir;
  std::ofstream(dir.path / "run.json") << R"({"weights": "11112", "N": 1, "oracle": "tabulated:t.tsv"})";
  const RunConfig c = load_config(dir.path / "run.json");
  CHECK(c.resolve("t.tsv") == dir.path / "t.tsv");
  CHECK(code_of([&] { c.make_oracle(); }) == ErrorCode::FileMalformed);
  std::ofstream(dir.path / "broken.json") << "{\"weights\": ";
  CHECK(code_of([&] { load_config(dir.path / "broken.json"); }) == ErrorCode::ConfigInvalid);
  CHECK(code_of([&] { load_config(dir.path / "absent.json"); }) == ErrorCode::ConfigInvalid);
}

TEST_CASE("minimal config yields one graph") {
  RunConfig c = parse_config(json{{"weights", "11112"}, {"N", 1}, {"genus", 0}, {"d0", "0"}, {"dinf", "0"}});
  PipelineOptions opt;
  opt.use_cache = false;
  const auto r = run_pipeline(c, opt);
  CHECK(r.enumeration.regular.size() == 1);
  const json g = json::parse(r.artifacts.at("graphs.json"));
  CHECK(g["graphs"].size() == 1);
  CHECK(g["input"].count("threads") == 0);
  CHECK(r.artifacts.count("summary.csv"));
  CHECK(r.artifacts.count("contributions.json") == 0);
}

TEST_CASE("artifacts are byte-identical across thread counts") {
  json j = base();
  j["formats"] = {"json", "csv", "dot"};
  j["oracle"] = "zero";
  std::optional<std::map<std::string, std::string>> first;
  for (int threads : {1, 4, 16}) {
    j["threads"] = threads;
    PipelineOptions opt;
    opt.use_cache = false;
    opt.evaluate = true;
    const auto r = run_pipeline(parse_config(j), opt);
    CHECK(r.artifacts.count("contributions.json"));
    if (!first)
      first = r.artifacts;
    else
      CHECK(r.artifacts == *first);
  }
}

TEST_CASE("cache hit, corruption and gc") {
  TempDir dir;
  json j = base();
  j["cache_dir"] = (dir.path / "cache").string();
  const RunConfig c = parse_config(j);
  std::ostringstream log;
  PipelineOptions opt;
  opt.log = &log;

  const auto cold = run_pipeline(c, opt);
  CHECK_FALSE(cold.cache_hit);
  const auto warm = run_pipeline(c, opt);
  CHECK(warm.cache_hit);
  CHECK(log.str().find("cache hit") != std::string::npos);
  CHECK(warm.artifacts == cold.artifacts);

  EnumerationCache cache(dir.path / "cache");
  const fs::path entry = cache.entry_path(EnumerationCache::key(c.weight_system(), c.discrete_data(), c.caps));
  REQUIRE(fs::exists(entry));

  // A tampered entry fails re-validation and is recomputed.
  json stored = json::parse(slurp(entry));
  REQUIRE(!stored["regular"].empty());
  stored["regular"][0]["vertices"][0]["genus"] = 7;
  std::ofstream(entry) << stored.dump();
  const auto again = run_pipeline(c, opt);
  CHECK_FALSE(again.cache_hit);
  CHECK(again.artifacts == cold.artifacts);
  CHECK(run_pipeline(c, opt).cache_hit);

  std::ofstream(entry.parent_path() / "junk.json") << "not json";
  std::ofstream(entry.parent_path() / "x.json.tmp.1") << "";
  auto rep = cache.gc(false);
  CHECK(rep.removed == 2);
  CHECK(rep.kept == 1);
  rep = cache.gc(true);
  CHECK(rep.removed == 1);
  CHECK_FALSE(fs::exists(entry));
}

TEST_CASE("cache keys separate caps and data") {
  const WeightSystem ws = WeightSystem::preset("11112");
  DiscreteData dd;
  EnumerationCaps caps;
  const std::string k = EnumerationCache::key(ws, dd, caps);
  CHECK(k.size() == 64);
  caps.max_edges += 1;
  CHECK(EnumerationCache::key(ws, dd, caps) != k);
  caps.max_edges -= 1;
  dd.dinf = frac(1, 6);
  CHECK(EnumerationCache::key(ws, dd, caps) != k);
}

TEST_CASE("write_artifacts leaves no partial files") {
  TempDir dir;
  write_artifacts(dir.path / "out", {{"a.txt", "x"}, {"dot/b.dot", "graph g {}\n"}});
  CHECK(slurp(dir.path / "out" / "a.txt") == "x");
  CHECK(fs::exists(dir.path / "out" / "dot" / "b.dot"));
  for (const auto& e : fs::recursive_directory_iterator(dir.path)) CHECK(e.path().extension() != ".partial");
}

TEST_CASE("inspect filters") {
  PipelineOptions opt;
  opt.use_cache = false;
  json j = base();
  j["N"] = 1;
  const auto r = run_pipeline(parse_config(j), opt);
  const json artifact = json::parse(r.artifacts.at("graphs.json"));
  const auto all = inspect(artifact, {});
  REQUIRE(all.size() == r.enumeration.regular.size());
  REQUIRE(all.size() >= 2);

  InspectFilter e11;
  e11.has_edges = {EdgeType::E11};
  CHECK(inspect(artifact, e11).empty());

  for (const auto& row : all) {
    InspectFilter by_form;
    by_form.form = row.form_id;
    CHECK(inspect(artifact, by_form).size() == 1);
    by_form.form = canonical_form(row.graph);
    CHECK(inspect(artifact, by_form).size() == 1);
  }
  InspectFilter lv;
  lv.levels = all[0].levels;
  CHECK(!inspect(artifact, lv).empty());
  InspectFilter aut;
  aut.automorphisms = Integer(1);
  CHECK(inspect(artifact, aut).size() <= all.size());

  CHECK(code_of([&] { inspect(json{{"graph", 1}}, {}); }) == ErrorCode::FileMalformed);
  CHECK(code_of([&] { inspect(json{{"graphs", {{{"graph", {{"vertices", 3}}}}}}}, {}); }) == ErrorCode::FileMalformed);
  CHECK(inspect_table(all).find(all[0].form_id) != std::string::npos);
}

TEST_CASE("DOT output re-parses with pydot") {
  if (std::system("python3 -c 'import pydot' >/dev/null 2>&1") != 0) {
    MESSAGE("pydot unavailable; DOT re-parse skipped");
    return;
  }
  TempDir dir;
  std::map<std::string, std::string> files;
  corpus::Generator gen(21);
  for (int i = 0; i < 150; ++i) {
    const auto s = gen.valid(5);
    files["corpus" + std::to_string(i) + ".dot"] = graph_to_dot(s.graph, "corpus " + std::to_string(i));
  }
  json j = base();
  j["formats"] = {"dot"};
  PipelineOptions opt;
  opt.use_cache = false;
  for (const auto& [name, content] : run_pipeline(parse_config(j), opt).artifacts) files[name] = content;
  write_artifacts(dir.path, files);
  const fs::path script = dir.path / "reparse.py";
  std::ofstream(script) << "import pathlib, sys, pydot\n"
                           "n = 0\n"
                           "for p in sorted(pathlib.Path(sys.argv[1]).rglob('*.dot')):\n"
                           "    gs = pydot.graph_from_dot_file(str(p))\n"
                           "    assert gs and len(gs) == 1, p\n"
                           "    assert gs[0].get_nodes() or gs[0].get_subgraphs(), p\n"
                           "    n += 1\n"
                           "assert n == int(sys.argv[2]), n\n";
  const std::string cmd = "python3 " + script.string() + " " + dir.path.string() + " " + std::to_string(files.size());
  CHECK(std::system(cmd.c_str()) == 0);
}

TEST_CASE("command line exit codes") {
  TempDir dir;
  const std::string d = dir.path.string();
  json j = base();
  j["cache_dir"] = "cache";
  j["formats"] = {"json", "csv", "dot"};
  std::ofstream(dir.path / "ok.json") << j.dump();
  CHECK(run_cli("enumerate " + d + "/ok.json -o " + d + "/out") == 0);
  CHECK(fs::exists(dir.path / "out" / "graphs.json"));
  CHECK(fs::exists(dir.path / "out" / "summary.csv"));
  CHECK(run_cli("evaluate " + d + "/ok.json -j 4 --oracle zero -o " + d + "/out4") == 0);
  CHECK(fs::exists(dir.path / "out4" / "contributions.json"));

  json bad = base();
  bad["weights"] = {1, 1, 1, 1, 3};
  std::ofstream(dir.path / "bad.json") << bad.dump();
  CHECK(run_cli("enumerate " + d + "/bad.json -o " + d + "/x") == 2);
  CHECK(run_cli("enumerate " + d + "/absent.json") == 2);
  CHECK(run_cli("frobnicate") == 2);

  json cap = base();
  cap["d0"] = "2";
  std::ofstream(dir.path / "cap.json") << cap.dump();
  CHECK(run_cli("enumerate " + d + "/cap.json --no-cache --max-candidates 1 -o " + d + "/x") == 3);

  std::ofstream(dir.path / "empty.tsv") << "# no rows\n";
  CHECK(run_cli("evaluate " + d + "/ok.json --oracle tabulated:" + d + "/empty.tsv -o " + d + "/x") == 4);
  std::ofstream(dir.path / "broken.tsv") << "only\ttwo\n";
  CHECK(run_cli("evaluate " + d + "/ok.json --oracle tabulated:" + d + "/broken.tsv -o " + d + "/x") == 5);

  std::ofstream(dir.path / "junk.json") << "[1, 2";
  CHECK(run_cli("inspect " + d + "/junk.json") == 5);
  CHECK(run_cli("inspect " + d + "/out/graphs.json --has-edge E11 --dot " + d + "/dots") == 0);
  CHECK(run_cli("cache gc --cache-dir " + d + "/cache") == 0);
  CHECK_FALSE(fs::exists(dir.path / "x"));
}
