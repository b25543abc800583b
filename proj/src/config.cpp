#include "msploc/config.hpp"

#include "msploc/error.hpp"
#include "msploc/graph_json.hpp"

#include <algorithm>
#include <fstream>
#include <set>

namespace msploc {

namespace {

using nlohmann::json;

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::ConfigInvalid, what); }

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) invalid(where + " must be an object");
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) invalid("unknown key \"" + k + "\" in " + where);
}

int get_int(const json& j, const std::string& key, int lo, int hi) {
  const json& v = j.at(key);
  if (!v.is_number_integer()) invalid(key + " must be an integer");
  const auto x = v.get<long long>();
  if (x < lo || x > hi) invalid(key + " out of range [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return static_cast<int>(x);
}

std::string get_string(const json& j, const std::string& key) {
  const json& v = j.at(key);
  if (!v.is_string()) invalid(key + " must be a string");
  return v.get<std::string>();
}

Rational get_rational(const json& j, const std::string& key) {
  const std::string s = get_string(j, key);
  try {
    return parse_rational(s);
  } catch (const Error&) {
    invalid(key + " is not a rational \"p/q\": " + s);
  }
}

const std::set<std::string> kFormats{"json", "csv", "dot"};

}  // namespace

DiscreteData RunConfig::discrete_data() const {
  DiscreteData dd;
  dd.g = genus;
  dd.markings = markings;
  dd.d0 = d0;
  dd.dinf = dinf;
  dd.N = N;
  return dd;
}

bool RunConfig::wants(const std::string& format) const {
  return std::find(formats.begin(), formats.end(), format) != formats.end();
}

std::filesystem::path RunConfig::resolve(const std::string& path) const {
  std::filesystem::path p(path);
  return p.is_absolute() ? p : base_dir / p;
}

CorrelatorOracle RunConfig::make_oracle() const {
  if (oracle == "symbolic") return CorrelatorOracle::symbolic();
  if (oracle == "zero") return CorrelatorOracle::zero();
  return CorrelatorOracle::from_tsv_file(resolve(oracle.substr(std::string("tabulated:").size())).string());
}

RunConfig parse_config(const json& j, const std::filesystem::path& base_dir) {
  check_keys(j,
             {"weights", "N", "genus", "markings", "d0", "dinf", "caps", "oracle", "formats", "threads", "cache_dir",
              "output_dir", "conventions"},
             "config");
  RunConfig c;
  c.base_dir = base_dir;

  if (!j.contains("weights")) invalid("missing key \"weights\"");
  const json& w = j.at("weights");
  try {
    if (w.is_string()) {
      c.preset = w.get<std::string>();
      c.weights = WeightSystem::preset(c.preset).a();
    } else if (w.is_array() && w.size() == 5) {
      for (std::size_t i = 0; i < 5; ++i) {
        if (!w[i].is_number_integer()) invalid("weights must be integers");
        c.weights[i] = w[i].get<int>();
      }
    } else {
      invalid("weights must be a preset name or an array of five integers");
    }
    (void)c.weight_system();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigInvalid) throw;
    invalid(e.what());
  }

  if (!j.contains("N")) invalid("missing key \"N\"");
  c.N = get_int(j, "N", 1, 5);
  if (j.contains("genus")) c.genus = get_int(j, "genus", 0, 64);
  if (j.contains("d0")) c.d0 = get_rational(j, "d0");
  if (j.contains("dinf")) c.dinf = get_rational(j, "dinf");
  if (j.contains("markings")) {
    if (!j["markings"].is_array()) invalid("markings must be an array");
    for (const auto& m : j["markings"]) {
      try {
        c.markings.push_back(marking_from_json(m));
      } catch (const Error& e) {
        invalid(std::string("bad marking: ") + e.what());
      }
    }
  }

  if (j.contains("caps")) {
    const json& cj = j["caps"];
    check_keys(cj, {"max_vertices", "max_edges", "max_edge_degree_numerator", "max_vertex_genus", "max_web_edges", "max_candidates"},
               "caps");
    if (cj.contains("max_vertices")) c.caps.max_vertices = get_int(cj, "max_vertices", 1, 64);
    if (cj.contains("max_edges")) c.caps.max_edges = get_int(cj, "max_edges", 0, 64);
    if (cj.contains("max_edge_degree_numerator"))
      c.caps.max_edge_degree_numerator = get_int(cj, "max_edge_degree_numerator", 1, 1 << 20);
    if (cj.contains("max_vertex_genus")) c.caps.max_vertex_genus = get_int(cj, "max_vertex_genus", 0, 64);
    if (cj.contains("max_web_edges")) c.caps.max_web_edges = get_int(cj, "max_web_edges", 0, 64);
    if (cj.contains("max_candidates")) {
      if (!cj["max_candidates"].is_number_integer() || cj["max_candidates"].get<long long>() < 1)
        invalid("max_candidates must be a positive integer");
      c.caps.max_candidates = cj["max_candidates"].get<long>();
    }
  }

  if (j.contains("oracle")) {
    c.oracle = get_string(j, "oracle");
    const bool tab = c.oracle.rfind("tabulated:", 0) == 0 && c.oracle.size() > 10;
    if (c.oracle != "symbolic" && c.oracle != "zero" && !tab)
      invalid("oracle must be symbolic, zero or tabulated:<path>");
  }
  if (j.contains("formats")) {
    if (!j["formats"].is_array()) invalid("formats must be an array");
    c.formats.clear();
    for (const auto& f : j["formats"]) {
      if (!f.is_string() || !kFormats.count(f.get<std::string>())) invalid("formats must be drawn from json, csv, dot");
      if (!c.wants(f.get<std::string>())) c.formats.push_back(f.get<std::string>());
    }
    std::sort(c.formats.begin(), c.formats.end());
  }
  if (j.contains("threads")) c.threads = get_int(j, "threads", 1, 256);
  if (j.contains("cache_dir")) c.cache_dir = get_string(j, "cache_dir");
  if (j.contains("output_dir")) c.output_dir = get_string(j, "output_dir");
  if (j.contains("conventions")) {
    const json& cv = j["conventions"];
    check_keys(cv, {"rho_flags", "e11_numerator", "e01_range"}, "conventions");
    try {
      if (cv.contains("rho_flags")) c.conventions.rho_flags = parse_rho_flag_mode(get_string(cv, "rho_flags"));
      if (cv.contains("e11_numerator")) c.conventions.e11_numerator = parse_e11_numerator(get_string(cv, "e11_numerator"));
      if (cv.contains("e01_range")) c.conventions.e01_range = parse_e01_range(get_string(cv, "e01_range"));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::ConfigInvalid) throw;
      invalid(e.what());
    }
  }

  try {
    c.discrete_data().validate(c.weight_system());
  } catch (const Error& e) {
    invalid(e.what());
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) invalid("cannot read " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    invalid(path.string() + ": " + e.what());
  }
  return parse_config(j, path.parent_path().empty() ? "." : path.parent_path());
}

json config_to_json(const RunConfig& c) {
  json j;
  if (c.preset.empty())
    j["weights"] = c.weights;
  else
    j["weights"] = c.preset;
  j["N"] = c.N;
  j["genus"] = c.genus;
  j["markings"] = json::array();
  for (const auto& m : c.markings) j["markings"].push_back(marking_to_json(m));
  j["d0"] = to_string(c.d0);
  j["dinf"] = to_string(c.dinf);
  j["caps"] = {{"max_vertices", c.caps.max_vertices},
               {"max_edges", c.caps.max_edges},
               {"max_edge_degree_numerator", c.caps.max_edge_degree_numerator},
               {"max_vertex_genus", c.caps.max_vertex_genus},
               {"max_web_edges", c.caps.max_web_edges},
               {"max_candidates", c.caps.max_candidates}};
  j["oracle"] = c.oracle;
  j["formats"] = c.formats;
  j["threads"] = c.threads;
  if (c.cache_dir) j["cache_dir"] = *c.cache_dir;
  j["output_dir"] = c.output_dir;
  j["conventions"] = {{"rho_flags", to_string(c.conventions.rho_flags)},
                      {"e11_numerator", to_string(c.conventions.e11_numerator)},
                      {"e01_range", to_string(c.conventions.e01_range)}};
  return j;
}

}  // namespace msploc
