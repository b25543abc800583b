#pragma once

#include "msploc/enumerate.hpp"
#include "msploc/localization.hpp"
#include "msploc/oracle.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace msploc {

/// One batch run. Rationals are "p/q" strings in the file; unknown keys and
/// wrong types are ConfigInvalid.
struct RunConfig {
  /// Preset name, or empty when the weights were given as an array.
  std::string preset;
  std::array<int, 5> weights{1, 1, 1, 1, 2};
  int N = 1;
  int genus = 0;
  std::vector<Marking> markings;
  Rational d0 = 0;
  Rational dinf = 0;
  EnumerationCaps caps;
  /// "symbolic", "zero" or "tabulated:<path>".
  std::string oracle = "symbolic";
  /// Subset of json, csv, dot.
  std::vector<std::string> formats{"csv", "json"};
  int threads = 1;
  std::optional<std::string> cache_dir;
  std::string output_dir = "out";
  Conventions conventions;
  /// Directory that relative paths are resolved against.
  std::filesystem::path base_dir = ".";

  WeightSystem weight_system() const { return WeightSystem(weights); }
  DiscreteData discrete_data() const;
  bool wants(const std::string& format) const;
  std::filesystem::path resolve(const std::string& path) const;
  /// Builds the oracle named by `oracle`, reading the table when tabulated.
  CorrelatorOracle make_oracle() const;
};

RunConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir = ".");
/// Reads and parses a config file; unreadable or non-JSON files are ConfigInvalid.
RunConfig load_config(const std::filesystem::path& path);
nlohmann::json config_to_json(const RunConfig& c);

}  // namespace msploc
