#pragma once

#include "msploc/config.hpp"

#include <json.hpp>

#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace msploc {

struct PipelineOptions {
  bool evaluate = false;
  bool use_cache = true;
  /// Progress and cache messages; nothing is logged when null.
  std::ostream* log = nullptr;
};

struct PipelineResult {
  EnumerationResult enumeration;
  std::optional<SumReport> sum;
  bool cache_hit = false;
  /// Relative artifact path to file contents.
  std::map<std::string, std::string> artifacts;
};

/// Enumerates (through the cache when enabled), optionally evaluates, and
/// renders the artifacts selected by the config. Nothing is written to disk
/// except the cache.
PipelineResult run_pipeline(const RunConfig& config, const PipelineOptions& options = {});

/// Writes every artifact to a temporary name first and renames them all once
/// every write has succeeded.
void write_artifacts(const std::filesystem::path& dir, const std::map<std::string, std::string>& artifacts);

/// Vertex counts per level, "n0/n1/ninf".
std::string level_profile(const DecoratedGraph& g);
/// Sorted edge types, e.g. "E01,E11,E11"; "-" when there are no edges.
std::string edge_profile(const DecoratedGraph& g);

struct InspectFilter {
  std::optional<std::string> levels;
  /// Every listed edge type must occur.
  std::vector<EdgeType> has_edges;
  std::optional<Integer> automorphisms;
  /// Matches the full canonical form or a prefix of its id.
  std::optional<std::string> form;
};

struct InspectRow {
  std::string form_id;
  std::string levels;
  std::string edges;
  Integer automorphisms;
  DecoratedGraph graph;
};

/// Filters the graphs of a graphs.json artifact. Throws FileMalformed.
std::vector<InspectRow> inspect(const nlohmann::json& artifact, const InspectFilter& filter);
std::string inspect_table(const std::vector<InspectRow>& rows);

}  // namespace msploc
