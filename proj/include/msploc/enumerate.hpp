#pragma once

#include "msploc/graph_ops.hpp"

#include <string>
#include <vector>

namespace msploc {

struct EnumerationCaps {
  int max_vertices = 4;
  int max_edges = 4;
  /// Bound on k * |dL_e| for every edge.
  int max_edge_degree_numerator = 12;
  int max_vertex_genus = 3;
  /// Bound on the number of EInfInf edges.
  int max_web_edges = 2;
  /// Candidate graphs examined per shard before CapExceeded is raised.
  long max_candidates = 5'000'000;
};

bool within_caps(const DecoratedGraph& g, const WeightSystem& ws, const EnumerationCaps& caps);

struct EnumerationResult {
  /// Flat regular graphs, canonically relabelled, sorted by canonical form.
  std::vector<DecoratedGraph> regular;
  /// Valid flat pure loops, reported separately and never summed.
  std::vector<DecoratedGraph> pure_loops;
  long candidates = 0;
  int shards = 0;
};

/// Staged search sharded by vertex profile. Throws CapExceeded naming the
/// shard whose candidate budget ran out.
EnumerationResult enumerate_flat_regular(const WeightSystem& ws, const DiscreteData& dd,
                                         const EnumerationCaps& caps, int threads = 1);

/// Exhaustive labelled generation filtered by validate, flatness and
/// classify, deduplicated by brute-force isomorphism. Throws CapTooLarge
/// above 5 vertices or 5 edges.
EnumerationResult brute_force_enumerate(const WeightSystem& ws, const DiscreteData& dd, const EnumerationCaps& caps);

/// True when some flag carries monodromy for which the degeneracy locus is
/// empty.
bool degeneracy_empty(const DecoratedGraph& g, const WeightSystem& ws);

}  // namespace msploc
