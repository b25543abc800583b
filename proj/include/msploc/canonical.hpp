#pragma once

#include "msploc/graph.hpp"

#include <string>
#include <vector>

namespace msploc {

struct CanonicalLabeling {
  /// Isomorphism-invariant encoding; equal iff the graphs are isomorphic.
  std::string form;
  /// order[i] is the original id of the vertex placed at position i.
  std::vector<int> order;
  /// Decoration-preserving automorphisms, parallel-edge swaps included.
  Integer automorphisms;
};

/// Individualization-refinement over vertex colours (level, hour, genus,
/// degree pair, legs) with exhaustive search of the refinement tree.
CanonicalLabeling canonical_labeling(const DecoratedGraph& graph);
std::string canonical_form(const DecoratedGraph& graph);
Integer automorphism_order(const DecoratedGraph& graph);
/// The graph with vertices in canonical order and edges sorted.
DecoratedGraph canonical_relabel(const DecoratedGraph& graph);

/// Short stable identifier: first 16 hex digits of SHA-256 of the form.
std::string form_id(const std::string& form);
std::string sha256_hex(const std::string& data);

// Brute-force references used by tests.
bool brute_isomorphic(const DecoratedGraph& a, const DecoratedGraph& b);
Integer brute_automorphism_order(const DecoratedGraph& graph);

}  // namespace msploc
