#pragma once

#include "msploc/graph.hpp"

#include <json.hpp>

#include <string>

namespace msploc {

/// Markings serialize as "rho" or the integer exponent.
nlohmann::json marking_to_json(const Marking& m);
Marking marking_from_json(const nlohmann::json& j);

/// Rationals are always "p/q" strings.
nlohmann::json graph_to_json(const DecoratedGraph& g);
/// Throws FileMalformed on schema errors.
DecoratedGraph graph_from_json(const nlohmann::json& j);

/// Levels become ranks, hours become fill colours.
std::string graph_to_dot(const DecoratedGraph& g, const std::string& name);

}  // namespace msploc
