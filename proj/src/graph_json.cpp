#include "msploc/graph_json.hpp"

#include "msploc/error.hpp"

namespace msploc {

using nlohmann::json;

json marking_to_json(const Marking& m) {
  if (m.is_rho_unit()) return "rho";
  return m.m();
}

Marking marking_from_json(const json& j) {
  if (j.is_string() && j.get<std::string>() == "rho") return Marking::rho_unit();
  if (j.is_number_integer() && j.get<long>() > 0 && j.get<long>() < 1000000) return Marking::narrow(j.get<int>());
  throw Error(ErrorCode::FileMalformed, "bad marking " + j.dump());
}

json graph_to_json(const DecoratedGraph& g) {
  json vs = json::array();
  for (std::size_t i = 0; i < g.vertices.size(); ++i) {
    const Vertex& v = g.vertices[i];
    json legs = json::array();
    for (const Leg& l : v.legs) legs.push_back({{"label", l.label}, {"marking", marking_to_json(l.marking)}});
    vs.push_back({{"id", i},
                  {"level", to_string(v.level)},
                  {"hour", v.hour},
                  {"genus", v.genus},
                  {"d0", to_string(v.d0)},
                  {"dinf", to_string(v.dinf)},
                  {"legs", legs}});
  }
  json es = json::array();
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    const Edge& e = g.edges[i];
    es.push_back({{"id", i},
                  {"u", e.u},
                  {"v", e.v},
                  {"type", to_string(e.type)},
                  {"d0", to_string(e.d0)},
                  {"dinf", to_string(e.dinf)}});
  }
  return {{"vertices", vs}, {"edges", es}};
}

namespace {

template <class T>
T field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorCode::FileMalformed, std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::FileMalformed, std::string("field '") + key + "': " + e.what());
  }
}

Rational rational_field(const json& j, const char* key) {
  try {
    return parse_rational(field<std::string>(j, key));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::FileMalformed) throw;
    throw Error(ErrorCode::FileMalformed, std::string("field '") + key + "': " + e.what());
  }
}

}  // namespace

DecoratedGraph graph_from_json(const json& j) {
  DecoratedGraph g;
  auto vs = field<json>(j, "vertices");
  auto es = field<json>(j, "edges");
  if (!vs.is_array() || !es.is_array()) throw Error(ErrorCode::FileMalformed, "vertices/edges must be arrays");
  for (const auto& jv : vs) {
    Vertex v;
    v.level = parse_level(field<std::string>(jv, "level"));
    v.hour = field<int>(jv, "hour");
    v.genus = field<int>(jv, "genus");
    v.d0 = rational_field(jv, "d0");
    v.dinf = rational_field(jv, "dinf");
    for (const auto& jl : field<json>(jv, "legs"))
      v.legs.push_back({field<int>(jl, "label"), marking_from_json(field<json>(jl, "marking"))});
    g.add_vertex(std::move(v));
  }
  const int nv = static_cast<int>(g.vertices.size());
  for (const auto& je : es) {
    Edge e;
    e.u = field<int>(je, "u");
    e.v = field<int>(je, "v");
    if (e.u < 0 || e.u >= nv || e.v < 0 || e.v >= nv) throw Error(ErrorCode::FileMalformed, "edge endpoint out of range");
    e.type = parse_edge_type(field<std::string>(je, "type"));
    e.d0 = rational_field(je, "d0");
    e.dinf = rational_field(je, "dinf");
    g.add_edge(e);
  }
  return g;
}

std::string graph_to_dot(const DecoratedGraph& g, const std::string& name) {
  static const char* palette[] = {"white", "lightblue", "lightpink", "palegreen", "khaki", "plum", "orange", "lightgray"};
  auto quote = [](const std::string& s) {
    std::string q = "\"";
    for (char c : s) {
      if (c == '"' || c == '\\') q += '\\';
      q += c;
    }
    return q + "\"";
  };
  std::string s = "graph " + quote(name) + " {\n  rankdir=LR;\n  node [style=filled];\n";
  for (Level lv : {Level::L0, Level::L1, Level::LInf}) {
    std::string ids;
    for (std::size_t i = 0; i < g.vertices.size(); ++i)
      if (g.vertices[i].level == lv) ids += " v" + std::to_string(i) + ";";
    if (!ids.empty()) s += "  { rank=same;" + ids + " }\n";
  }
  for (std::size_t i = 0; i < g.vertices.size(); ++i) {
    const Vertex& v = g.vertices[i];
    std::string label = "L" + to_string(v.level);
    if (v.hour) label += " h" + std::to_string(v.hour);
    label += " g" + std::to_string(v.genus) + " (" + to_string(v.d0) + "," + to_string(v.dinf) + ")";
    for (const Leg& l : v.legs) label += " #" + std::to_string(l.label) + ":" + l.marking.to_string();
    s += "  v" + std::to_string(i) + " [label=" + quote(label) + ", fillcolor=" +
         palette[static_cast<std::size_t>(v.hour) % 8] + "];\n";
  }
  for (const Edge& e : g.edges)
    s += "  v" + std::to_string(e.u) + " -- v" + std::to_string(e.v) + " [label=" +
         quote(to_string(e.type) + " (" + to_string(e.d0) + "," + to_string(e.dinf) + ")") + "];\n";
  return s + "}\n";
}

}  // namespace msploc
