#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "mck/morse_graph.hpp"

namespace mck {

// Atoms are written in Topology order with saddles ascending and slot 0 outgoing; a circle
// reference [atom, k] names the k-th circle of that atom in tracing order.
nlohmann::json to_json(const MorseGraph& g);
// Throws ParseError for structural problems and ValidationError for invalid graphs.
MorseGraph from_json(const nlohmann::json& j);
MorseGraph from_json_text(const std::string& text);
std::string to_dot(const MorseGraph& g, const std::string& name = "lmg");

struct Catalog {
  int p = 0, q = 0, r = 0;
  Marking marks;
  std::vector<MorseGraph> classes;
};
nlohmann::json catalog_to_json(const Catalog& c);
Catalog catalog_from_json(const nlohmann::json& j);
// One cluster per class, holding one subgraph per level.
std::string catalog_to_dot(const Catalog& c);

nlohmann::json parse_json_text(const std::string& text);  // ParseError with byte offset

}  // namespace mck
