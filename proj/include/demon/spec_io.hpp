#pragma once

#include <filesystem>
#include <set>
#include <string>

#include <json.hpp>

#include "demon/analysis.hpp"
#include "demon/spec.hpp"

namespace demon {

// { states:[names], initial:name, verdicts:{state:"top|bottom|unknown"},
//   transitions:[{from,to,label}] }
Specification spec_from_json(const nlohmann::json& j, const std::set<std::string>& monitors = {});
nlohmann::json to_json(const Specification& a);

// Adds { monitors:{name:spec}, attach:{monitor:component}, root:name,
//        ap_owner:{ap:component} }.
DecentralizedSpec decentralized_from_json(const nlohmann::json& j);
nlohmann::json to_json(const DecentralizedSpec& d);

// { nodes:[names], edges:[[from,to]] }; edge endpoints are added as nodes.
Graph graph_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Graph& g);

bool is_decentralized_json(const nlohmann::json& j);

/// Reads and parses a JSON file; ParseError on I/O or syntax problems.
nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace demon
