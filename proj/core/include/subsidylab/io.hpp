#pragma once

#include <nlohmann/json.hpp>
#include <string>

#include "subsidylab/games.hpp"
#include "subsidylab/learning.hpp"
#include "subsidylab/reductions.hpp"

namespace subsidylab {

// File formats. Every index in a file is 1-based (components, agents, graph
// vertices, set elements), matching the signed-literal CNF convention;
// in-memory structures are 0-based throughout. Parse failures of any kind
// surface as SchemaError.

struct LoadedGame {
  enum class Type { kMaintenance, kCostSharing };
  Type type = Type::kMaintenance;
  MaintenanceGame cmg;
  CostSharingGame csg;
};

LoadedGame parse_game(const std::string& text);
LoadedGame load_game(const std::string& path);

MaintenanceSubsidy parse_maintenance_scheme(const std::string& text,
                                            const MaintenanceGame& g);
MaintenanceSubsidy load_maintenance_scheme(const std::string& path,
                                           const MaintenanceGame& g);
CsgSubsidy parse_csg_scheme(const std::string& text, const CostSharingGame& g);
CsgSubsidy load_csg_scheme(const std::string& path, const CostSharingGame& g);

// JSON {"n": int, "edges": [[u, v], ...]} or whitespace text: the vertex
// count followed by endpoint pairs.
Graph parse_graph(const std::string& text);
Graph load_graph(const std::string& path);

// JSON {"n": int, "sets": [[...], ...], "k": int}.
SetCoverInstance parse_set_cover(const std::string& text);
SetCoverInstance load_set_cover(const std::string& path);

// JSON {"family": ..., "n": ..., ...}; unspecified fields keep the
// GameDistribution defaults.
GameDistribution parse_distribution(const std::string& text);
GameDistribution load_distribution(const std::string& path);

nlohmann::ordered_json game_to_json(const MaintenanceGame& g);
nlohmann::ordered_json game_to_json(const CostSharingGame& g);

// Canonical text form: insertion-order keys, every float printed with 12
// significant digits. Identical values always produce identical bytes, which
// the reproducibility contract depends on; nlohmann's own dump() uses
// shortest-round-trip floats instead.
std::string canonical_dump(const nlohmann::ordered_json& j, int indent = 2);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace subsidylab
