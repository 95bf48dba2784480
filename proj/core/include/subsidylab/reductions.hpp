#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "subsidylab/common.hpp"
#include "subsidylab/games.hpp"

namespace subsidylab {

struct Graph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;  // 0-based, u < v, deduplicated
};

// Validates and canonicalizes: endpoints in range, no self-loops, each edge
// stored (min, max), sorted, duplicates dropped.
Graph make_graph(int n, std::vector<std::pair<int, int>> edges);

struct SetCoverInstance {
  int n = 0;                            // universe {0, ..., n-1}
  std::vector<std::vector<int>> sets;   // each nonempty, sorted, in range
  int k = 0;                            // target; k < n by problem statement
};

SetCoverInstance make_set_cover(int n, std::vector<std::vector<int>> sets,
                                int k);

// A reduced maintenance-game instance together with the decision parameters
// the matching solver needs.
struct CmgReduction {
  MaintenanceGame game;
  int n_star = 0;             // subset-size bound (poas variant)
  double budget = 0.0;        // payment budget (system / voi variants)
  double suggested_sigma = 0.0;  // per-agent level the construction uses
  int inspect = -1;           // inspected component (voi variant)
};

// Vertex cover -> "can subsidizing at most k agents force price of anarchy
// 1": point-mass prior at the all-broken state, unit repair costs, one CNF
// clause per edge.
CmgReduction vc_to_cmg_poas(const Graph& g, int k);

// Vertex cover -> "can total payments of at most k-1 guarantee the system
// functions in every equilibrium": repair costs 1 - 1/(2n).
CmgReduction vc_to_cmg_system(const Graph& g, int k);

// Vertex cover -> "can per-branch payments of at most k(1 + 1/(2n)) make
// worst-case value of information nonnegative for every agent". Adds a
// sensor component (prior 1/2, repair cost 0.4) that the system requires and
// that inspection reveals. Experimental: validated empirically against the
// brute-force oracle, not backed by a worked proof.
CmgReduction vc_to_cmg_voi(const Graph& g, int k);

struct CsgReduction {
  CostSharingGame game;
  int n_star = 0;
  double h_cap = 1.0;      // per-action eligibility cap for the family search
  int inspect_action = -1;  // voi variant
};

// Set cover -> "can fully subsidizing at most k affordable actions force
// price of anarchy 1": one action per set and per agent at cost 1, one
// global fallback at cost n - 1/2, single world.
CsgReduction sc_to_csg_poas(const SetCoverInstance& inst);

// Set cover -> "can fully subsidizing at most k cost-1 actions make
// worst-case value of information nonnegative": the fallback's cost becomes
// world-dependent (n - 1/2 with probability 1/(2n), free otherwise) and is
// the inspected action. Experimental, like vc_to_cmg_voi.
CsgReduction sc_to_csg_voi(const SetCoverInstance& inst);

// Exhaustive ground-truth oracles.
bool brute_vc(const Graph& g, int k);        // |V| <= 16
bool brute_sc(const SetCoverInstance& inst); // n <= 12, |sets| <= 20

// Brute-force decision for the csg voi variant: some family of at most
// n_star non-inspected actions with expected cost <= h_cap, subsidized at
// full expected price, makes every agent's worst-case value of information
// nonnegative.
bool csg_voi_decision(const CostSharingGame& g, int n_star, int inspect,
                      double h_cap);

enum class ReductionKind { kCmgPoas, kCmgSystem, kCmgVoi, kCsgPoas, kCsgVoi };

struct ReductionReport {
  bool oracle = false;     // brute-force answer on the source instance
  bool game_side = false;  // solver answer on the reduced instance
  bool agree = false;
  std::string detail;
};

ReductionReport verify_reduction(ReductionKind kind, const Graph& g, int k);
ReductionReport verify_reduction(ReductionKind kind,
                                 const SetCoverInstance& inst);

// Every connected graph on 1..max_n vertices, one representative per
// isomorphism class (max_n <= 6; the counts per size are 1, 1, 2, 6, 21,
// 112).
std::vector<Graph> connected_graphs_up_to(int max_n);

// Seeded instance generators; index selects a substream so draws are
// order-independent.
Graph random_graph(int n, double edge_prob, std::uint64_t seed,
                   std::uint64_t index);
// Coverable instance with 2..max_n elements, at most 8 sets, k in [1, n-1].
SetCoverInstance random_set_cover(int max_n, std::uint64_t seed,
                                  std::uint64_t index);

}  // namespace subsidylab
