#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "subsidylab/common.hpp"
#include "subsidylab/system_function.hpp"

namespace subsidylab {

// ---------------------------------------------------------------------------
// Component-maintenance games.
//
// n agents each own one component and choose DO-NOTHING (0) or REPAIR (1).
// Component i works with prior probability p[i]; repair makes it work surely.
// Agent i pays costs[i] for repairing plus the system failure probability
// 1 - Phi(joint state). costs[i] may be negative (repairs with side benefits).
// ---------------------------------------------------------------------------

struct MaintenanceGame {
  int n = 0;
  std::vector<double> costs;  // repair cost per agent
  std::vector<double> p;      // P(component works unrepaired)
  SystemFunction phi;
  // Subsidy budget ceiling: every per-agent subsidy the solvers consider
  // lives in [0, H].
  double H = 1.0;
};

// H large enough that (a) any repair cost can be fully offset and (b) the
// hardness constructions' "just above one" witnesses fit.
double default_budget(const std::vector<double>& costs);

MaintenanceGame make_maintenance_game(std::vector<double> costs,
                                      std::vector<double> p, SystemFunction phi,
                                      std::optional<double> H = std::nullopt);

// Inspection outcome: component j (0-based) revealed to be working (y=1) or
// broken (y=0).
struct Posterior {
  int j = 0;
  int y = 1;
};

// Belief update after inspecting component j: the prior p[j] is replaced by
// the revealed state. Total (defined even when the prior put probability zero
// on the outcome), which point-mass priors rely on.
MaintenanceGame posterior_game(const MaintenanceGame& g, const Posterior& post);

// System reliability Phi for every joint action word, indexed by word.
// Computed by the per-bit mixing transform: for each component i and each
// word pair (lo, hi) differing only in bit i,
//     f[lo] <- (1 - p_i) * f[lo] + p_i * f[hi]
// (hi already has component i surely working; lo mixes over its prior).
// After processing all bits, f[s] = Phi(s). O(n 2^n) from a table; the
// series-parallel form instead uses its closed form per state, so it is exact
// and needs no table at all.
std::vector<double> reliability_table(const MaintenanceGame& g,
                                      int cap_n = kEnumerationCapN);

// Subsidy schemes. A scheme assigns each agent a nonnegative payment that is
// made only when the agent repairs; agent i's effective repair cost becomes
// costs[i] - sigma[i]. Conditional schemes pick the vector by the inspection
// outcome: `prior` before any inspection, `on_y1` / `on_y0` afterwards.
struct MaintenanceSubsidy {
  enum class Mode { kUniform, kPerAgent, kConditional };
  Mode mode = Mode::kUniform;
  double sigma = 0.0;               // kUniform
  std::vector<double> per_agent;    // kPerAgent
  std::vector<double> prior;        // kConditional
  std::vector<double> on_y1;        // kConditional
  std::vector<double> on_y0;        // kConditional

  static MaintenanceSubsidy none() { return uniform(0.0); }
  static MaintenanceSubsidy uniform(double sigma);
  static MaintenanceSubsidy per_agent_scheme(std::vector<double> sigma);
  static MaintenanceSubsidy conditional(std::vector<double> prior,
                                        std::vector<double> on_y1,
                                        std::vector<double> on_y0);

  // The per-agent payment vector in force for a given branch: nullopt means
  // the prior (pre-inspection) stage, 1 / 0 the revealed component state.
  std::vector<double> effective(int n, std::optional<int> branch) const;

  void validate(int n, double H) const;
};

// ---------------------------------------------------------------------------
// Bayesian fair cost-sharing games.
//
// Each agent picks one action from its availability list; an action's cost is
// world-dependent, worlds are drawn from a common prior, and an action's
// expected cost is split evenly among the agents choosing it. A subsidy pays
// part of an action's cost before the split.
// ---------------------------------------------------------------------------

struct CsgAction {
  std::string id;
  std::vector<int> avail;  // 0-based agent indices allowed to pick this action
};

struct CsgWorld {
  double prob = 0.0;
  std::vector<double> costs;  // by action index
};

struct CostSharingGame {
  int agents = 0;
  std::vector<CsgAction> actions;
  std::vector<CsgWorld> worlds;
  std::vector<std::vector<int>> actions_of_agent;  // derived availability
  double H = 1.0;  // per-action subsidy ceiling
};

CostSharingGame make_cost_sharing_game(int agents,
                                       std::vector<CsgAction> actions,
                                       std::vector<CsgWorld> worlds,
                                       std::optional<double> H = std::nullopt);

// Expected cost of each action under the (current) world prior.
std::vector<double> csg_expected_costs(const CostSharingGame& g);

// Per-action subsidy amounts; the subsidized expected cost split among k
// users of action a is (E[c_a] - amount[a]) / k.
struct CsgSubsidy {
  std::vector<double> amount;  // by action index, >= 0

  static CsgSubsidy none(const CostSharingGame& g);
  void validate(const CostSharingGame& g) const;
};

// Inspection of one action's realized cost. The posterior conditions the
// world prior on worlds whose cost for that action matches the revelation
// (absolute tolerance kTol).
struct CsgPosterior {
  int action = 0;
  double revealed = 0.0;
};

CostSharingGame csg_posterior_game(const CostSharingGame& g,
                                   const CsgPosterior& post);

// Distinct revealable cost values of an action with their probabilities,
// grouped within kTol, descending-probability-independent: ascending value.
std::vector<std::pair<double, double>> csg_revelation_branches(
    const CostSharingGame& g, int action);

// One action index per agent.
using CsgProfile = std::vector<int>;

// Per-agent expected shares under profile and subsidy; `ec` is
// csg_expected_costs of the game being played.
std::vector<double> csg_agent_costs(const CostSharingGame& g,
                                    const std::vector<double>& ec,
                                    const CsgProfile& profile,
                                    const CsgSubsidy& subsidy);

}  // namespace subsidylab
