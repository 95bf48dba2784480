#pragma once

#include <optional>
#include <string>
#include <vector>

#include "subsidylab/equilibrium.hpp"
#include "subsidylab/games.hpp"

namespace subsidylab {

// ---------------------------------------------------------------------------
// Closed forms for two components in series (both repair costs positive,
// both priors strictly inside (0,1); anything else is a domain error).
// ---------------------------------------------------------------------------

// Least uniform subsidy making the worst equilibrium as cheap as the best
// unsubsidized one. Nonzero only when (C1, C2) lies in the box
// [q1 p2, q1] x [q2 p1, q2] (q_i = 1 - p_i); inside it the answer is
// min(C1 - q1 p2, C2 - q2 p1).
double two_series_poa_subsidy(double p1, double p2, double C1, double C2);

// Least total per-agent subsidy making the system work in every equilibrium.
// The favorable region is the union of two boxes (fully incentivize agent 1
// and make agent 2 willing, or symmetrically); the optimum is the L1
// distance to that union:
//   min( max(C1 - q1 p2, 0) + max(C2 - q2, 0),
//        max(C2 - q2 p1, 0) + max(C1 - q1, 0) ).
double two_series_system_subsidy(double p1, double p2, double C1, double C2);

// ---------------------------------------------------------------------------
// Critical subsidy values. As a uniform (or per-agent) subsidy sigma grows,
// agent i's best response at a fixed opponent profile flips exactly at
// sigma = costs[i] - D_i(opponents); the equilibrium set is constant between
// consecutive critical values. Only values > kTol are kept (the rest can
// never be crossed by a nonnegative subsidy).
// ---------------------------------------------------------------------------

struct CriticalValueSet {
  std::vector<std::vector<double>> per_agent;  // ascending, deduplicated
  std::vector<double> merged;                  // union, ascending
};

CriticalValueSet critical_values(const MaintenanceGame& g);
CriticalValueSet critical_values(const MaintenanceGame& g,
                                 const std::vector<double>& Phi);

// ---------------------------------------------------------------------------
// Subsidy design. Objectives:
//   kPoaOne  : worst equilibrium cost equals the optimum.
//   kSystem  : the system works surely in every equilibrium.
//   kVoi     : no agent is hurt by the inspection of component j (worst-case
//              value of information >= 0 for everyone).
// ---------------------------------------------------------------------------

struct SolveObjective {
  enum class Kind { kPoaOne, kSystem, kVoi };
  Kind kind = Kind::kPoaOne;
  int j = -1;  // kVoi: inspected component (0-based)

  static SolveObjective poa_one() { return {Kind::kPoaOne, -1}; }
  static SolveObjective system() { return {Kind::kSystem, -1}; }
  static SolveObjective voi(int j) { return {Kind::kVoi, j}; }
};

struct OptimalUniformResult {
  bool feasible = false;
  double sigma = 0.0;
  // kVoi: the branch (1 or 0) and agent receiving the conditional payment.
  int branch = -1;
  int agent = -1;
  MaintenanceSubsidy scheme;
  std::string note;
};

// Least subsidy level in [0, H] achieving the objective, found by scanning
// one candidate per equilibrium-constant cell (plus each cell boundary from
// just above). For kPoaOne / kSystem the scheme is uniform; for kVoi the
// candidates are conditional schemes paying one agent on one branch, and the
// reported sigma is that payment.
// margin <= 0 means auto (kMarginScale * H).
OptimalUniformResult optimal_uniform_subsidy(const MaintenanceGame& g,
                                             const SolveObjective& objective,
                                             double margin = -1.0);

struct MinAgentsResult {
  bool yes = false;
  MaintenanceSubsidy witness;  // per-agent scheme when yes
  // Some candidate level had to be discarded because it exceeded H; a "no"
  // might then be an artifact of the budget ceiling.
  bool hbound_hit = false;
};

// Can subsidizing at most n_star agents (positive payments, each <= H) bring
// the price of anarchy to 1? Exhaustive over agent subsets and per-agent
// critical levels; n is capped because of that.
MinAgentsResult min_agents_poa1(const MaintenanceGame& g, int n_star,
                                double margin = -1.0);

struct MinBudgetResult {
  bool yes = false;
  MaintenanceSubsidy witness;
  double spent = 0.0;
  bool hbound_hit = false;
  // kVoi: the constraint is per-branch (each branch's payments must fit the
  // budget separately); flagged so reports can say so.
  bool budget_per_branch = false;
};

// Can the objective be met with total payments <= budget? kSystem searches
// per-agent vectors; kVoi searches conditional vectors branch by branch
// (the two branches decouple: each branch's value of information depends
// only on that branch's payments).
MinBudgetResult min_budget_decision(const MaintenanceGame& g,
                                    const SolveObjective& objective,
                                    double budget, double margin = -1.0);

struct CsgPoa1Result {
  bool yes = false;
  std::vector<int> actions;  // fully subsidized family, ascending
};

// Can fully subsidizing at most n_star actions (each with expected cost
// <= h_cap) bring the cost-sharing game's price of anarchy to 1? The family
// must offer every agent a free action, otherwise the uncovered agents'
// play is not pinned down by the subsidy at all.
CsgPoa1Result csg_poa1_decision(const CostSharingGame& g, int n_star,
                                double h_cap);

}  // namespace subsidylab
