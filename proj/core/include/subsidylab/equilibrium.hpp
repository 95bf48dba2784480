#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "subsidylab/games.hpp"

namespace subsidylab {

// ---------------------------------------------------------------------------
// Maintenance games. Joint actions are n-bit words (bit i = agent i repairs).
// All equilibrium checks are weak: a deviation must be strictly profitable
// beyond kTol to break a profile, so exact ties remain equilibria.
// ---------------------------------------------------------------------------

struct NashSet {
  std::vector<std::uint64_t> states;  // ascending
  bool empty() const { return states.empty(); }
};

// Unsubsidized per-agent losses at joint action `s`: costs[i]*s_i + 1 - Phi(s).
std::vector<double> cmg_agent_costs(const MaintenanceGame& g,
                                    const std::vector<double>& Phi,
                                    std::uint64_t s);

// Same with payments sigma[i] deducted from repairing agents.
std::vector<double> cmg_agent_costs(const MaintenanceGame& g,
                                    const std::vector<double>& Phi,
                                    std::uint64_t s,
                                    const std::vector<double>& sigma);

// Unsubsidized social cost sum_i costs[i]*s_i + n*(1 - Phi(s)).
double cmg_total_cost(const MaintenanceGame& g, const std::vector<double>& Phi,
                      std::uint64_t s);

bool is_nash(const MaintenanceGame& g, const std::vector<double>& Phi,
             std::uint64_t s, const std::vector<double>& sigma,
             double tol = kTol);

// All pure equilibria under per-agent payments `sigma`. `Phi` must be
// reliability_table(g); passing it in lets sweeps reuse one table across many
// subsidy values.
NashSet enumerate_nash(const MaintenanceGame& g, const std::vector<double>& Phi,
                       const std::vector<double>& sigma, double tol = kTol);

// Convenience wrapper: builds the table and resolves the scheme's branch.
NashSet enumerate_nash(const MaintenanceGame& g,
                       const MaintenanceSubsidy& scheme,
                       std::optional<int> branch = std::nullopt,
                       double tol = kTol);

// Minimum social cost and the (lowest-word) minimizer.
std::pair<double, std::uint64_t> opt_cost(const MaintenanceGame& g,
                                          const std::vector<double>& Phi);
std::pair<double, std::uint64_t> opt_cost(const MaintenanceGame& g);

// ---------------------------------------------------------------------------
// Cost-sharing games. Profiles assign each agent an action index.
// ---------------------------------------------------------------------------

struct CsgNashSet {
  std::vector<CsgProfile> profiles;  // lexicographic by agent
  bool empty() const { return profiles.empty(); }
};

std::uint64_t csg_profile_count(const CostSharingGame& g);

bool csg_is_nash(const CostSharingGame& g, const std::vector<double>& ec,
                 const CsgProfile& profile, const CsgSubsidy& subsidy,
                 double tol = kTol);

CsgNashSet csg_enumerate_nash(const CostSharingGame& g,
                              const CsgSubsidy& subsidy, double tol = kTol,
                              std::uint64_t profile_cap = kProfileCap);

// Unsubsidized social cost of a profile: sum of expected costs of the used
// actions (fair shares add back up to the full price).
double csg_total_cost(const CostSharingGame& g, const std::vector<double>& ec,
                      const CsgProfile& profile);

// Minimum social cost and its lexicographically-least minimizer.
std::pair<double, CsgProfile> csg_opt_cost(
    const CostSharingGame& g, std::uint64_t profile_cap = kProfileCap);

// Minimum social cost alone. The total only depends on which actions are in
// use, so for <= 20 agents this is a covered-agents-mask DP instead of a
// profile sweep and never hits the profile cap.
double csg_opt_value(const CostSharingGame& g,
                     std::uint64_t profile_cap = kProfileCap);

}  // namespace subsidylab
