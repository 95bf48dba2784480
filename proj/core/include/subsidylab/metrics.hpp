#pragma once

#include <cstdint>
#include <vector>

#include "subsidylab/equilibrium.hpp"
#include "subsidylab/games.hpp"

namespace subsidylab {

// Price of anarchy of a subsidized game: worst equilibrium's total burden
// (agents' subsidized losses plus the designer's payments) over the
// unsubsidized optimum. The two-term numerator telescopes back to the
// unsubsidized social cost; both routes are computed and cross-checked.
// Preconditions (UndefinedMetricError): nonempty equilibrium set, nonzero
// optimum.
double poa(const MaintenanceGame& g, const MaintenanceSubsidy& scheme);

// Same numerator, but normalized by the cheapest *unsubsidized* equilibrium
// instead of the optimum; additionally needs a nonempty unsubsidized
// equilibrium set with nonzero minimum cost.
double poa_tilde(const MaintenanceGame& g, const MaintenanceSubsidy& scheme);

// Decision form of "PoA(scheme) == 1": the worst equilibrium's cost matches
// the optimum within tol. Well-defined even when the optimum is zero, which
// poa() itself rejects.
bool poa_is_one(const MaintenanceGame& g, const std::vector<double>& Phi,
                const std::vector<double>& sigma, double tol = kTol);
bool poa_is_one(const MaintenanceGame& g, const MaintenanceSubsidy& scheme,
                double tol = kTol);

// Whether the system works surely in every equilibrium of the subsidized
// game: for each equilibrium, phi must be 1 for every realization of the
// unrepaired components' priors that has positive probability.
bool system_functions_in_all_ne(const MaintenanceGame& g,
                                const std::vector<double>& Phi,
                                const std::vector<double>& sigma,
                                double tol = kTol);
bool system_functions_in_all_ne(const MaintenanceGame& g,
                                const MaintenanceSubsidy& scheme,
                                double tol = kTol);

// Cost-sharing counterparts.
double csg_poa(const CostSharingGame& g, const CsgSubsidy& subsidy);
double csg_poa_tilde(const CostSharingGame& g, const CsgSubsidy& subsidy);

// ---------------------------------------------------------------------------
// Value of information. Inspecting component/action j splits play into
// branches (component state y, or the action's revealed cost). Per agent and
// branch, VoI = subsidized loss at the selected prior equilibrium minus
// subsidized loss at the selected posterior equilibrium; positive means the
// revelation helped that agent.
//
// Equilibrium selection:
//   kPessimistic (default): adversarial; cheapest prior equilibrium for the
//     agent, costliest posterior one. Each agent's bound is computed
//     independently, so witnesses may differ across agents.
//   kGlobal: both sides use the minimum-social-cost equilibrium (lowest
//     state on ties), one common selection for all agents.
// ---------------------------------------------------------------------------

enum class VoiMode { kPessimistic, kGlobal };

struct VoiReport {
  int inspected = 0;                    // 0-based component
  std::vector<double> branch_value;     // revealed state per branch (1, 0)
  std::vector<double> branch_weight;    // P(branch) under the prior
  std::vector<double> worst;            // per agent: min over branches
  std::vector<double> expected;         // per agent: branch-weighted
  // Witnesses for `worst`, per agent: branch index and the equilibria
  // realizing the bound.
  std::vector<int> worst_branch;
  std::vector<std::uint64_t> worst_prior_state;
  std::vector<std::uint64_t> worst_post_state;
};

VoiReport voi_report(const MaintenanceGame& g, const MaintenanceSubsidy& scheme,
                     int j, VoiMode mode = VoiMode::kPessimistic);

struct CsgVoiReport {
  int inspected = 0;                    // action index
  std::vector<double> branch_value;     // revealed cost per branch
  std::vector<double> branch_weight;
  std::vector<double> worst;
  std::vector<double> expected;
  std::vector<int> worst_branch;
  std::vector<CsgProfile> worst_prior_profile;
  std::vector<CsgProfile> worst_post_profile;
};

CsgVoiReport csg_voi_report(const CostSharingGame& g, const CsgSubsidy& subsidy,
                            int action, VoiMode mode = VoiMode::kPessimistic);

}  // namespace subsidylab
