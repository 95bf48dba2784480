#include "subsidylab/equilibrium.hpp"

#include <algorithm>
#include <limits>

namespace subsidylab {

std::vector<double> cmg_agent_costs(const MaintenanceGame& g,
                                    const std::vector<double>& Phi,
                                    std::uint64_t s) {
  return cmg_agent_costs(g, Phi, s,
                         std::vector<double>(static_cast<size_t>(g.n), 0.0));
}

std::vector<double> cmg_agent_costs(const MaintenanceGame& g,
                                    const std::vector<double>& Phi,
                                    std::uint64_t s,
                                    const std::vector<double>& sigma) {
  const double fail = 1.0 - Phi[s];
  std::vector<double> out(static_cast<size_t>(g.n));
  for (int i = 0; i < g.n; ++i) {
    const bool repairs = (s >> i) & 1u;
    out[static_cast<size_t>(i)] =
        (repairs ? g.costs[static_cast<size_t>(i)] -
                       sigma[static_cast<size_t>(i)]
                 : 0.0) +
        fail;
  }
  return out;
}

double cmg_total_cost(const MaintenanceGame& g, const std::vector<double>& Phi,
                      std::uint64_t s) {
  double total = g.n * (1.0 - Phi[s]);
  for (int i = 0; i < g.n; ++i)
    if ((s >> i) & 1u) total += g.costs[static_cast<size_t>(i)];
  return total;
}

bool is_nash(const MaintenanceGame& g, const std::vector<double>& Phi,
             std::uint64_t s, const std::vector<double>& sigma, double tol) {
  // Agent i's deviation flips only its own bit; everything except the repair
  // payment and Phi cancels, so the test reduces to comparing the marginal
  // reliability gain D_i = Phi(s_i=1) - Phi(s_i=0) with the effective cost
  // c_i = costs[i] - sigma[i]. Weak inequalities keep ties in the set.
  for (int i = 0; i < g.n; ++i) {
    const std::uint64_t bit = std::uint64_t{1} << i;
    const double c =
        g.costs[static_cast<size_t>(i)] - sigma[static_cast<size_t>(i)];
    const double D = Phi[s | bit] - Phi[s & ~bit];
    if (s & bit) {
      if (!(c <= D + tol)) return false;  // repairing must stay worthwhile
    } else {
      if (!(D <= c + tol)) return false;  // repairing must not strictly win
    }
  }
  return true;
}

NashSet enumerate_nash(const MaintenanceGame& g, const std::vector<double>& Phi,
                       const std::vector<double>& sigma, double tol) {
  NashSet out;
  const std::uint64_t size = std::uint64_t{1} << g.n;
  for (std::uint64_t s = 0; s < size; ++s)
    if (is_nash(g, Phi, s, sigma, tol)) out.states.push_back(s);
  return out;
}

NashSet enumerate_nash(const MaintenanceGame& g,
                       const MaintenanceSubsidy& scheme,
                       std::optional<int> branch, double tol) {
  const std::vector<double> Phi = reliability_table(g);
  return enumerate_nash(g, Phi, scheme.effective(g.n, branch), tol);
}

std::pair<double, std::uint64_t> opt_cost(const MaintenanceGame& g,
                                          const std::vector<double>& Phi) {
  const std::uint64_t size = std::uint64_t{1} << g.n;
  double best = cmg_total_cost(g, Phi, 0);
  std::uint64_t arg = 0;
  for (std::uint64_t s = 1; s < size; ++s) {
    const double c = cmg_total_cost(g, Phi, s);
    if (c < best) {  // strict improvement keeps the lowest word on ties
      best = c;
      arg = s;
    }
  }
  return {best, arg};
}

std::pair<double, std::uint64_t> opt_cost(const MaintenanceGame& g) {
  return opt_cost(g, reliability_table(g));
}

std::uint64_t csg_profile_count(const CostSharingGame& g) {
  std::uint64_t count = 1;
  for (const auto& avail : g.actions_of_agent) {
    if (count > kProfileCap * 2) return count;  // already past any cap
    count *= avail.size();
  }
  return count;
}

bool csg_is_nash(const CostSharingGame& g, const std::vector<double>& ec,
                 const CsgProfile& profile, const CsgSubsidy& subsidy,
                 double tol) {
  std::vector<int> users(g.actions.size(), 0);
  for (int a : profile) ++users[static_cast<size_t>(a)];
  for (int i = 0; i < g.agents; ++i) {
    const int a = profile[static_cast<size_t>(i)];
    const double cur =
        (ec[static_cast<size_t>(a)] - subsidy.amount[static_cast<size_t>(a)]) /
        users[static_cast<size_t>(a)];
    for (int b : g.actions_of_agent[static_cast<size_t>(i)]) {
      if (b == a) continue;
      // Joining action b makes the agent its (users[b]+1)-th user.
      const double alt =
          (ec[static_cast<size_t>(b)] -
           subsidy.amount[static_cast<size_t>(b)]) /
          (users[static_cast<size_t>(b)] + 1);
      if (alt < cur - tol) return false;
    }
  }
  return true;
}

namespace {

// Runs fn(profile) for every profile, lexicographic by agent then by the
// agent's availability order. Throws when the space exceeds the cap.
template <typename Fn>
void for_each_profile(const CostSharingGame& g, std::uint64_t profile_cap,
                      Fn&& fn) {
  if (csg_profile_count(g) > profile_cap)
    throw SchemaError("profile space exceeds enumeration cap");
  CsgProfile profile(static_cast<size_t>(g.agents));
  std::vector<size_t> pos(static_cast<size_t>(g.agents), 0);
  for (int i = 0; i < g.agents; ++i)
    profile[static_cast<size_t>(i)] = g.actions_of_agent[static_cast<size_t>(i)][0];
  while (true) {
    fn(static_cast<const CsgProfile&>(profile));
    int i = g.agents - 1;
    while (i >= 0) {
      const auto& avail = g.actions_of_agent[static_cast<size_t>(i)];
      if (++pos[static_cast<size_t>(i)] < avail.size()) {
        profile[static_cast<size_t>(i)] = avail[pos[static_cast<size_t>(i)]];
        break;
      }
      pos[static_cast<size_t>(i)] = 0;
      profile[static_cast<size_t>(i)] = avail[0];
      --i;
    }
    if (i < 0) return;
  }
}

}  // namespace

CsgNashSet csg_enumerate_nash(const CostSharingGame& g,
                              const CsgSubsidy& subsidy, double tol,
                              std::uint64_t profile_cap) {
  subsidy.validate(g);
  const std::vector<double> ec = csg_expected_costs(g);
  CsgNashSet out;
  for_each_profile(g, profile_cap, [&](const CsgProfile& profile) {
    if (csg_is_nash(g, ec, profile, subsidy, tol))
      out.profiles.push_back(profile);
  });
  return out;
}

double csg_total_cost(const CostSharingGame& g, const std::vector<double>& ec,
                      const CsgProfile& profile) {
  std::vector<char> used(g.actions.size(), 0);
  for (int a : profile) used[static_cast<size_t>(a)] = 1;
  double total = 0.0;
  for (size_t a = 0; a < used.size(); ++a)
    if (used[a]) total += ec[a];
  return total;
}

std::pair<double, CsgProfile> csg_opt_cost(const CostSharingGame& g,
                                           std::uint64_t profile_cap) {
  if (csg_profile_count(g) > profile_cap)
    throw SchemaError("profile space exceeds enumeration cap");
  const std::vector<double> ec = csg_expected_costs(g);

  // Incremental odometer: maintain per-action user counts and a running
  // total so each step is O(1) instead of O(actions). The accumulated total
  // drifts, so the winner gets an exact recompute at the end.
  std::vector<int> users(g.actions.size(), 0);
  CsgProfile profile(static_cast<size_t>(g.agents));
  std::vector<size_t> pos(static_cast<size_t>(g.agents), 0);
  double running = 0.0;
  for (int i = 0; i < g.agents; ++i) {
    const int a = g.actions_of_agent[static_cast<size_t>(i)][0];
    profile[static_cast<size_t>(i)] = a;
    if (users[static_cast<size_t>(a)]++ == 0)
      running += ec[static_cast<size_t>(a)];
  }

  double best = running;
  CsgProfile arg = profile;
  std::uint64_t since_resync = 0;
  while (true) {
    int i = g.agents - 1;
    for (; i >= 0; --i) {
      const size_t ii = static_cast<size_t>(i);
      const auto& avail = g.actions_of_agent[ii];
      const int old_a = profile[ii];
      if (--users[static_cast<size_t>(old_a)] == 0)
        running -= ec[static_cast<size_t>(old_a)];
      if (++pos[ii] < avail.size()) {
        const int new_a = avail[pos[ii]];
        profile[ii] = new_a;
        if (users[static_cast<size_t>(new_a)]++ == 0)
          running += ec[static_cast<size_t>(new_a)];
        break;
      }
      pos[ii] = 0;
      profile[ii] = avail[0];
      if (users[static_cast<size_t>(avail[0])]++ == 0)
        running += ec[static_cast<size_t>(avail[0])];
    }
    if (i < 0) break;
    if (++since_resync >= 4096) {
      // Cancellation drift in the running sum stays provably under kTol
      // as long as it is rebuilt every few thousand steps.
      since_resync = 0;
      running = 0.0;
      for (size_t a = 0; a < users.size(); ++a)
        if (users[a] > 0) running += ec[a];
    }
    if (running < best + kTol) {
      const double exact = csg_total_cost(g, ec, profile);
      if (exact < best) {
        best = exact;
        arg = profile;
      }
    }
  }
  return {best, arg};
}

double csg_opt_value(const CostSharingGame& g, std::uint64_t profile_cap) {
  if (g.agents > 20) return csg_opt_cost(g, profile_cap).first;
  const std::vector<double> ec = csg_expected_costs(g);
  std::vector<std::uint32_t> amask(g.actions.size(), 0);
  for (size_t a = 0; a < g.actions.size(); ++a)
    for (int agent : g.actions[a].avail)
      amask[a] |= std::uint32_t{1} << agent;
  const std::uint32_t full = (std::uint32_t{1} << g.agents) - 1;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dp(static_cast<size_t>(full) + 1, inf);
  dp[0] = 0.0;
  // Relaxation in ascending mask order is sound because adding an action
  // only sets bits; a repeated action is dominated (ec >= 0) so the optimum
  // is a plain weighted cover.
  for (std::uint32_t m = 0; m <= full; ++m) {
    if (dp[m] == inf) continue;
    for (size_t a = 0; a < g.actions.size(); ++a) {
      const std::uint32_t nm = m | amask[a];
      if (nm == m) continue;
      dp[nm] = std::min(dp[nm], dp[m] + ec[a]);
    }
    if (m == full) break;
  }
  return dp[full];
}

}  // namespace subsidylab
