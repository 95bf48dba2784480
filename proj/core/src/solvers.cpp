#include "subsidylab/solvers.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "subsidylab/metrics.hpp"

namespace subsidylab {
namespace {

void check_two_series_domain(double p1, double p2, double C1, double C2) {
  if (!(C1 > 0.0) || !(C2 > 0.0))
    throw SchemaError("two-series closed form needs positive repair costs");
  if (!(p1 > 0.0) || !(p1 < 1.0) || !(p2 > 0.0) || !(p2 < 1.0))
    throw SchemaError(
        "two-series closed form needs priors strictly inside (0,1)");
}

// Sorted-insert with absolute-tolerance dedup; inputs need not be sorted.
std::vector<double> sorted_dedup(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::vector<double> out;
  for (double x : v)
    if (out.empty() || x - out.back() > kTol) out.push_back(x);
  return out;
}

}  // namespace

double two_series_poa_subsidy(double p1, double p2, double C1, double C2) {
  check_two_series_domain(p1, p2, C1, C2);
  const double q1 = 1.0 - p1, q2 = 1.0 - p2;
  // Outside the box one of the two unsubsidized extremes (nobody repairs /
  // everybody repairs) is already the worst equilibrium, so nothing is needed.
  if (C1 >= q1 * p2 && C1 <= q1 && C2 >= q2 * p1 && C2 <= q2)
    return std::min(C1 - q1 * p2, C2 - q2 * p1);
  return 0.0;
}

double two_series_system_subsidy(double p1, double p2, double C1, double C2) {
  check_two_series_domain(p1, p2, C1, C2);
  const double q1 = 1.0 - p1, q2 = 1.0 - p2;
  // The favorable cost region is a union of two boxes; the cheapest subsidy
  // moves (C1, C2) into one of them, and under an L1 metric the projection
  // distance splits per coordinate.
  const double d1 = std::max(C1 - q1 * p2, 0.0) + std::max(C2 - q2, 0.0);
  const double d2 = std::max(C2 - q2 * p1, 0.0) + std::max(C1 - q1, 0.0);
  return std::min(d1, d2);
}

CriticalValueSet critical_values(const MaintenanceGame& g,
                                 const std::vector<double>& Phi) {
  CriticalValueSet out;
  out.per_agent.resize(static_cast<size_t>(g.n));
  std::vector<double> all;
  const std::uint64_t size = std::uint64_t{1} << g.n;
  for (int i = 0; i < g.n; ++i) {
    const std::uint64_t bit = std::uint64_t{1} << i;
    std::vector<double> vals;
    for (std::uint64_t w = 0; w < size; ++w) {
      if (w & bit) continue;
      // Agent i starts repairing once sigma crosses costs[i] - D_i; at or
      // below zero the flip can never be reached by a nonnegative subsidy.
      const double crit =
          g.costs[static_cast<size_t>(i)] + Phi[w] - Phi[w | bit];
      if (crit > kTol) vals.push_back(crit);
    }
    out.per_agent[static_cast<size_t>(i)] = sorted_dedup(std::move(vals));
    all.insert(all.end(), out.per_agent[static_cast<size_t>(i)].begin(),
               out.per_agent[static_cast<size_t>(i)].end());
  }
  out.merged = sorted_dedup(std::move(all));
  return out;
}

CriticalValueSet critical_values(const MaintenanceGame& g) {
  return critical_values(g, reliability_table(g));
}

namespace {

// Candidate subsidy levels covering every equilibrium-constant cell of
// [0, H]: zero, each piece's midpoint, and each breakpoint from just above.
std::vector<double> axis_candidates(const std::vector<double>& breakpoints,
                                    double H, double margin) {
  std::vector<double> cand{0.0};
  double prev = 0.0;
  for (double b : breakpoints) {
    if (b > H) break;
    if (b - prev > kTol) cand.push_back(prev + (b - prev) / 2.0);
    if (b + margin <= H) cand.push_back(b + margin);
    prev = b;
  }
  if (H - prev > kTol) cand.push_back(prev + (H - prev) / 2.0);
  return sorted_dedup(std::move(cand));
}

// Positive per-agent candidate levels: every critical value crossed from just
// above, plus the bare margin (crossing zero matters too: a critical at
// exactly 0 is dropped from CriticalValueSet as unreachable, but tie
// equilibria sitting on it still dissolve for any positive payment).
std::vector<double> agent_candidates(const std::vector<double>& crits,
                                     double H, double margin,
                                     bool* hbound_hit) {
  std::vector<double> cand{margin};
  for (double c : crits) {
    if (c + margin <= H)
      cand.push_back(c + margin);
    else if (hbound_hit)
      *hbound_hit = true;
  }
  return sorted_dedup(std::move(cand));
}

bool poa_one_safe(const MaintenanceGame& g, const std::vector<double>& Phi,
                  const std::vector<double>& sigma) {
  try {
    return poa_is_one(g, Phi, sigma);
  } catch (const UndefinedMetricError&) {
    return false;  // no equilibrium at this level: not a witness
  }
}

bool system_safe(const MaintenanceGame& g, const std::vector<double>& Phi,
                 const std::vector<double>& sigma) {
  try {
    return system_functions_in_all_ne(g, Phi, sigma);
  } catch (const UndefinedMetricError&) {
    return false;
  }
}

}  // namespace

OptimalUniformResult optimal_uniform_subsidy(const MaintenanceGame& g,
                                             const SolveObjective& objective,
                                             double margin) {
  if (g.n > kEnumerationCapN)
    throw SchemaError("uniform-subsidy search needs the full state table");
  if (margin <= 0.0) margin = kMarginScale * g.H;
  const std::vector<double> Phi = reliability_table(g);

  OptimalUniformResult res;

  if (objective.kind != SolveObjective::Kind::kVoi) {
    const std::vector<double> cand =
        axis_candidates(critical_values(g, Phi).merged, g.H, margin);
    for (double sigma : cand) {
      const std::vector<double> vec(static_cast<size_t>(g.n), sigma);
      const bool ok = objective.kind == SolveObjective::Kind::kPoaOne
                          ? poa_one_safe(g, Phi, vec)
                          : system_safe(g, Phi, vec);
      if (ok) {
        res.feasible = true;
        res.sigma = sigma;
        res.scheme = MaintenanceSubsidy::uniform(sigma);
        res.note = objective.kind == SolveObjective::Kind::kPoaOne
                       ? "worst equilibrium cost matches the optimum"
                       : "system functions in every equilibrium";
        return res;
      }
    }
    res.note = "infeasible within [0, H]";
    return res;
  }

  const int j = objective.j;
  if (j < 0 || j >= g.n) throw SchemaError("inspected component out of range");
  // Payment levels that can change any branch's equilibria: criticals of the
  // prior game and of both posterior games.
  std::vector<double> bps = critical_values(g, Phi).merged;
  const MaintenanceGame g1 = posterior_game(g, {j, 1});
  const MaintenanceGame g0 = posterior_game(g, {j, 0});
  for (const MaintenanceGame* gb : {&g1, &g0}) {
    const std::vector<double> merged = critical_values(*gb).merged;
    bps.insert(bps.end(), merged.begin(), merged.end());
  }
  const std::vector<double> cand =
      axis_candidates(sorted_dedup(std::move(bps)), g.H, margin);

  const std::vector<double> zeros(static_cast<size_t>(g.n), 0.0);
  for (double sigma : cand) {
    for (int branch : {1, 0}) {
      for (int agent = 0; agent < g.n; ++agent) {
        std::vector<double> pay = zeros;
        pay[static_cast<size_t>(agent)] = sigma;
        const MaintenanceSubsidy scheme = MaintenanceSubsidy::conditional(
            zeros, branch == 1 ? pay : zeros, branch == 0 ? pay : zeros);
        bool ok = true;
        try {
          const VoiReport rep = voi_report(g, scheme, j);
          for (double w : rep.worst)
            if (w < -kTol) {
              ok = false;
              break;
            }
        } catch (const UndefinedMetricError&) {
          ok = false;
        }
        if (ok) {
          res.feasible = true;
          res.sigma = sigma;
          res.branch = branch;
          res.agent = agent;
          res.scheme = scheme;
          res.note = "worst-case value of information nonnegative for all "
                     "agents";
          return res;
        }
        if (sigma == 0.0) break;  // all-zero scheme is agent-independent
      }
      if (sigma == 0.0) break;
    }
  }
  res.note = "infeasible within [0, H]";
  return res;
}

MinAgentsResult min_agents_poa1(const MaintenanceGame& g, int n_star,
                                double margin) {
  if (g.n > kMinAgentsCapN)
    throw SchemaError("subset search capped at " +
                      std::to_string(kMinAgentsCapN) + " agents");
  if (margin <= 0.0) margin = kMarginScale * g.H;
  n_star = std::clamp(n_star, 0, g.n);

  const std::vector<double> Phi = reliability_table(g);
  const CriticalValueSet crit = critical_values(g, Phi);

  MinAgentsResult res;
  std::vector<std::vector<double>> cand(static_cast<size_t>(g.n));
  for (int i = 0; i < g.n; ++i)
    cand[static_cast<size_t>(i)] = agent_candidates(
        crit.per_agent[static_cast<size_t>(i)], g.H, margin, &res.hbound_hit);

  // Cheap size estimate before committing to the enumeration.
  double combos = 0.0;
  for (std::uint32_t mask = 0; mask < (1u << g.n); ++mask) {
    if (std::popcount(mask) > n_star) continue;
    double prod = 1.0;
    for (int i = 0; i < g.n; ++i)
      if (mask & (1u << i)) prod *= cand[static_cast<size_t>(i)].size();
    combos += prod;
    if (combos > 2e7) throw SchemaError("subset search space too large");
  }

  std::vector<double> sigma(static_cast<size_t>(g.n), 0.0);
  for (std::uint32_t mask = 0; mask < (1u << g.n); ++mask) {
    if (std::popcount(mask) > n_star) continue;
    std::vector<int> agents;
    for (int i = 0; i < g.n; ++i)
      if (mask & (1u << i)) agents.push_back(i);
    std::vector<size_t> pos(agents.size(), 0);
    while (true) {
      std::fill(sigma.begin(), sigma.end(), 0.0);
      for (size_t a = 0; a < agents.size(); ++a)
        sigma[static_cast<size_t>(agents[a])] =
            cand[static_cast<size_t>(agents[a])][pos[a]];
      if (poa_one_safe(g, Phi, sigma)) {
        res.yes = true;
        res.witness = MaintenanceSubsidy::per_agent_scheme(sigma);
        return res;
      }
      // odometer over the chosen agents' candidate lists
      bool advanced = false;
      size_t k = agents.size();
      while (k > 0) {
        --k;
        if (++pos[k] < cand[static_cast<size_t>(agents[k])].size()) {
          advanced = true;
          break;
        }
        pos[k] = 0;
      }
      if (!advanced) break;
    }
  }
  return res;
}

namespace {

// Depth-first search over per-agent candidate lists under a total budget.
// Lists are ascending, so a level can stop as soon as the budget is blown.
template <typename Test>
bool budget_dfs(const std::vector<std::vector<double>>& cand, double budget,
                std::vector<double>& sigma, size_t i, double spent,
                const Test& test) {
  if (i == cand.size()) return test(sigma, spent);
  for (double v : cand[i]) {
    if (spent + v > budget + kTol) break;
    sigma[i] = v;
    if (budget_dfs(cand, budget, sigma, i + 1, spent + v, test)) return true;
  }
  sigma[i] = 0.0;
  return false;
}

}  // namespace

MinBudgetResult min_budget_decision(const MaintenanceGame& g,
                                    const SolveObjective& objective,
                                    double budget, double margin) {
  if (g.n > kMinAgentsCapN)
    throw SchemaError("cell search capped at " +
                      std::to_string(kMinAgentsCapN) + " agents");
  if (margin <= 0.0) margin = kMarginScale * g.H;

  MinBudgetResult res;

  auto cell_lists = [&](const CriticalValueSet& crit) {
    std::vector<std::vector<double>> cand(static_cast<size_t>(g.n));
    double combos = 1.0;
    for (int i = 0; i < g.n; ++i) {
      std::vector<double> list = agent_candidates(
          crit.per_agent[static_cast<size_t>(i)], g.H, margin,
          &res.hbound_hit);
      list.insert(list.begin(), 0.0);
      combos *= list.size();
      cand[static_cast<size_t>(i)] = std::move(list);
    }
    if (combos > 2e7) throw SchemaError("cell search space too large");
    return cand;
  };

  if (objective.kind == SolveObjective::Kind::kSystem) {
    const std::vector<double> Phi = reliability_table(g);
    const auto cand = cell_lists(critical_values(g, Phi));
    std::vector<double> sigma(static_cast<size_t>(g.n), 0.0);
    const bool yes = budget_dfs(
        cand, budget, sigma, 0, 0.0,
        [&](const std::vector<double>& s, double spent) {
          if (!system_safe(g, Phi, s)) return false;
          res.yes = true;
          res.witness = MaintenanceSubsidy::per_agent_scheme(s);
          res.spent = spent;
          return true;
        });
    (void)yes;
    return res;
  }

  if (objective.kind != SolveObjective::Kind::kVoi)
    throw SchemaError("budget decision supports system and voi objectives");
  const int j = objective.j;
  if (j < 0 || j >= g.n) throw SchemaError("inspected component out of range");

  // Pre-inspection side is unsubsidized; each agent's benchmark is its
  // cheapest prior equilibrium loss.
  const std::vector<double> Phi = reliability_table(g);
  const std::vector<double> zeros(static_cast<size_t>(g.n), 0.0);
  const NashSet prior_ne = enumerate_nash(g, Phi, zeros);
  if (prior_ne.empty())
    throw UndefinedMetricError(
        "value of information undefined: empty equilibrium set (prior)");
  std::vector<double> prior_min(static_cast<size_t>(g.n), 0.0);
  bool first = true;
  for (std::uint64_t s : prior_ne.states) {
    const std::vector<double> l = cmg_agent_costs(g, Phi, s, zeros);
    for (int i = 0; i < g.n; ++i) {
      const size_t ii = static_cast<size_t>(i);
      prior_min[ii] = first ? l[ii] : std::min(prior_min[ii], l[ii]);
    }
    first = false;
  }

  // The two branches decouple: branch y's value of information depends only
  // on branch y's payments, so each is searched independently and the
  // budget applies per branch (the flag records that reading).
  res.budget_per_branch = true;
  std::vector<std::vector<double>> branch_sigma(2);
  double max_spent = 0.0;
  for (int y : {1, 0}) {
    const MaintenanceGame gb = posterior_game(g, {j, y});
    const std::vector<double> Phib = reliability_table(gb);
    const auto cand = cell_lists(critical_values(gb, Phib));
    std::vector<double> sigma(static_cast<size_t>(g.n), 0.0);
    bool found = budget_dfs(
        cand, budget, sigma, 0, 0.0,
        [&](const std::vector<double>& s, double spent) {
          const NashSet ne = enumerate_nash(gb, Phib, s);
          if (ne.empty()) return false;
          std::vector<double> post_max(static_cast<size_t>(g.n), 0.0);
          bool f2 = true;
          for (std::uint64_t st : ne.states) {
            const std::vector<double> l = cmg_agent_costs(gb, Phib, st, s);
            for (int i = 0; i < g.n; ++i) {
              const size_t ii = static_cast<size_t>(i);
              post_max[ii] = f2 ? l[ii] : std::max(post_max[ii], l[ii]);
            }
            f2 = false;
          }
          for (int i = 0; i < g.n; ++i)
            if (prior_min[static_cast<size_t>(i)] -
                    post_max[static_cast<size_t>(i)] <
                -kTol)
              return false;
          branch_sigma[static_cast<size_t>(y)] = s;
          max_spent = std::max(max_spent, spent);
          return true;
        });
    if (!found) return res;  // res.yes stays false
  }
  res.yes = true;
  res.witness = MaintenanceSubsidy::conditional(zeros, branch_sigma[1],
                                                branch_sigma[0]);
  res.spent = max_spent;
  return res;
}

namespace {

// Can every action in `chosen` (bitmask into `family`) be assigned a distinct
// agent allowed to use it? Classic augmenting-path matching; sizes here are
// tiny (|family| <= 16).
bool has_distinct_representatives(const std::vector<int>& family,
                                  std::uint32_t chosen,
                                  const CostSharingGame& g) {
  std::vector<int> owner(static_cast<size_t>(g.agents), -1);
  std::vector<int> actions;
  for (size_t f = 0; f < family.size(); ++f)
    if (chosen & (1u << f)) actions.push_back(family[f]);

  std::vector<char> visited;
  auto augment = [&](auto&& self, int action) -> bool {
    for (int agent : g.actions[static_cast<size_t>(action)].avail) {
      if (visited[static_cast<size_t>(agent)]) continue;
      visited[static_cast<size_t>(agent)] = 1;
      if (owner[static_cast<size_t>(agent)] < 0 ||
          self(self, owner[static_cast<size_t>(agent)])) {
        owner[static_cast<size_t>(agent)] = action;
        return true;
      }
    }
    return false;
  };
  for (int a : actions) {
    visited.assign(static_cast<size_t>(g.agents), 0);
    if (!augment(augment, a)) return false;
  }
  return true;
}

}  // namespace

CsgPoa1Result csg_poa1_decision(const CostSharingGame& g, int n_star,
                                double h_cap) {
  if (g.agents > 62)
    throw SchemaError("family search capped at 62 agents");
  if (!(h_cap > 0.0)) throw SchemaError("per-action cap must be positive");

  const std::vector<double> ec = csg_expected_costs(g);
  const double opt = csg_opt_value(g);

  std::vector<int> eligible;
  for (size_t a = 0; a < ec.size(); ++a)
    if (ec[a] <= h_cap + kTol) eligible.push_back(static_cast<int>(a));
  if (eligible.size() > 16)
    throw SchemaError("family search capped at 16 affordable actions");

  std::vector<std::uint64_t> agent_mask(eligible.size(), 0);
  for (size_t e = 0; e < eligible.size(); ++e)
    for (int agent : g.actions[static_cast<size_t>(eligible[e])].avail)
      agent_mask[e] |= std::uint64_t{1} << agent;
  const std::uint64_t all_agents =
      g.agents == 64 ? ~std::uint64_t{0}
                     : (std::uint64_t{1} << g.agents) - 1;

  // Families in size order, then mask order: the first witness is minimal.
  std::vector<std::uint32_t> masks;
  for (std::uint32_t m = 0; m < (1u << eligible.size()); ++m)
    if (std::popcount(m) <= n_star) masks.push_back(m);
  std::sort(masks.begin(), masks.end(), [](std::uint32_t a, std::uint32_t b) {
    const int pa = std::popcount(a), pb = std::popcount(b);
    return pa != pb ? pa < pb : a < b;
  });

  for (std::uint32_t m : masks) {
    std::uint64_t covered = 0;
    for (size_t e = 0; e < eligible.size(); ++e)
      if (m & (1u << e)) covered |= agent_mask[e];
    if (covered != all_agents) continue;  // someone gets no free action

    std::vector<int> family;
    std::vector<std::uint64_t> family_mask;
    for (size_t e = 0; e < eligible.size(); ++e)
      if (m & (1u << e)) {
        family.push_back(eligible[e]);
        family_mask.push_back(agent_mask[e]);
      }

    // With every non-family action costing strictly more than the family's
    // free ones, the equilibria are exactly the all-family assignments: no
    // user of a free action moves, and any agent on a paid action would
    // switch to a free one. The worst equilibrium then uses the priciest
    // family subfamily that (a) still covers every agent and (b) is the
    // image of some assignment, i.e. admits distinct representatives.
    bool structural = true;
    for (size_t a = 0; a < ec.size(); ++a) {
      bool in_family = false;
      for (int fa : family) in_family |= (static_cast<int>(a) == fa);
      if (!in_family && ec[a] <= kTol) {
        structural = false;
        break;
      }
    }

    bool yes;
    if (structural) {
      double worst = -1.0;
      for (std::uint32_t sub = 1; sub < (1u << family.size()); ++sub) {
        std::uint64_t cov = 0;
        double total = 0.0;
        for (size_t f = 0; f < family.size(); ++f)
          if (sub & (1u << f)) {
            cov |= family_mask[f];
            total += ec[static_cast<size_t>(family[f])];
          }
        if (cov != all_agents) continue;
        if (total <= worst) continue;
        if (has_distinct_representatives(family, sub, g)) worst = total;
      }
      yes = worst >= 0.0 && std::abs(worst - opt) <= kTol;
    } else {
      // Some free action exists outside the family: the structural argument
      // breaks, fall back to honest enumeration.
      CsgSubsidy subsidy = CsgSubsidy::none(g);
      for (int fa : family)
        subsidy.amount[static_cast<size_t>(fa)] = ec[static_cast<size_t>(fa)];
      const CsgNashSet ne = csg_enumerate_nash(g, subsidy);
      if (ne.empty()) {
        yes = false;
      } else {
        double worst = -1.0;
        for (const CsgProfile& prof : ne.profiles)
          worst = std::max(worst, csg_total_cost(g, ec, prof));
        yes = std::abs(worst - opt) <= kTol;
      }
    }
    if (yes) return {true, family};
  }
  return {false, {}};
}

}  // namespace subsidylab
