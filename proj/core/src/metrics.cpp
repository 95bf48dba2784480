#include "subsidylab/metrics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace subsidylab {
namespace {

// Total burden of an equilibrium under payments sigma: the agents' subsidized
// losses plus what the designer pays out. Telescopes to the unsubsidized
// social cost; both routes are compared by the callers.
double burden(const MaintenanceGame& g, const std::vector<double>& Phi,
              std::uint64_t s, const std::vector<double>& sigma) {
  double total = g.n * (1.0 - Phi[s]);
  for (int i = 0; i < g.n; ++i)
    if ((s >> i) & 1u) {
      total += g.costs[static_cast<size_t>(i)] - sigma[static_cast<size_t>(i)];
      total += sigma[static_cast<size_t>(i)];
    }
  return total;
}

double max_ne_burden(const MaintenanceGame& g, const std::vector<double>& Phi,
                     const NashSet& ne, const std::vector<double>& sigma) {
  double worstA = -1.0, worstB = -1.0;
  for (std::uint64_t s : ne.states) {
    worstA = std::max(worstA, burden(g, Phi, s, sigma));
    worstB = std::max(worstB, cmg_total_cost(g, Phi, s));
  }
  internal_check(std::abs(worstA - worstB) <= 1e-9,
                 "subsidy accounting identity violated");
  return worstB;
}

}  // namespace

double poa(const MaintenanceGame& g, const MaintenanceSubsidy& scheme) {
  scheme.validate(g.n, g.H);
  const std::vector<double> Phi = reliability_table(g);
  const std::vector<double> sigma = scheme.effective(g.n, std::nullopt);
  const NashSet ne = enumerate_nash(g, Phi, sigma);
  if (ne.empty())
    throw UndefinedMetricError(
        "price of anarchy undefined: the equilibrium set is empty");
  const double opt = opt_cost(g, Phi).first;
  if (std::abs(opt) <= kTol)
    throw UndefinedMetricError(
        "price of anarchy undefined: the optimum social cost is zero");
  return max_ne_burden(g, Phi, ne, sigma) / opt;
}

double poa_tilde(const MaintenanceGame& g, const MaintenanceSubsidy& scheme) {
  scheme.validate(g.n, g.H);
  const std::vector<double> Phi = reliability_table(g);
  const std::vector<double> sigma = scheme.effective(g.n, std::nullopt);
  const NashSet ne = enumerate_nash(g, Phi, sigma);
  if (ne.empty())
    throw UndefinedMetricError(
        "relative price of anarchy undefined: the equilibrium set is empty");
  const std::vector<double> zeros(static_cast<size_t>(g.n), 0.0);
  const NashSet base = enumerate_nash(g, Phi, zeros);
  if (base.empty())
    throw UndefinedMetricError(
        "relative price of anarchy undefined: the unsubsidized game has no "
        "equilibrium");
  double denom = cmg_total_cost(g, Phi, base.states.front());
  for (std::uint64_t s : base.states)
    denom = std::min(denom, cmg_total_cost(g, Phi, s));
  if (std::abs(denom) <= kTol)
    throw UndefinedMetricError(
        "relative price of anarchy undefined: the cheapest unsubsidized "
        "equilibrium has zero cost");
  return max_ne_burden(g, Phi, ne, sigma) / denom;
}

bool poa_is_one(const MaintenanceGame& g, const std::vector<double>& Phi,
                const std::vector<double>& sigma, double tol) {
  const NashSet ne = enumerate_nash(g, Phi, sigma, tol);
  if (ne.empty())
    throw UndefinedMetricError(
        "price-of-anarchy test undefined: the equilibrium set is empty");
  double worst = cmg_total_cost(g, Phi, ne.states.front());
  for (std::uint64_t s : ne.states)
    worst = std::max(worst, cmg_total_cost(g, Phi, s));
  const double opt = opt_cost(g, Phi).first;
  return std::abs(worst - opt) <= tol;
}

bool poa_is_one(const MaintenanceGame& g, const MaintenanceSubsidy& scheme,
                double tol) {
  scheme.validate(g.n, g.H);
  return poa_is_one(g, reliability_table(g),
                    scheme.effective(g.n, std::nullopt), tol);
}

bool system_functions_in_all_ne(const MaintenanceGame& g,
                                const std::vector<double>& Phi,
                                const std::vector<double>& sigma, double tol) {
  const NashSet ne = enumerate_nash(g, Phi, sigma, tol);
  if (ne.empty())
    throw UndefinedMetricError(
        "functioning-system test undefined: the equilibrium set is empty");
  for (std::uint64_t s : ne.states) {
    // Partition components: repaired or p=1 work surely, p=0 unrepaired fail
    // surely, the rest are genuinely random and every combination of their
    // states has positive probability.
    std::uint64_t sure = 0, free = 0;
    for (int i = 0; i < g.n; ++i) {
      const std::uint64_t bit = std::uint64_t{1} << i;
      const double pi = g.p[static_cast<size_t>(i)];
      if ((s & bit) || pi >= 1.0)
        sure |= bit;
      else if (pi > 0.0)
        free |= bit;
    }
    if (g.phi.monotone_guaranteed()) {
      // Monotone system: the all-fail corner of the free components is the
      // worst case, so one evaluation settles the whole cube.
      if (!g.phi.eval(sure)) return false;
      continue;
    }
    if (std::popcount(free) > 26)
      throw SchemaError("functioning-system test: too many random components");
    // Walk all subsets of `free` (classic submask descent, visiting the full
    // mask first and the empty set last).
    std::uint64_t sub = free;
    while (true) {
      if (!g.phi.eval(sure | sub)) return false;
      if (sub == 0) break;
      sub = (sub - 1) & free;
    }
  }
  return true;
}

bool system_functions_in_all_ne(const MaintenanceGame& g,
                                const MaintenanceSubsidy& scheme, double tol) {
  scheme.validate(g.n, g.H);
  return system_functions_in_all_ne(g, reliability_table(g),
                                    scheme.effective(g.n, std::nullopt), tol);
}

double csg_poa(const CostSharingGame& g, const CsgSubsidy& subsidy) {
  const std::vector<double> ec = csg_expected_costs(g);
  const CsgNashSet ne = csg_enumerate_nash(g, subsidy);
  if (ne.empty())
    throw UndefinedMetricError(
        "price of anarchy undefined: the equilibrium set is empty");
  double worstA = -1.0, worstB = -1.0;
  for (const CsgProfile& prof : ne.profiles) {
    const std::vector<double> shares = csg_agent_costs(g, ec, prof, subsidy);
    double a = 0.0;
    for (double v : shares) a += v;
    std::vector<char> used(g.actions.size(), 0);
    for (int act : prof) used[static_cast<size_t>(act)] = 1;
    for (size_t act = 0; act < used.size(); ++act)
      if (used[act]) a += subsidy.amount[act];  // designer pays once per action
    worstA = std::max(worstA, a);
    worstB = std::max(worstB, csg_total_cost(g, ec, prof));
  }
  internal_check(std::abs(worstA - worstB) <= 1e-9,
                 "subsidy accounting identity violated");
  const double opt = csg_opt_value(g);
  if (std::abs(opt) <= kTol)
    throw UndefinedMetricError(
        "price of anarchy undefined: the optimum social cost is zero");
  return worstB / opt;
}

double csg_poa_tilde(const CostSharingGame& g, const CsgSubsidy& subsidy) {
  const std::vector<double> ec = csg_expected_costs(g);
  const CsgNashSet ne = csg_enumerate_nash(g, subsidy);
  if (ne.empty())
    throw UndefinedMetricError(
        "relative price of anarchy undefined: the equilibrium set is empty");
  const CsgNashSet base = csg_enumerate_nash(g, CsgSubsidy::none(g));
  if (base.empty())
    throw UndefinedMetricError(
        "relative price of anarchy undefined: the unsubsidized game has no "
        "equilibrium");
  double worst = -1.0;
  for (const CsgProfile& prof : ne.profiles)
    worst = std::max(worst, csg_total_cost(g, ec, prof));
  double denom = csg_total_cost(g, ec, base.profiles.front());
  for (const CsgProfile& prof : base.profiles)
    denom = std::min(denom, csg_total_cost(g, ec, prof));
  if (std::abs(denom) <= kTol)
    throw UndefinedMetricError(
        "relative price of anarchy undefined: the cheapest unsubsidized "
        "equilibrium has zero cost");
  return worst / denom;
}

namespace {

struct BranchData {
  double value = 0.0;
  double weight = 0.0;
  std::vector<std::vector<double>> ne_losses;  // per equilibrium, per agent
  std::vector<std::uint64_t> ne_states;
  std::vector<CsgProfile> ne_profiles;
  std::vector<double> ne_totals;
};

// Shared selection logic for both game kinds. Fills worst/expected plus
// per-agent witness indices into the prior and branch equilibrium lists.
struct VoiAccumulator {
  int agents;
  VoiMode mode;
  const BranchData* prior;
  std::vector<double> worst, expected;
  std::vector<int> worst_branch, worst_prior_idx, worst_post_idx;

  VoiAccumulator(int agents, VoiMode mode, const BranchData* prior)
      : agents(agents),
        mode(mode),
        prior(prior),
        worst(static_cast<size_t>(agents), 0.0),
        expected(static_cast<size_t>(agents), 0.0),
        worst_branch(static_cast<size_t>(agents), -1),
        worst_prior_idx(static_cast<size_t>(agents), 0),
        worst_post_idx(static_cast<size_t>(agents), 0) {}

  static size_t argmin_total(const BranchData& b) {
    size_t best = 0;
    for (size_t k = 1; k < b.ne_totals.size(); ++k)
      if (b.ne_totals[k] < b.ne_totals[best]) best = k;
    return best;
  }

  void add_branch(int bidx, const BranchData& b) {
    const size_t prior_sel = argmin_total(*prior);
    const size_t post_sel = argmin_total(b);
    for (int i = 0; i < agents; ++i) {
      const size_t ii = static_cast<size_t>(i);
      double v;
      size_t pidx, qidx;
      if (mode == VoiMode::kGlobal) {
        pidx = prior_sel;
        qidx = post_sel;
        v = prior->ne_losses[pidx][ii] - b.ne_losses[qidx][ii];
      } else {
        // Adversarial: the agent is promised as little as possible before
        // the inspection and as much as possible after it.
        pidx = 0;
        for (size_t k = 1; k < prior->ne_losses.size(); ++k)
          if (prior->ne_losses[k][ii] < prior->ne_losses[pidx][ii]) pidx = k;
        qidx = 0;
        for (size_t k = 1; k < b.ne_losses.size(); ++k)
          if (b.ne_losses[k][ii] > b.ne_losses[qidx][ii]) qidx = k;
        v = prior->ne_losses[pidx][ii] - b.ne_losses[qidx][ii];
      }
      expected[ii] += b.weight * v;
      if (worst_branch[ii] < 0 || v < worst[ii]) {
        worst[ii] = v;
        worst_branch[ii] = bidx;
        worst_prior_idx[ii] = pidx;
        worst_post_idx[ii] = qidx;
      }
    }
  }
};

}  // namespace

VoiReport voi_report(const MaintenanceGame& g, const MaintenanceSubsidy& scheme,
                     int j, VoiMode mode) {
  scheme.validate(g.n, g.H);
  if (j < 0 || j >= g.n)
    throw SchemaError("inspected component out of range");

  auto make_branch = [&](const MaintenanceGame& game,
                         const std::vector<double>& sigma, double value,
                         double weight, const char* which) {
    const std::vector<double> Phi = reliability_table(game);
    const NashSet ne = enumerate_nash(game, Phi, sigma);
    if (ne.empty())
      throw UndefinedMetricError(std::string("value of information undefined: "
                                             "empty equilibrium set (") +
                                 which + ")");
    BranchData b;
    b.value = value;
    b.weight = weight;
    for (std::uint64_t s : ne.states) {
      b.ne_states.push_back(s);
      b.ne_losses.push_back(cmg_agent_costs(game, Phi, s, sigma));
      b.ne_totals.push_back(cmg_total_cost(game, Phi, s));
    }
    return b;
  };

  const double pj = g.p[static_cast<size_t>(j)];
  const BranchData prior =
      make_branch(g, scheme.effective(g.n, std::nullopt), -1.0, 1.0, "prior");
  const BranchData b1 = make_branch(posterior_game(g, {j, 1}),
                                    scheme.effective(g.n, 1), 1.0, pj, "y=1");
  const BranchData b0 =
      make_branch(posterior_game(g, {j, 0}), scheme.effective(g.n, 0), 0.0,
                  1.0 - pj, "y=0");

  VoiAccumulator acc(g.n, mode, &prior);
  acc.add_branch(0, b1);
  acc.add_branch(1, b0);

  VoiReport r;
  r.inspected = j;
  r.branch_value = {1.0, 0.0};
  r.branch_weight = {pj, 1.0 - pj};
  r.worst = std::move(acc.worst);
  r.expected = std::move(acc.expected);
  r.worst_branch = std::move(acc.worst_branch);
  for (int i = 0; i < g.n; ++i) {
    const size_t ii = static_cast<size_t>(i);
    r.worst_prior_state.push_back(prior.ne_states[acc.worst_prior_idx[ii]]);
    const BranchData& wb = r.worst_branch[ii] == 0 ? b1 : b0;
    r.worst_post_state.push_back(wb.ne_states[acc.worst_post_idx[ii]]);
  }
  return r;
}

CsgVoiReport csg_voi_report(const CostSharingGame& g, const CsgSubsidy& subsidy,
                            int action, VoiMode mode) {
  subsidy.validate(g);
  if (action < 0 || action >= static_cast<int>(g.actions.size()))
    throw SchemaError("inspected action out of range");

  auto make_branch = [&](const CostSharingGame& game, double value,
                         double weight, const char* which) {
    const std::vector<double> ec = csg_expected_costs(game);
    const CsgNashSet ne = csg_enumerate_nash(game, subsidy);
    if (ne.empty())
      throw UndefinedMetricError(std::string("value of information undefined: "
                                             "empty equilibrium set (") +
                                 which + ")");
    BranchData b;
    b.value = value;
    b.weight = weight;
    for (const CsgProfile& prof : ne.profiles) {
      b.ne_profiles.push_back(prof);
      b.ne_losses.push_back(csg_agent_costs(game, ec, prof, subsidy));
      b.ne_totals.push_back(csg_total_cost(game, ec, prof));
    }
    return b;
  };

  const BranchData prior = make_branch(g, -1.0, 1.0, "prior");
  const auto branches = csg_revelation_branches(g, action);
  std::vector<BranchData> post;
  for (const auto& [value, weight] : branches)
    post.push_back(make_branch(csg_posterior_game(g, {action, value}), value,
                               weight, "posterior"));

  VoiAccumulator acc(g.agents, mode, &prior);
  for (size_t b = 0; b < post.size(); ++b)
    acc.add_branch(static_cast<int>(b), post[b]);

  CsgVoiReport r;
  r.inspected = action;
  for (const BranchData& b : post) {
    r.branch_value.push_back(b.value);
    r.branch_weight.push_back(b.weight);
  }
  r.worst = std::move(acc.worst);
  r.expected = std::move(acc.expected);
  r.worst_branch = std::move(acc.worst_branch);
  for (int i = 0; i < g.agents; ++i) {
    const size_t ii = static_cast<size_t>(i);
    r.worst_prior_profile.push_back(
        prior.ne_profiles[acc.worst_prior_idx[ii]]);
    r.worst_post_profile.push_back(
        post[static_cast<size_t>(r.worst_branch[ii])]
            .ne_profiles[acc.worst_post_idx[ii]]);
  }
  return r;
}

}  // namespace subsidylab
