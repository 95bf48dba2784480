#include "subsidylab/games.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace subsidylab {

double default_budget(const std::vector<double>& costs) {
  double cmax = 0.0;
  for (double c : costs) cmax = std::max(cmax, std::abs(c));
  return std::max(1.0, cmax + 1.0);
}

MaintenanceGame make_maintenance_game(std::vector<double> costs,
                                      std::vector<double> p, SystemFunction phi,
                                      std::optional<double> H) {
  MaintenanceGame g;
  g.n = phi.n();
  if (static_cast<int>(costs.size()) != g.n)
    throw SchemaError("cost vector length must equal component count");
  if (static_cast<int>(p.size()) != g.n)
    throw SchemaError("prior vector length must equal component count");
  for (double pi : p)
    if (!(pi >= 0.0 && pi <= 1.0))
      throw SchemaError("prior probabilities must lie in [0,1]");
  for (double c : costs)
    if (!std::isfinite(c)) throw SchemaError("repair costs must be finite");
  g.H = H ? *H : default_budget(costs);
  if (!(g.H > 0.0) || !std::isfinite(g.H))
    throw SchemaError("budget ceiling H must be positive and finite");
  g.costs = std::move(costs);
  g.p = std::move(p);
  g.phi = std::move(phi);
  return g;
}

MaintenanceGame posterior_game(const MaintenanceGame& g,
                               const Posterior& post) {
  if (post.j < 0 || post.j >= g.n)
    throw SchemaError("inspected component out of range");
  if (post.y != 0 && post.y != 1)
    throw SchemaError("revealed state must be 0 or 1");
  MaintenanceGame out = g;
  out.p[static_cast<size_t>(post.j)] = static_cast<double>(post.y);
  return out;
}

std::vector<double> reliability_table(const MaintenanceGame& g, int cap_n) {
  if (g.n > cap_n)
    throw SchemaError("reliability table needs 2^" + std::to_string(g.n) +
                      " states (cap " + std::to_string(cap_n) + ")");
  const std::uint64_t size = std::uint64_t{1} << g.n;
  std::vector<double> f(size);

  if (g.phi.kind() == SystemFunction::Kind::kSp) {
    // Closed form per state; exact and independent of the mixing transform,
    // which the tests exploit as a second route.
    for (std::uint64_t s = 0; s < size; ++s)
      f[s] = sp_reliability(g.phi.sp_root(), g.p, s);
    return f;
  }

  for (std::uint64_t s = 0; s < size; ++s) f[s] = g.phi.eval(s) ? 1.0 : 0.0;
  for (int i = 0; i < g.n; ++i) {
    const std::uint64_t bit = std::uint64_t{1} << i;
    const double pi = g.p[static_cast<size_t>(i)];
    for (std::uint64_t lo = 0; lo < size; ++lo) {
      if (lo & bit) continue;
      // After this pass f[*] is the expectation over component i's prior
      // given the repairs encoded in the word's remaining bits.
      f[lo] = (1.0 - pi) * f[lo] + pi * f[lo | bit];
    }
  }
  return f;
}

MaintenanceSubsidy MaintenanceSubsidy::uniform(double sigma) {
  MaintenanceSubsidy s;
  s.mode = Mode::kUniform;
  s.sigma = sigma;
  return s;
}

MaintenanceSubsidy MaintenanceSubsidy::per_agent_scheme(
    std::vector<double> sigma) {
  MaintenanceSubsidy s;
  s.mode = Mode::kPerAgent;
  s.per_agent = std::move(sigma);
  return s;
}

MaintenanceSubsidy MaintenanceSubsidy::conditional(std::vector<double> prior,
                                                   std::vector<double> on_y1,
                                                   std::vector<double> on_y0) {
  MaintenanceSubsidy s;
  s.mode = Mode::kConditional;
  s.prior = std::move(prior);
  s.on_y1 = std::move(on_y1);
  s.on_y0 = std::move(on_y0);
  return s;
}

std::vector<double> MaintenanceSubsidy::effective(
    int n, std::optional<int> branch) const {
  switch (mode) {
    case Mode::kUniform:
      return std::vector<double>(static_cast<size_t>(n), sigma);
    case Mode::kPerAgent:
      return per_agent;
    case Mode::kConditional:
      if (!branch) return prior;
      return *branch ? on_y1 : on_y0;
  }
  return {};  // unreachable
}

void MaintenanceSubsidy::validate(int n, double H) const {
  auto check_vec = [&](const std::vector<double>& v, const char* what) {
    if (static_cast<int>(v.size()) != n)
      throw SchemaError(std::string(what) +
                        " subsidy vector length must equal agent count");
    for (double x : v)
      if (!(x >= 0.0) || x > H + kTol)
        throw SchemaError(std::string(what) +
                          " subsidy entries must lie in [0, H]");
  };
  switch (mode) {
    case Mode::kUniform:
      if (!(sigma >= 0.0) || sigma > H + kTol)
        throw SchemaError("uniform subsidy must lie in [0, H]");
      break;
    case Mode::kPerAgent:
      check_vec(per_agent, "per-agent");
      break;
    case Mode::kConditional:
      check_vec(prior, "prior-branch");
      check_vec(on_y1, "y=1-branch");
      check_vec(on_y0, "y=0-branch");
      break;
  }
}

CostSharingGame make_cost_sharing_game(int agents,
                                       std::vector<CsgAction> actions,
                                       std::vector<CsgWorld> worlds,
                                       std::optional<double> H) {
  if (agents < 1) throw SchemaError("need at least one agent");
  if (actions.empty()) throw SchemaError("need at least one action");
  if (worlds.empty()) throw SchemaError("need at least one world");

  CostSharingGame g;
  g.agents = agents;
  g.actions_of_agent.assign(static_cast<size_t>(agents), {});
  for (size_t a = 0; a < actions.size(); ++a) {
    if (actions[a].id.empty()) throw SchemaError("action ids must be nonempty");
    for (size_t b = 0; b < a; ++b)
      if (actions[b].id == actions[a].id)
        throw SchemaError("duplicate action id: " + actions[a].id);
    for (int agent : actions[a].avail) {
      if (agent < 0 || agent >= agents)
        throw SchemaError("availability lists an agent out of range");
      g.actions_of_agent[static_cast<size_t>(agent)].push_back(
          static_cast<int>(a));
    }
  }
  for (int i = 0; i < agents; ++i)
    if (g.actions_of_agent[static_cast<size_t>(i)].empty())
      throw SchemaError("agent " + std::to_string(i + 1) +
                        " has no available action");

  double prob_sum = 0.0;
  double cmax = 0.0;
  for (const CsgWorld& w : worlds) {
    if (!(w.prob >= 0.0)) throw SchemaError("world probabilities must be >= 0");
    prob_sum += w.prob;
    if (w.costs.size() != actions.size())
      throw SchemaError("each world must price every action");
    for (double c : w.costs) {
      if (!(c >= 0.0) || !std::isfinite(c))
        throw SchemaError("action costs must be finite and >= 0");
      cmax = std::max(cmax, c);
    }
  }
  if (std::abs(prob_sum - 1.0) > 1e-6)
    throw SchemaError("world probabilities must sum to 1");

  g.actions = std::move(actions);
  g.worlds = std::move(worlds);
  g.H = H ? *H : std::max(1.0, cmax);
  if (!(g.H > 0.0) || !std::isfinite(g.H))
    throw SchemaError("budget ceiling H must be positive and finite");
  return g;
}

std::vector<double> csg_expected_costs(const CostSharingGame& g) {
  std::vector<double> ec(g.actions.size(), 0.0);
  for (const CsgWorld& w : g.worlds)
    for (size_t a = 0; a < ec.size(); ++a) ec[a] += w.prob * w.costs[a];
  return ec;
}

CsgSubsidy CsgSubsidy::none(const CostSharingGame& g) {
  CsgSubsidy s;
  s.amount.assign(g.actions.size(), 0.0);
  return s;
}

void CsgSubsidy::validate(const CostSharingGame& g) const {
  if (amount.size() != g.actions.size())
    throw SchemaError("subsidy vector length must equal action count");
  for (double x : amount)
    if (!(x >= 0.0) || x > g.H + kTol)
      throw SchemaError("per-action subsidies must lie in [0, H]");
}

CostSharingGame csg_posterior_game(const CostSharingGame& g,
                                   const CsgPosterior& post) {
  if (post.action < 0 ||
      post.action >= static_cast<int>(g.actions.size()))
    throw SchemaError("inspected action out of range");
  CostSharingGame out = g;
  out.worlds.clear();
  double mass = 0.0;
  for (const CsgWorld& w : g.worlds) {
    if (std::abs(w.costs[static_cast<size_t>(post.action)] - post.revealed) <=
        kTol) {
      out.worlds.push_back(w);
      mass += w.prob;
    }
  }
  if (out.worlds.empty() || mass <= 0.0)
    throw UndefinedMetricError(
        "posterior undefined: revealed cost is outside the prior's support");
  for (CsgWorld& w : out.worlds) w.prob /= mass;
  return out;
}

std::vector<std::pair<double, double>> csg_revelation_branches(
    const CostSharingGame& g, int action) {
  if (action < 0 || action >= static_cast<int>(g.actions.size()))
    throw SchemaError("inspected action out of range");
  std::vector<std::pair<double, double>> vals;  // (cost value, prob mass)
  for (const CsgWorld& w : g.worlds) {
    const double c = w.costs[static_cast<size_t>(action)];
    bool merged = false;
    for (auto& [v, m] : vals) {
      if (std::abs(v - c) <= kTol) {
        m += w.prob;
        merged = true;
        break;
      }
    }
    if (!merged) vals.emplace_back(c, w.prob);
  }
  std::sort(vals.begin(), vals.end());
  return vals;
}

std::vector<double> csg_agent_costs(const CostSharingGame& g,
                                    const std::vector<double>& ec,
                                    const CsgProfile& profile,
                                    const CsgSubsidy& subsidy) {
  std::vector<int> users(g.actions.size(), 0);
  for (int a : profile) ++users[static_cast<size_t>(a)];
  std::vector<double> out(static_cast<size_t>(g.agents));
  for (int i = 0; i < g.agents; ++i) {
    const int a = profile[static_cast<size_t>(i)];
    out[static_cast<size_t>(i)] =
        (ec[static_cast<size_t>(a)] - subsidy.amount[static_cast<size_t>(a)]) /
        users[static_cast<size_t>(a)];
  }
  return out;
}

}  // namespace subsidylab
