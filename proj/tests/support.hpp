// Random instance generators shared by the property tests. All draws flow
// through named substreams of a master seed so every test is reproducible.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "subsidylab/games.hpp"
#include "subsidylab/rng.hpp"
#include "subsidylab/system_function.hpp"

namespace support {

namespace sl = subsidylab;

inline sl::SpNode random_sp_tree(std::mt19937_64& gen, int lo, int hi) {
  if (lo == hi) return sl::SpNode::leaf(lo);
  const int mid = static_cast<int>(sl::uniform_int(gen, lo, hi - 1));
  std::vector<sl::SpNode> children;
  children.push_back(random_sp_tree(gen, lo, mid));
  children.push_back(random_sp_tree(gen, mid + 1, hi));
  return sl::uniform01(gen) < 0.5
             ? sl::SpNode::series(std::move(children))
             : sl::SpNode::parallel(std::move(children));
}

// kind: 0 = cnf, 1 = sp, 2 = table.
inline sl::SystemFunction random_phi(std::mt19937_64& gen, int n, int kind) {
  if (kind == 0) {
    const int m = static_cast<int>(sl::uniform_int(gen, 1, n + 2));
    std::vector<std::vector<int>> clauses;
    for (int c = 0; c < m; ++c) {
      std::vector<int> clause;
      for (int i = 1; i <= n; ++i) {
        const double u = sl::uniform01(gen);
        if (u < 0.25)
          clause.push_back(i);
        else if (u < 0.4)
          clause.push_back(-i);
      }
      if (clause.empty())
        clause.push_back(static_cast<int>(sl::uniform_int(gen, 1, n)));
      clauses.push_back(std::move(clause));
    }
    return sl::SystemFunction::from_cnf(n, std::move(clauses));
  }
  if (kind == 1) return sl::SystemFunction::from_sp(n, random_sp_tree(gen, 0, n - 1));
  std::vector<char> table(std::size_t{1} << n);
  for (auto& b : table) b = sl::uniform01(gen) < 0.5 ? 1 : 0;
  // An all-false system makes every metric trivially degenerate; flip the
  // top word so repairing everything always helps.
  table.back() = 1;
  return sl::SystemFunction::from_table(n, std::move(table));
}

inline sl::MaintenanceGame random_maintenance(std::mt19937_64& gen, int min_n,
                                              int max_n,
                                              bool allow_negative_costs) {
  const int n = static_cast<int>(sl::uniform_int(gen, min_n, max_n));
  std::vector<double> costs, p;
  for (int i = 0; i < n; ++i) {
    double c = sl::uniform_real(gen, 0.01, 1.0);
    if (allow_negative_costs && sl::uniform01(gen) < 0.15) c = -c;
    costs.push_back(c);
    p.push_back(sl::uniform_real(gen, 0.1, 0.9));
  }
  const int kind = static_cast<int>(sl::uniform_int(gen, 0, 2));
  return sl::make_maintenance_game(std::move(costs), std::move(p),
                                   random_phi(gen, n, kind));
}

inline sl::MaintenanceSubsidy random_scheme(std::mt19937_64& gen,
                                            const sl::MaintenanceGame& g) {
  auto vec = [&](double cap) {
    std::vector<double> v;
    for (int i = 0; i < g.n; ++i)
      v.push_back(sl::uniform_real(gen, 0.0, cap));
    return v;
  };
  const double cap = std::min(g.H, 1.0);
  switch (sl::uniform_int(gen, 0, 2)) {
    case 0:
      return sl::MaintenanceSubsidy::uniform(
          sl::uniform_real(gen, 0.0, cap));
    case 1:
      return sl::MaintenanceSubsidy::per_agent_scheme(vec(cap));
    default:
      return sl::MaintenanceSubsidy::conditional(vec(cap), vec(cap), vec(cap));
  }
}

inline sl::CostSharingGame random_csg(std::mt19937_64& gen, int max_agents,
                                      int max_actions, int max_worlds) {
  const int agents = static_cast<int>(sl::uniform_int(gen, 2, max_agents));
  const int actions = static_cast<int>(
      sl::uniform_int(gen, 2, max_actions));
  const int worlds = static_cast<int>(sl::uniform_int(gen, 1, max_worlds));
  std::vector<sl::CsgAction> acts;
  for (int a = 0; a < actions; ++a) {
    std::vector<int> avail;
    for (int i = 0; i < agents; ++i)
      if (sl::uniform01(gen) < 0.6) avail.push_back(i);
    if (avail.empty())
      avail.push_back(static_cast<int>(sl::uniform_int(gen, 0, agents - 1)));
    acts.push_back({"a" + std::to_string(a + 1), std::move(avail)});
  }
  // Every agent needs at least one available action.
  for (int i = 0; i < agents; ++i) {
    bool covered = false;
    for (const auto& a : acts)
      for (int j : a.avail)
        if (j == i) covered = true;
    if (!covered) acts[0].avail.push_back(i);
  }
  std::vector<sl::CsgWorld> ws;
  std::vector<double> probs;
  double total = 0.0;
  for (int w = 0; w < worlds; ++w) {
    probs.push_back(sl::uniform_real(gen, 0.2, 1.0));
    total += probs.back();
  }
  for (int w = 0; w < worlds; ++w) {
    std::vector<double> costs;
    for (int a = 0; a < actions; ++a)
      costs.push_back(sl::uniform_real(gen, 0.5, 6.0));
    ws.push_back({probs[static_cast<size_t>(w)] / total, std::move(costs)});
  }
  return sl::make_cost_sharing_game(agents, std::move(acts), std::move(ws));
}

}  // namespace support
