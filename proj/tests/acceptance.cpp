// Acceptance gate: one pass/fail line per criterion, exit code counts the
// failures. Each criterion is independent; a thrown exception fails only its
// own criterion.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "oracles.hpp"
#include "subsidylab/equilibrium.hpp"
#include "subsidylab/fixtures.hpp"
#include "subsidylab/games.hpp"
#include "subsidylab/learning.hpp"
#include "subsidylab/metrics.hpp"
#include "subsidylab/reductions.hpp"
#include "subsidylab/rng.hpp"
#include "subsidylab/solvers.hpp"
#include "subsidylab/system_function.hpp"
#include "support.hpp"

namespace sl = subsidylab;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

Outcome ok() { return {true, ""}; }
Outcome fail(std::string detail) { return {false, std::move(detail)}; }

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

bool close(double a, double b, double tol = 1e-9) {
  return std::abs(a - b) <= tol;
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

// ---------------------------------------------------------------------------
// 1. Golden tables.
// ---------------------------------------------------------------------------

Outcome criterion1() {
  const double start = now_seconds();
  int bad = 0;

  auto check_cmg = [&](const sl::MaintenanceGame& g, const double want[4][2]) {
    const std::vector<double> Phi = sl::reliability_table(g);
    const std::vector<double> zeros(static_cast<std::size_t>(g.n), 0.0);
    for (std::uint64_t s = 0; s < 4; ++s) {
      const std::vector<double> costs = sl::cmg_agent_costs(g, Phi, s, zeros);
      for (int i = 0; i < 2; ++i)
        if (!close(costs[static_cast<std::size_t>(i)], want[s][i])) ++bad;
    }
  };

  const double t1[4][2] = {{0.75, 0.75}, {0.8, 0.5}, {0.5, 0.8}, {0.3, 0.3}};
  check_cmg(sl::example1_game(), t1);

  const sl::MaintenanceGame ex2 = sl::example2_game();
  const double t2_prior[4][2] = {{0.96, 0.96}, {1.2, 0.9}, {0.6, 0.9}, {0.3, 0.3}};
  const double t2_y1[4][2] = {{0.9, 0.9}, {1.2, 0.9}, {0.0, 0.3}, {0.3, 0.3}};
  const double t2_y0[4][2] = {{1.0, 1.0}, {1.2, 0.9}, {1.0, 1.3}, {0.3, 0.3}};
  check_cmg(ex2, t2_prior);
  check_cmg(sl::posterior_game(ex2, {0, 1}), t2_y1);
  check_cmg(sl::posterior_game(ex2, {0, 0}), t2_y0);

  const sl::CostSharingGame ex3 = sl::example3_game();
  // Rows: agent 1 in {A, D}; columns: agent 2 in {A, B, C}; entries are the
  // (agent 1, agent 2) shares.
  const double t3_prior[2][3][2] = {
      {{2.5, 2.5}, {5, 4}, {5, 4}}, {{4, 5}, {4, 4}, {4, 4}}};
  const double t3_w1[2][3][2] = {
      {{2.5, 2.5}, {5, 2}, {5, 6}}, {{4, 5}, {4, 2}, {4, 6}}};
  const double t3_w2[2][3][2] = {
      {{2.5, 2.5}, {5, 6}, {5, 2}}, {{4, 5}, {4, 6}, {4, 2}}};
  const int row_actions[2] = {0, 3};  // A, D
  const int col_actions[3] = {0, 1, 2};  // A, B, C

  auto check_csg = [&](const sl::CostSharingGame& g,
                       const double want[2][3][2]) {
    const std::vector<double> ec = sl::csg_expected_costs(g);
    const sl::CsgSubsidy none = sl::CsgSubsidy::none(g);
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 3; ++c) {
        const sl::CsgProfile prof{row_actions[r], col_actions[c]};
        const std::vector<double> got = sl::csg_agent_costs(g, ec, prof, none);
        if (!close(got[0], want[r][c][0])) ++bad;
        if (!close(got[1], want[r][c][1])) ++bad;
      }
  };
  check_csg(ex3, t3_prior);
  for (int w = 0; w < 2; ++w) {
    const sl::CostSharingGame gw = sl::make_cost_sharing_game(
        ex3.agents, ex3.actions,
        {sl::CsgWorld{1.0, ex3.worlds[static_cast<std::size_t>(w)].costs}},
        ex3.H);
    check_csg(gw, w == 0 ? t3_w1 : t3_w2);
  }

  const double elapsed = now_seconds() - start;
  if (bad > 0) return fail(std::to_string(bad) + " table entries off");
  if (elapsed >= 1.0) return fail("took " + fmt(elapsed) + "s");
  return ok();
}

// ---------------------------------------------------------------------------
// 2. First worked example end to end.
// ---------------------------------------------------------------------------

Outcome criterion2() {
  const sl::MaintenanceGame g = sl::example1_game();
  const sl::NashSet ne = sl::enumerate_nash(g, sl::MaintenanceSubsidy::none());
  if (ne.states != std::vector<std::uint64_t>{0, 3})
    return fail("prior equilibria wrong");
  if (!close(sl::poa(g, sl::MaintenanceSubsidy::none()), 2.5))
    return fail("prior ratio not 2.5");

  const sl::MaintenanceSubsidy fix = sl::MaintenanceSubsidy::uniform(0.06);
  const sl::NashSet fixed = sl::enumerate_nash(g, fix);
  if (fixed.states != std::vector<std::uint64_t>{3})
    return fail("sigma 0.06 equilibrium not unique repair-repair");
  if (!close(sl::poa(g, fix), 1.0)) return fail("subsidized ratio not 1");

  const double s = sl::two_series_poa_subsidy(0.5, 0.5, 0.3, 0.3);
  if (!close(s, 0.05, 1e-12)) return fail("closed form " + fmt(s));
  return ok();
}

// ---------------------------------------------------------------------------
// 3. Second worked example: inspection and a conditional subsidy.
// ---------------------------------------------------------------------------

Outcome criterion3() {
  const sl::MaintenanceGame g = sl::example2_game();
  const sl::VoiReport rep =
      sl::voi_report(g, sl::MaintenanceSubsidy::none(), 0);
  if (!close(rep.worst[0], -0.7) || !close(rep.worst[1], -0.7))
    return fail("worst voi " + fmt(rep.worst[0]) + "," + fmt(rep.worst[1]));
  if (!close(rep.expected[0], -0.3) || !close(rep.expected[1], -0.42))
    return fail("expected voi " + fmt(rep.expected[0]) + "," +
                fmt(rep.expected[1]));

  const sl::MaintenanceSubsidy cond = sl::MaintenanceSubsidy::conditional(
      {0.0, 0.0}, {0.0, 0.0}, {0.21, 0.0});
  const sl::VoiReport after = sl::voi_report(g, cond, 0);
  if (after.worst[0] < -1e-9 || after.worst[1] < -1e-9)
    return fail("conditional 0.21 leaves worst voi " + fmt(after.worst[0]) +
                "," + fmt(after.worst[1]));
  return ok();
}

// ---------------------------------------------------------------------------
// 4. Third worked example: cost sharing, inspection, action subsidy.
// ---------------------------------------------------------------------------

Outcome criterion4() {
  const sl::CostSharingGame g = sl::example3_game();
  const std::vector<double> ec = sl::csg_expected_costs(g);
  const sl::CsgSubsidy none = sl::CsgSubsidy::none(g);

  const sl::CsgNashSet prior = sl::csg_enumerate_nash(g, none);
  const sl::CsgProfile aa{0, 0};
  if (std::find(prior.profiles.begin(), prior.profiles.end(), aa) ==
      prior.profiles.end())
    return fail("prior equilibria miss the shared action pair");
  const std::vector<double> aa_costs = sl::csg_agent_costs(g, ec, aa, none);
  if (!close(aa_costs[0], 2.5) || !close(aa_costs[1], 2.5))
    return fail("shared pair costs wrong");

  const sl::CostSharingGame w1 = sl::make_cost_sharing_game(
      g.agents, g.actions, {sl::CsgWorld{1.0, g.worlds[0].costs}}, g.H);
  const sl::CsgNashSet post = sl::csg_enumerate_nash(w1, sl::CsgSubsidy::none(w1));
  if (post.profiles != std::vector<sl::CsgProfile>{{3, 1}})
    return fail("posterior equilibrium not unique (D,B)");
  const std::vector<double> db = sl::csg_agent_costs(
      w1, sl::csg_expected_costs(w1), {3, 1}, sl::CsgSubsidy::none(w1));
  if (!close(db[0], 4.0) || !close(db[1], 2.0))
    return fail("posterior costs wrong");

  const sl::CsgVoiReport rep = sl::csg_voi_report(g, none, 1);
  if (!close(rep.worst[0], -1.5))
    return fail("agent 1 worst voi " + fmt(rep.worst[0]));

  sl::CsgSubsidy sub = none;
  sub.amount[0] = 3.01;
  const sl::CsgVoiReport after = sl::csg_voi_report(g, sub, 1);
  if (after.worst[0] < -1e-9 || after.worst[1] < -1e-9)
    return fail("3.01 on the shared action leaves worst voi " +
                fmt(after.worst[0]) + "," + fmt(after.worst[1]));
  return ok();
}

// ---------------------------------------------------------------------------
// 5. Metric order on random games and schemes.
// ---------------------------------------------------------------------------

Outcome criterion5() {
  auto gen = sl::substream(501, "acceptance-order");
  int evaluated = 0;
  int attempts = 0;
  while (evaluated < 10000 && attempts < 40000) {
    ++attempts;
    const sl::MaintenanceGame g = support::random_maintenance(gen, 2, 6, false);
    const sl::MaintenanceSubsidy scheme = support::random_scheme(gen, g);
    double ratio = 0.0, tilde = 0.0;
    try {
      ratio = sl::poa(g, scheme);
      tilde = sl::poa_tilde(g, scheme);
    } catch (const sl::UndefinedMetricError&) {
      continue;  // zero-optimum draw, no ratio form
    }
    ++evaluated;
    if (ratio < 1.0 - 1e-9)
      return fail("ratio below one: " + fmt(ratio));
    if (tilde > ratio + 1e-9)
      return fail("tilde ratio exceeds ratio: " + fmt(tilde) + " > " +
                  fmt(ratio));
  }
  if (evaluated < 10000)
    return fail("only " + std::to_string(evaluated) + " games evaluated");
  return ok();
}

// ---------------------------------------------------------------------------
// 6. Series lower bound with knife-edge costs.
// ---------------------------------------------------------------------------

Outcome criterion6() {
  auto gen = sl::substream(601, "acceptance-series");
  for (int n = 2; n <= 8; ++n) {
    std::vector<std::vector<int>> clauses;
    for (int i = 1; i <= n; ++i) clauses.push_back({i});
    for (int trial = 0; trial < 1000; ++trial) {
      std::vector<double> p, costs;
      double prod = 1.0, sum_inv = 0.0;
      for (int i = 0; i < n; ++i) {
        p.push_back(sl::uniform_real(gen, 0.1, 0.9));
        prod *= p.back();
        sum_inv += 1.0 / p.back();
      }
      for (int i = 0; i < n; ++i) {
        double others = 1.0;
        for (int j = 0; j < n; ++j)
          if (j != i) others *= p[static_cast<std::size_t>(j)];
        costs.push_back((1.0 - p[static_cast<std::size_t>(i)]) * others);
      }
      const sl::MaintenanceGame g = sl::make_maintenance_game(
          costs, p, sl::SystemFunction::from_cnf(n, clauses), std::nullopt);

      const sl::NashSet ne =
          sl::enumerate_nash(g, sl::MaintenanceSubsidy::none());
      if (ne.states.empty() || ne.states.front() != 0)
        return fail("all-do-nothing is not an equilibrium at n=" +
                    std::to_string(n));
      const double bound = static_cast<double>(n) / (sum_inv * prod);
      const double ratio = sl::poa(g, sl::MaintenanceSubsidy::none());
      if (ratio < bound - 1e-9)
        return fail("n=" + std::to_string(n) + ": " + fmt(ratio) + " < " +
                    fmt(bound));
    }
  }
  return ok();
}

// ---------------------------------------------------------------------------
// 7. Closed forms versus the grid oracle.
// ---------------------------------------------------------------------------

Outcome criterion7() {
  const double start = now_seconds();
  auto gen = sl::substream(701, "acceptance-grid");
  const double step = 1e-3;
  for (int variant = 0; variant < 2; ++variant) {
    const bool system_goal = variant == 1;
    for (int trial = 0; trial < 1000; ++trial) {
      oracles::TwoSeries ts;
      ts.p1 = sl::uniform_real(gen, 0.05, 0.95);
      ts.p2 = sl::uniform_real(gen, 0.05, 0.95);
      ts.C1 = sl::uniform_real(gen, 0.01, 1.0);
      ts.C2 = sl::uniform_real(gen, 0.01, 1.0);
      const double formula =
          system_goal
              ? sl::two_series_system_subsidy(ts.p1, ts.p2, ts.C1, ts.C2)
              : sl::two_series_poa_subsidy(ts.p1, ts.p2, ts.C1, ts.C2);
      const double oracle = oracles::grid_min_subsidy(ts, step, system_goal);
      if (std::abs(formula - oracle) > step + 1e-9)
        return fail(std::string(system_goal ? "system" : "ratio") +
                    " variant off by " + fmt(std::abs(formula - oracle)) +
                    " at p=(" + fmt(ts.p1) + "," + fmt(ts.p2) + ") C=(" +
                    fmt(ts.C1) + "," + fmt(ts.C2) + ")");
    }
  }
  const double elapsed = now_seconds() - start;
  if (elapsed >= 60.0) return fail("took " + fmt(elapsed) + "s");
  return ok();
}

// ---------------------------------------------------------------------------
// 8. Reductions agree with brute force.
// ---------------------------------------------------------------------------

Outcome criterion8() {
  for (const sl::Graph& g : sl::connected_graphs_up_to(6))
    for (int k = 0; k <= g.n; ++k) {
      for (sl::ReductionKind kind :
           {sl::ReductionKind::kCmgPoas, sl::ReductionKind::kCmgSystem}) {
        const sl::ReductionReport r = sl::verify_reduction(kind, g, k);
        if (!r.agree)
          return fail("graph n=" + std::to_string(g.n) + " k=" +
                      std::to_string(k) + ": " + r.detail);
      }
    }
  for (std::uint64_t i = 0; i < 200; ++i) {
    const sl::SetCoverInstance inst = sl::random_set_cover(8, 808, i);
    const sl::ReductionReport r =
        sl::verify_reduction(sl::ReductionKind::kCsgPoas, inst);
    if (!r.agree)
      return fail("set cover instance " + std::to_string(i) + ": " + r.detail);
  }
  return ok();
}

// ---------------------------------------------------------------------------
// 9. Equilibria are piecewise constant in the uniform subsidy level.
// ---------------------------------------------------------------------------

Outcome criterion9() {
  auto gen = sl::substream(901, "acceptance-piecewise");
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 2 + trial % 7;
    const sl::MaintenanceGame g = support::random_maintenance(gen, n, n, false);
    const std::vector<double> Phi = sl::reliability_table(g);
    const sl::CriticalValueSet cv = sl::critical_values(g, Phi);

    const std::size_t cap = static_cast<std::size_t>(g.n)
                            << static_cast<std::size_t>(g.n - 1);
    if (cv.merged.size() > cap)
      return fail("breakpoint count " + std::to_string(cv.merged.size()) +
                  " exceeds " + std::to_string(cap));

    // Per state: the uniform levels where it is an equilibrium form a single
    // interval [L, U] read off the pivotal gains, matching the tolerance the
    // enumerator itself uses.
    const std::size_t words = std::uint64_t{1} << g.n;
    std::vector<double> lo_of(words, -1e300), hi_of(words, 1e300);
    for (std::uint64_t w = 0; w < words; ++w)
      for (int i = 0; i < g.n; ++i) {
        const std::uint64_t bit = std::uint64_t{1} << i;
        const std::uint64_t base = w & ~bit;
        const double gain = Phi[base | bit] - Phi[base];
        const double threshold = g.costs[static_cast<std::size_t>(i)] - gain;
        if (w & bit)
          lo_of[w] = std::max(lo_of[w], threshold - sl::kTol);
        else
          hi_of[w] = std::min(hi_of[w], threshold + sl::kTol);
      }

    std::vector<double> edges{0.0};
    for (double c : cv.merged)
      if (c < g.H - 1e-12) edges.push_back(c);
    edges.push_back(g.H);

    std::vector<std::uint64_t> cands, members, first;
    for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
      const double lo = edges[e], hi = edges[e + 1];
      const double width = hi - lo;
      if (width < 1e-7) continue;
      // Stay clear of the tolerance band that weak-equilibrium comparisons
      // open up around each critical value.
      const double band = std::max(2e-9, width * 1e-3);
      cands.clear();
      for (std::uint64_t w = 0; w < words; ++w)
        if (lo_of[w] <= hi + 1e-8 && hi_of[w] >= lo - 1e-8) cands.push_back(w);

      first.clear();
      for (int probe = 0; probe < 200; ++probe) {
        const double sigma =
            lo + band + (width - 2.0 * band) * probe / 199.0;
        members.clear();
        for (std::uint64_t w : cands)
          if (sigma >= lo_of[w] && sigma <= hi_of[w]) members.push_back(w);
        if (probe == 0) {
          first = members;
          if (g.n <= 5) {
            const sl::NashSet ne = sl::enumerate_nash(
                g, Phi,
                std::vector<double>(static_cast<size_t>(g.n), sigma));
            if (ne.states != members)
              return fail("threshold membership disagrees with enumeration");
          }
        } else if (members != first) {
          return fail("equilibrium set moved inside an interval (trial " +
                      std::to_string(trial) + ")");
        }
      }
    }
  }
  return ok();
}

// ---------------------------------------------------------------------------
// 10. Offline generalization improves with sample size.
// ---------------------------------------------------------------------------

sl::GameDistribution series5() {
  sl::GameDistribution dist;
  dist.family = sl::GameDistribution::Family::kSeries;
  dist.n = 5;
  dist.cost_lo = 0.0;
  dist.cost_hi = 1.0;
  dist.H = 1.0;
  return dist;
}

Outcome criterion10() {
  const sl::GameDistribution dist = series5();
  std::vector<sl::LossCurve> test_curves;
  for (int i = 0; i < 1000; ++i)
    test_curves.push_back(
        sl::loss_curve(sl::sample_maintenance(dist, 1001, 100000 + i)));
  const double test_opt = sl::erm_uniform_curves(test_curves).avg_loss;
  auto test_loss_at = [&](double sigma) {
    double total = 0.0;
    for (const auto& c : test_curves) total += c.eval(sigma);
    return total / test_curves.size();
  };

  const int sizes[3] = {25, 100, 400};
  double medians[3] = {0, 0, 0};
  for (int s = 0; s < 3; ++s) {
    std::vector<double> excess;
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<sl::MaintenanceGame> train;
      for (int i = 0; i < sizes[s]; ++i)
        train.push_back(
            sl::sample_maintenance(dist, 2000 + trial, i));
      const sl::ErmUniformResult erm = sl::erm_uniform(train);
      excess.push_back(test_loss_at(erm.sigma) - test_opt);
    }
    std::sort(excess.begin(), excess.end());
    medians[s] = 0.5 * (excess[9] + excess[10]);
  }
  const double budget = 0.05 * sl::loss_bound(dist.n, dist.H);
  if (!(medians[0] + 1e-12 >= medians[1] && medians[1] + 1e-12 >= medians[2]))
    return fail("medians not decreasing: " + fmt(medians[0]) + ", " +
                fmt(medians[1]) + ", " + fmt(medians[2]));
  if (medians[2] > budget)
    return fail("median excess at 400 is " + fmt(medians[2]) + " > " +
                fmt(budget));
  return ok();
}

// ---------------------------------------------------------------------------
// 11 and 12. Online regret scaling, sampler fidelity, dispersion.
// ---------------------------------------------------------------------------

struct OnlinePair {
  Outcome c11;
  Outcome c12;
};

// Chi-squared comparison of 20000 draws against the analytic cell masses,
// pooling cells to at least 5 expected draws.
double sampler_pvalue(sl::OnlineForecaster& f) {
  const std::vector<double> masses = f.analytic_cell_masses();
  const std::vector<double>& edges = f.cell_edges();
  const int draws = 20000;
  std::vector<int> count(masses.size(), 0);
  for (int d = 0; d < draws; ++d) {
    const double x = f.sample_sigma();
    const auto it = std::upper_bound(edges.begin(), edges.end(), x);
    const std::size_t cell = std::min(
        masses.size() - 1,
        static_cast<std::size_t>(std::distance(edges.begin(), it)) - 1);
    ++count[cell];
  }
  std::vector<std::pair<double, double>> buckets;
  double obs = 0.0, expd = 0.0;
  for (std::size_t i = 0; i < masses.size(); ++i) {
    obs += count[i];
    expd += masses[i] * draws;
    if (expd >= 5.0) {
      buckets.emplace_back(obs, expd);
      obs = expd = 0.0;
    }
  }
  if (!buckets.empty() && (expd > 0.0 || obs > 0.0)) {
    buckets.back().first += obs;
    buckets.back().second += expd;
  }
  if (buckets.size() < 2) return 1.0;
  double stat = 0.0;
  for (const auto& [o, e] : buckets) stat += (o - e) * (o - e) / e;
  return oracles::chi2_pvalue(stat, static_cast<int>(buckets.size()) - 1);
}

OnlinePair criteria11and12() {
  const sl::GameDistribution dist = series5();
  const int horizons[3] = {500, 2000, 8000};
  const int seeds = 10;
  const double cap = static_cast<double>(dist.n)
                     * std::ldexp(1.0, dist.n - 1);  // per-round breakpoints

  OnlinePair out;
  out.c11 = ok();
  out.c12 = ok();
  double mean_regret[3] = {0, 0, 0};

  for (int h = 0; h < 3; ++h) {
    const int T = horizons[h];
    for (int s = 0; s < seeds; ++s) {
      std::vector<sl::LossCurve> curves;
      curves.reserve(static_cast<std::size_t>(T));
      for (int i = 0; i < T; ++i)
        curves.push_back(sl::loss_curve(
            sl::sample_maintenance(dist, 9000 + static_cast<std::uint64_t>(s), i)));

      const double eps = 1.0 / std::sqrt(static_cast<double>(T));
      const int window = sl::dispersion_diagnostic(curves, eps);
      const double disp_bound =
          3.0 * (eps * T + std::sqrt(T * std::log(T * cap)));
      if (out.c12.pass && window > disp_bound)
        out.c12 = fail("T=" + std::to_string(T) + " seed " +
                       std::to_string(s) + ": " + std::to_string(window) +
                       " curves in a window, bound " + fmt(disp_bound));

      const double lambda =
          sl::OnlineForecaster::default_lambda(T, dist.n, dist.H);
      sl::OnlineForecaster f(std::move(curves), lambda,
                             37 + static_cast<std::uint64_t>(s));
      const sl::OnlineResult res = f.run();
      mean_regret[h] += res.regret / seeds;

      const double p = sampler_pvalue(f);
      if (out.c11.pass && p <= 0.01)
        out.c11 = fail("sampler fit p=" + fmt(p) + " at T=" +
                       std::to_string(T) + " seed " + std::to_string(s));
    }
  }

  if (out.c11.pass) {
    double xbar = 0.0, ybar = 0.0;
    double xs[3], ys[3];
    for (int h = 0; h < 3; ++h) {
      if (mean_regret[h] <= 0.0) {
        out.c11 = fail("nonpositive mean regret at T=" +
                       std::to_string(horizons[h]));
        return out;
      }
      xs[h] = std::log(static_cast<double>(horizons[h]));
      ys[h] = std::log(mean_regret[h]);
      xbar += xs[h] / 3.0;
      ybar += ys[h] / 3.0;
    }
    double num = 0.0, den = 0.0;
    for (int h = 0; h < 3; ++h) {
      num += (xs[h] - xbar) * (ys[h] - ybar);
      den += (xs[h] - xbar) * (xs[h] - xbar);
    }
    const double slope = num / den;
    if (slope > 0.75)
      out.c11 = fail("regret exponent " + fmt(slope) + " (means " +
                     fmt(mean_regret[0]) + ", " + fmt(mean_regret[1]) + ", " +
                     fmt(mean_regret[2]) + ")");
  }
  return out;
}

Outcome guarded(Outcome (*fn)()) {
  try {
    return fn();
  } catch (const std::exception& e) {
    return fail(std::string("exception: ") + e.what());
  }
}

}  // namespace

int main() {
  Outcome results[12];
  results[0] = guarded(criterion1);
  results[1] = guarded(criterion2);
  results[2] = guarded(criterion3);
  results[3] = guarded(criterion4);
  results[4] = guarded(criterion5);
  results[5] = guarded(criterion6);
  results[6] = guarded(criterion7);
  results[7] = guarded(criterion8);
  results[8] = guarded(criterion9);
  try {
    results[9] = criterion10();
  } catch (const std::exception& e) {
    results[9] = fail(std::string("exception: ") + e.what());
  }
  try {
    const OnlinePair pair = criteria11and12();
    results[10] = pair.c11;
    results[11] = pair.c12;
  } catch (const std::exception& e) {
    results[10] = fail(std::string("exception: ") + e.what());
    results[11] = fail(std::string("exception: ") + e.what());
  }

  int failures = 0;
  for (int i = 0; i < 12; ++i) {
    if (results[i].pass) {
      std::printf("criterion %d: PASS\n", i + 1);
    } else {
      ++failures;
      std::printf("criterion %d: FAIL (%s)\n", i + 1,
                  results[i].detail.c_str());
    }
  }
  std::printf("%d of 12 criteria passed\n", 12 - failures);
  return failures;
}
