#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "subsidylab/equilibrium.hpp"
#include "subsidylab/fixtures.hpp"
#include "subsidylab/games.hpp"
#include "subsidylab/metrics.hpp"
#include "subsidylab/rng.hpp"
#include "support.hpp"

namespace sl = subsidylab;

static sl::MaintenanceGame series_game(std::vector<double> costs,
                                       std::vector<double> p) {
  const int n = static_cast<int>(costs.size());
  std::vector<sl::SpNode> leaves;
  for (int i = 0; i < n; ++i) leaves.push_back(sl::SpNode::leaf(i));
  return sl::make_maintenance_game(
      std::move(costs), std::move(p),
      sl::SystemFunction::from_sp(n, sl::SpNode::series(std::move(leaves))));
}

TEST_CASE("anarchy prices on the worked series game") {
  const sl::MaintenanceGame g = sl::example1_game();
  CHECK(sl::poa(g, sl::MaintenanceSubsidy::none()) ==
        doctest::Approx(2.5).epsilon(1e-12));
  CHECK(sl::poa(g, sl::MaintenanceSubsidy::uniform(0.06)) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sl::poa_is_one(g, sl::MaintenanceSubsidy::uniform(0.06)));
  CHECK_FALSE(sl::poa_is_one(g, sl::MaintenanceSubsidy::none()));
}

TEST_CASE("series lower-bound instance") {
  const sl::MaintenanceGame g = series_game({0.25, 0.25}, {0.5, 0.5});
  CHECK(sl::poa(g, sl::MaintenanceSubsidy::none()) ==
        doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("price of anarchy equals the plain-cost ratio") {
  auto gen = sl::substream(41, "poa-identity");
  int evaluated = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const sl::MaintenanceGame g = support::random_maintenance(gen, 1, 6, false);
    const sl::MaintenanceSubsidy scheme = support::random_scheme(gen, g);
    const std::vector<double> sigma = scheme.effective(g.n, std::nullopt);
    const auto [opt, arg] = oracles::opt(g);
    if (opt <= sl::kTol) continue;
    double worst = 0.0;
    for (std::uint64_t s : oracles::nash_set(g, sigma))
      worst = std::max(worst, oracles::social_cost(g, s));
    CHECK(sl::poa(g, scheme) == doctest::Approx(worst / opt).epsilon(1e-9));
    ++evaluated;
  }
  CHECK(evaluated > 150);
}

TEST_CASE("metric order: one, relative, absolute") {
  auto gen = sl::substream(43, "prop-order");
  int evaluated = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const sl::MaintenanceGame g = support::random_maintenance(gen, 1, 6, false);
    const sl::MaintenanceSubsidy scheme = support::random_scheme(gen, g);
    try {
      const double p = sl::poa(g, scheme);
      const double pt = sl::poa_tilde(g, scheme);
      CHECK(p >= 1.0 - 1e-9);
      CHECK(pt <= p + 1e-9);
      ++evaluated;
    } catch (const sl::UndefinedMetricError&) {
      // Degenerate draws (a never-failing system) have no ratio; skip them.
    }
  }
  CHECK(evaluated > 400);
}

TEST_CASE("undefined metrics throw") {
  // A constant-true system never fails, so doing nothing costs zero and the
  // ratio has no value.
  const sl::MaintenanceGame g = sl::make_maintenance_game(
      {0.5, 0.5}, {0.5, 0.5}, sl::SystemFunction::from_cnf(2, {}));
  CHECK_THROWS_AS(sl::poa(g, sl::MaintenanceSubsidy::none()),
                  sl::UndefinedMetricError);
  // The optimum-gap predicate is still decidable there.
  CHECK(sl::poa_is_one(g, sl::MaintenanceSubsidy::none()));
}

TEST_CASE("system-function predicate") {
  const sl::MaintenanceGame g = sl::example1_game();
  CHECK_FALSE(
      sl::system_functions_in_all_ne(g, sl::MaintenanceSubsidy::none()));
  // Paying both agents their full repair cost plus a little makes repairing
  // strictly dominant, so the only equilibrium is all-RE and a series system
  // surely works.
  CHECK(sl::system_functions_in_all_ne(
      g, sl::MaintenanceSubsidy::uniform(0.31)));
}

TEST_CASE("inspection report for the component game") {
  const sl::MaintenanceGame g = sl::example2_game();
  const sl::VoiReport rep =
      sl::voi_report(g, sl::MaintenanceSubsidy::none(), 0);
  CHECK(rep.inspected == 0);
  CHECK(rep.branch_weight[0] == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(rep.branch_weight[1] == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(rep.worst[0] == doctest::Approx(-0.7).epsilon(1e-12));
  CHECK(rep.worst[1] == doctest::Approx(-0.7).epsilon(1e-12));
  CHECK(rep.expected[0] == doctest::Approx(-0.3).epsilon(1e-12));
  CHECK(rep.expected[1] == doctest::Approx(-0.42).epsilon(1e-12));
  CHECK(rep.worst_branch[0] == 1);
  CHECK(rep.worst_branch[1] == 1);
  CHECK(rep.worst_prior_state[0] == 3);
  CHECK(rep.worst_post_state[0] == 0);

  const sl::MaintenanceSubsidy cond = sl::MaintenanceSubsidy::conditional(
      {0.0, 0.0}, {0.0, 0.0}, {0.21, 0.0});
  const sl::VoiReport fixed = sl::voi_report(g, cond, 0);
  CHECK(fixed.worst[0] == doctest::Approx(0.21).epsilon(1e-9));
  CHECK(fixed.worst[1] == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("global selection is no more pessimistic than the adversary") {
  auto gen = sl::substream(47, "voi-modes");
  for (int trial = 0; trial < 100; ++trial) {
    const sl::MaintenanceGame g = support::random_maintenance(gen, 2, 5, false);
    const int j = static_cast<int>(sl::uniform_int(gen, 0, g.n - 1));
    const sl::VoiReport pess =
        sl::voi_report(g, sl::MaintenanceSubsidy::none(), j);
    const sl::VoiReport glob = sl::voi_report(
        g, sl::MaintenanceSubsidy::none(), j, sl::VoiMode::kGlobal);
    for (int i = 0; i < g.n; ++i)
      CHECK(pess.worst[static_cast<size_t>(i)] <=
            glob.worst[static_cast<size_t>(i)] + 1e-9);
  }
}

TEST_CASE("inspection report for the cost-sharing example") {
  const sl::CostSharingGame g = sl::example3_game();
  const sl::CsgSubsidy none = sl::CsgSubsidy::none(g);
  const sl::CsgVoiReport rep = sl::csg_voi_report(g, none, 1);
  CHECK(rep.inspected == 1);
  CHECK(rep.branch_weight[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(rep.branch_weight[1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(rep.worst[0] == doctest::Approx(-1.5).epsilon(1e-12));
  // Agent 2's cheapest prior equilibrium costs 2.5 and each branch has a
  // unique posterior equilibrium costing 2, so the pessimistic gap is 0.5.
  CHECK(rep.worst[1] == doctest::Approx(0.5).epsilon(1e-12));

  sl::CsgSubsidy sub = sl::CsgSubsidy::none(g);
  sub.amount[0] = 3.01;
  const sl::CsgVoiReport fixed = sl::csg_voi_report(g, sub, 1);
  CHECK(fixed.worst[0] >= -sl::kTol);
  CHECK(fixed.worst[1] >= -sl::kTol);
}

TEST_CASE("cost-sharing anarchy ratio against hand enumeration") {
  auto gen = sl::substream(53, "csg-poa");
  int evaluated = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const sl::CostSharingGame g = support::random_csg(gen, 3, 4, 2);
    const sl::CsgSubsidy none = sl::CsgSubsidy::none(g);
    const std::vector<double> zeros(g.actions.size(), 0.0);
    const std::vector<double> ec = sl::csg_expected_costs(g);
    double opt = 1e300, worst = 0.0;
    for (const sl::CsgProfile& q : oracles::csg_nash_set(g, zeros))
      worst = std::max(worst, sl::csg_total_cost(g, ec, q));
    opt = sl::csg_opt_value(g);
    if (opt <= sl::kTol || worst == 0.0) continue;
    CHECK(sl::csg_poa(g, none) == doctest::Approx(worst / opt).epsilon(1e-9));
    CHECK(sl::csg_poa_tilde(g, none) <= sl::csg_poa(g, none) + 1e-9);
    ++evaluated;
  }
  CHECK(evaluated > 60);
}
