#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "subsidylab/equilibrium.hpp"
#include "subsidylab/fixtures.hpp"
#include "subsidylab/games.hpp"
#include "subsidylab/rng.hpp"
#include "support.hpp"

namespace sl = subsidylab;

TEST_CASE("equilibrium enumeration matches the naive oracle") {
  auto gen = sl::substream(23, "ne-parity");
  for (int trial = 0; trial < 300; ++trial) {
    const sl::MaintenanceGame g = support::random_maintenance(gen, 1, 6, true);
    const sl::MaintenanceSubsidy scheme = support::random_scheme(gen, g);
    const std::vector<double> sigma = scheme.effective(g.n, std::nullopt);
    const sl::NashSet ne =
        sl::enumerate_nash(g, sl::reliability_table(g), sigma);
    CHECK(ne.states == oracles::nash_set(g, sigma));
  }
}

TEST_CASE("ties count as equilibria") {
  // With C1 exactly at the pivotal gain, the agent is indifferent and both
  // all-DN and all-RE survive.
  std::vector<sl::SpNode> leaves;
  leaves.push_back(sl::SpNode::leaf(0));
  const sl::MaintenanceGame g = sl::make_maintenance_game(
      {0.5}, {0.5}, sl::SystemFunction::from_sp(1, sl::SpNode::series(std::move(leaves))));
  const sl::NashSet ne = sl::enumerate_nash(g, sl::MaintenanceSubsidy::none());
  CHECK(ne.states == std::vector<std::uint64_t>{0, 1});
}

TEST_CASE("example-1 equilibria and optimum") {
  const sl::MaintenanceGame g = sl::example1_game();
  const std::vector<double> Phi = sl::reliability_table(g);
  const sl::NashSet ne = sl::enumerate_nash(g, sl::MaintenanceSubsidy::none());
  CHECK(ne.states == std::vector<std::uint64_t>{0, 3});
  const auto [opt, arg] = sl::opt_cost(g, Phi);
  CHECK(opt == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(arg == 3);
  const sl::NashSet fixed =
      sl::enumerate_nash(g, sl::MaintenanceSubsidy::uniform(0.06));
  CHECK(fixed.states == std::vector<std::uint64_t>{3});
}

TEST_CASE("optimum matches the exhaustive scan") {
  auto gen = sl::substream(29, "opt-parity");
  for (int trial = 0; trial < 120; ++trial) {
    const sl::MaintenanceGame g = support::random_maintenance(gen, 1, 6, true);
    const auto [opt, arg] = sl::opt_cost(g, sl::reliability_table(g));
    const auto [want, want_arg] = oracles::opt(g);
    CHECK(opt == doctest::Approx(want).epsilon(1e-9));
    CHECK(oracles::social_cost(g, arg) == doctest::Approx(want).epsilon(1e-9));
    CHECK(arg == want_arg);
  }
}

TEST_CASE("conditional branch changes the equilibrium set") {
  const sl::MaintenanceGame g = sl::example2_game();
  const sl::MaintenanceSubsidy cond = sl::MaintenanceSubsidy::conditional(
      {0.0, 0.0}, {0.0, 0.0}, {0.21, 0.0});
  const sl::MaintenanceGame post0 = sl::posterior_game(g, {0, false});
  const sl::NashSet with = sl::enumerate_nash(post0, cond, 0);
  CHECK(with.states == std::vector<std::uint64_t>{3});
  const sl::NashSet without = sl::enumerate_nash(post0, cond, 1);
  CHECK(without.states == std::vector<std::uint64_t>{0, 3});
}

TEST_CASE("cost-sharing equilibria match the naive oracle") {
  auto gen = sl::substream(31, "csg-parity");
  for (int trial = 0; trial < 200; ++trial) {
    const sl::CostSharingGame g = support::random_csg(gen, 4, 5, 3);
    sl::CsgSubsidy sub = sl::CsgSubsidy::none(g);
    for (double& a : sub.amount)
      if (sl::uniform01(gen) < 0.3)
        a = sl::uniform_real(gen, 0.0, 0.5);
    const sl::CsgNashSet ne = sl::csg_enumerate_nash(g, sub);
    CHECK(ne.profiles == oracles::csg_nash_set(g, sub.amount));
  }
}

TEST_CASE("example-3 equilibria") {
  const sl::CostSharingGame g = sl::example3_game();
  const sl::CsgNashSet prior =
      sl::csg_enumerate_nash(g, sl::CsgSubsidy::none(g));
  const std::vector<sl::CsgProfile> want{{0, 0}, {3, 1}, {3, 2}};
  CHECK(prior.profiles == want);

  for (int w = 0; w < 2; ++w) {
    const sl::CostSharingGame point = sl::make_cost_sharing_game(
        g.agents, g.actions,
        {sl::CsgWorld{1.0, g.worlds[static_cast<size_t>(w)].costs}}, g.H);
    const sl::CsgNashSet post =
        sl::csg_enumerate_nash(point, sl::CsgSubsidy::none(point));
    const sl::CsgProfile only = w == 0 ? sl::CsgProfile{3, 1} : sl::CsgProfile{3, 2};
    CHECK(post.profiles == std::vector<sl::CsgProfile>{only});
  }
}

TEST_CASE("cost-sharing optimum via the assignment scan") {
  auto gen = sl::substream(37, "csg-opt");
  for (int trial = 0; trial < 100; ++trial) {
    const sl::CostSharingGame g = support::random_csg(gen, 4, 5, 3);
    const std::vector<double> ec = sl::csg_expected_costs(g);
    double best = 1e300;
    sl::CsgProfile profile(static_cast<size_t>(g.agents), 0);
    std::vector<int> pick(static_cast<size_t>(g.agents), 0);
    while (true) {
      for (int i = 0; i < g.agents; ++i)
        profile[static_cast<size_t>(i)] =
            g.actions_of_agent[static_cast<size_t>(i)]
                              [static_cast<size_t>(pick[static_cast<size_t>(i)])];
      best = std::min(best, sl::csg_total_cost(g, ec, profile));
      int i = g.agents - 1;
      while (i >= 0 && pick[static_cast<size_t>(i)] + 1 ==
                           static_cast<int>(
                               g.actions_of_agent[static_cast<size_t>(i)].size())) {
        pick[static_cast<size_t>(i)] = 0;
        --i;
      }
      if (i < 0) break;
      ++pick[static_cast<size_t>(i)];
    }
    CHECK(sl::csg_opt_value(g) == doctest::Approx(best).epsilon(1e-9));
  }
}

TEST_CASE("profile cap guards the enumeration") {
  const sl::CostSharingGame g = sl::example3_game();
  CHECK_THROWS_AS(sl::csg_enumerate_nash(g, sl::CsgSubsidy::none(g), sl::kTol, 2),
                  sl::SchemaError);
}
