#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "subsidylab/common.hpp"
#include "subsidylab/games.hpp"

namespace subsidylab {

// Designer's regret-style loss: the worst equilibrium's unsubsidized social
// cost (agents' subsidized losses plus the payments made; the two telescope).
// For a conditional scheme only the pre-inspection payments matter here.
double loss_prior(const MaintenanceGame& g, const MaintenanceSubsidy& scheme);

// Mean over the equilibrium set instead of the max.
double loss_prior_avg(const MaintenanceGame& g,
                      const MaintenanceSubsidy& scheme);

// Post-inspection analogue for conditional schemes: the two revelation
// branches' worst-equilibrium costs, weighted by (p_j, 1 - p_j). The branch
// weighting is an interpretation choice; callers should surface it.
double loss_posterior(const MaintenanceGame& g,
                      const MaintenanceSubsidy& scheme, int inspect = 0);

// Inspection-regret loss for cost-sharing games: expected worst-equilibrium
// subsidized total after a world is revealed, minus the prior worst. Raw, the
// quantity can be negative (information can help); learning wants a
// nonnegative objective, so by default it is clamped at zero.
double loss_voi_csg(const CostSharingGame& g, const CsgSubsidy& subsidy,
                    bool hinge = true);

// sigma -> loss_prior(uniform sigma) on [0, H], piecewise constant.
struct LossCurve {
  double H = 1.0;
  std::vector<double> breakpoints;  // strictly ascending, inside (0, H)
  std::vector<double> levels;       // one per piece: breakpoints.size() + 1

  // Right-continuous: at a breakpoint the right piece's level is returned.
  double eval(double sigma) const;
  // A point strictly inside piece i where the piece's equilibrium set is the
  // generic one: midpoint for the first piece, breakpoint plus a margin
  // (capped at half the width) for the rest.
  double representative(std::size_t piece) const;
  std::size_t piece_count() const { return levels.size(); }
};

// Exact curve from the game's critical values; each piece's level is a real
// equilibrium enumeration at the piece representative. Breakpoints that do
// not change the level are pruned.
LossCurve loss_curve(const MaintenanceGame& g);

// Shared representative convention for any breakpoint partition of [0, H].
double piece_representative(const std::vector<double>& breakpoints,
                            std::size_t piece, double H);

struct ErmUniformResult {
  double sigma = 0.0;
  double avg_loss = 0.0;
};

// Exact empirical risk minimization for the uniform-subsidy class: merge the
// samples' breakpoints, average the curves on every piece, return the least
// representative of the best piece.
ErmUniformResult erm_uniform(const std::vector<MaintenanceGame>& samples);
ErmUniformResult erm_uniform_curves(const std::vector<LossCurve>& curves);

enum class ErmObjective { kPrior, kPosterior };

struct ErmPerAgentResult {
  MaintenanceSubsidy scheme;
  double avg_loss = 0.0;
  std::string note;
};

// Lattice ERM over per-agent payment vectors (kPrior) or over conditional
// branch vectors for an inspected component (kPosterior; the branches
// decouple, so each is solved independently). Ties resolve to the
// lexicographically least vector.
ErmPerAgentResult erm_per_agent(const std::vector<MaintenanceGame>& samples,
                                ErmObjective objective = ErmObjective::kPrior,
                                int inspect = 0);

struct ErmCsgResult {
  CsgSubsidy scheme;
  double avg_loss = 0.0;
};

// Grid ERM over subsidy amounts on the chosen actions (at most 3), loss
// loss_voi_csg. Ties resolve to the lexicographically least vector; an empty
// action set returns the zero scheme and the baseline loss.
ErmCsgResult erm_csg(const std::vector<CostSharingGame>& samples,
                     const std::vector<int>& subsidized, bool hinge = true);

struct OnlineRound {
  double sigma = 0.0;
  double loss = 0.0;
  double cum_regret = 0.0;
};

struct OnlineResult {
  std::vector<OnlineRound> rounds;
  double regret = 0.0;  // final cumulative regret vs the hindsight best sigma
};

namespace detail {

// Sum segment tree with lazy range-multiply; supports weighted sampling by
// prefix descent without mutating lazies.
class MassTree {
 public:
  explicit MassTree(const std::vector<double>& leaf);
  void range_mul(std::size_t l, std::size_t r, double f);  // [l, r)
  double total() const;
  std::size_t sample(double u) const;      // u in [0, total)
  double leaf_value(std::size_t i) const;  // current mass of cell i
 private:
  void mul_node(std::size_t v, double f);
  void push(std::size_t v);
  std::size_t n_ = 1;
  std::vector<double> sum_, lazy_;
};

// Min segment tree with lazy range-add; root query gives the hindsight
// minimum of the accumulated piecewise-constant losses.
class MinAddTree {
 public:
  explicit MinAddTree(std::size_t cells);
  void range_add(std::size_t l, std::size_t r, double x);  // [l, r)
  double min_all() const;
 private:
  void add_node(std::size_t v, double x);
  void push(std::size_t v);
  std::size_t n_ = 1;
  std::vector<double> mn_, lazy_;
};

}  // namespace detail

// Exponential forecaster over sigma in [0, H] with full-information feedback:
// round t samples from the density proportional to exp(-lambda * cumulative
// loss), then the round's curve is revealed and accumulated. All T curves are
// taken up front so one global breakpoint partition can support exact
// closed-form piece masses.
class OnlineForecaster {
 public:
  OnlineForecaster(std::vector<LossCurve> curves, double lambda,
                   std::uint64_t seed);

  int rounds() const { return static_cast<int>(curves_.size()); }
  OnlineResult run();

  // Draw from the current density (after the rounds played so far); advances
  // only the RNG, not the round counter.
  double sample_sigma();
  // Current per-cell masses, normalized: from the tree, and recomputed
  // independently from the accumulated levels. The pair should agree; tests
  // cross-check them and the empirical sampling frequencies.
  std::vector<double> cell_masses();
  std::vector<double> analytic_cell_masses() const;
  const std::vector<double>& cell_edges() const { return edges_; }

  // sqrt(8 ln(T max(2, K)) / T) / ((2H+1) n) with K = n 2^{n-1}, the
  // per-round breakpoint bound.
  static double default_lambda(int T, int n, double H);

 private:
  void add_curve(const LossCurve& c);
  std::pair<std::size_t, std::size_t> cell_range(double lo, double hi) const;

  std::vector<LossCurve> curves_;
  double H_ = 1.0;
  double lambda_ = 1.0;
  std::vector<double> edges_;   // global partition: 0, every breakpoint, H
  std::vector<double> widths_;  // edges_.size() - 1 cells
  detail::MassTree mass_;
  detail::MinAddTree level_;
  std::vector<double> cum_level_;  // difference-encoded cumulative level per
                                   // cell, for the independent analytic
                                   // masses
  std::mt19937_64 rng_;
  int played_ = 0;
  double cum_played_ = 0.0;
};

// Exact sliding-window diagnostic: the largest number of distinct curves
// having at least one breakpoint inside some closed interval of width eps.
int dispersion_diagnostic(const std::vector<LossCurve>& curves, double eps);

// Generator spec for sampled games. Cost laws are density-bounded (uniform:
// 1/(hi-lo), triangular: 2/(hi-lo)) except kPoint, which is the degenerate
// worst case for dispersion.
struct GameDistribution {
  enum class Family { kSeries, kParallel, kSpRandom, kCnfRandom, kCsgRandom };
  enum class CostLaw { kUniform, kTriangular, kPoint };
  enum class PriorLaw { kUniform, kPoint };

  Family family = Family::kSeries;
  int n = 5;
  CostLaw cost_law = CostLaw::kUniform;
  double cost_lo = 0.0;
  double cost_hi = 1.0;
  double cost_mode = 0.5;  // triangular mode; the value for kPoint
  PriorLaw prior_law = PriorLaw::kUniform;
  double prior_lo = 0.1;
  double prior_hi = 0.9;
  double H = 1.0;
  int cnf_clauses = 0;  // kCnfRandom; 0 means n clauses
  int csg_actions = 4;  // kCsgRandom
  int csg_worlds = 2;

  double kappa() const;  // cost-density bound; infinity for kPoint
  void validate() const;
};

// Deterministic per-index sampling: game k of a seeded stream is the same no
// matter what order or thread asks for it.
MaintenanceGame sample_maintenance(const GameDistribution& dist,
                                   std::uint64_t seed, std::uint64_t index);
CostSharingGame sample_csg(const GameDistribution& dist, std::uint64_t seed,
                           std::uint64_t index);

// Upper bound (2H+1) n on every loss value a maintenance game can produce.
inline double loss_bound(int n, double H) { return (2.0 * H + 1.0) * n; }

}  // namespace subsidylab
