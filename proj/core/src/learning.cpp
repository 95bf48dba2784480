#include "subsidylab/learning.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <thread>

#include "subsidylab/equilibrium.hpp"
#include "subsidylab/rng.hpp"
#include "subsidylab/solvers.hpp"

namespace subsidylab {
namespace {

// Worst / mean equilibrium social cost under payments sigma, computed twice:
// as the agents' subsidized losses plus the designer's outlay, and directly
// as the unsubsidized total. The two must telescope to the same number.
double ne_unsub_total(const MaintenanceGame& g, const std::vector<double>& Phi,
                      const std::vector<double>& sigma, bool want_max) {
  const NashSet ne = enumerate_nash(g, Phi, sigma);
  if (ne.empty())
    throw UndefinedMetricError("loss undefined: empty equilibrium set");
  double agg = 0.0;
  bool first = true;
  for (std::uint64_t s : ne.states) {
    const std::vector<double> subsidized = cmg_agent_costs(g, Phi, s, sigma);
    double via_burden = 0.0;
    for (int i = 0; i < g.n; ++i) {
      via_burden += subsidized[static_cast<size_t>(i)];
      if (s & (std::uint64_t{1} << i))
        via_burden += sigma[static_cast<size_t>(i)];
    }
    const double direct = cmg_total_cost(g, Phi, s);
    internal_check(std::abs(via_burden - direct) <= 1e-9,
                   "subsidy accounting identity violated");
    if (want_max) {
      agg = first ? direct : std::max(agg, direct);
    } else {
      agg += direct;
    }
    first = false;
  }
  return want_max ? agg
                  : agg / static_cast<double>(ne.states.size());
}

double subsidized_total(const CostSharingGame& g, const std::vector<double>& ec,
                        const CsgProfile& profile, const CsgSubsidy& subsidy) {
  std::vector<char> used(g.actions.size(), 0);
  for (int a : profile) used[static_cast<size_t>(a)] = 1;
  double total = 0.0;
  for (size_t a = 0; a < used.size(); ++a)
    if (used[a]) total += ec[a] - subsidy.amount[a];
  return total;
}

double csg_worst_ne_subsidized(const CostSharingGame& g,
                               const CsgSubsidy& subsidy) {
  const CsgNashSet ne = csg_enumerate_nash(g, subsidy);
  if (ne.empty())
    throw UndefinedMetricError("loss undefined: empty equilibrium set");
  const std::vector<double> ec = csg_expected_costs(g);
  double worst = -std::numeric_limits<double>::infinity();
  for (const CsgProfile& prof : ne.profiles)
    worst = std::max(worst, subsidized_total(g, ec, prof, subsidy));
  return worst;
}

}  // namespace

double loss_prior(const MaintenanceGame& g, const MaintenanceSubsidy& scheme) {
  scheme.validate(g.n, g.H);
  return ne_unsub_total(g, reliability_table(g),
                        scheme.effective(g.n, std::nullopt), true);
}

double loss_prior_avg(const MaintenanceGame& g,
                      const MaintenanceSubsidy& scheme) {
  scheme.validate(g.n, g.H);
  return ne_unsub_total(g, reliability_table(g),
                        scheme.effective(g.n, std::nullopt), false);
}

double loss_posterior(const MaintenanceGame& g,
                      const MaintenanceSubsidy& scheme, int inspect) {
  scheme.validate(g.n, g.H);
  if (inspect < 0 || inspect >= g.n)
    throw SchemaError("inspected component out of range");
  const double p = g.p[static_cast<size_t>(inspect)];
  double out = 0.0;
  for (int y : {1, 0}) {
    const double w = y == 1 ? p : 1.0 - p;
    if (w <= 0.0) continue;
    const MaintenanceGame gy = posterior_game(g, {inspect, y});
    out += w * ne_unsub_total(gy, reliability_table(gy),
                              scheme.effective(g.n, y), true);
  }
  return out;
}

double loss_voi_csg(const CostSharingGame& g, const CsgSubsidy& subsidy,
                    bool hinge) {
  subsidy.validate(g);
  const double prior = csg_worst_ne_subsidized(g, subsidy);
  double post = 0.0;
  for (const CsgWorld& w : g.worlds) {
    if (w.prob <= 0.0) continue;
    const CostSharingGame point = make_cost_sharing_game(
        g.agents, g.actions, {CsgWorld{1.0, w.costs}}, g.H);
    post += w.prob * csg_worst_ne_subsidized(point, subsidy);
  }
  const double raw = post - prior;
  return hinge ? std::max(raw, 0.0) : raw;
}

double LossCurve::eval(double sigma) const {
  sigma = std::clamp(sigma, 0.0, H);
  const size_t idx = static_cast<size_t>(
      std::upper_bound(breakpoints.begin(), breakpoints.end(), sigma) -
      breakpoints.begin());
  return levels[idx];
}

double LossCurve::representative(std::size_t piece) const {
  return piece_representative(breakpoints, piece, H);
}

double piece_representative(const std::vector<double>& breakpoints,
                            std::size_t piece, double H) {
  const double left = piece == 0 ? 0.0 : breakpoints[piece - 1];
  const double right = piece == breakpoints.size() ? H : breakpoints[piece];
  if (piece == 0) return left + (right - left) / 2.0;
  // Just past the breakpoint, but never past the midpoint: merged partitions
  // can have pieces narrower than the margin.
  return left + std::min(kMarginScale * H, (right - left) / 2.0);
}

LossCurve loss_curve(const MaintenanceGame& g) {
  const std::vector<double> Phi = reliability_table(g);
  std::vector<double> bps;
  for (double b : critical_values(g, Phi).merged)
    if (b < g.H) bps.push_back(b);

  LossCurve curve;
  curve.H = g.H;
  std::vector<double> raw_levels;
  for (size_t piece = 0; piece <= bps.size(); ++piece) {
    const double rep = piece_representative(bps, piece, g.H);
    raw_levels.push_back(ne_unsub_total(
        g, Phi, std::vector<double>(static_cast<size_t>(g.n), rep), true));
  }
  // Drop breakpoints that do not move the level. Identical equilibrium sets
  // produce bitwise-identical maxima, so exact comparison prunes precisely
  // the no-ops.
  curve.levels.push_back(raw_levels[0]);
  for (size_t i = 0; i < bps.size(); ++i) {
    if (raw_levels[i + 1] == curve.levels.back()) continue;
    curve.breakpoints.push_back(bps[i]);
    curve.levels.push_back(raw_levels[i + 1]);
  }
  return curve;
}

namespace {

int env_thread_cap() {
  const char* env = std::getenv("SUBSIDYLAB_THREADS");
  if (env == nullptr) return 1;
  const int v = std::atoi(env);
  return std::clamp(v, 1, 64);
}

std::vector<LossCurve> build_curves(const std::vector<MaintenanceGame>& games) {
  std::vector<LossCurve> curves(games.size());
  const int threads =
      std::min<int>(env_thread_cap(), static_cast<int>(games.size()));
  if (threads <= 1) {
    for (size_t i = 0; i < games.size(); ++i) curves[i] = loss_curve(games[i]);
    return curves;
  }
  std::vector<std::thread> pool;
  std::atomic<size_t> next{0};
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&]() {
      for (size_t i = next.fetch_add(1); i < games.size();
           i = next.fetch_add(1))
        curves[i] = loss_curve(games[i]);
    });
  for (std::thread& th : pool) th.join();
  return curves;
}

void check_shared_h(const std::vector<double>& hs) {
  for (double h : hs)
    if (std::abs(h - hs[0]) > kTol)
      throw SchemaError("samples must share the subsidy budget H");
}

}  // namespace

ErmUniformResult erm_uniform(const std::vector<MaintenanceGame>& samples) {
  if (samples.empty()) throw SchemaError("need at least one sample");
  std::vector<double> hs;
  for (const MaintenanceGame& g : samples) hs.push_back(g.H);
  check_shared_h(hs);
  return erm_uniform_curves(build_curves(samples));
}

ErmUniformResult erm_uniform_curves(const std::vector<LossCurve>& curves) {
  if (curves.empty()) throw SchemaError("need at least one sample");
  std::vector<double> hs;
  for (const LossCurve& c : curves) hs.push_back(c.H);
  check_shared_h(hs);
  const double H = curves[0].H;

  std::vector<double> merged;
  for (const LossCurve& c : curves)
    merged.insert(merged.end(), c.breakpoints.begin(), c.breakpoints.end());
  std::sort(merged.begin(), merged.end());
  merged.erase(std::unique(merged.begin(), merged.end()), merged.end());

  ErmUniformResult best;
  bool first = true;
  for (size_t piece = 0; piece <= merged.size(); ++piece) {
    const double rep = piece_representative(merged, piece, H);
    double avg = 0.0;
    for (const LossCurve& c : curves) avg += c.eval(rep);
    avg /= static_cast<double>(curves.size());
    if (first || avg < best.avg_loss) {
      best.sigma = rep;
      best.avg_loss = avg;
      first = false;
    }
  }
  return best;
}

namespace {

// Ascending per-agent payment lattice for the cell search: zero, the bare
// margin (a critical value at exactly zero is unreachable by sigma > 0 but
// still dissolves for any positive payment), and each critical from above.
std::vector<double> erm_lattice(const std::vector<double>& crits, double H,
                                double margin) {
  std::vector<double> out{0.0, margin};
  for (double c : crits)
    if (c + margin <= H) out.push_back(c + margin);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(),
                        [](double a, double b) { return b - a <= kTol; }),
            out.end());
  return out;
}

// Exhaustive lexicographic odometer over per-agent lattices; strict
// improvement keeps the lexicographically least minimizer.
template <typename Eval>
std::pair<std::vector<double>, double> lattice_argmin(
    const std::vector<std::vector<double>>& lattice, const Eval& eval) {
  std::vector<size_t> pos(lattice.size(), 0);
  std::vector<double> v(lattice.size(), 0.0), best_v;
  double best = 0.0;
  bool first = true;
  while (true) {
    for (size_t i = 0; i < lattice.size(); ++i) v[i] = lattice[i][pos[i]];
    const double loss = eval(v);
    if (first || loss < best) {
      best = loss;
      best_v = v;
      first = false;
    }
    size_t k = lattice.size();
    while (k > 0) {
      --k;
      if (++pos[k] < lattice[k].size()) break;
      pos[k] = 0;
      if (k == 0) return {best_v, best};
    }
  }
}

}  // namespace

ErmPerAgentResult erm_per_agent(const std::vector<MaintenanceGame>& samples,
                                ErmObjective objective, int inspect) {
  if (samples.empty()) throw SchemaError("need at least one sample");
  const int n = samples[0].n;
  if (n > 8) throw SchemaError("per-agent search capped at 8 agents");
  std::vector<double> hs;
  for (const MaintenanceGame& g : samples) {
    if (g.n != n) throw SchemaError("samples must share the agent count");
    hs.push_back(g.H);
  }
  check_shared_h(hs);
  const double H = samples[0].H;
  const double margin = kMarginScale * H;
  const size_t N = samples.size();

  auto guard = [&](const std::vector<std::vector<double>>& lattice) {
    double combos = 1.0;
    for (const auto& l : lattice) combos *= static_cast<double>(l.size());
    if (combos * static_cast<double>(N) * std::ldexp(double(n), n) > 2e8)
      throw SchemaError("per-agent search space too large");
  };

  ErmPerAgentResult res;
  if (objective == ErmObjective::kPrior) {
    std::vector<std::vector<double>> crits(static_cast<size_t>(n));
    std::vector<std::vector<double>> tables;
    for (const MaintenanceGame& g : samples) {
      tables.push_back(reliability_table(g));
      const CriticalValueSet cv = critical_values(g, tables.back());
      for (int i = 0; i < n; ++i)
        crits[static_cast<size_t>(i)].insert(
            crits[static_cast<size_t>(i)].end(),
            cv.per_agent[static_cast<size_t>(i)].begin(),
            cv.per_agent[static_cast<size_t>(i)].end());
    }
    std::vector<std::vector<double>> lattice;
    for (int i = 0; i < n; ++i)
      lattice.push_back(erm_lattice(crits[static_cast<size_t>(i)], H, margin));
    guard(lattice);
    auto [vec, loss] =
        lattice_argmin(lattice, [&](const std::vector<double>& v) {
          double avg = 0.0;
          for (size_t s = 0; s < N; ++s)
            avg += ne_unsub_total(samples[s], tables[s], v, true);
          return avg / static_cast<double>(N);
        });
    res.scheme = MaintenanceSubsidy::per_agent_scheme(vec);
    res.avg_loss = loss;
    return res;
  }

  if (inspect < 0 || inspect >= n)
    throw SchemaError("inspected component out of range");
  // The two revelation branches decouple: each branch's loss term depends
  // only on that branch's payments, so the ERM splits into two independent
  // lattice searches over the posterior games.
  std::vector<std::vector<double>> branch_vec(2);
  double total = 0.0;
  for (int y : {1, 0}) {
    std::vector<MaintenanceGame> post;
    std::vector<std::vector<double>> tables;
    std::vector<double> weights;
    std::vector<std::vector<double>> crits(static_cast<size_t>(n));
    for (const MaintenanceGame& g : samples) {
      post.push_back(posterior_game(g, {inspect, y}));
      tables.push_back(reliability_table(post.back()));
      weights.push_back(y == 1 ? g.p[static_cast<size_t>(inspect)]
                               : 1.0 - g.p[static_cast<size_t>(inspect)]);
      const CriticalValueSet cv = critical_values(post.back(), tables.back());
      for (int i = 0; i < n; ++i)
        crits[static_cast<size_t>(i)].insert(
            crits[static_cast<size_t>(i)].end(),
            cv.per_agent[static_cast<size_t>(i)].begin(),
            cv.per_agent[static_cast<size_t>(i)].end());
    }
    std::vector<std::vector<double>> lattice;
    for (int i = 0; i < n; ++i)
      lattice.push_back(erm_lattice(crits[static_cast<size_t>(i)], H, margin));
    guard(lattice);
    auto [vec, term] =
        lattice_argmin(lattice, [&](const std::vector<double>& v) {
          double acc = 0.0;
          for (size_t s = 0; s < N; ++s) {
            if (weights[s] <= 0.0) continue;
            acc += weights[s] * ne_unsub_total(post[s], tables[s], v, true);
          }
          return acc / static_cast<double>(N);
        });
    branch_vec[static_cast<size_t>(y)] = vec;
    total += term;
  }
  res.scheme = MaintenanceSubsidy::conditional(
      std::vector<double>(static_cast<size_t>(n), 0.0), branch_vec[1],
      branch_vec[0]);
  res.avg_loss = total;
  res.note = "branch losses weighted by (p_j, 1 - p_j)";
  return res;
}

ErmCsgResult erm_csg(const std::vector<CostSharingGame>& samples,
                     const std::vector<int>& subsidized, bool hinge) {
  if (samples.empty()) throw SchemaError("need at least one sample");
  const CostSharingGame& g0 = samples[0];
  std::vector<double> hs;
  double profiles = 0.0;
  for (const CostSharingGame& g : samples) {
    if (g.actions.size() != g0.actions.size())
      throw SchemaError("samples must share the action set");
    for (size_t a = 0; a < g.actions.size(); ++a)
      if (g.actions[a].id != g0.actions[a].id)
        throw SchemaError("samples must share the action set");
    hs.push_back(g.H);
    profiles += static_cast<double>(csg_profile_count(g)) *
                static_cast<double>(g.worlds.size() + 1);
  }
  check_shared_h(hs);
  const double H = g0.H;

  if (subsidized.size() > 3)
    throw SchemaError("grid search capped at 3 subsidized actions");
  for (int a : subsidized)
    if (a < 0 || a >= static_cast<int>(g0.actions.size()))
      throw SchemaError("subsidized action out of range");
  for (size_t i = 1; i < subsidized.size(); ++i)
    for (size_t j = 0; j < i; ++j)
      if (subsidized[i] == subsidized[j])
        throw SchemaError("duplicate subsidized action");

  auto avg_loss = [&](const CsgSubsidy& s) {
    double acc = 0.0;
    for (const CostSharingGame& g : samples) acc += loss_voi_csg(g, s, hinge);
    return acc / static_cast<double>(samples.size());
  };

  ErmCsgResult res;
  res.scheme = CsgSubsidy::none(g0);
  if (subsidized.empty()) {
    res.avg_loss = avg_loss(res.scheme);
    return res;
  }

  const int points = 101;  // grid pitch H/100 per axis
  double combos = 1.0;
  for (size_t i = 0; i < subsidized.size(); ++i) combos *= points;
  if (combos * profiles > 5e7)
    throw SchemaError("grid search space too large");

  CsgSubsidy trial = CsgSubsidy::none(g0);
  std::vector<int> pos(subsidized.size(), 0);
  bool first = true;
  while (true) {
    for (size_t i = 0; i < subsidized.size(); ++i)
      trial.amount[static_cast<size_t>(subsidized[i])] =
          H * static_cast<double>(pos[i]) / (points - 1);
    const double loss = avg_loss(trial);
    if (first || loss < res.avg_loss) {
      res.scheme = trial;
      res.avg_loss = loss;
      first = false;
    }
    size_t k = subsidized.size();
    while (k > 0) {
      --k;
      if (++pos[k] < points) break;
      pos[k] = 0;
      if (k == 0) return res;
    }
  }
}

namespace detail {

namespace {
std::size_t pow2_at_least(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}
}  // namespace

MassTree::MassTree(const std::vector<double>& leaf)
    : n_(pow2_at_least(std::max<std::size_t>(leaf.size(), 1))) {
  sum_.assign(2 * n_, 0.0);
  lazy_.assign(2 * n_, 1.0);
  for (std::size_t i = 0; i < leaf.size(); ++i) sum_[n_ + i] = leaf[i];
  for (std::size_t v = n_ - 1; v >= 1; --v)
    sum_[v] = sum_[2 * v] + sum_[2 * v + 1];
}

void MassTree::mul_node(std::size_t v, double f) {
  sum_[v] *= f;
  lazy_[v] *= f;
}

void MassTree::push(std::size_t v) {
  if (lazy_[v] != 1.0) {
    mul_node(2 * v, lazy_[v]);
    mul_node(2 * v + 1, lazy_[v]);
    lazy_[v] = 1.0;
  }
}

void MassTree::range_mul(std::size_t l, std::size_t r, double f) {
  // Iterative recursion via explicit stack would obscure this; depth is
  // log2(n_) so plain recursion is fine.
  struct Rec {
    MassTree* t;
    std::size_t l, r;
    double f;
    void go(std::size_t v, std::size_t lo, std::size_t hi) {
      if (r <= lo || hi <= l) return;
      if (l <= lo && hi <= r) {
        t->mul_node(v, f);
        return;
      }
      t->push(v);
      const std::size_t mid = (lo + hi) / 2;
      go(2 * v, lo, mid);
      go(2 * v + 1, mid, hi);
      t->sum_[v] = t->sum_[2 * v] + t->sum_[2 * v + 1];
    }
  };
  if (l >= r) return;
  Rec{this, l, r, f}.go(1, 0, n_);
}

double MassTree::total() const { return sum_[1]; }

std::size_t MassTree::sample(double u) const {
  std::size_t v = 1;
  double acc = 1.0;
  while (v < n_) {
    acc *= lazy_[v];
    const double left = sum_[2 * v] * acc;
    if (u < left) {
      v = 2 * v;
    } else {
      u -= left;
      v = 2 * v + 1;
    }
  }
  return v - n_;
}

double MassTree::leaf_value(std::size_t i) const {
  std::size_t v = 1, lo = 0, hi = n_;
  double acc = 1.0;
  while (v < n_) {
    acc *= lazy_[v];
    const std::size_t mid = (lo + hi) / 2;
    if (i < mid) {
      v = 2 * v;
      hi = mid;
    } else {
      v = 2 * v + 1;
      lo = mid;
    }
  }
  return sum_[v] * acc;
}

MinAddTree::MinAddTree(std::size_t cells)
    : n_(pow2_at_least(std::max<std::size_t>(cells, 1))) {
  // Padding cells start at +infinity so they never win the min.
  mn_.assign(2 * n_, std::numeric_limits<double>::infinity());
  lazy_.assign(2 * n_, 0.0);
  for (std::size_t i = 0; i < cells; ++i) mn_[n_ + i] = 0.0;
  for (std::size_t v = n_ - 1; v >= 1; --v)
    mn_[v] = std::min(mn_[2 * v], mn_[2 * v + 1]);
}

void MinAddTree::add_node(std::size_t v, double x) {
  mn_[v] += x;
  lazy_[v] += x;
}

void MinAddTree::push(std::size_t v) {
  if (lazy_[v] != 0.0) {
    add_node(2 * v, lazy_[v]);
    add_node(2 * v + 1, lazy_[v]);
    lazy_[v] = 0.0;
  }
}

void MinAddTree::range_add(std::size_t l, std::size_t r, double x) {
  struct Rec {
    MinAddTree* t;
    std::size_t l, r;
    double x;
    void go(std::size_t v, std::size_t lo, std::size_t hi) {
      if (r <= lo || hi <= l) return;
      if (l <= lo && hi <= r) {
        t->add_node(v, x);
        return;
      }
      t->push(v);
      const std::size_t mid = (lo + hi) / 2;
      go(2 * v, lo, mid);
      go(2 * v + 1, mid, hi);
      t->mn_[v] = std::min(t->mn_[2 * v], t->mn_[2 * v + 1]);
    }
  };
  if (l >= r) return;
  Rec{this, l, r, x}.go(1, 0, n_);
}

double MinAddTree::min_all() const { return mn_[1]; }

}  // namespace detail

OnlineForecaster::OnlineForecaster(std::vector<LossCurve> curves,
                                   double lambda, std::uint64_t seed)
    : curves_(std::move(curves)),
      lambda_(lambda),
      mass_({1.0}),
      level_(1),
      rng_(substream(seed, "online-forecaster")) {
  if (curves_.empty()) throw SchemaError("online stream is empty");
  if (!(lambda_ > 0.0)) throw SchemaError("lambda must be positive");
  H_ = curves_[0].H;
  std::vector<double> hs;
  for (const LossCurve& c : curves_) hs.push_back(c.H);
  check_shared_h(hs);

  edges_.push_back(0.0);
  for (const LossCurve& c : curves_)
    for (double b : c.breakpoints)
      if (b > 0.0 && b < H_) edges_.push_back(b);
  edges_.push_back(H_);
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  for (size_t i = 0; i + 1 < edges_.size(); ++i)
    widths_.push_back(edges_[i + 1] - edges_[i]);

  mass_ = detail::MassTree(widths_);
  level_ = detail::MinAddTree(widths_.size());
  cum_level_.assign(widths_.size(), 0.0);
}

std::pair<std::size_t, std::size_t> OnlineForecaster::cell_range(
    double lo, double hi) const {
  const auto l = std::lower_bound(edges_.begin(), edges_.end(), lo);
  const auto r = std::lower_bound(edges_.begin(), edges_.end(), hi);
  return {static_cast<std::size_t>(l - edges_.begin()),
          static_cast<std::size_t>(r - edges_.begin())};
}

void OnlineForecaster::add_curve(const LossCurve& c) {
  double prev = 0.0;
  for (size_t piece = 0; piece <= c.breakpoints.size(); ++piece) {
    const double next =
        piece == c.breakpoints.size()
            ? H_
            : std::clamp(c.breakpoints[piece], 0.0, H_);
    if (next > prev) {
      const auto [l, r] = cell_range(prev, next);
      const double lvl = c.levels[piece];
      mass_.range_mul(l, r, std::exp(-lambda_ * lvl));
      level_.range_add(l, r, lvl);
      // Difference-encoded so a round costs O(pieces), not O(cells); the
      // analytic crosscheck prefix-sums it on demand.
      cum_level_[l] += lvl;
      if (r < cum_level_.size()) cum_level_[r] -= lvl;
    }
    prev = next;
  }
  // Renormalize so the masses never drift toward zero across thousands of
  // rounds; only ratios matter for sampling.
  const double total = mass_.total();
  internal_check(total > 0.0, "forecaster mass underflow");
  mass_.range_mul(0, widths_.size(), 1.0 / total);
}

double OnlineForecaster::sample_sigma() {
  const double u = uniform01(rng_) * mass_.total();
  std::size_t cell = mass_.sample(u);
  if (cell >= widths_.size()) cell = widths_.size() - 1;
  return edges_[cell] + uniform01(rng_) * widths_[cell];
}

OnlineResult OnlineForecaster::run() {
  OnlineResult out;
  for (const LossCurve& c : curves_) {
    OnlineRound round;
    round.sigma = sample_sigma();
    round.loss = c.eval(round.sigma);
    cum_played_ += round.loss;
    add_curve(c);
    ++played_;
    round.cum_regret = cum_played_ - level_.min_all();
    out.rounds.push_back(round);
  }
  out.regret = out.rounds.back().cum_regret;
  return out;
}

std::vector<double> OnlineForecaster::cell_masses() {
  std::vector<double> out(widths_.size(), 0.0);
  const double total = mass_.total();
  for (size_t i = 0; i < out.size(); ++i)
    out[i] = mass_.leaf_value(i) / total;
  return out;
}

std::vector<double> OnlineForecaster::analytic_cell_masses() const {
  // Independent of the trees: exact per-cell cumulative levels, normalized
  // in log space so heavy losers underflow to zero instead of poisoning the
  // sum.
  std::vector<double> logm(widths_.size());
  double peak = -std::numeric_limits<double>::infinity();
  double cum = 0.0;
  for (size_t i = 0; i < widths_.size(); ++i) {
    cum += cum_level_[i];
    logm[i] = std::log(widths_[i]) - lambda_ * cum;
    peak = std::max(peak, logm[i]);
  }
  std::vector<double> mass(widths_.size());
  double total = 0.0;
  for (size_t i = 0; i < widths_.size(); ++i) {
    mass[i] = std::exp(logm[i] - peak);
    total += mass[i];
  }
  for (double& m : mass) m /= total;
  return mass;
}

double OnlineForecaster::default_lambda(int T, int n, double H) {
  if (T < 1 || n < 1 || !(H > 0.0))
    throw SchemaError("lambda tuning needs T >= 1, n >= 1, H > 0");
  const double K = std::ldexp(static_cast<double>(n), n - 1);
  return std::sqrt(8.0 * std::log(static_cast<double>(T) * std::max(2.0, K)) /
                   static_cast<double>(T)) /
         ((2.0 * H + 1.0) * static_cast<double>(n));
}

int dispersion_diagnostic(const std::vector<LossCurve>& curves, double eps) {
  if (curves.empty()) return 0;
  std::vector<double> hs;
  for (const LossCurve& c : curves) hs.push_back(c.H);
  check_shared_h(hs);
  if (!(eps > 0.0) || eps > curves[0].H + kTol)
    throw SchemaError("dispersion window must lie in (0, H]");

  std::vector<std::pair<double, int>> ev;
  for (size_t c = 0; c < curves.size(); ++c)
    for (double b : curves[c].breakpoints)
      ev.emplace_back(b, static_cast<int>(c));
  std::sort(ev.begin(), ev.end());
  if (ev.empty()) return 0;

  // Any window can slide right until its left edge meets an event without
  // losing events, so checking windows anchored at each distinct breakpoint
  // is exact.
  std::vector<int> count(curves.size(), 0);
  int distinct = 0, best = 0;
  size_t l = 0, r = 0;
  for (size_t s = 0; s < ev.size(); ++s) {
    if (s > 0 && ev[s].first == ev[s - 1].first) continue;
    const double start = ev[s].first;
    while (ev[l].first < start) {
      if (--count[static_cast<size_t>(ev[l].second)] == 0) --distinct;
      ++l;
    }
    while (r < ev.size() && ev[r].first <= start + eps) {
      if (++count[static_cast<size_t>(ev[r].second)] == 1) ++distinct;
      ++r;
    }
    best = std::max(best, distinct);
  }
  return best;
}

double GameDistribution::kappa() const {
  switch (cost_law) {
    case CostLaw::kUniform:
      return cost_hi > cost_lo
                 ? 1.0 / (cost_hi - cost_lo)
                 : std::numeric_limits<double>::infinity();
    case CostLaw::kTriangular:
      return cost_hi > cost_lo
                 ? 2.0 / (cost_hi - cost_lo)
                 : std::numeric_limits<double>::infinity();
    case CostLaw::kPoint:
      return std::numeric_limits<double>::infinity();
  }
  return std::numeric_limits<double>::infinity();
}

void GameDistribution::validate() const {
  if (n < 1 || n > kEnumerationCapN)
    throw SchemaError("distribution agent count out of range");
  if (!(H > 0.0)) throw SchemaError("distribution H must be positive");
  if (cost_lo > cost_hi) throw SchemaError("cost law needs lo <= hi");
  if (cost_law == CostLaw::kTriangular &&
      (cost_mode < cost_lo || cost_mode > cost_hi))
    throw SchemaError("triangular mode must lie in [lo, hi]");
  if (prior_lo > prior_hi || prior_lo < 0.0 || prior_hi > 1.0)
    throw SchemaError("prior law needs 0 <= lo <= hi <= 1");
  if (cnf_clauses < 0) throw SchemaError("clause count must be nonnegative");
  if (csg_actions < 1 || csg_worlds < 1)
    throw SchemaError("cost-sharing shape must be positive");
}

namespace {

double draw_cost(const GameDistribution& d, std::mt19937_64& gen) {
  switch (d.cost_law) {
    case GameDistribution::CostLaw::kUniform:
      return uniform_real(gen, d.cost_lo, d.cost_hi);
    case GameDistribution::CostLaw::kTriangular:
      if (d.cost_hi <= d.cost_lo) return d.cost_lo;  // degenerate support
      return triangular(gen, d.cost_lo, d.cost_mode, d.cost_hi);
    case GameDistribution::CostLaw::kPoint:
      return d.cost_mode;
  }
  return d.cost_mode;
}

double draw_prior(const GameDistribution& d, std::mt19937_64& gen) {
  if (d.prior_law == GameDistribution::PriorLaw::kPoint) return d.prior_lo;
  return uniform_real(gen, d.prior_lo, d.prior_hi);
}

SpNode random_sp(const std::vector<int>& comps, std::mt19937_64& gen) {
  if (comps.size() == 1) return SpNode::leaf(comps[0]);
  const size_t split = static_cast<size_t>(
      uniform_int(gen, 1, static_cast<std::int64_t>(comps.size()) - 1));
  std::vector<int> left(comps.begin(), comps.begin() + split);
  std::vector<int> right(comps.begin() + split, comps.end());
  std::vector<SpNode> children{random_sp(left, gen), random_sp(right, gen)};
  return uniform_int(gen, 0, 1) == 0 ? SpNode::series(std::move(children))
                                     : SpNode::parallel(std::move(children));
}

}  // namespace

MaintenanceGame sample_maintenance(const GameDistribution& dist,
                                   std::uint64_t seed, std::uint64_t index) {
  dist.validate();
  if (dist.family == GameDistribution::Family::kCsgRandom)
    throw SchemaError("cost-sharing family cannot produce maintenance games");
  std::mt19937_64 gen = substream(seed, "game-" + std::to_string(index));

  // Draw order is part of the determinism contract: costs, then priors,
  // then structure.
  std::vector<double> costs, p;
  for (int i = 0; i < dist.n; ++i) costs.push_back(draw_cost(dist, gen));
  for (int i = 0; i < dist.n; ++i) p.push_back(draw_prior(dist, gen));

  SystemFunction phi;
  switch (dist.family) {
    case GameDistribution::Family::kSeries: {
      std::vector<std::vector<int>> clauses;
      for (int i = 1; i <= dist.n; ++i) clauses.push_back({i});
      phi = SystemFunction::from_cnf(dist.n, clauses);
      break;
    }
    case GameDistribution::Family::kParallel: {
      std::vector<int> clause;
      for (int i = 1; i <= dist.n; ++i) clause.push_back(i);
      phi = SystemFunction::from_cnf(dist.n, {clause});
      break;
    }
    case GameDistribution::Family::kSpRandom: {
      std::vector<int> comps;
      for (int i = 1; i <= dist.n; ++i) comps.push_back(i);
      for (size_t i = comps.size(); i > 1; --i)
        std::swap(comps[i - 1],
                  comps[static_cast<size_t>(
                      uniform_int(gen, 0, static_cast<std::int64_t>(i) - 1))]);
      phi = SystemFunction::from_sp(dist.n, random_sp(comps, gen));
      break;
    }
    case GameDistribution::Family::kCnfRandom: {
      const int m = dist.cnf_clauses > 0 ? dist.cnf_clauses : dist.n;
      std::vector<std::vector<int>> clauses;
      for (int c = 0; c < m; ++c) {
        std::vector<int> clause;
        while (clause.empty())
          for (int i = 1; i <= dist.n; ++i)
            if (uniform_int(gen, 0, 1) == 0) clause.push_back(i);
        clauses.push_back(clause);
      }
      phi = SystemFunction::from_cnf(dist.n, clauses);
      break;
    }
    case GameDistribution::Family::kCsgRandom:
      break;  // unreachable, rejected above
  }
  return make_maintenance_game(costs, p, phi, dist.H);
}

CostSharingGame sample_csg(const GameDistribution& dist, std::uint64_t seed,
                           std::uint64_t index) {
  dist.validate();
  if (dist.family != GameDistribution::Family::kCsgRandom)
    throw SchemaError("maintenance families cannot produce cost-sharing "
                      "games");
  std::mt19937_64 gen = substream(seed, "game-" + std::to_string(index));

  const int agents = dist.n;
  const int m = dist.csg_actions;
  std::vector<std::vector<char>> avail(
      static_cast<size_t>(m), std::vector<char>(static_cast<size_t>(agents)));
  for (int a = 0; a < m; ++a) {
    bool any = false;
    for (int i = 0; i < agents; ++i) {
      avail[static_cast<size_t>(a)][static_cast<size_t>(i)] =
          uniform_int(gen, 0, 1) == 0;
      any = any || avail[static_cast<size_t>(a)][static_cast<size_t>(i)];
    }
    if (!any)
      avail[static_cast<size_t>(a)]
           [static_cast<size_t>(uniform_int(gen, 0, agents - 1))] = 1;
  }
  for (int i = 0; i < agents; ++i) {
    bool covered = false;
    for (int a = 0; a < m; ++a)
      covered = covered || avail[static_cast<size_t>(a)][static_cast<size_t>(i)];
    if (!covered)
      avail[static_cast<size_t>(uniform_int(gen, 0, m - 1))]
           [static_cast<size_t>(i)] = 1;
  }

  std::vector<CsgAction> actions;
  for (int a = 0; a < m; ++a) {
    CsgAction act;
    act.id = "a" + std::to_string(a + 1);
    for (int i = 0; i < agents; ++i)
      if (avail[static_cast<size_t>(a)][static_cast<size_t>(i)])
        act.avail.push_back(i);
    actions.push_back(std::move(act));
  }

  std::vector<CsgWorld> worlds;
  for (int w = 0; w < dist.csg_worlds; ++w) {
    CsgWorld world;
    world.prob = 1.0 / static_cast<double>(dist.csg_worlds);
    for (int a = 0; a < m; ++a) world.costs.push_back(draw_cost(dist, gen));
    worlds.push_back(std::move(world));
  }
  return make_cost_sharing_game(agents, actions, worlds, dist.H);
}

}  // namespace subsidylab
