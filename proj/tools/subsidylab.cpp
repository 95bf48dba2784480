// subsidylab: analyze / solve / learn-offline / learn-online / reduce /
// verify for maintenance and cost-sharing subsidy design. File-based I/O,
// deterministic given identical inputs and seed.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "subsidylab/equilibrium.hpp"
#include "subsidylab/fixtures.hpp"
#include "subsidylab/io.hpp"
#include "subsidylab/learning.hpp"
#include "subsidylab/metrics.hpp"
#include "subsidylab/reductions.hpp"
#include "subsidylab/solvers.hpp"
#include "subsidylab/system_function.hpp"

namespace sl = subsidylab;
using nlohmann::ordered_json;

namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void emit(const ordered_json& j, const std::string& out_path) {
  const std::string text = sl::canonical_dump(j);
  if (out_path.empty())
    std::cout << text;
  else
    sl::write_text_file(out_path, text);
}

// One record per line, for appendable logs.
std::string json_line(const ordered_json& j) {
  std::string text = sl::canonical_dump(j, 0);
  std::string out;
  out.reserve(text.size());
  bool after_newline = false;
  for (char c : text) {
    if (c == '\n') {
      after_newline = true;
      continue;
    }
    if (after_newline && c == ' ') continue;
    after_newline = false;
    out += c;
  }
  out += '\n';
  return out;
}

ordered_json scheme_to_json(const sl::MaintenanceSubsidy& s) {
  ordered_json j;
  switch (s.mode) {
    case sl::MaintenanceSubsidy::Mode::kUniform:
      j["type"] = "uniform";
      j["sigma"] = s.sigma;
      break;
    case sl::MaintenanceSubsidy::Mode::kPerAgent:
      j["type"] = "per_agent";
      j["sigma"] = s.per_agent;
      break;
    case sl::MaintenanceSubsidy::Mode::kConditional:
      j["type"] = "conditional";
      j["prior"] = s.prior;
      j["on_y1"] = s.on_y1;
      j["on_y0"] = s.on_y0;
      break;
  }
  return j;
}

ordered_json subsidy_to_json(const sl::CsgSubsidy& s,
                             const sl::CostSharingGame& g) {
  ordered_json amounts;
  for (std::size_t a = 0; a < g.actions.size(); ++a)
    if (s.amount[a] != 0.0) amounts[g.actions[a].id] = s.amount[a];
  ordered_json j;
  j["type"] = "csg";
  j["amounts"] = std::move(amounts);
  return j;
}

ordered_json profile_to_json(const sl::CsgProfile& profile,
                             const sl::CostSharingGame& g) {
  ordered_json arr = ordered_json::array();
  for (int a : profile) arr.push_back(g.actions[a].id);
  return arr;
}

ordered_json voi_to_json(const sl::VoiReport& rep) {
  ordered_json j;
  j["inspected"] = rep.inspected + 1;
  j["branch_value"] = rep.branch_value;
  j["branch_weight"] = rep.branch_weight;
  j["worst_voi"] = rep.worst;
  j["expected_voi"] = rep.expected;
  j["worst_branch"] = rep.worst_branch;
  j["worst_prior_state"] = rep.worst_prior_state;
  j["worst_post_state"] = rep.worst_post_state;
  return j;
}

ordered_json csg_voi_to_json(const sl::CsgVoiReport& rep,
                             const sl::CostSharingGame& g) {
  ordered_json j;
  j["inspected"] = g.actions[rep.inspected].id;
  j["branch_value"] = rep.branch_value;
  j["branch_weight"] = rep.branch_weight;
  j["worst_voi"] = rep.worst;
  j["expected_voi"] = rep.expected;
  j["worst_branch"] = rep.worst_branch;
  ordered_json priors = ordered_json::array();
  ordered_json posts = ordered_json::array();
  for (std::size_t i = 0; i < rep.worst_prior_profile.size(); ++i) {
    priors.push_back(profile_to_json(rep.worst_prior_profile[i], g));
    posts.push_back(profile_to_json(rep.worst_post_profile[i], g));
  }
  j["worst_prior_profile"] = std::move(priors);
  j["worst_post_profile"] = std::move(posts);
  return j;
}

sl::VoiMode parse_voi_mode(const std::string& s) {
  if (s == "pessimistic") return sl::VoiMode::kPessimistic;
  if (s == "global") return sl::VoiMode::kGlobal;
  throw sl::SchemaError("voi mode must be pessimistic or global");
}

// ---------------------------------------------------------------------------
// analyze
// ---------------------------------------------------------------------------

struct AnalyzeArgs {
  std::string game_path;
  std::string scheme_path;
  std::string out_path;
  int inspect = 0;  // 1-based; 0 = none
  std::string voi_mode = "pessimistic";
  double tol = sl::kTol;
  int cap_n = sl::kEnumerationCapN;
};

int run_analyze(const AnalyzeArgs& args) {
  const sl::LoadedGame loaded = sl::load_game(args.game_path);
  ordered_json report;
  if (loaded.type == sl::LoadedGame::Type::kMaintenance) {
    const sl::MaintenanceGame& g = loaded.cmg;
    sl::MaintenanceSubsidy scheme =
        args.scheme_path.empty()
            ? sl::MaintenanceSubsidy::none()
            : sl::load_maintenance_scheme(args.scheme_path, g);
    const std::vector<double> Phi = sl::reliability_table(g, args.cap_n);
    const std::vector<double> sigma = scheme.effective(g.n, std::nullopt);
    const sl::NashSet ne = sl::enumerate_nash(g, Phi, sigma, args.tol);
    report["type"] = "maintenance";
    report["n"] = g.n;
    report["H"] = g.H;
    report["scheme"] = scheme_to_json(scheme);
    report["nash"] = ne.states;
    const auto [opt, opt_state] = sl::opt_cost(g, Phi);
    report["opt"] = opt;
    report["opt_state"] = opt_state;
    report["poa"] = sl::poa(g, scheme);
    report["poa_tilde"] = sl::poa_tilde(g, scheme);
    report["poa_is_one"] = sl::poa_is_one(g, Phi, sigma, args.tol);
    report["system_in_all_ne"] =
        sl::system_functions_in_all_ne(g, Phi, sigma, args.tol);
    if (args.inspect > 0) {
      if (args.inspect > g.n)
        throw sl::SchemaError("inspected component out of range");
      report["voi"] = voi_to_json(sl::voi_report(
          g, scheme, args.inspect - 1, parse_voi_mode(args.voi_mode)));
    }
  } else {
    const sl::CostSharingGame& g = loaded.csg;
    sl::CsgSubsidy subsidy = args.scheme_path.empty()
                                 ? sl::CsgSubsidy::none(g)
                                 : sl::load_csg_scheme(args.scheme_path, g);
    const sl::CsgNashSet ne = sl::csg_enumerate_nash(g, subsidy, args.tol);
    report["type"] = "cost_sharing";
    report["agents"] = g.agents;
    report["H"] = g.H;
    report["scheme"] = subsidy_to_json(subsidy, g);
    ordered_json profiles = ordered_json::array();
    for (const auto& profile : ne.profiles)
      profiles.push_back(profile_to_json(profile, g));
    report["nash"] = std::move(profiles);
    const auto [opt, opt_profile] = sl::csg_opt_cost(g);
    report["opt"] = opt;
    report["opt_profile"] = profile_to_json(opt_profile, g);
    report["poa"] = sl::csg_poa(g, subsidy);
    report["poa_tilde"] = sl::csg_poa_tilde(g, subsidy);
    if (args.inspect > 0) {
      if (args.inspect > static_cast<int>(g.actions.size()))
        throw sl::SchemaError("inspected action out of range");
      report["voi"] = csg_voi_to_json(
          sl::csg_voi_report(g, subsidy, args.inspect - 1,
                             parse_voi_mode(args.voi_mode)),
          g);
    }
  }
  emit(report, args.out_path);
  return 0;
}

// ---------------------------------------------------------------------------
// solve
// ---------------------------------------------------------------------------

struct SolveArgs {
  std::string game_path;
  std::string out_path;
  std::string objective = "poa1";
  std::string mode = "uniform";
  double budget = -1.0;
  double margin = -1.0;
  double h_cap = -1.0;
  int n_star = -1;
  int inspect = 0;  // 1-based
};

sl::SolveObjective build_objective(const SolveArgs& args, int n) {
  if (args.objective == "poa1") return sl::SolveObjective::poa_one();
  if (args.objective == "system") return sl::SolveObjective::system();
  if (args.objective == "voi") {
    if (args.inspect < 1 || args.inspect > n)
      throw sl::SchemaError(
          "objective voi needs --inspect with a valid component");
    return sl::SolveObjective::voi(args.inspect - 1);
  }
  throw sl::SchemaError("objective must be poa1, system or voi");
}

ordered_json objective_report(const sl::MaintenanceGame& g,
                              const sl::MaintenanceSubsidy& witness,
                              const sl::SolveObjective& obj) {
  ordered_json j;
  switch (obj.kind) {
    case sl::SolveObjective::Kind::kPoaOne: {
      j["poa_is_one"] = sl::poa_is_one(g, witness);
      try {
        j["poa"] = sl::poa(g, witness);
      } catch (const sl::UndefinedMetricError&) {
        j["poa"] = nullptr;  // zero-optimum games have no ratio form
      }
      break;
    }
    case sl::SolveObjective::Kind::kSystem:
      j["system_in_all_ne"] = sl::system_functions_in_all_ne(g, witness);
      break;
    case sl::SolveObjective::Kind::kVoi: {
      const sl::VoiReport rep = sl::voi_report(g, witness, obj.j);
      j["worst_voi"] = rep.worst;
      j["expected_voi"] = rep.expected;
      break;
    }
  }
  return j;
}

int run_solve(const SolveArgs& args) {
  const sl::LoadedGame loaded = sl::load_game(args.game_path);
  ordered_json report;
  if (loaded.type == sl::LoadedGame::Type::kCostSharing) {
    const sl::CostSharingGame& g = loaded.csg;
    if (args.objective != "poa1")
      throw sl::SchemaError(
          "cost-sharing games support --objective poa1 only");
    const int n_star = args.n_star >= 0 ? args.n_star
                                        : static_cast<int>(g.actions.size());
    const double h_cap = args.h_cap > 0 ? args.h_cap : g.H;
    const sl::CsgPoa1Result res = sl::csg_poa1_decision(g, n_star, h_cap);
    report["objective"] = "poa1";
    report["feasible"] = res.yes;
    if (res.yes) {
      ordered_json family = ordered_json::array();
      const std::vector<double> ec = sl::csg_expected_costs(g);
      sl::CsgSubsidy sub = sl::CsgSubsidy::none(g);
      for (int a : res.actions) {
        family.push_back(g.actions[a].id);
        sub.amount[a] = ec[a];
      }
      report["family"] = std::move(family);
      report["scheme"] = subsidy_to_json(sub, g);
      report["objective_report"] = {{"poa_is_one", true}};
    }
    emit(report, args.out_path);
    return 0;
  }

  const sl::MaintenanceGame& g = loaded.cmg;
  const sl::SolveObjective obj = build_objective(args, g.n);
  report["objective"] = args.objective;
  report["mode"] = args.mode;
  if (args.mode == "uniform") {
    const sl::OptimalUniformResult res =
        sl::optimal_uniform_subsidy(g, obj, args.margin);
    report["feasible"] = res.feasible;
    report["note"] = res.note;
    if (res.feasible) {
      report["sigma"] = res.sigma;
      if (obj.kind == sl::SolveObjective::Kind::kVoi) {
        report["branch"] = res.branch;
        report["agent"] = res.agent + 1;
      }
      report["scheme"] = scheme_to_json(res.scheme);
      report["objective_report"] = objective_report(g, res.scheme, obj);
    }
  } else if (args.mode == "per-agent" &&
             obj.kind == sl::SolveObjective::Kind::kPoaOne) {
    const int n_star = args.n_star >= 0 ? args.n_star : g.n;
    const sl::MinAgentsResult res = sl::min_agents_poa1(g, n_star, args.margin);
    report["feasible"] = res.yes;
    report["n_star"] = n_star;
    report["hbound_hit"] = res.hbound_hit;
    if (res.yes) {
      report["scheme"] = scheme_to_json(res.witness);
      report["objective_report"] = objective_report(g, res.witness, obj);
    }
  } else if ((args.mode == "per-agent" &&
              obj.kind == sl::SolveObjective::Kind::kSystem) ||
             (args.mode == "conditional" &&
              obj.kind == sl::SolveObjective::Kind::kVoi)) {
    if (args.budget < 0)
      throw sl::SchemaError("this objective/mode needs --budget");
    const sl::MinBudgetResult res =
        sl::min_budget_decision(g, obj, args.budget, args.margin);
    report["feasible"] = res.yes;
    report["budget"] = args.budget;
    report["budget_per_branch"] = res.budget_per_branch;
    report["hbound_hit"] = res.hbound_hit;
    if (res.yes) {
      report["spent"] = res.spent;
      report["scheme"] = scheme_to_json(res.witness);
      report["objective_report"] = objective_report(g, res.witness, obj);
    }
  } else {
    throw sl::SchemaError(
        "unsupported objective/mode pair (uniform takes any objective, "
        "per-agent takes poa1 or system, conditional takes voi)");
  }
  emit(report, args.out_path);
  return 0;
}

// ---------------------------------------------------------------------------
// learn-offline
// ---------------------------------------------------------------------------

struct LearnOfflineArgs {
  std::string dist_path;
  std::string out_path;
  std::string mode = "uniform";
  std::string objective = "prior";
  std::string format = "json";
  std::string subsidize;  // comma-separated action ids (csg mode)
  std::uint64_t seed = 0;
  int train = 0;
  int test = 0;
  int inspect = 1;  // 1-based
  bool raw_loss = false;
};

std::vector<std::string> split_ids(const std::string& csv) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(csv);
  while (std::getline(in, cur, ','))
    if (!cur.empty()) out.push_back(cur);
  return out;
}

void emit_offline(const ordered_json& report, const LearnOfflineArgs& args) {
  if (args.format == "json") {
    emit(report, args.out_path);
    return;
  }
  std::string header, row;
  bool first = true;
  for (const auto& [key, value] : report.items()) {
    if (value.is_object() || value.is_array()) continue;
    if (!first) {
      header += ",";
      row += ",";
    }
    first = false;
    header += key;
    if (value.is_null())
      row += "";
    else if (value.is_string())
      row += value.get<std::string>();
    else if (value.is_number_float())
      row += format_double(value.get<double>());
    else
      row += value.dump();
  }
  const std::string text = header + "\n" + row + "\n";
  if (args.out_path.empty())
    std::cout << text;
  else
    sl::write_text_file(args.out_path, text);
}

int run_learn_offline(const LearnOfflineArgs& args) {
  if (args.format != "json" && args.format != "csv")
    throw sl::SchemaError("format must be json or csv");
  const sl::GameDistribution dist = sl::load_distribution(args.dist_path);
  if (args.train < 1) throw sl::SchemaError("--train must be at least 1");
  ordered_json report;
  report["mode"] = args.mode;
  report["train"] = args.train;
  report["test"] = args.test;
  report["seed"] = args.seed;

  if (args.mode == "csg") {
    std::vector<sl::CostSharingGame> train, test;
    for (int i = 0; i < args.train; ++i)
      train.push_back(sl::sample_csg(dist, args.seed, i));
    for (int i = 0; i < args.test; ++i)
      test.push_back(sl::sample_csg(dist, args.seed, args.train + i));
    std::vector<int> subsidized;
    for (const std::string& id : split_ids(args.subsidize)) {
      bool found = false;
      for (std::size_t a = 0; a < train.front().actions.size(); ++a)
        if (train.front().actions[a].id == id) {
          subsidized.push_back(static_cast<int>(a));
          found = true;
          break;
        }
      if (!found) throw sl::SchemaError("unknown action id \"" + id + "\"");
    }
    const bool hinge = !args.raw_loss;
    const sl::ErmCsgResult res = sl::erm_csg(train, subsidized, hinge);
    report["scheme"] = subsidy_to_json(res.scheme, train.front());
    report["train_loss"] = res.avg_loss;
    if (!test.empty()) {
      double mean = 0.0;
      for (const auto& g : test) mean += sl::loss_voi_csg(g, res.scheme, hinge);
      mean /= static_cast<double>(test.size());
      report["test_loss"] = mean;
      const double opt = sl::erm_csg(test, subsidized, hinge).avg_loss;
      report["test_opt_loss"] = opt;
      report["excess"] = mean - opt;
    }
    emit_offline(report, args);
    return 0;
  }

  std::vector<sl::MaintenanceGame> train, test;
  for (int i = 0; i < args.train; ++i)
    train.push_back(sl::sample_maintenance(dist, args.seed, i));
  for (int i = 0; i < args.test; ++i)
    test.push_back(sl::sample_maintenance(dist, args.seed, args.train + i));

  if (args.mode == "uniform") {
    const sl::ErmUniformResult res = sl::erm_uniform(train);
    report["sigma"] = res.sigma;
    report["train_loss"] = res.avg_loss;
    if (!test.empty()) {
      const sl::MaintenanceSubsidy scheme =
          sl::MaintenanceSubsidy::uniform(res.sigma);
      double mean = 0.0;
      for (const auto& g : test) mean += sl::loss_prior(g, scheme);
      mean /= static_cast<double>(test.size());
      report["test_loss"] = mean;
      const double opt = sl::erm_uniform(test).avg_loss;
      report["test_opt_loss"] = opt;
      report["excess"] = mean - opt;
    }
  } else if (args.mode == "per-agent") {
    sl::ErmObjective obj = sl::ErmObjective::kPrior;
    if (args.objective == "posterior")
      obj = sl::ErmObjective::kPosterior;
    else if (args.objective != "prior")
      throw sl::SchemaError("objective must be prior or posterior");
    const int inspect = args.inspect - 1;
    if (inspect < 0 || inspect >= dist.n)
      throw sl::SchemaError("inspected component out of range");
    const sl::ErmPerAgentResult res = sl::erm_per_agent(train, obj, inspect);
    report["scheme"] = scheme_to_json(res.scheme);
    report["train_loss"] = res.avg_loss;
    report["note"] = res.note;
    if (!test.empty()) {
      double mean = 0.0;
      for (const auto& g : test)
        mean += obj == sl::ErmObjective::kPrior
                    ? sl::loss_prior(g, res.scheme)
                    : sl::loss_posterior(g, res.scheme, inspect);
      mean /= static_cast<double>(test.size());
      report["test_loss"] = mean;
      const double opt = sl::erm_per_agent(test, obj, inspect).avg_loss;
      report["test_opt_loss"] = opt;
      report["excess"] = mean - opt;
    }
  } else {
    throw sl::SchemaError("mode must be uniform, per-agent or csg");
  }
  emit_offline(report, args);
  return 0;
}

// ---------------------------------------------------------------------------
// learn-online
// ---------------------------------------------------------------------------

struct LearnOnlineArgs {
  std::string dist_path;
  std::string out_path;      // JSONL records
  std::string summary_path;  // CSV summary
  std::uint64_t seed = 0;
  int rounds = 0;
  double lambda = -1.0;
};

int run_learn_online(const LearnOnlineArgs& args) {
  const sl::GameDistribution dist = sl::load_distribution(args.dist_path);
  if (args.rounds < 1) throw sl::SchemaError("-T must be at least 1");
  std::vector<sl::LossCurve> curves;
  curves.reserve(args.rounds);
  for (int i = 0; i < args.rounds; ++i)
    curves.push_back(sl::loss_curve(sl::sample_maintenance(dist, args.seed, i)));
  const double lambda =
      args.lambda > 0
          ? args.lambda
          : sl::OnlineForecaster::default_lambda(args.rounds, dist.n, dist.H);
  sl::OnlineForecaster forecaster(std::move(curves), lambda, args.seed);
  const sl::OnlineResult result = forecaster.run();

  std::string records;
  double cum_loss = 0.0;
  for (std::size_t t = 0; t < result.rounds.size(); ++t) {
    const sl::OnlineRound& r = result.rounds[t];
    cum_loss += r.loss;
    ordered_json line;
    line["t"] = t + 1;
    line["sigma"] = r.sigma;
    line["loss"] = r.loss;
    line["cum_regret"] = r.cum_regret;
    records += json_line(line);
  }
  std::string summary = "T,n,H,lambda,cum_loss,regret\n";
  summary += std::to_string(args.rounds) + "," + std::to_string(dist.n) + "," +
             format_double(dist.H) + "," + format_double(lambda) + "," +
             format_double(cum_loss) + "," + format_double(result.regret) +
             "\n";
  if (args.out_path.empty())
    std::cout << records;
  else
    sl::write_text_file(args.out_path, records);
  if (args.summary_path.empty())
    std::cout << summary;
  else
    sl::write_text_file(args.summary_path, summary);
  return 0;
}

// ---------------------------------------------------------------------------
// reduce
// ---------------------------------------------------------------------------

struct ReduceArgs {
  std::string kind;
  std::string in_path;
  std::string out_path;
  int k = -1;
  bool experimental = false;
};

int run_reduce(const ReduceArgs& args) {
  const bool voi_kind = args.kind == "cmg-voi" || args.kind == "csg-voi";
  if (voi_kind && !args.experimental)
    throw sl::SchemaError(
        "the voi reductions are empirically validated constructions; pass "
        "--experimental to use them");
  ordered_json out;
  if (args.kind == "cmg-poas" || args.kind == "cmg-system" ||
      args.kind == "cmg-voi") {
    if (args.k < 0)
      throw sl::SchemaError("graph reductions need --k (vertex cover size)");
    const sl::Graph g = sl::load_graph(args.in_path);
    sl::CmgReduction red;
    if (args.kind == "cmg-poas")
      red = sl::vc_to_cmg_poas(g, args.k);
    else if (args.kind == "cmg-system")
      red = sl::vc_to_cmg_system(g, args.k);
    else
      red = sl::vc_to_cmg_voi(g, args.k);
    out = sl::game_to_json(red.game);
    ordered_json meta;
    meta["kind"] = args.kind;
    meta["k"] = args.k;
    if (args.kind == "cmg-poas") meta["n_star"] = red.n_star;
    if (args.kind != "cmg-poas") meta["budget"] = red.budget;
    meta["suggested_sigma"] = red.suggested_sigma;
    if (red.inspect >= 0) meta["inspect"] = red.inspect + 1;
    out["reduction"] = std::move(meta);
  } else if (args.kind == "csg-poas" || args.kind == "csg-voi") {
    const sl::SetCoverInstance inst = sl::load_set_cover(args.in_path);
    const sl::CsgReduction red = args.kind == "csg-poas"
                                     ? sl::sc_to_csg_poas(inst)
                                     : sl::sc_to_csg_voi(inst);
    out = sl::game_to_json(red.game);
    ordered_json meta;
    meta["kind"] = args.kind;
    meta["k"] = inst.k;
    meta["n_star"] = red.n_star;
    meta["h_cap"] = red.h_cap;
    if (red.inspect_action >= 0)
      meta["inspect_action"] = red.game.actions[red.inspect_action].id;
    out["reduction"] = std::move(meta);
  } else {
    throw sl::SchemaError(
        "kind must be cmg-poas, cmg-system, cmg-voi, csg-poas or csg-voi");
  }
  emit(out, args.out_path);
  return 0;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

struct VerifyArgs {
  std::string kind;
  std::string out_path;
  int max_size = 4;
  int count = 50;
  std::uint64_t seed = 12345;
  bool experimental = false;
};

bool close(double a, double b, double tol = 1e-9) {
  return std::abs(a - b) <= tol;
}

struct ExampleChecks {
  std::vector<std::pair<std::string, bool>> checks;
  void add(const std::string& name, bool ok) { checks.emplace_back(name, ok); }
};

ExampleChecks run_example_checks() {
  ExampleChecks out;
  {
    const sl::MaintenanceGame g = sl::example1_game();
    const sl::NashSet ne = sl::enumerate_nash(g, sl::MaintenanceSubsidy::none());
    out.add("example1 prior nash {00, 11}",
            ne.states == std::vector<std::uint64_t>{0, 3});
    out.add("example1 poa 2.5",
            close(sl::poa(g, sl::MaintenanceSubsidy::none()), 2.5));
    const sl::MaintenanceSubsidy fix = sl::MaintenanceSubsidy::uniform(0.06);
    const sl::NashSet fixed = sl::enumerate_nash(g, fix);
    out.add("example1 sigma 0.06 unique nash {11}",
            fixed.states == std::vector<std::uint64_t>{3});
    out.add("example1 sigma 0.06 poa 1", close(sl::poa(g, fix), 1.0));
    out.add("example1 closed form 0.05",
            close(sl::two_series_poa_subsidy(0.5, 0.5, 0.3, 0.3), 0.05, 1e-12));
  }
  {
    const sl::MaintenanceGame g = sl::example2_game();
    const sl::VoiReport rep =
        sl::voi_report(g, sl::MaintenanceSubsidy::none(), 0);
    out.add("example2 worst voi (-0.7, -0.7)",
            close(rep.worst[0], -0.7) && close(rep.worst[1], -0.7));
    out.add("example2 expected voi (-0.3, -0.42)",
            close(rep.expected[0], -0.3) && close(rep.expected[1], -0.42));
    const sl::MaintenanceSubsidy cond = sl::MaintenanceSubsidy::conditional(
        {0.0, 0.0}, {0.0, 0.0}, {0.21, 0.0});
    const sl::VoiReport fixed = sl::voi_report(g, cond, 0);
    out.add("example2 conditional 0.21 repairs voi",
            fixed.worst[0] >= -sl::kTol && fixed.worst[1] >= -sl::kTol);
  }
  {
    const sl::CostSharingGame g = sl::example3_game();
    const sl::CsgSubsidy none = sl::CsgSubsidy::none(g);
    const sl::CsgNashSet prior = sl::csg_enumerate_nash(g, none);
    const sl::CsgProfile aa{0, 0};
    bool has_aa = false;
    for (const auto& profile : prior.profiles)
      if (profile == aa) has_aa = true;
    out.add("example3 prior nash contains (A, A)", has_aa);
    const std::vector<double> ec = sl::csg_expected_costs(g);
    const std::vector<double> shares = sl::csg_agent_costs(g, ec, aa, none);
    out.add("example3 (A, A) costs (2.5, 2.5)",
            close(shares[0], 2.5) && close(shares[1], 2.5));
    const sl::CostSharingGame w1 = sl::make_cost_sharing_game(
        2, g.actions, {sl::CsgWorld{1.0, g.worlds[0].costs}}, g.H);
    const sl::CsgNashSet post = sl::csg_enumerate_nash(w1, sl::CsgSubsidy::none(w1));
    const sl::CsgProfile db{3, 1};
    out.add("example3 world-1 unique nash (D, B)",
            post.profiles == std::vector<sl::CsgProfile>{db});
    const std::vector<double> ec1 = sl::csg_expected_costs(w1);
    const std::vector<double> post_costs =
        sl::csg_agent_costs(w1, ec1, db, sl::CsgSubsidy::none(w1));
    out.add("example3 (D, B) costs (4, 2)",
            close(post_costs[0], 4.0) && close(post_costs[1], 2.0));
    const sl::CsgVoiReport rep = sl::csg_voi_report(g, none, 1);
    out.add("example3 agent-1 worst voi -1.5", close(rep.worst[0], -1.5));
    sl::CsgSubsidy sub = sl::CsgSubsidy::none(g);
    sub.amount[0] = 3.01;
    const sl::CsgVoiReport fixed = sl::csg_voi_report(g, sub, 1);
    out.add("example3 subsidy 3.01 on A repairs voi",
            fixed.worst[0] >= -sl::kTol && fixed.worst[1] >= -sl::kTol);
  }
  return out;
}

int run_verify(const VerifyArgs& args) {
  if (args.kind == "examples") {
    const ExampleChecks checks = run_example_checks();
    bool all = true;
    for (const auto& [name, ok] : checks.checks) {
      std::cout << (ok ? "okay: " : "FAIL: ") << name << "\n";
      all = all && ok;
    }
    std::cout << (all ? "all example checks passed"
                      : "example checks FAILED")
              << "\n";
    return all ? 0 : 1;
  }

  sl::ReductionKind kind;
  bool graph_kind = true;
  if (args.kind == "cmg-poas")
    kind = sl::ReductionKind::kCmgPoas;
  else if (args.kind == "cmg-system")
    kind = sl::ReductionKind::kCmgSystem;
  else if (args.kind == "cmg-voi")
    kind = sl::ReductionKind::kCmgVoi;
  else if (args.kind == "csg-poas") {
    kind = sl::ReductionKind::kCsgPoas;
    graph_kind = false;
  } else if (args.kind == "csg-voi") {
    kind = sl::ReductionKind::kCsgVoi;
    graph_kind = false;
  } else {
    throw sl::SchemaError(
        "kind must be examples, cmg-poas, cmg-system, cmg-voi, csg-poas or "
        "csg-voi");
  }
  if ((args.kind == "cmg-voi" || args.kind == "csg-voi") &&
      !args.experimental)
    throw sl::SchemaError(
        "the voi reductions are empirically validated constructions; pass "
        "--experimental to verify them");

  int checked = 0, agreed = 0;
  ordered_json mismatches = ordered_json::array();
  if (graph_kind) {
    for (const sl::Graph& g : sl::connected_graphs_up_to(args.max_size)) {
      for (int k = 0; k <= g.n; ++k) {
        const sl::ReductionReport rep = sl::verify_reduction(kind, g, k);
        ++checked;
        if (rep.agree) {
          ++agreed;
        } else {
          ordered_json m;
          m["n"] = g.n;
          ordered_json edges = ordered_json::array();
          for (const auto& [u, v] : g.edges)
            edges.push_back(ordered_json::array({u + 1, v + 1}));
          m["edges"] = std::move(edges);
          m["k"] = k;
          m["detail"] = rep.detail;
          mismatches.push_back(std::move(m));
        }
      }
    }
  } else {
    const int cap = std::min(args.max_size, 8);
    for (int i = 0; i < args.count; ++i) {
      const sl::SetCoverInstance inst =
          sl::random_set_cover(std::max(cap, 2), args.seed, i);
      const sl::ReductionReport rep = sl::verify_reduction(kind, inst);
      ++checked;
      if (rep.agree) {
        ++agreed;
      } else {
        ordered_json m;
        m["n"] = inst.n;
        m["k"] = inst.k;
        m["index"] = i;
        m["detail"] = rep.detail;
        mismatches.push_back(std::move(m));
      }
    }
  }
  ordered_json report;
  report["kind"] = args.kind;
  report["checked"] = checked;
  report["agreed"] = agreed;
  report["mismatches"] = std::move(mismatches);
  emit(report, args.out_path);
  return checked == agreed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "subsidy design for maintenance and cost-sharing games: equilibria, "
      "anarchy and information metrics, optimal subsidies, learning, and "
      "hardness reductions"};
  app.require_subcommand(1);

  AnalyzeArgs analyze_args;
  CLI::App* analyze = app.add_subcommand(
      "analyze", "equilibria and metrics of a game file");
  analyze->add_option("game", analyze_args.game_path, "game JSON file")
      ->required();
  analyze->add_option("--scheme", analyze_args.scheme_path,
                      "subsidy scheme JSON file");
  analyze->add_option("--inspect", analyze_args.inspect,
                      "1-based component (or action) to inspect");
  analyze->add_option("--voi-mode", analyze_args.voi_mode,
                      "pessimistic or global");
  analyze->add_option("--tol", analyze_args.tol,
                      "equilibrium tie tolerance");
  analyze->add_option("--cap-n", analyze_args.cap_n,
                      "enumeration size guard");
  analyze->add_option("--out", analyze_args.out_path, "report path");

  SolveArgs solve_args;
  CLI::App* solve = app.add_subcommand(
      "solve", "optimal or budgeted subsidy for an objective");
  solve->add_option("game", solve_args.game_path, "game JSON file")
      ->required();
  solve->add_option("--objective", solve_args.objective,
                    "poa1, system or voi");
  solve->add_option("--mode", solve_args.mode,
                    "uniform, per-agent or conditional");
  solve->add_option("--budget", solve_args.budget, "total payment budget");
  solve->add_option("--margin", solve_args.margin,
                    "offset above critical values (default auto)");
  solve->add_option("--n-star", solve_args.n_star,
                    "subsidized agent or action bound");
  solve->add_option("--h-cap", solve_args.h_cap,
                    "per-action eligibility cap (cost-sharing)");
  solve->add_option("--inspect", solve_args.inspect,
                    "1-based inspected component (voi)");
  solve->add_option("--out", solve_args.out_path, "report path");

  LearnOfflineArgs off_args;
  CLI::App* learn_off = app.add_subcommand(
      "learn-offline", "empirical risk minimization over sampled games");
  learn_off->add_option("--dist", off_args.dist_path, "distribution JSON")
      ->required();
  learn_off->add_option("--train", off_args.train, "training sample count")
      ->required();
  learn_off->add_option("--test", off_args.test, "held-out sample count");
  learn_off->add_option("--mode", off_args.mode, "uniform, per-agent or csg");
  learn_off->add_option("--objective", off_args.objective,
                        "prior or posterior (per-agent mode)");
  learn_off->add_option("--inspect", off_args.inspect,
                        "1-based inspected component (posterior objective)");
  learn_off->add_option("--subsidize", off_args.subsidize,
                        "comma-separated action ids (csg mode)");
  learn_off->add_flag("--raw-loss", off_args.raw_loss,
                      "csg mode: use the signed loss, not its positive part");
  learn_off->add_option("--seed", off_args.seed, "master seed")->required();
  learn_off->add_option("--format", off_args.format, "json or csv");
  learn_off->add_option("--out", off_args.out_path, "report path");

  LearnOnlineArgs on_args;
  CLI::App* learn_on = app.add_subcommand(
      "learn-online", "exponential forecaster over a game stream");
  learn_on->add_option("--dist", on_args.dist_path, "distribution JSON")
      ->required();
  learn_on->add_option("-T,--rounds", on_args.rounds, "stream length")
      ->required();
  learn_on->add_option("--lambda", on_args.lambda,
                       "learning rate (default tuned to T)");
  learn_on->add_option("--seed", on_args.seed, "master seed")->required();
  learn_on->add_option("--out", on_args.out_path,
                       "JSONL per-round records path");
  learn_on->add_option("--summary", on_args.summary_path, "CSV summary path");

  ReduceArgs reduce_args;
  CLI::App* reduce = app.add_subcommand(
      "reduce", "build a hardness-reduction game from a graph or set cover");
  reduce->add_option("--kind", reduce_args.kind,
                     "cmg-poas, cmg-system, cmg-voi, csg-poas or csg-voi")
      ->required();
  reduce->add_option("input", reduce_args.in_path,
                     "graph or set-cover instance file")
      ->required();
  reduce->add_option("--k", reduce_args.k, "vertex cover size target");
  reduce->add_option("-o,--out", reduce_args.out_path, "output game path");
  reduce->add_flag("--experimental", reduce_args.experimental,
                   "allow the empirically validated voi constructions");

  VerifyArgs verify_args;
  CLI::App* verify = app.add_subcommand(
      "verify", "check reductions against brute force, or replay the "
                "bundled examples");
  verify->add_option("--kind", verify_args.kind,
                     "examples, cmg-poas, cmg-system, cmg-voi, csg-poas or "
                     "csg-voi")
      ->required();
  verify->add_option("--max-size", verify_args.max_size,
                     "largest graph (or set-cover universe) to check");
  verify->add_option("--count", verify_args.count,
                     "random set-cover instances to check");
  verify->add_option("--seed", verify_args.seed, "instance generator seed");
  verify->add_flag("--experimental", verify_args.experimental,
                   "allow the empirically validated voi constructions");
  verify->add_option("--out", verify_args.out_path, "report path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*analyze) return run_analyze(analyze_args);
    if (*solve) return run_solve(solve_args);
    if (*learn_off) return run_learn_offline(off_args);
    if (*learn_on) return run_learn_online(on_args);
    if (*reduce) return run_reduce(reduce_args);
    if (*verify) return run_verify(verify_args);
  } catch (const sl::SchemaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const sl::UndefinedMetricError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
