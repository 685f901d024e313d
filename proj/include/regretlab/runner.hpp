#pragma once

// Experiment orchestration: builtin game catalog, run configuration
// parsing with full-default echo, trace/summary emission and the game
// classifier. Traces are plot-ready CSV, one row per round, preceded by
// the schema line "# regret-lab trace v1"; floats are printed with 12
// significant digits so identical configs produce byte-identical files.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "regretlab/diagnostics.hpp"
#include "regretlab/dynamics.hpp"
#include "regretlab/game_io.hpp"

namespace regretlab {

inline int log_level() {
  static const int level = [] {
    const char* env = std::getenv("REGRETLAB_LOG");
    if (!env) return 1;
    const std::string v(env);
    if (v == "quiet") return 0;
    if (v == "debug") return 2;
    return 1;
  }();
  return level;
}

inline void log_info(const std::string& msg) {
  if (log_level() >= 1) std::fprintf(stderr, "[regret-lab] %s\n", msg.c_str());
}

// -- builtin catalog ---------------------------------------------------------

struct CatalogEntry {
  std::string name;
  std::string description;
};

inline std::vector<CatalogEntry> catalog_entries() {
  return {
      {"matching_pennies", "2x2 zero-sum, u1 = [[-1,1],[1,-1]], u2 = -u1"},
      {"harmonic_2x2_zero_sum",
       "2x2 with u1 = [[1,2],[2,1]] rescaled to [-1,1] and u2 = -u1; harmonic with uniform weights"},
      {"harmonic_2x2_identical",
       "2x2 identical-interest reading, u1 = u2 = [[1,2],[2,1]]; not harmonic"},
      {"zero_game", "2x2 all-zero utilities; every profile is an equilibrium"},
      {"harmonic_3x3", "generated 2-player 3x3 harmonic game, uniform weights, seed 11"},
      {"harmonic_2x2x2", "generated 3-player 2x2x2 harmonic game, uniform weights, seed 5"},
      {"harmonic_skew_2x3", "generated 2-player 2x3 harmonic game, skewed weights, seed 3"},
  };
}

inline NormalFormGame builtin_game(const std::string& name) {
  if (name == "matching_pennies") {
    return NormalFormGame({2, 2}, {{-1, 1, 1, -1}, {1, -1, -1, 1}});
  }
  if (name == "harmonic_2x2_zero_sum") {
    std::vector<double> u1 = {1, 2, 2, 1};
    NormalFormGame raw({2, 2}, {u1, u1});
    std::vector<double> scaled = normalize_game(raw).utilities()[0];
    std::vector<double> negated(scaled.size());
    for (std::size_t k = 0; k < scaled.size(); ++k) negated[k] = -scaled[k];
    return NormalFormGame({2, 2}, {scaled, negated});
  }
  if (name == "harmonic_2x2_identical") {
    return NormalFormGame({2, 2}, {{1, 2, 2, 1}, {1, 2, 2, 1}});
  }
  if (name == "zero_game") {
    return NormalFormGame({2, 2}, {{0, 0, 0, 0}, {0, 0, 0, 0}});
  }
  if (name == "harmonic_3x3") {
    return make_harmonic_game(HarmonicWeights{{{1, 1, 1}, {1, 1, 1}}}, {3, 3}, 11);
  }
  if (name == "harmonic_2x2x2") {
    return make_harmonic_game(HarmonicWeights{{{1, 1}, {1, 1}, {1, 1}}}, {2, 2, 2}, 5);
  }
  if (name == "harmonic_skew_2x3") {
    return make_harmonic_game(HarmonicWeights{{{1, 3}, {0.5, 1, 2}}}, {2, 3}, 3);
  }
  std::string names;
  for (const auto& e : catalog_entries()) names += (names.empty() ? "" : ", ") + e.name;
  throw std::invalid_argument("unknown builtin game '" + name + "'; available: " + names);
}

inline bool is_builtin_game(const std::string& name) {
  for (const auto& e : catalog_entries()) {
    if (e.name == name) return true;
  }
  return false;
}

inline NormalFormGame resolve_game(const std::string& source) {
  if (is_builtin_game(source)) return builtin_game(source);
  return load_game_file(source);
}

// -- run configuration -------------------------------------------------------

struct RunConfig {
  std::string game = "matching_pennies";
  std::string algo = "omd";            // omd | oftrl
  std::string reg = "entropy";         // entropy | euclid
  double delta = 1e-8;                 // entropy interior clip
  std::vector<double> eta = {0.1};     // scalar broadcast or one per player
  std::string schedule = "constant";   // constant | inv-sqrt
  std::vector<double> eta_initial;     // inv-sqrt start rates; default 1.0 each
  std::size_t iters = 100;
  std::uint64_t seed = 0;
  std::string corruption_kind = "none";  // none | geometric | burst
  double corruption_rho = 0.5;
  double corruption_mag = 0.0;
  std::size_t corruption_t0 = 1;
  std::size_t corruption_width = 0;
  std::vector<double> init;            // concatenated per-player probabilities
  std::string weights = "uniform";     // uniform | harmonic | explicit
  std::vector<double> weights_values;  // explicit m
  std::string out = ".";
};

namespace detail {

inline std::vector<double> number_or_array(const nlohmann::json& j) {
  if (j.is_number()) return {j.get<double>()};
  return j.get<std::vector<double>>();
}

inline void check_known_keys(const nlohmann::json& j, const std::vector<std::string>& known,
                             const std::string& where) {
  std::string unknown;
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const auto& k : known) {
      if (it.key() == k) {
        ok = true;
        break;
      }
    }
    if (!ok) unknown += (unknown.empty() ? "" : ", ") + it.key();
  }
  if (!unknown.empty()) {
    throw std::invalid_argument("unknown " + where + " keys: " + unknown);
  }
}

}  // namespace detail

inline RunConfig parse_config(const nlohmann::json& j) {
  detail::check_known_keys(
      j,
      {"game", "algo", "reg", "delta", "eta", "schedule", "eta_initial", "iters", "seed",
       "corruption", "init", "weights", "out"},
      "config");
  RunConfig cfg;
  if (j.contains("game")) cfg.game = j.at("game").get<std::string>();
  if (j.contains("algo")) cfg.algo = j.at("algo").get<std::string>();
  if (j.contains("reg")) cfg.reg = j.at("reg").get<std::string>();
  if (j.contains("delta")) cfg.delta = j.at("delta").get<double>();
  if (j.contains("eta")) cfg.eta = detail::number_or_array(j.at("eta"));
  if (j.contains("schedule")) cfg.schedule = j.at("schedule").get<std::string>();
  if (j.contains("eta_initial")) cfg.eta_initial = detail::number_or_array(j.at("eta_initial"));
  if (j.contains("iters")) cfg.iters = j.at("iters").get<std::size_t>();
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("init")) cfg.init = j.at("init").get<std::vector<double>>();
  if (j.contains("out")) cfg.out = j.at("out").get<std::string>();
  if (j.contains("weights")) {
    const auto& w = j.at("weights");
    if (w.is_string()) {
      cfg.weights = w.get<std::string>();
    } else {
      cfg.weights = "explicit";
      cfg.weights_values = w.get<std::vector<double>>();
    }
  }
  if (j.contains("corruption")) {
    const auto& c = j.at("corruption");
    // the generator is seeded by the top-level run seed
    detail::check_known_keys(c, {"kind", "rho", "mag", "t0", "width"}, "corruption");
    cfg.corruption_kind = c.value("kind", std::string("none"));
    cfg.corruption_rho = c.value("rho", 0.5);
    cfg.corruption_mag = c.value("mag", 0.0);
    cfg.corruption_t0 = c.value("t0", std::size_t{1});
    cfg.corruption_width = c.value("width", std::size_t{0});
  }

  if (cfg.algo != "omd" && cfg.algo != "oftrl") {
    throw std::invalid_argument("config: algo must be omd or oftrl, got '" + cfg.algo + "'");
  }
  if (cfg.reg != "entropy" && cfg.reg != "euclid") {
    throw std::invalid_argument("config: reg must be entropy or euclid, got '" + cfg.reg + "'");
  }
  if (cfg.schedule != "constant" && cfg.schedule != "inv-sqrt") {
    throw std::invalid_argument("config: schedule must be constant or inv-sqrt");
  }
  for (double e : cfg.eta) {
    if (!(e > 0.0)) throw std::invalid_argument("config: eta must be positive, got " + std::to_string(e));
  }
  if (cfg.iters < 1) throw std::invalid_argument("config: iters must be >= 1");
  if (cfg.corruption_kind != "none" && cfg.corruption_kind != "geometric" &&
      cfg.corruption_kind != "burst") {
    throw std::invalid_argument("config: corruption kind must be none, geometric or burst");
  }
  return cfg;
}

inline RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  nlohmann::json j;
  in >> j;
  return parse_config(j);
}

// Echo of the fully resolved configuration; re-parsing it reproduces the
// run exactly.
inline nlohmann::json effective_config(const RunConfig& cfg) {
  nlohmann::json j;
  j["game"] = cfg.game;
  j["algo"] = cfg.algo;
  j["reg"] = cfg.reg;
  j["delta"] = cfg.delta;
  j["eta"] = cfg.eta;
  j["schedule"] = cfg.schedule;
  if (!cfg.eta_initial.empty()) j["eta_initial"] = cfg.eta_initial;
  j["iters"] = cfg.iters;
  j["seed"] = cfg.seed;
  nlohmann::json c;
  c["kind"] = cfg.corruption_kind;
  if (cfg.corruption_kind == "geometric") {
    c["rho"] = cfg.corruption_rho;
    c["mag"] = cfg.corruption_mag;
  } else if (cfg.corruption_kind == "burst") {
    c["t0"] = cfg.corruption_t0;
    c["width"] = cfg.corruption_width;
    c["mag"] = cfg.corruption_mag;
  }
  j["corruption"] = c;
  if (!cfg.init.empty()) j["init"] = cfg.init;
  if (cfg.weights == "explicit") {
    j["weights"] = cfg.weights_values;
  } else {
    j["weights"] = cfg.weights;
  }
  j["out"] = cfg.out;
  return j;
}

// -- trace formatting --------------------------------------------------------

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

// -- experiment --------------------------------------------------------------

struct ExperimentResult {
  std::filesystem::path trace_path;
  std::filesystem::path summary_path;
  nlohmann::json summary;
};

namespace detail {

inline StrategyProfile profile_from_flat(const NormalFormGame& game,
                                         const std::vector<double>& flat) {
  std::size_t expected = 0;
  for (std::size_t c : game.action_counts()) expected += c;
  if (flat.size() != expected) {
    throw std::invalid_argument("init: expected " + std::to_string(expected) +
                                " concatenated probabilities, got " + std::to_string(flat.size()));
  }
  std::vector<MixedStrategy> xs;
  std::size_t pos = 0;
  for (std::size_t c : game.action_counts()) {
    xs.emplace_back(std::vector<double>(flat.begin() + pos, flat.begin() + pos + c));
    pos += c;
  }
  return StrategyProfile{std::move(xs)};
}

struct ResolvedWeights {
  RegretWeights m = RegretWeights{{1.0}};
  std::string source;
};

inline ResolvedWeights resolve_weights(const NormalFormGame& game, const RunConfig& cfg) {
  ResolvedWeights out;
  if (cfg.weights == "uniform") {
    out.m = RegretWeights::uniform(game.num_players());
    out.source = "uniform";
  } else if (cfg.weights == "harmonic") {
    const auto mu = solve_harmonic_weights(game);
    if (mu.has_value()) {
      out.m = regret_weights_from_harmonic(*mu).m;
      out.source = "harmonic";
    } else {
      log_info("no positive harmonic weights found; falling back to uniform regret weights");
      out.m = RegretWeights::uniform(game.num_players());
      out.source = "uniform (harmonic solve found none)";
    }
  } else {
    out.m = RegretWeights{cfg.weights_values};
    out.m.validate(game.num_players());
    out.source = "explicit";
  }
  return out;
}

}  // namespace detail

inline DynamicsConfig dynamics_config_from(const NormalFormGame& game, const RunConfig& cfg) {
  DynamicsConfig dyn;
  dyn.algorithm = cfg.algo == "omd" ? Algorithm::Omd : Algorithm::Oftrl;
  dyn.regularizer =
      cfg.reg == "entropy" ? RegularizerKind::NegativeEntropy : RegularizerKind::SquaredEuclidean;
  dyn.interior_clip = cfg.delta;
  dyn.iterations = cfg.iters;

  std::vector<double> eta = cfg.eta;
  if (eta.size() == 1) eta.assign(game.num_players(), eta[0]);
  if (eta.size() != game.num_players()) {
    throw std::invalid_argument("config: eta lists " + std::to_string(eta.size()) +
                                " rates for " + std::to_string(game.num_players()) + " players");
  }
  if (cfg.schedule == "constant") {
    dyn.schedule = LearningRateSchedule::constant(eta);
  } else {
    std::vector<double> initial = cfg.eta_initial;
    if (initial.empty()) initial.assign(game.num_players(), 1.0);
    if (initial.size() == 1) initial.assign(game.num_players(), initial[0]);
    dyn.schedule = LearningRateSchedule::inv_sqrt(initial, eta);
  }

  if (cfg.corruption_kind == "geometric") {
    dyn.corruption = CorruptionSpec::geometric_decay(cfg.corruption_rho, cfg.corruption_mag, cfg.seed);
  } else if (cfg.corruption_kind == "burst") {
    dyn.corruption =
        CorruptionSpec::burst(cfg.corruption_t0, cfg.corruption_width, cfg.corruption_mag, cfg.seed);
  }

  if (!cfg.init.empty()) dyn.initial_profile = detail::profile_from_flat(game, cfg.init);
  return dyn;
}

inline ExperimentResult run_experiment(const RunConfig& cfg) {
  NormalFormGame loaded = resolve_game(cfg.game);
  const bool needed_normalization = !loaded.entries_in_unit_range();
  const NormalFormGame game = needed_normalization ? normalize_game(loaded) : std::move(loaded);
  if (needed_normalization) log_info("utilities rescaled into [-1, 1]");

  const DynamicsConfig dyn = dynamics_config_from(game, cfg);
  const detail::ResolvedWeights weights = detail::resolve_weights(game, cfg);
  const std::vector<RegularizerSpec> specs = make_specs(game, dyn.regularizer, dyn.interior_clip);

  {
    double c = specs[0].norm_lower_const(), c_star = specs[0].dual_norm_upper_const();
    for (const auto& s : specs) {
      c = std::min(c, s.norm_lower_const());
      c_star = std::max(c_star, s.dual_norm_upper_const());
    }
    const bool corrupted = cfg.corruption_kind != "none" && cfg.corruption_mag > 0.0;
    const double cap = theorem_lr_cap(game.num_players(), c, c_star, weights.m, corrupted);
    if (dyn.schedule.initial_max() > cap + 1e-12) {
      log_info("warning: learning rate " + std::to_string(dyn.schedule.initial_max()) +
               " exceeds the certified cap " + std::to_string(cap) +
               (corrupted ? " (corrupted)" : "") +
               "; bound checks that require it will be skipped");
    }
  }

  const Trajectory traj = run_dynamics(game, dyn);
  const std::vector<RoundDiagnostics> rounds = compute_round_diagnostics(game, traj, specs);
  const std::size_t n = game.num_players();
  const std::size_t T = traj.length();

  // Per-prefix regrets, weighted total and bound slacks.
  std::vector<std::vector<double>> regret_to_date(n);
  {
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> action_sum(game.action_counts()[i], 0.0);
      double score = 0.0;
      regret_to_date[i].reserve(T);
      for (std::size_t t = 0; t < T; ++t) {
        const PayoffVector& v = traj.payoffs[t][i];
        for (std::size_t a = 0; a < action_sum.size(); ++a) {
          action_sum[a] += v[a];
          score += traj.played[t][i][a] * v[a];
        }
        double best = action_sum[0];
        for (double s : action_sum) best = std::max(best, s);
        regret_to_date[i].push_back(best - score);
      }
    }
  }

  std::vector<double> rvu_slack;   // min over players, per prefix
  std::vector<double> path_slack;  // rhs - cumulative path, per prefix
  BoundCheck path_check;
  if (traj.has_anchors()) {
    rvu_slack.assign(T, std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < n; ++i) {
      const std::vector<double> s = rvu_prefix_slacks(traj, specs, dyn.schedule, i);
      for (std::size_t t = 0; t < T; ++t) rvu_slack[t] = std::min(rvu_slack[t], s[t]);
    }
    path_check = path_length_bound_check(traj, specs, dyn.schedule, weights.m);
    if (path_check.skipped) {
      log_info("path-length bound check skipped: " + path_check.skip_reason);
    } else {
      const std::vector<double> eps = eps_path(traj, specs);
      double cumulative = 0.0;
      path_slack.reserve(T);
      for (double e : eps) {
        cumulative += e * e;
        path_slack.push_back(path_check.rhs - cumulative);
      }
    }
  }

  std::vector<double> lips_slack(T, 0.0);
  for (std::size_t t = 0; t < T; ++t) {
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      double rhs = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i) rhs += rounds[t].step_l1[j];
      }
      worst = std::min(worst, rhs - rounds[t].payoff_delta_inf[i]);
    }
    lips_slack[t] = worst;
  }

  // Trace CSV.
  std::filesystem::create_directories(cfg.out);
  ExperimentResult result;
  result.trace_path = std::filesystem::path(cfg.out) / "trace.csv";
  result.summary_path = std::filesystem::path(cfg.out) / "summary.json";
  {
    std::ofstream csv(result.trace_path);
    if (!csv) throw std::runtime_error("cannot write trace file: " + result.trace_path.string());
    csv << "# regret-lab trace v1\n";
    csv << "t";
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t a = 0; a < game.action_counts()[i]; ++a) {
        csv << ",x_" << i << "_" << a;
      }
    }
    for (std::size_t i = 0; i < n; ++i) csv << ",regret_" << i;
    csv << ",wreg_total,nash_gap,eps_t,corr_l1,rvu_slack,pathlen_slack,lips_slack\n";
    for (std::size_t t = 0; t < T; ++t) {
      csv << (t + 1);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t a = 0; a < game.action_counts()[i]; ++a) {
          csv << "," << format_double(traj.played[t][i][a]);
        }
      }
      double wreg = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        csv << "," << format_double(regret_to_date[i][t]);
        wreg += weights.m.m[i] * regret_to_date[i][t];
      }
      csv << "," << format_double(wreg);
      csv << "," << format_double(rounds[t].nash_gap);
      csv << ",";
      if (traj.has_anchors()) csv << format_double(rounds[t].eps);
      double corr = 0.0;
      for (double c : rounds[t].corruption_l1) corr += c;
      csv << "," << format_double(corr);
      csv << ",";
      if (!rvu_slack.empty()) csv << format_double(rvu_slack[t]);
      csv << ",";
      if (!path_slack.empty()) csv << format_double(path_slack[t]);
      csv << "," << format_double(lips_slack[t]) << "\n";
    }
  }

  // Summary JSON.
  nlohmann::json summary;
  summary["config"] = effective_config(cfg);
  summary["game"] = {{"players", n},
                     {"actions", game.action_counts()},
                     {"rescaled", needed_normalization}};
  summary["regret_weights"] = {{"m", weights.m.m}, {"source", weights.source}};

  const BestIterate best = extract_best_iterate(game, traj, specs, dyn.schedule);
  nlohmann::json best_json;
  best_json["t"] = best.round;
  best_json["gap"] = best.gap;
  if (traj.has_anchors()) {
    best_json["eps"] = best.eps;
    best_json["certified_gap"] = best.certified_gap;
  }
  best_json["corruption_l1"] = best.corruption_l1;
  summary["best_iterate"] = best_json;
  summary["initial_gap"] = nash_gap(game, traj.initial);
  summary["final_gap"] = rounds.back().nash_gap;

  nlohmann::json bounds;
  if (traj.has_anchors()) {
    double rvu_min = std::numeric_limits<double>::infinity();
    for (double s : rvu_slack) rvu_min = std::min(rvu_min, s);
    bounds["rvu"] = rvu_min >= -1e-6 ? "holds" : "violated";
    bounds["rvu_min_slack"] = rvu_min;
    if (path_check.skipped) {
      bounds["path_length"] = "skipped: " + path_check.skip_reason;
    } else {
      bounds["path_length"] = path_check.holds ? "holds" : "violated";
      bounds["path_length_lhs"] = path_check.lhs;
      bounds["path_length_rhs"] = path_check.rhs;
    }
  } else {
    bounds["rvu"] = "unavailable (no anchors)";
    bounds["path_length"] = "unavailable (no anchors)";
  }
  if (T >= 2) {
    bounds["lipschitz_min_slack"] = payoff_lipschitz_check(traj);
  }
  summary["bounds"] = bounds;

  summary["corruption_totals"] = {{"C", traj.corruption_total}, {"M", traj.corruption_sup}};

  {
    const std::size_t window = std::min<std::size_t>(50, T);
    nlohmann::json conv;
    if (window >= 2) {
      const ConvergenceStatus status = detect_convergence(game, traj, window, 1e-2);
      conv["status"] = to_string(status);
      conv["window"] = window;
      conv["tol"] = 1e-2;
    } else {
      conv["status"] = "inconclusive";
    }
    summary["convergence"] = conv;
  }

  {
    std::vector<double> final_regret(n);
    for (std::size_t i = 0; i < n; ++i) final_regret[i] = regret_to_date[i][T - 1];
    summary["regret"] = final_regret;
    const WeightedRegret w = weighted_regret(traj, weights.m);
    summary["weighted_regret"] = {{"per_player", w.per_player}, {"total", w.total}};
  }

  {
    std::ofstream out(result.summary_path);
    if (!out) throw std::runtime_error("cannot write summary file: " + result.summary_path.string());
    out << summary.dump(2) << "\n";
  }
  result.summary = std::move(summary);
  return result;
}

// -- classifier --------------------------------------------------------------

inline nlohmann::json classify_game(const NormalFormGame& game) {
  nlohmann::json report;
  const std::optional<double> constant = is_constant_sum(game);
  report["constant_sum"] = constant.has_value();
  if (constant.has_value()) {
    report["constant_sum_value"] = *constant;
    report["zero_sum"] = std::abs(*constant) <= 1e-12;
  } else {
    report["zero_sum"] = false;
  }

  const std::optional<HarmonicWeights> mu = solve_harmonic_weights(game);
  report["harmonic"] = mu.has_value();
  if (mu.has_value()) {
    report["harmonic_weights"] = mu->mu;
    report["harmonic_residual"] = harmonic_residual(game, *mu);
    report["suggested_m"] = regret_weights_from_harmonic(*mu).m.m;
  } else {
    report["harmonic_weights"] = nullptr;
    report["suggested_m"] = RegretWeights::uniform(game.num_players()).m;
  }
  return report;
}

}  // namespace regretlab
