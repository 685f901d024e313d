// regret-lab command line: runs optimistic learning experiments on
// normal-form games, classifies game structure and lists builtin games.
//
//   regret-lab run --game matching_pennies --algo omd --eta 0.1 --iters 100 --out runs/mp
//   regret-lab run --config my_run.json
//   regret-lab classify --game matching_pennies
//   regret-lab catalog

#include <iostream>

#include "CLI11.hpp"
#include "regretlab/runner.hpp"

namespace {

std::vector<double> parse_csv_doubles(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    values.push_back(std::stod(item));
  }
  return values;
}

// kind:key=value,... e.g. geometric:rho=0.5,mag=0.4 or burst:t0=10,width=20,mag=0.3
void apply_corruption_flag(regretlab::RunConfig& cfg, const std::string& text) {
  const auto colon = text.find(':');
  cfg.corruption_kind = text.substr(0, colon);
  if (colon == std::string::npos) return;
  std::stringstream ss(text.substr(colon + 1));
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw CLI::ValidationError("--corruption", "expected key=value, got '" + item + "'");
    }
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    if (key == "rho") {
      cfg.corruption_rho = std::stod(value);
    } else if (key == "mag") {
      cfg.corruption_mag = std::stod(value);
    } else if (key == "t0") {
      cfg.corruption_t0 = std::stoul(value);
    } else if (key == "width") {
      cfg.corruption_width = std::stoul(value);
    } else {
      throw CLI::ValidationError("--corruption", "unknown parameter '" + key + "'");
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"optimistic no-regret learning in normal-form games"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run an experiment and emit trace.csv + summary.json");
  std::string config_path;
  std::string game, algo, reg, schedule, weights_flag, corruption_flag, init_flag, eta_flag, out;
  std::size_t iters = 0;
  std::uint64_t seed = 0;
  double delta = 0.0;
  bool seed_set = false, iters_set = false, delta_set = false;
  run->add_option("--config", config_path, "JSON config file; inline flags override it");
  run->add_option("--game", game, "builtin name or game JSON path");
  run->add_option("--algo", algo, "omd | oftrl");
  run->add_option("--reg", reg, "entropy | euclid");
  run->add_option("--delta", delta, "entropy interior clip")->each([&](const std::string&) { delta_set = true; });
  run->add_option("--eta", eta_flag, "learning rate, scalar or comma-separated per player");
  run->add_option("--schedule", schedule, "constant | inv-sqrt");
  run->add_option("--iters", iters, "number of rounds")->each([&](const std::string&) { iters_set = true; });
  run->add_option("--seed", seed, "corruption seed")->each([&](const std::string&) { seed_set = true; });
  run->add_option("--corruption", corruption_flag, "kind:params, e.g. geometric:rho=0.5,mag=0.4");
  run->add_option("--init", init_flag, "initial profile, concatenated comma-separated probabilities");
  run->add_option("--weights", weights_flag, "uniform | harmonic | comma-separated m values");
  run->add_option("--out", out, "output directory");

  auto* classify = app.add_subcommand("classify", "report game-class certificates as JSON");
  std::string classify_game_arg;
  classify->add_option("--game", classify_game_arg, "builtin name or game JSON path")->required();

  auto* catalog = app.add_subcommand("catalog", "list builtin games");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      regretlab::RunConfig cfg;
      if (!config_path.empty()) cfg = regretlab::parse_config_file(config_path);
      if (!game.empty()) cfg.game = game;
      if (!algo.empty()) cfg.algo = algo;
      if (!reg.empty()) cfg.reg = reg;
      if (delta_set) cfg.delta = delta;
      if (!eta_flag.empty()) cfg.eta = parse_csv_doubles(eta_flag);
      if (!schedule.empty()) cfg.schedule = schedule;
      if (iters_set) cfg.iters = iters;
      if (seed_set) cfg.seed = seed;
      if (!corruption_flag.empty()) apply_corruption_flag(cfg, corruption_flag);
      if (!init_flag.empty()) cfg.init = parse_csv_doubles(init_flag);
      if (!weights_flag.empty()) {
        if (weights_flag == "uniform" || weights_flag == "harmonic") {
          cfg.weights = weights_flag;
        } else {
          cfg.weights = "explicit";
          cfg.weights_values = parse_csv_doubles(weights_flag);
        }
      }
      if (!out.empty()) cfg.out = out;
      // normalize through the parser so flag-built configs get the same checks
      cfg = regretlab::parse_config(regretlab::effective_config(cfg));

      const regretlab::ExperimentResult result = regretlab::run_experiment(cfg);
      std::cout << "trace:   " << result.trace_path.string() << "\n";
      std::cout << "summary: " << result.summary_path.string() << "\n";
      std::cout << "best iterate t=" << result.summary["best_iterate"]["t"]
                << " gap=" << result.summary["best_iterate"]["gap"]
                << " convergence=" << result.summary["convergence"]["status"] << "\n";
      return 0;
    }
    if (classify->parsed()) {
      const regretlab::NormalFormGame g = regretlab::resolve_game(classify_game_arg);
      std::cout << regretlab::classify_game(g).dump(2) << "\n";
      return 0;
    }
    if (catalog->parsed()) {
      for (const auto& entry : regretlab::catalog_entries()) {
        std::cout << entry.name << "\n    " << entry.description << "\n";
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
