#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "helpers.hpp"
#include "regretlab/dynamics.hpp"

using namespace regretlab;
using testing::matching_pennies;
using testing::random_game;

namespace {

// Independent transcription of one optimistic mirror-descent round for a
// 2-player entropy setup: raw exponential reweighting, no shared kernels.
struct OracleRound {
  StrategyProfile x;
  StrategyProfile g;
};

MixedStrategy oracle_entropy_argmax(const MixedStrategy& anchor, const PayoffVector& v,
                                    double eta) {
  std::vector<double> w(anchor.size());
  double z = 0.0;
  for (std::size_t a = 0; a < anchor.size(); ++a) {
    w[a] = anchor[a] * std::exp(eta * v[a]);
    z += w[a];
  }
  for (double& p : w) p /= z;
  return MixedStrategy(std::move(w));
}

OracleRound oracle_omd_round(const NormalFormGame& game, const StrategyProfile& anchors,
                             const std::vector<PayoffVector>& last_payoffs, double eta) {
  std::vector<MixedStrategy> xs;
  for (std::size_t i = 0; i < game.num_players(); ++i) {
    xs.push_back(oracle_entropy_argmax(anchors[i], last_payoffs[i], eta));
  }
  StrategyProfile played{xs};
  std::vector<MixedStrategy> gs;
  for (std::size_t i = 0; i < game.num_players(); ++i) {
    gs.push_back(oracle_entropy_argmax(anchors[i], payoff_field(game, played, i), eta));
  }
  return OracleRound{std::move(played), StrategyProfile{std::move(gs)}};
}

// Bisection projection used as an independent check of the euclidean round.
MixedStrategy oracle_project(const std::vector<double>& y) {
  double lo = y[0], hi = y[0];
  for (double v : y) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  lo -= 1.0;
  for (int iter = 0; iter < 200; ++iter) {
    const double tau = 0.5 * (lo + hi);
    double mass = 0.0;
    for (double v : y) mass += std::max(v - tau, 0.0);
    (mass > 1.0 ? lo : hi) = tau;
  }
  std::vector<double> x(y.size());
  for (std::size_t a = 0; a < y.size(); ++a) x[a] = std::max(y[a] - 0.5 * (lo + hi), 0.0);
  return MixedStrategy(std::move(x));
}

double max_coord_gap(const StrategyProfile& a, const StrategyProfile& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.num_players(); ++i) {
    worst = std::max(worst, linf_distance(a[i].probs(), b[i].probs()));
  }
  return worst;
}

}  // namespace

TEST_CASE("matching pennies is stationary at exact uniform") {
  const NormalFormGame mp = matching_pennies();
  const auto specs = make_specs(mp, RegularizerKind::NegativeEntropy, 1e-8);
  const auto schedule = LearningRateSchedule::constant(2, 0.1);
  auto states = omd_init(mp, specs, uniform_profile(mp));
  const StrategyProfile x1 = omd_round(mp, specs, schedule, 1, states);
  CHECK(max_coord_gap(x1, uniform_profile(mp)) <= 1e-15);
}

TEST_CASE("one omd round matches a straight-line transcription") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const NormalFormGame game = random_game(rng, {3, 2});
    const auto specs = make_specs(game, RegularizerKind::NegativeEntropy, 1e-8);
    const auto schedule = LearningRateSchedule::constant(2, 0.2);
    const StrategyProfile start = testing::random_profile(rng, game);

    auto states = omd_init(game, specs, start);
    StrategyProfile anchors{{states[0].g, states[1].g}};
    std::vector<PayoffVector> last{states[0].last_payoff, states[1].last_payoff};
    const OracleRound expected = oracle_omd_round(game, anchors, last, 0.2);

    const StrategyProfile x1 = omd_round(game, specs, schedule, 1, states);
    CHECK(max_coord_gap(x1, expected.x) <= 1e-12);
    StrategyProfile g1{{states[0].g, states[1].g}};
    CHECK(max_coord_gap(g1, expected.g) <= 1e-12);
  }
}

TEST_CASE("euclidean prox agrees with a bisection projection") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> payoff_draw(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t dim = 2 + trial % 4;
    const RegularizerSpec spec = RegularizerSpec::squared_euclidean(dim);
    const MixedStrategy anchor = testing::random_simplex(rng, dim);
    std::vector<double> v(dim);
    for (double& p : v) p = payoff_draw(rng);
    const MixedStrategy fast = prox_step(spec, anchor, PayoffVector{v}, 0.7);
    std::vector<double> y(dim);
    for (std::size_t a = 0; a < dim; ++a) y[a] = anchor[a] + 0.7 * v[a];
    const MixedStrategy slow = oracle_project(y);
    CHECK(linf_distance(fast.probs(), slow.probs()) <= 1e-9);
  }
}

TEST_CASE("mirror descent and regularized leader coincide under entropy") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 3; ++trial) {
    const NormalFormGame game = random_game(rng, {3, 2});
    DynamicsConfig omd;
    omd.algorithm = Algorithm::Omd;
    omd.schedule = LearningRateSchedule::constant(2, 0.1);
    omd.iterations = 200;
    DynamicsConfig oftrl = omd;
    oftrl.algorithm = Algorithm::Oftrl;

    const Trajectory a = run_dynamics(game, omd);
    const Trajectory b = run_dynamics(game, oftrl);
    double worst = 0.0;
    for (std::size_t t = 0; t < a.length(); ++t) {
      worst = std::max(worst, max_coord_gap(a.played[t], b.played[t]));
    }
    CHECK(worst <= 1e-8);
  }
}

TEST_CASE("zero game never leaves the uniform profile") {
  const NormalFormGame zero({2, 2}, {{0, 0, 0, 0}, {0, 0, 0, 0}});
  for (auto algo : {Algorithm::Omd, Algorithm::Oftrl}) {
    DynamicsConfig cfg;
    cfg.algorithm = algo;
    cfg.iterations = 25;
    const Trajectory traj = run_dynamics(zero, cfg);
    for (const auto& profile : traj.played) {
      CHECK(max_coord_gap(profile, uniform_profile(zero)) <= 1e-15);
    }
  }
}

TEST_CASE("theorem learning-rate cap") {
  const RegretWeights uniform = RegretWeights::uniform(2);
  CHECK(theorem_lr_cap(2, 1.0, 1.0, uniform, false) == doctest::Approx(0.25));
  CHECK(theorem_lr_cap(2, 1.0, 1.0, uniform, true) == doctest::Approx(0.25 / std::sqrt(3.0)));

  // the cap depends on the weights only through their ratio
  const RegretWeights skew{{1.0, 4.0, 2.0}};
  RegretWeights scaled = skew;
  for (double& m : scaled.m) m *= 37.0;
  CHECK(theorem_lr_cap(3, 0.5, 2.0, skew, false) ==
        doctest::Approx(theorem_lr_cap(3, 0.5, 2.0, scaled, false)));

  CHECK_THROWS_AS(theorem_lr_cap(1, 1.0, 1.0, RegretWeights{{1.0}}, false), std::invalid_argument);
}

TEST_CASE("corruption kinds") {
  const NormalFormGame mp = matching_pennies();
  const StrategyProfile uniform = uniform_profile(mp);

  SUBCASE("none leaves the profile untouched") {
    CorruptionTracker tracker(CorruptionSpec::none(), mp.action_counts());
    const StrategyProfile played = tracker.apply(uniform, 1);
    CHECK(max_coord_gap(played, uniform) == 0.0);
    CHECK(tracker.totals()[0] == 0.0);
    CHECK(tracker.totals()[1] == 0.0);
  }

  SUBCASE("geometric decay respects its per-round and total budgets") {
    const double rho = 0.5, mag = 0.4;
    CorruptionTracker tracker(CorruptionSpec::geometric_decay(rho, mag, 9), mp.action_counts());
    for (std::size_t round = 1; round <= 40; ++round) {
      tracker.apply(uniform, round);
      const double budget = 2.0 * mag * std::pow(rho, static_cast<double>(round - 1));
      for (std::size_t i = 0; i < 2; ++i) CHECK(tracker.last_l1()[i] <= budget + 1e-12);
    }
    for (std::size_t i = 0; i < 2; ++i) {
      CHECK(tracker.totals()[i] <= 2.0 * mag / (1.0 - rho) + 1e-12);  // C_i <= 1.6
      CHECK(tracker.suprema()[i] <= 2.0 * mag + 1e-12);
    }
  }

  SUBCASE("burst corrupts exactly its window") {
    CorruptionTracker tracker(CorruptionSpec::burst(5, 3, 0.3, 4), mp.action_counts());
    double manual_total = 0.0;
    for (std::size_t round = 1; round <= 12; ++round) {
      const StrategyProfile played = tracker.apply(uniform, round);
      const double c = l1_distance(played[0].probs(), uniform[0].probs());
      manual_total += c;
      if (round < 5 || round >= 8) CHECK(c == 0.0);
    }
    CHECK(tracker.totals()[0] == manual_total);  // exact accumulation
  }

  SUBCASE("custom lists replace the played strategy and validate it") {
    std::vector<std::vector<std::optional<std::vector<double>>>> plan(2);
    plan[0] = {std::optional<std::vector<double>>{{0.2, 0.8}}, std::nullopt};
    CorruptionTracker tracker(CorruptionSpec::custom_list(plan), mp.action_counts());
    const StrategyProfile played = tracker.apply(uniform, 1);
    CHECK(played[0][0] == doctest::Approx(0.2));
    CHECK(played[1][0] == doctest::Approx(0.5));
    CHECK(tracker.totals()[0] == doctest::Approx(0.6));  // |0.2-0.5| + |0.8-0.5|

    std::vector<std::vector<std::optional<std::vector<double>>>> bad(1);
    bad[0] = {std::optional<std::vector<double>>{{0.9, 0.9}}, std::nullopt};
    CorruptionTracker rejecting(CorruptionSpec::custom_list(bad), mp.action_counts());
    CHECK_THROWS_AS(rejecting.apply(uniform, 1), std::invalid_argument);
  }
}

TEST_CASE("corruption accounting matches recomputation exactly") {
  const NormalFormGame mp = matching_pennies();
  DynamicsConfig cfg;
  cfg.corruption = CorruptionSpec::geometric_decay(0.5, 0.4, 11);
  cfg.iterations = 60;
  const Trajectory traj = run_dynamics(mp, cfg);
  for (std::size_t i = 0; i < 2; ++i) {
    double total = 0.0;
    for (std::size_t t = 0; t < traj.length(); ++t) {
      total += l1_distance(traj.played[t][i].probs(), traj.prescribed[t][i].probs());
    }
    CHECK(traj.corruption_total[i] == total);
  }
}

TEST_CASE("single-round run equals a manual round") {
  std::mt19937_64 rng(13);
  const NormalFormGame game = random_game(rng, {2, 2});
  DynamicsConfig cfg;
  cfg.iterations = 1;
  const Trajectory traj = run_dynamics(game, cfg);

  const auto specs = make_specs(game, RegularizerKind::NegativeEntropy, 1e-8);
  auto states = omd_init(game, specs, uniform_profile(game));
  const StrategyProfile manual = omd_round(game, specs, cfg.schedule, 1, states);
  CHECK(max_coord_gap(traj.played[0], manual) == 0.0);
}

TEST_CASE("identical configs give bit-identical trajectories") {
  const NormalFormGame mp = matching_pennies();
  DynamicsConfig cfg;
  cfg.iterations = 50;
  cfg.corruption = CorruptionSpec::geometric_decay(0.5, 0.3, 21);
  const Trajectory a = run_dynamics(mp, cfg);
  const Trajectory b = run_dynamics(mp, cfg);
  for (std::size_t t = 0; t < a.length(); ++t) {
    for (std::size_t i = 0; i < 2; ++i) {
      CHECK(a.played[t][i].probs() == b.played[t][i].probs());
      CHECK(a.prescribed[t][i].probs() == b.prescribed[t][i].probs());
    }
  }
}

TEST_CASE("schedule validation") {
  CHECK_THROWS_AS(LearningRateSchedule::constant(2, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(LearningRateSchedule::constant(2, 0.0), std::invalid_argument);
  // an initial rate below the floor would have to increase toward it
  CHECK_THROWS_AS(LearningRateSchedule::inv_sqrt({0.05, 0.05}, {0.1, 0.1}),
                  std::invalid_argument);

  const auto decay = LearningRateSchedule::inv_sqrt({1.0, 1.0}, {0.1, 0.1});
  CHECK(decay.rate(0, 1) == doctest::Approx(1.0));
  CHECK(decay.rate(0, 4) == doctest::Approx(0.5));
  CHECK(decay.rate(0, 400) == doctest::Approx(0.1));  // floored
  double prev = decay.rate(0, 1);
  for (std::size_t t = 2; t <= 200; ++t) {
    CHECK(decay.rate(0, t) <= prev);
    prev = decay.rate(0, t);
  }
}

TEST_CASE("regularized leader rejects decaying schedules") {
  const NormalFormGame mp = matching_pennies();
  DynamicsConfig cfg;
  cfg.algorithm = Algorithm::Oftrl;
  cfg.schedule = LearningRateSchedule::inv_sqrt({1.0, 1.0}, {0.1, 0.1});
  CHECK_THROWS_AS(run_dynamics(mp, cfg), std::invalid_argument);
}

TEST_CASE("matching pennies gap shrinks from a tilted start") {
  const NormalFormGame mp = matching_pennies();
  DynamicsConfig cfg;
  cfg.iterations = 100;
  cfg.initial_profile =
      StrategyProfile{{MixedStrategy({0.9, 0.1}), MixedStrategy::uniform(2)}};
  const Trajectory traj = run_dynamics(mp, cfg);
  const double initial_gap = nash_gap(mp, traj.initial);
  double best = 1e300;
  for (const auto& profile : traj.played) best = std::min(best, nash_gap(mp, profile));
  CHECK(initial_gap == doctest::Approx(0.8));
  CHECK(best < initial_gap);
}

TEST_CASE("run_dynamics validates its inputs") {
  const NormalFormGame mp = matching_pennies();
  DynamicsConfig cfg;
  cfg.iterations = 0;
  CHECK_THROWS_AS(run_dynamics(mp, cfg), std::invalid_argument);

  DynamicsConfig wrong_players;
  wrong_players.schedule = LearningRateSchedule::constant(3, 0.1);
  CHECK_THROWS_AS(run_dynamics(mp, wrong_players), std::invalid_argument);

  DynamicsConfig bad_init;
  bad_init.initial_profile = StrategyProfile{{MixedStrategy::uniform(3), MixedStrategy::uniform(2)}};
  CHECK_THROWS_AS(run_dynamics(mp, bad_init), std::invalid_argument);
}
