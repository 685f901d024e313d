#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "helpers.hpp"
#include "regretlab/game.hpp"
#include "regretlab/game_io.hpp"

using namespace regretlab;
using testing::matching_pennies;
using testing::random_game;
using testing::random_profile;

namespace {

// Independent oracle: expand the expectation recursively one player at a
// time instead of iterating flattened joint actions.
double brute_force_utility(const NormalFormGame& game, const StrategyProfile& profile,
                           std::size_t player, std::vector<std::size_t>& actions,
                           std::size_t depth) {
  if (depth == game.num_players()) {
    double w = 1.0;
    for (std::size_t j = 0; j < game.num_players(); ++j) w *= profile[j][actions[j]];
    return w * game.utility(player, actions);
  }
  double total = 0.0;
  for (std::size_t a = 0; a < game.action_counts()[depth]; ++a) {
    actions[depth] = a;
    total += brute_force_utility(game, profile, player, actions, depth + 1);
  }
  return total;
}

double brute_force_utility(const NormalFormGame& game, const StrategyProfile& profile,
                           std::size_t player) {
  std::vector<std::size_t> actions(game.num_players(), 0);
  return brute_force_utility(game, profile, player, actions, 0);
}

StrategyProfile pure_profile(const NormalFormGame& game, std::vector<std::size_t> actions) {
  std::vector<MixedStrategy> xs;
  for (std::size_t i = 0; i < game.num_players(); ++i) {
    xs.push_back(MixedStrategy::vertex(game.action_counts()[i], actions[i]));
  }
  return StrategyProfile{std::move(xs)};
}

}  // namespace

TEST_CASE("mixed strategy validation") {
  CHECK_THROWS_AS(MixedStrategy({0.5, 0.6}), std::invalid_argument);     // sums to 1.1
  CHECK_THROWS_AS(MixedStrategy({-0.1, 1.1}), std::invalid_argument);    // negative entry
  CHECK_THROWS_AS(MixedStrategy(std::vector<double>{}), std::invalid_argument);

  // drift within 1e-6 is renormalized
  MixedStrategy drifted({0.5 + 4e-7, 0.5 + 4e-7});
  CHECK(drifted[0] + drifted[1] == doctest::Approx(1.0).epsilon(1e-14));

  MixedStrategy u = MixedStrategy::uniform(4);
  for (std::size_t a = 0; a < 4; ++a) CHECK(u[a] == 0.25);
}

TEST_CASE("matching pennies expected utilities") {
  const NormalFormGame mp = matching_pennies();
  const StrategyProfile uniform = uniform_profile(mp);
  CHECK(expected_utility(mp, uniform, 0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(expected_utility(mp, uniform, 1) == doctest::Approx(0.0).epsilon(1e-15));

  const StrategyProfile heads = pure_profile(mp, {0, 0});
  CHECK(expected_utility(mp, heads, 0) == doctest::Approx(-1.0));
  CHECK(expected_utility(mp, heads, 1) == doctest::Approx(1.0));
}

TEST_CASE("expected utility matches brute force on random 3-player games") {
  std::mt19937_64 rng(7);
  for (int round = 0; round < 25; ++round) {
    const NormalFormGame game = random_game(rng, {2, 2, 2});
    const StrategyProfile profile = random_profile(rng, game);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(expected_utility(game, profile, i) ==
            doctest::Approx(brute_force_utility(game, profile, i)).epsilon(1e-12));
    }
  }
}

TEST_CASE("payoff field of matching pennies") {
  const NormalFormGame mp = matching_pennies();

  StrategyProfile vs_uniform{{MixedStrategy::vertex(2, 0), MixedStrategy::uniform(2)}};
  const PayoffVector zero_field = payoff_field(mp, vs_uniform, 0);
  CHECK(zero_field[0] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(zero_field[1] == doctest::Approx(0.0).epsilon(1e-15));

  StrategyProfile vs_heads{{MixedStrategy::uniform(2), MixedStrategy::vertex(2, 0)}};
  const PayoffVector column = payoff_field(mp, vs_heads, 0);
  CHECK(column[0] == doctest::Approx(-1.0));
  CHECK(column[1] == doctest::Approx(1.0));
}

TEST_CASE("payoff field equals matrix-vector product for 2-player games") {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 25; ++round) {
    const NormalFormGame game = random_game(rng, {3, 3});
    const StrategyProfile profile = random_profile(rng, game);
    const PayoffVector v = payoff_field(game, profile, 0);
    for (std::size_t a = 0; a < 3; ++a) {
      double expect = 0.0;
      for (std::size_t b = 0; b < 3; ++b) {
        expect += game.utility(0, std::vector<std::size_t>{a, b}) * profile[1][b];
      }
      CHECK(v[a] == doctest::Approx(expect).epsilon(1e-12));
    }
  }
}

TEST_CASE("payoff field pairs with the strategy to give expected utility") {
  std::mt19937_64 rng(13);
  for (int round = 0; round < 40; ++round) {
    const NormalFormGame game = random_game(rng, {2, 3, 2});
    const StrategyProfile profile = random_profile(rng, game);
    for (std::size_t i = 0; i < game.num_players(); ++i) {
      const PayoffVector v = payoff_field(game, profile, i);
      double inner = 0.0;
      for (std::size_t a = 0; a < v.size(); ++a) inner += v[a] * profile[i][a];
      CHECK(std::abs(inner - expected_utility(game, profile, i)) <= 1e-12);
    }
  }
}

TEST_CASE("payoff field is affine in each opponent's strategy") {
  std::mt19937_64 rng(17);
  const NormalFormGame game = random_game(rng, {2, 3, 2});
  for (int round = 0; round < 10; ++round) {
    const StrategyProfile base = random_profile(rng, game);
    const MixedStrategy y0 = testing::random_simplex(rng, 3);
    const MixedStrategy y1 = testing::random_simplex(rng, 3);
    auto with_opponent = [&](const MixedStrategy& y) {
      StrategyProfile p = base;
      p.strategies[1] = y;
      return payoff_field(game, p, 0);
    };
    // value at the midpoint must be the midpoint of the endpoint values
    std::vector<double> mid(3);
    for (std::size_t a = 0; a < 3; ++a) mid[a] = 0.5 * (y0[a] + y1[a]);
    StrategyProfile p = base;
    p.strategies[1] = MixedStrategy(mid);
    const PayoffVector at_mid = payoff_field(game, p, 0);
    const PayoffVector at_y0 = with_opponent(y0);
    const PayoffVector at_y1 = with_opponent(y1);
    for (std::size_t a = 0; a < 2; ++a) {
      CHECK(at_mid[a] == doctest::Approx(0.5 * (at_y0[a] + at_y1[a])).epsilon(1e-12));
    }
  }
}

TEST_CASE("nash gap on matching pennies") {
  const NormalFormGame mp = matching_pennies();
  CHECK(nash_gap(mp, uniform_profile(mp)) == doctest::Approx(0.0).epsilon(1e-15));
  // deviating from (heads, heads) gains 1 - (-1) = 2 for player 1
  CHECK(nash_gap(mp, pure_profile(mp, {0, 0})) == doctest::Approx(2.0));
}

TEST_CASE("nash gap is nonnegative and certifies itself") {
  std::mt19937_64 rng(19);
  for (int round = 0; round < 40; ++round) {
    const NormalFormGame game = random_game(rng, {2, 2, 3});
    const StrategyProfile profile = random_profile(rng, game);
    const double gap = nash_gap(game, profile);
    CHECK(gap >= 0.0);
    CHECK(is_eps_nash(game, profile, gap));
  }
}

TEST_CASE("eps-nash thresholds") {
  const NormalFormGame mp = matching_pennies();
  CHECK(is_eps_nash(mp, uniform_profile(mp), 0.0));
  CHECK_FALSE(is_eps_nash(mp, pure_profile(mp, {0, 0}), 1.0));
  CHECK(is_eps_nash(mp, pure_profile(mp, {0, 0}), 2.0));
  CHECK_THROWS_AS(is_eps_nash(mp, uniform_profile(mp), -0.5), std::invalid_argument);
}

TEST_CASE("payoff change is bounded by opponents' l1 movement") {
  std::mt19937_64 rng(23);
  for (int round = 0; round < 60; ++round) {
    const NormalFormGame game = random_game(rng, {2, 3, 2});
    const StrategyProfile a = random_profile(rng, game);
    const StrategyProfile b = random_profile(rng, game);
    for (std::size_t i = 0; i < game.num_players(); ++i) {
      const PayoffVector va = payoff_field(game, a, i);
      const PayoffVector vb = payoff_field(game, b, i);
      double lhs = 0.0;
      for (std::size_t k = 0; k < va.size(); ++k) lhs = std::max(lhs, std::abs(va[k] - vb[k]));
      double rhs = 0.0;
      for (std::size_t j = 0; j < game.num_players(); ++j) {
        if (j != i) rhs += l1_distance(a[j].probs(), b[j].probs());
      }
      CHECK(lhs <= rhs + 1e-12);
    }
  }
}

TEST_CASE("normalize_game") {
  const NormalFormGame mp = matching_pennies();
  const NormalFormGame same = normalize_game(mp);
  CHECK(same.utilities() == mp.utilities());

  // a two-point range {0, 10} maps onto {-1, 1}
  const NormalFormGame wide({2, 2}, {{0, 10, 0, 10}, {0, 0, 0, 0}});
  const NormalFormGame scaled = normalize_game(wide);
  CHECK(scaled.utilities()[0] == std::vector<double>{-1, 1, -1, 1});
  CHECK(scaled.utilities()[1] == std::vector<double>{0, 0, 0, 0});
  CHECK(scaled.entries_in_unit_range());

  CHECK_THROWS_AS(NormalFormGame({2, 2}, {{0, 1, 2, std::nan("")}, {0, 0, 0, 0}}),
                  std::invalid_argument);
}

TEST_CASE("normalization preserves best responses") {
  std::mt19937_64 rng(29);
  for (int round = 0; round < 20; ++round) {
    NormalFormGame game = random_game(rng, {3, 3});
    // stretch utilities out of range per player
    std::vector<std::vector<double>> stretched = game.utilities();
    for (std::size_t i = 0; i < stretched.size(); ++i) {
      for (double& u : stretched[i]) u = u * (5.0 + static_cast<double>(i)) + 2.0;
    }
    const NormalFormGame wide(game.action_counts(), stretched);
    const NormalFormGame scaled = normalize_game(wide);
    const StrategyProfile profile = random_profile(rng, game);
    for (std::size_t i = 0; i < 2; ++i) {
      const PayoffVector before = payoff_field(wide, profile, i);
      const PayoffVector after = payoff_field(scaled, profile, i);
      std::size_t argmax_before = 0, argmax_after = 0;
      for (std::size_t a = 1; a < before.size(); ++a) {
        if (before[a] > before[argmax_before]) argmax_before = a;
        if (after[a] > after[argmax_after]) argmax_after = a;
      }
      CHECK(argmax_before == argmax_after);
    }
  }
}

TEST_CASE("dimension mismatches raise structured errors") {
  const NormalFormGame mp = matching_pennies();
  StrategyProfile bad{{MixedStrategy::uniform(3), MixedStrategy::uniform(2)}};
  CHECK_THROWS_WITH_AS(expected_utility(mp, bad, 0),
                       "player 0 strategy has dimension 3, expected 2", std::invalid_argument);
  CHECK_THROWS_AS(NormalFormGame({2, 2}, {{1, 2, 3}, {0, 0, 0, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(NormalFormGame({2}, {{1, 2}}), std::invalid_argument);
}

TEST_CASE("game json round-trip is bit identical") {
  std::mt19937_64 rng(31);
  const NormalFormGame game = random_game(rng, {2, 3});
  const nlohmann::json j = game_to_json(game);
  const std::string text = j.dump();
  const NormalFormGame parsed = game_from_json(nlohmann::json::parse(text));
  REQUIRE(parsed.action_counts() == game.action_counts());
  for (std::size_t i = 0; i < game.num_players(); ++i) {
    for (std::size_t k = 0; k < game.num_joint_actions(); ++k) {
      CHECK(parsed.utilities()[i][k] == game.utilities()[i][k]);  // exact
    }
  }
  CHECK(game_to_json(parsed).dump() == text);
}

TEST_CASE("game json rejects inconsistent headers") {
  nlohmann::json j;
  j["players"] = 3;
  j["actions"] = {2, 2};
  j["utilities"] = {{0, 0, 0, 0}, {0, 0, 0, 0}};
  CHECK_THROWS_AS(game_from_json(j), std::invalid_argument);
  CHECK_THROWS_AS(game_from_json(nlohmann::json::object()), std::invalid_argument);
}

TEST_CASE("mixed radix joint indexing puts player 1 most significant") {
  const NormalFormGame game({2, 3}, {std::vector<double>(6, 0.0), std::vector<double>(6, 0.0)});
  CHECK(game.joint_index(std::vector<std::size_t>{0, 0}) == 0);
  CHECK(game.joint_index(std::vector<std::size_t>{0, 2}) == 2);
  CHECK(game.joint_index(std::vector<std::size_t>{1, 0}) == 3);
  CHECK(game.joint_actions(5) == std::vector<std::size_t>{1, 2});
}
