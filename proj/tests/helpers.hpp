#pragma once

// Shared random generators for tests: simplex points, games, profiles and
// free-form trajectories.

#include <random>

#include "regretlab/game.hpp"
#include "regretlab/game_classes.hpp"

namespace regretlab::testing {

inline MixedStrategy random_simplex(std::mt19937_64& rng, std::size_t dim) {
  std::exponential_distribution<double> exp_dist(1.0);
  std::vector<double> p(dim);
  double sum = 0.0;
  for (double& v : p) {
    v = exp_dist(rng);
    sum += v;
  }
  for (double& v : p) v /= sum;
  return MixedStrategy(std::move(p));
}

inline StrategyProfile random_profile(std::mt19937_64& rng, const NormalFormGame& game) {
  std::vector<MixedStrategy> xs;
  for (std::size_t c : game.action_counts()) xs.push_back(random_simplex(rng, c));
  return StrategyProfile{std::move(xs)};
}

inline NormalFormGame random_game(std::mt19937_64& rng, std::vector<std::size_t> action_counts) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::size_t joint = 1;
  for (std::size_t c : action_counts) joint *= c;
  std::vector<std::vector<double>> utilities(action_counts.size());
  for (auto& tensor : utilities) {
    tensor.resize(joint);
    for (double& u : tensor) u = unit(rng);
  }
  return NormalFormGame(std::move(action_counts), std::move(utilities));
}

inline Trajectory random_trajectory(std::mt19937_64& rng, const NormalFormGame& game,
                                    std::size_t rounds) {
  std::vector<StrategyProfile> profiles;
  profiles.reserve(rounds);
  for (std::size_t t = 0; t < rounds; ++t) profiles.push_back(random_profile(rng, game));
  return make_trajectory(game, profiles);
}

inline NormalFormGame matching_pennies() {
  return NormalFormGame({2, 2}, {{-1, 1, 1, -1}, {1, -1, -1, 1}});
}

}  // namespace regretlab::testing
