#pragma once

// Finite normal-form games over dense per-player utility tensors, with
// expected utilities, payoff fields and Nash-gap measurement.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace regretlab {

// Probability vector over one player's actions. Construction validates
// non-negativity and renormalizes when the sum is within 1e-6 of one;
// anything further off is rejected as a real bug rather than float drift.
class MixedStrategy {
 public:
  explicit MixedStrategy(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.empty()) throw std::invalid_argument("MixedStrategy: empty probability vector");
    double sum = 0.0;
    for (double p : probs_) {
      if (!std::isfinite(p)) throw std::invalid_argument("MixedStrategy: non-finite entry");
      if (p < 0.0) {
        throw std::invalid_argument("MixedStrategy: negative entry " + std::to_string(p));
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-6) {
      throw std::invalid_argument("MixedStrategy: entries sum to " + std::to_string(sum) +
                                  ", expected 1 within 1e-6");
    }
    if (sum != 1.0) {
      for (double& p : probs_) p /= sum;
    }
  }

  static MixedStrategy uniform(std::size_t dim) {
    return MixedStrategy(std::vector<double>(dim, 1.0 / static_cast<double>(dim)));
  }

  static MixedStrategy vertex(std::size_t dim, std::size_t action) {
    std::vector<double> p(dim, 0.0);
    p.at(action) = 1.0;
    return MixedStrategy(std::move(p));
  }

  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t a) const { return probs_[a]; }
  const std::vector<double>& probs() const { return probs_; }

 private:
  std::vector<double> probs_;
};

// One mixed strategy per player.
struct StrategyProfile {
  std::vector<MixedStrategy> strategies;

  std::size_t num_players() const { return strategies.size(); }
  const MixedStrategy& operator[](std::size_t i) const { return strategies[i]; }
};

// Expected utility of each pure action of one player against the
// opponents' mixed strategies.
struct PayoffVector {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t a) const { return values[a]; }
};

inline double l1_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d += std::abs(a[k] - b[k]);
  return d;
}

inline double linf_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a[k] - b[k]));
  return d;
}

// n-player game with a dense utility tensor per player. Joint actions are
// flattened mixed-radix with player 1's action as the most significant
// digit; utilities[i][joint_index(a)] = u_i(a).
class NormalFormGame {
 public:
  NormalFormGame(std::vector<std::size_t> action_counts,
                 std::vector<std::vector<double>> utilities)
      : action_counts_(std::move(action_counts)), utilities_(std::move(utilities)) {
    if (action_counts_.size() < 2) {
      throw std::invalid_argument("NormalFormGame: need at least 2 players, got " +
                                  std::to_string(action_counts_.size()));
    }
    for (std::size_t c : action_counts_) {
      if (c == 0) throw std::invalid_argument("NormalFormGame: zero action count");
    }
    if (utilities_.size() != action_counts_.size()) {
      throw std::invalid_argument("NormalFormGame: " + std::to_string(utilities_.size()) +
                                  " utility tensors for " + std::to_string(action_counts_.size()) +
                                  " players");
    }
    const std::size_t joint = num_joint_actions();
    for (std::size_t i = 0; i < utilities_.size(); ++i) {
      if (utilities_[i].size() != joint) {
        throw std::invalid_argument("NormalFormGame: player " + std::to_string(i) + " tensor has " +
                                    std::to_string(utilities_[i].size()) + " entries, expected " +
                                    std::to_string(joint));
      }
      for (double u : utilities_[i]) {
        if (!std::isfinite(u)) {
          throw std::invalid_argument("NormalFormGame: non-finite utility for player " +
                                      std::to_string(i));
        }
      }
    }
  }

  std::size_t num_players() const { return action_counts_.size(); }
  const std::vector<std::size_t>& action_counts() const { return action_counts_; }
  const std::vector<std::vector<double>>& utilities() const { return utilities_; }

  std::size_t num_joint_actions() const {
    std::size_t n = 1;
    for (std::size_t c : action_counts_) n *= c;
    return n;
  }

  std::size_t joint_index(std::span<const std::size_t> actions) const {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < action_counts_.size(); ++i) {
      idx = idx * action_counts_[i] + actions[i];
    }
    return idx;
  }

  std::vector<std::size_t> joint_actions(std::size_t index) const {
    std::vector<std::size_t> a(action_counts_.size());
    for (std::size_t i = action_counts_.size(); i-- > 0;) {
      a[i] = index % action_counts_[i];
      index /= action_counts_[i];
    }
    return a;
  }

  double utility(std::size_t player, std::span<const std::size_t> actions) const {
    return utilities_[player][joint_index(actions)];
  }

  double utility_flat(std::size_t player, std::size_t joint) const {
    return utilities_[player][joint];
  }

  bool entries_in_unit_range() const {
    for (const auto& tensor : utilities_) {
      for (double u : tensor) {
        if (u < -1.0 || u > 1.0) return false;
      }
    }
    return true;
  }

  void check_profile(const StrategyProfile& profile) const {
    if (profile.num_players() != num_players()) {
      throw std::invalid_argument("profile has " + std::to_string(profile.num_players()) +
                                  " players, game has " + std::to_string(num_players()));
    }
    for (std::size_t i = 0; i < num_players(); ++i) {
      if (profile[i].size() != action_counts_[i]) {
        throw std::invalid_argument("player " + std::to_string(i) + " strategy has dimension " +
                                    std::to_string(profile[i].size()) + ", expected " +
                                    std::to_string(action_counts_[i]));
      }
    }
  }

 private:
  std::vector<std::size_t> action_counts_;
  std::vector<std::vector<double>> utilities_;
};

inline StrategyProfile uniform_profile(const NormalFormGame& game) {
  std::vector<MixedStrategy> s;
  s.reserve(game.num_players());
  for (std::size_t c : game.action_counts()) s.push_back(MixedStrategy::uniform(c));
  return StrategyProfile{std::move(s)};
}

// Sum over joint actions of u_i(a) * prod_j x_j(a_j).
inline double expected_utility(const NormalFormGame& game, const StrategyProfile& profile,
                               std::size_t player) {
  game.check_profile(profile);
  const std::size_t joint = game.num_joint_actions();
  double total = 0.0;
  std::vector<std::size_t> a(game.num_players(), 0);
  for (std::size_t idx = 0; idx < joint; ++idx) {
    double w = 1.0;
    for (std::size_t j = 0; j < game.num_players(); ++j) w *= profile[j][a[j]];
    total += w * game.utility_flat(player, idx);
    // odometer increment, last player is least significant
    for (std::size_t j = game.num_players(); j-- > 0;) {
      if (++a[j] < game.action_counts()[j]) break;
      a[j] = 0;
    }
  }
  return total;
}

// Component a_i is the expectation of u_i(a_i, .) over the opponents'
// strategies, so that <payoff_field, x_i> = expected_utility.
inline PayoffVector payoff_field(const NormalFormGame& game, const StrategyProfile& profile,
                                 std::size_t player) {
  game.check_profile(profile);
  std::vector<double> v(game.action_counts()[player], 0.0);
  const std::size_t joint = game.num_joint_actions();
  std::vector<std::size_t> a(game.num_players(), 0);
  for (std::size_t idx = 0; idx < joint; ++idx) {
    double w = 1.0;
    for (std::size_t j = 0; j < game.num_players(); ++j) {
      if (j != player) w *= profile[j][a[j]];
    }
    v[a[player]] += w * game.utility_flat(player, idx);
    for (std::size_t j = game.num_players(); j-- > 0;) {
      if (++a[j] < game.action_counts()[j]) break;
      a[j] = 0;
    }
  }
  return PayoffVector{std::move(v)};
}

inline std::vector<PayoffVector> payoff_fields(const NormalFormGame& game,
                                               const StrategyProfile& profile) {
  std::vector<PayoffVector> out;
  out.reserve(game.num_players());
  for (std::size_t i = 0; i < game.num_players(); ++i) out.push_back(payoff_field(game, profile, i));
  return out;
}

// Largest unilateral improvement over all players: zero exactly at a Nash
// equilibrium. Ties between best responses do not affect the value.
inline double nash_gap(const NormalFormGame& game, const StrategyProfile& profile) {
  game.check_profile(profile);
  double gap = 0.0;
  for (std::size_t i = 0; i < game.num_players(); ++i) {
    const PayoffVector v = payoff_field(game, profile, i);
    double best = v[0];
    double current = 0.0;
    for (std::size_t a = 0; a < v.size(); ++a) {
      best = std::max(best, v[a]);
      current += v[a] * profile[i][a];
    }
    gap = std::max(gap, best - current);
  }
  return gap;
}

inline bool is_eps_nash(const NormalFormGame& game, const StrategyProfile& profile, double eps) {
  if (eps < 0.0) throw std::invalid_argument("is_eps_nash: eps must be >= 0, got " + std::to_string(eps));
  return nash_gap(game, profile) <= eps + 1e-12;
}

// Per-player affine rescale into [-1, 1]: shift by the midpoint of that
// player's utility range and divide by the half-range. A player already
// inside the range is left untouched, so best-response structure and
// already-normalized games are preserved exactly.
inline NormalFormGame normalize_game(const NormalFormGame& game) {
  std::vector<std::vector<double>> scaled = game.utilities();
  for (auto& tensor : scaled) {
    double lo = tensor[0], hi = tensor[0];
    for (double u : tensor) {
      lo = std::min(lo, u);
      hi = std::max(hi, u);
    }
    if (lo >= -1.0 && hi <= 1.0) continue;
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    if (half == 0.0) {
      for (double& u : tensor) u = 0.0;
    } else {
      for (double& u : tensor) u = (u - mid) / half;
    }
  }
  return NormalFormGame(game.action_counts(), std::move(scaled));
}

}  // namespace regretlab
