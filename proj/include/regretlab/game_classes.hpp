#pragma once

// Game-class certificates (harmonic, constant-sum) and regret accounting
// over recorded trajectories.
//
// A game is harmonic for strictly positive per-action weights mu when, at
// every joint pure action, the weighted sum over players and deviation
// targets of the utility change from deviating vanishes. Such games have
// non-negative weighted regret for m_i = sum of player i's weights, which
// is what the dynamics-side bound checks rely on.

#include <cstdint>
#include <optional>
#include <random>

#include "regretlab/game.hpp"
#include "regretlab/linalg.hpp"

namespace regretlab {

// Per-player, per-action weights; strictly positive.
struct HarmonicWeights {
  std::vector<std::vector<double>> mu;

  void validate(const std::vector<std::size_t>& action_counts) const {
    if (mu.size() != action_counts.size()) {
      throw std::invalid_argument("HarmonicWeights: " + std::to_string(mu.size()) +
                                  " weight vectors for " + std::to_string(action_counts.size()) +
                                  " players");
    }
    for (std::size_t i = 0; i < mu.size(); ++i) {
      if (mu[i].size() != action_counts[i]) {
        throw std::invalid_argument("HarmonicWeights: player " + std::to_string(i) + " has " +
                                    std::to_string(mu[i].size()) + " weights, expected " +
                                    std::to_string(action_counts[i]));
      }
      for (double w : mu[i]) {
        if (!(w > 0.0) || !std::isfinite(w)) {
          throw std::invalid_argument("HarmonicWeights: weights must be strictly positive");
        }
      }
    }
  }
};

// Per-player regret weights m_i > 0.
struct RegretWeights {
  std::vector<double> m;

  void validate(std::size_t num_players) const {
    if (m.size() != num_players) {
      throw std::invalid_argument("RegretWeights: " + std::to_string(m.size()) + " weights for " +
                                  std::to_string(num_players) + " players");
    }
    for (double w : m) {
      if (!(w > 0.0) || !std::isfinite(w)) {
        throw std::invalid_argument("RegretWeights: weights must be strictly positive");
      }
    }
  }

  double min() const {
    double v = m[0];
    for (double w : m) v = std::min(v, w);
    return v;
  }
  double max() const {
    double v = m[0];
    for (double w : m) v = std::max(v, w);
    return v;
  }

  static RegretWeights uniform(std::size_t num_players) {
    return RegretWeights{std::vector<double>(num_players, 1.0)};
  }
};

// Ordered record of a run: prescribed and played profiles, observed payoff
// fields at the played profiles, and (for mirror-descent runs) the anchor
// sequence. anchors, when present, holds g^0..g^T; the per-round lists
// hold rounds 1..T.
struct Trajectory {
  StrategyProfile initial;                       // x^0
  std::vector<PayoffVector> initial_payoffs;     // v^0, observed at x^0
  std::vector<StrategyProfile> prescribed;       // round t  ->  index t-1
  std::vector<StrategyProfile> played;
  std::vector<std::vector<PayoffVector>> payoffs;
  std::vector<StrategyProfile> anchors;          // g^0..g^T, empty when not applicable
  std::vector<std::vector<double>> corruption_l1;  // per round, per player
  std::vector<double> corruption_total;            // C_i
  std::vector<double> corruption_sup;              // M_i

  std::size_t length() const { return played.size(); }
  std::size_t num_players() const { return initial.num_players(); }
  bool has_anchors() const { return !anchors.empty(); }
  bool corrupted() const {
    for (double c : corruption_total) {
      if (c > 0.0) return true;
    }
    return false;
  }
};

// Builds a trajectory from an explicit profile sequence (played =
// prescribed, no corruption); payoffs are evaluated per round.
inline Trajectory make_trajectory(const NormalFormGame& game,
                                  std::vector<StrategyProfile> profiles) {
  if (profiles.empty()) throw std::invalid_argument("make_trajectory: empty profile sequence");
  Trajectory traj;
  traj.initial = uniform_profile(game);
  traj.initial_payoffs = payoff_fields(game, traj.initial);
  traj.prescribed = profiles;
  traj.played = std::move(profiles);
  traj.payoffs.reserve(traj.played.size());
  for (const auto& p : traj.played) traj.payoffs.push_back(payoff_fields(game, p));
  traj.corruption_l1.assign(traj.played.size(), std::vector<double>(game.num_players(), 0.0));
  traj.corruption_total.assign(game.num_players(), 0.0);
  traj.corruption_sup.assign(game.num_players(), 0.0);
  return traj;
}

// Max over joint pure actions of |sum_i sum_{b_i} mu_{i,b_i} (u_i(a) -
// u_i(b_i, a_{-i}))|; zero (within tolerance) iff the game is harmonic
// with these weights. The weight is indexed by the deviation target.
inline double harmonic_residual(const NormalFormGame& game, const HarmonicWeights& weights) {
  weights.validate(game.action_counts());
  const std::size_t joint = game.num_joint_actions();
  double worst = 0.0;
  for (std::size_t idx = 0; idx < joint; ++idx) {
    std::vector<std::size_t> a = game.joint_actions(idx);
    double lhs = 0.0;
    for (std::size_t i = 0; i < game.num_players(); ++i) {
      const double u_a = game.utility_flat(i, idx);
      std::vector<std::size_t> dev = a;
      for (std::size_t b = 0; b < game.action_counts()[i]; ++b) {
        dev[i] = b;
        lhs += weights.mu[i][b] * (u_a - game.utility(i, dev));
      }
    }
    worst = std::max(worst, std::abs(lhs));
  }
  return worst;
}

namespace detail {

// Unknowns of the harmonic system are the concatenated per-player weight
// vectors; one equation per joint pure action.
inline linalg::Matrix harmonic_weight_system(const NormalFormGame& game) {
  std::vector<std::size_t> offset(game.num_players() + 1, 0);
  for (std::size_t i = 0; i < game.num_players(); ++i) {
    offset[i + 1] = offset[i] + game.action_counts()[i];
  }
  const std::size_t unknowns = offset.back();
  const std::size_t joint = game.num_joint_actions();
  linalg::Matrix system(joint, std::vector<double>(unknowns, 0.0));
  for (std::size_t idx = 0; idx < joint; ++idx) {
    std::vector<std::size_t> a = game.joint_actions(idx);
    for (std::size_t i = 0; i < game.num_players(); ++i) {
      const double u_a = game.utility_flat(i, idx);
      std::vector<std::size_t> dev = a;
      for (std::size_t b = 0; b < game.action_counts()[i]; ++b) {
        dev[i] = b;
        system[idx][offset[i] + b] += u_a - game.utility(i, dev);
      }
    }
  }
  return system;
}

inline bool strictly_positive(const std::vector<double>& v) {
  double peak = 0.0;
  for (double x : v) peak = std::max(peak, std::abs(x));
  if (peak == 0.0) return false;
  for (double x : v) {
    if (x <= 1e-10 * peak) return false;
  }
  return true;
}

}  // namespace detail

// Searches the nullspace of the harmonic weight system for a strictly
// positive solution. Candidates are each elimination basis vector, its
// negation, and the uniform combination of the basis; a hit is normalized
// so its smallest entry is 1 and verified against harmonic_residual.
// Absence is best effort: a returned value is always a certificate, a
// nullopt means no candidate in the computed basis was positive.
inline std::optional<HarmonicWeights> solve_harmonic_weights(const NormalFormGame& game) {
  const linalg::Matrix system = detail::harmonic_weight_system(game);
  const linalg::Matrix basis = linalg::nullspace_basis(system, 1e-10);
  if (basis.empty()) return std::nullopt;

  std::vector<std::vector<double>> candidates;
  for (const auto& v : basis) {
    candidates.push_back(v);
    std::vector<double> neg(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) neg[i] = -v[i];
    candidates.push_back(std::move(neg));
  }
  std::vector<double> combo(basis[0].size(), 0.0);
  for (const auto& v : basis) {
    for (std::size_t i = 0; i < v.size(); ++i) combo[i] += v[i];
  }
  candidates.push_back(combo);
  for (double& x : combo) x = -x;
  candidates.push_back(std::move(combo));

  for (auto& cand : candidates) {
    if (!detail::strictly_positive(cand)) continue;
    double lo = cand[0];
    for (double x : cand) lo = std::min(lo, x);
    for (double& x : cand) x /= lo;

    HarmonicWeights weights;
    std::size_t pos = 0;
    for (std::size_t c : game.action_counts()) {
      weights.mu.emplace_back(cand.begin() + pos, cand.begin() + pos + c);
      pos += c;
    }
    if (harmonic_residual(game, weights) <= 1e-9) return weights;
  }
  return std::nullopt;
}

// Generates a game harmonic for the given weights: a seeded random utility
// vector is projected onto the solution subspace of the (linear in u)
// harmonic condition, recentered per player, and scaled by a single global
// factor into [-1, 1]. Per-player shifts cancel inside utility differences
// and a shared scale preserves the zero residual.
inline NormalFormGame make_harmonic_game(const HarmonicWeights& weights,
                                         const std::vector<std::size_t>& action_counts,
                                         std::uint64_t seed) {
  weights.validate(action_counts);
  const std::size_t n = action_counts.size();
  std::size_t joint = 1;
  for (std::size_t c : action_counts) joint *= c;
  const NormalFormGame shape(action_counts,
                             std::vector<std::vector<double>>(n, std::vector<double>(joint, 0.0)));
  const std::size_t total = n * joint;

  // Constraint rows over the concatenated utility unknowns.
  linalg::Matrix constraints(joint, std::vector<double>(total, 0.0));
  for (std::size_t idx = 0; idx < joint; ++idx) {
    std::vector<std::size_t> a = shape.joint_actions(idx);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<std::size_t> dev = a;
      for (std::size_t b = 0; b < action_counts[i]; ++b) {
        dev[i] = b;
        constraints[idx][i * joint + idx] += weights.mu[i][b];
        constraints[idx][i * joint + shape.joint_index(dev)] -= weights.mu[i][b];
      }
    }
  }
  const linalg::Matrix q = linalg::orthonormal_rows(constraints, 1e-10);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> u(total);
  for (int attempt = 0; attempt < 16; ++attempt) {
    for (double& x : u) x = gauss(rng);
    u = linalg::project_out(std::move(u), q);
    double peak = 0.0;
    for (double x : u) peak = std::max(peak, std::abs(x));
    if (peak > 1e-6) break;
  }

  std::vector<std::vector<double>> utilities(n, std::vector<double>(joint));
  for (std::size_t i = 0; i < n; ++i) {
    double lo = u[i * joint], hi = u[i * joint];
    for (std::size_t k = 0; k < joint; ++k) {
      lo = std::min(lo, u[i * joint + k]);
      hi = std::max(hi, u[i * joint + k]);
    }
    const double mid = 0.5 * (lo + hi);
    for (std::size_t k = 0; k < joint; ++k) utilities[i][k] = u[i * joint + k] - mid;
  }
  double half = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (double x : utilities[i]) half = std::max(half, std::abs(x));
  }
  if (half > 0.0) {
    for (auto& tensor : utilities) {
      for (double& x : tensor) x /= half;
    }
  }
  return NormalFormGame(action_counts, std::move(utilities));
}

// m_i is the sum of player i's weights; the reference profile plays each
// action with probability mu_{i,a}/m_i.
struct HarmonicRegretWeights {
  RegretWeights m;
  StrategyProfile reference;
};

inline HarmonicRegretWeights regret_weights_from_harmonic(const HarmonicWeights& weights) {
  HarmonicRegretWeights out;
  for (const auto& mu_i : weights.mu) {
    if (mu_i.empty()) throw std::invalid_argument("regret_weights_from_harmonic: empty weights");
    double m_i = 0.0;
    for (double w : mu_i) {
      if (!(w > 0.0)) throw std::invalid_argument("regret_weights_from_harmonic: weights must be positive");
      m_i += w;
    }
    out.m.m.push_back(m_i);
    std::vector<double> probs(mu_i.size());
    for (std::size_t a = 0; a < mu_i.size(); ++a) probs[a] = mu_i[a] / m_i;
    out.reference.strategies.emplace_back(std::move(probs));
  }
  return out;
}

// Cumulative best-fixed-action shortfall over the first `rounds` entries
// (the maximum of a linear functional over the simplex sits at a vertex).
inline double regret(const Trajectory& trajectory, std::size_t player, std::size_t rounds) {
  if (trajectory.length() == 0) throw std::invalid_argument("regret: empty trajectory");
  if (rounds == 0 || rounds > trajectory.length()) {
    throw std::invalid_argument("regret: prefix " + std::to_string(rounds) +
                                " out of range for T = " + std::to_string(trajectory.length()));
  }
  const std::size_t dim = trajectory.payoffs[0][player].size();
  std::vector<double> action_sum(dim, 0.0);
  double score = 0.0;
  for (std::size_t t = 0; t < rounds; ++t) {
    const PayoffVector& v = trajectory.payoffs[t][player];
    const MixedStrategy& x = trajectory.played[t][player];
    for (std::size_t a = 0; a < dim; ++a) {
      action_sum[a] += v[a];
      score += x[a] * v[a];
    }
  }
  double best = action_sum[0];
  for (double s : action_sum) best = std::max(best, s);
  return best - score;
}

inline double regret(const Trajectory& trajectory, std::size_t player) {
  return regret(trajectory, player, trajectory.length());
}

struct WeightedRegret {
  std::vector<double> per_player;
  double total = 0.0;
};

// mReg_i = m_i * Reg_i; the sign of the total is the non-negative-weighted-
// regret certificate.
inline WeightedRegret weighted_regret(const Trajectory& trajectory, const RegretWeights& weights) {
  weights.validate(trajectory.num_players());
  WeightedRegret out;
  for (std::size_t i = 0; i < trajectory.num_players(); ++i) {
    out.per_player.push_back(weights.m[i] * regret(trajectory, i));
    out.total += out.per_player.back();
  }
  return out;
}

// Returns the shared sum c when sum_i u_i(a) = c at every joint action
// (within 1e-12), nullopt otherwise. Zero-sum means c = 0.
inline std::optional<double> is_constant_sum(const NormalFormGame& game) {
  const std::size_t joint = game.num_joint_actions();
  double c = 0.0;
  for (std::size_t i = 0; i < game.num_players(); ++i) c += game.utility_flat(i, 0);
  for (std::size_t idx = 1; idx < joint; ++idx) {
    double s = 0.0;
    for (std::size_t i = 0; i < game.num_players(); ++i) s += game.utility_flat(i, idx);
    if (std::abs(s - c) > 1e-12) return std::nullopt;
  }
  return c;
}

}  // namespace regretlab
