#pragma once

// Post-hoc certificates over recorded trajectories: regret bounds driven
// by payoff variation, path-length budgets, payoff Lipschitz slack,
// best-iterate extraction and convergence detection.
//
// All checks are pure functions of an immutable trajectory plus the specs
// and schedule that produced it, so they can run concurrently across
// trajectories. Anchor-based checks require a mirror-descent trajectory;
// they raise when anchors were not recorded.

#include <limits>
#include <string>

#include "regretlab/dynamics.hpp"

namespace regretlab {

struct BoundCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
  bool skipped = false;
  std::string skip_reason;
};

namespace detail {

inline void require_anchors(const Trajectory& traj, const char* what) {
  if (!traj.has_anchors()) {
    throw std::runtime_error(std::string(what) +
                             ": trajectory has no recorded anchors (not a mirror-descent run)");
  }
}

inline const PayoffVector& payoff_at(const Trajectory& traj, std::size_t round,
                                     std::size_t player) {
  return round == 0 ? traj.initial_payoffs[player] : traj.payoffs[round - 1][player];
}

inline const StrategyProfile& played_at(const Trajectory& traj, std::size_t round) {
  return round == 0 ? traj.initial : traj.played[round - 1];
}

}  // namespace detail

// Regret bound by variation in utilities, per player and prefix:
//   Reg_i^T <= Rbar_i/eta_i^T + sum_t eta_i^t |v^t - v^{t-1}|_*^2
//              - (1/4) sum_t (1/eta_i^t) (|g^t - x~^t|^2 + |x~^t - g^{t-1}|^2)
//              + sum_t |c_i^t|_1
// in the regularizer's paired norms; the deviation term vanishes on clean
// runs.
inline BoundCheck rvu_bound_check(const Trajectory& traj, const std::vector<RegularizerSpec>& specs,
                                  const LearningRateSchedule& schedule, std::size_t player,
                                  std::size_t rounds) {
  detail::require_anchors(traj, "rvu_bound_check");
  if (rounds == 0 || rounds > traj.length()) {
    throw std::invalid_argument("rvu_bound_check: prefix out of range");
  }
  const RegularizerSpec& spec = specs[player];
  double variation = 0.0;
  double path = 0.0;
  double deviation = 0.0;
  for (std::size_t t = 1; t <= rounds; ++t) {
    const double eta_t = schedule.rate(player, t);
    std::vector<double> dv(spec.dimension());
    const PayoffVector& now = detail::payoff_at(traj, t, player);
    const PayoffVector& before = detail::payoff_at(traj, t - 1, player);
    for (std::size_t a = 0; a < dv.size(); ++a) dv[a] = now[a] - before[a];
    const double dual = spec.dual_norm(dv);
    variation += eta_t * dual * dual;

    std::vector<double> to_anchor(spec.dimension());
    std::vector<double> to_prev_anchor(spec.dimension());
    const MixedStrategy& prescribed = traj.prescribed[t - 1][player];
    for (std::size_t a = 0; a < spec.dimension(); ++a) {
      to_anchor[a] = traj.anchors[t][player][a] - prescribed[a];
      to_prev_anchor[a] = prescribed[a] - traj.anchors[t - 1][player][a];
    }
    const double d1 = spec.primal_norm(to_anchor);
    const double d2 = spec.primal_norm(to_prev_anchor);
    path += (d1 * d1 + d2 * d2) / eta_t;
    deviation += traj.corruption_l1[t - 1][player];
  }
  BoundCheck check;
  check.lhs = regret(traj, player, rounds);
  check.rhs = spec.divergence_bound() / schedule.rate(player, rounds) + variation - 0.25 * path +
              deviation;
  check.holds = check.lhs <= check.rhs + 1e-6;
  return check;
}

// Worst slack of |v_i^t - v_i^{t-1}|_inf <= sum_{j != i} |x_j^t - x_j^{t-1}|_1
// over all consecutive played pairs (the initial profile included) and all
// players; non-negative iff the inequality held throughout.
inline double payoff_lipschitz_check(const Trajectory& traj) {
  if (traj.length() < 2) {
    throw std::invalid_argument("payoff_lipschitz_check: need at least 2 rounds");
  }
  const std::size_t n = traj.num_players();
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t t = 1; t <= traj.length(); ++t) {
    const StrategyProfile& now = detail::played_at(traj, t);
    const StrategyProfile& before = detail::played_at(traj, t - 1);
    std::vector<double> step(n);
    for (std::size_t j = 0; j < n; ++j) {
      step[j] = l1_distance(now[j].probs(), before[j].probs());
    }
    for (std::size_t i = 0; i < n; ++i) {
      const PayoffVector& v_now = detail::payoff_at(traj, t, i);
      const PayoffVector& v_before = detail::payoff_at(traj, t - 1, i);
      double lhs = 0.0;
      for (std::size_t a = 0; a < v_now.size(); ++a) {
        lhs = std::max(lhs, std::abs(v_now[a] - v_before[a]));
      }
      double rhs = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i) rhs += step[j];
      }
      worst = std::min(worst, rhs - lhs);
    }
  }
  return worst;
}

// Per-round movement certificate
//   eps_t^2 = sum_i (|x~_i^t - g_i^t|^2 + |x~_i^t - g_i^{t-1}|^2)
// in each player's paired norm.
inline std::vector<double> eps_path(const Trajectory& traj,
                                    const std::vector<RegularizerSpec>& specs) {
  detail::require_anchors(traj, "eps_path");
  std::vector<double> eps;
  eps.reserve(traj.length());
  for (std::size_t t = 1; t <= traj.length(); ++t) {
    double sq = 0.0;
    for (std::size_t i = 0; i < traj.num_players(); ++i) {
      const MixedStrategy& prescribed = traj.prescribed[t - 1][i];
      std::vector<double> to_anchor(prescribed.size());
      std::vector<double> to_prev(prescribed.size());
      for (std::size_t a = 0; a < prescribed.size(); ++a) {
        to_anchor[a] = traj.anchors[t][i][a] - prescribed[a];
        to_prev[a] = prescribed[a] - traj.anchors[t - 1][i][a];
      }
      const double d1 = specs[i].primal_norm(to_anchor);
      const double d2 = specs[i].primal_norm(to_prev);
      sq += d1 * d1 + d2 * d2;
    }
    eps.push_back(std::sqrt(sq));
  }
  return eps;
}

// Path-length budget: with a compliant learning rate on a game whose
// weighted regret is non-negative for m,
//   sum_t eps_t^2 <= sum_i 8 Rbar_i m_i eta^1 / (eta_i m_min)
// plus, under corruption, the tracked-deviation terms
//   48 (eta^1)^2 (m_max/m_min) c*^2 (n-1)^2 sum_i M_i C_i
//   + 8 eta^1 (m_max/m_min) sum_i C_i.
// The right side does not grow with T, so a full-length check covers every
// prefix. A rate above the cap skips the check rather than failing it.
inline BoundCheck path_length_bound_check(const Trajectory& traj,
                                          const std::vector<RegularizerSpec>& specs,
                                          const LearningRateSchedule& schedule,
                                          const RegretWeights& weights) {
  detail::require_anchors(traj, "path_length_bound_check");
  const std::size_t n = traj.num_players();
  weights.validate(n);

  double c = specs[0].norm_lower_const();
  double c_star = specs[0].dual_norm_upper_const();
  for (const auto& spec : specs) {
    c = std::min(c, spec.norm_lower_const());
    c_star = std::max(c_star, spec.dual_norm_upper_const());
  }
  const bool corrupted = traj.corrupted();
  const double cap = theorem_lr_cap(n, c, c_star, weights, corrupted);
  const double eta1 = schedule.initial_max();

  BoundCheck check;
  if (eta1 > cap + 1e-12) {
    check.skipped = true;
    check.skip_reason = "learning rate " + std::to_string(eta1) + " exceeds theorem cap " +
                        std::to_string(cap) + (corrupted ? " (corrupted)" : "");
    return check;
  }

  const std::vector<double> eps = eps_path(traj, specs);
  for (double e : eps) check.lhs += e * e;

  const double m_min = weights.min();
  const double m_max = weights.max();
  for (std::size_t i = 0; i < n; ++i) {
    check.rhs += 8.0 * specs[i].divergence_bound() * weights.m[i] * eta1 /
                 (schedule.floor(i) * m_min);
  }
  if (corrupted) {
    double mixed = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      mixed += traj.corruption_sup[i] * traj.corruption_total[i];
      total += traj.corruption_total[i];
    }
    const double players = static_cast<double>(n - 1);
    check.rhs += 48.0 * eta1 * eta1 * (m_max / m_min) * c_star * c_star * players * players * mixed;
    check.rhs += 8.0 * eta1 * (m_max / m_min) * total;
  }
  check.holds = check.lhs <= check.rhs + 1e-9;
  return check;
}

struct BestIterate {
  std::size_t round = 0;       // 1-based
  double gap = 0.0;            // measured at the played profile
  double eps = 0.0;            // movement certificate, NaN without anchors
  double certified_gap = 0.0;  // eps * (c* + 2 max_i G_i Omega_i / eta_i) + corruption
  double corruption_l1 = 0.0;  // max_i |c_i|_1 at the best round
};

inline std::vector<double> nash_gap_series(const NormalFormGame& game, const Trajectory& traj) {
  std::vector<double> gaps;
  gaps.reserve(traj.length());
  for (const auto& profile : traj.played) gaps.push_back(nash_gap(game, profile));
  return gaps;
}

// Picks the round with the smallest measured gap (first on ties) and
// attaches the movement-based certificate at that round.
inline BestIterate extract_best_iterate(const NormalFormGame& game, const Trajectory& traj,
                                        const std::vector<RegularizerSpec>& specs,
                                        const LearningRateSchedule& schedule) {
  if (traj.length() == 0) throw std::invalid_argument("extract_best_iterate: empty trajectory");
  const std::vector<double> gaps = nash_gap_series(game, traj);
  std::size_t best = 0;
  for (std::size_t t = 1; t < gaps.size(); ++t) {
    if (gaps[t] < gaps[best]) best = t;
  }

  BestIterate out;
  out.round = best + 1;
  out.gap = gaps[best];
  for (double c : traj.corruption_l1[best]) out.corruption_l1 = std::max(out.corruption_l1, c);

  if (traj.has_anchors()) {
    const std::vector<double> eps = eps_path(traj, specs);
    out.eps = eps[best];
    double c_star = 0.0;
    double steepness = 0.0;
    for (std::size_t i = 0; i < specs.size(); ++i) {
      c_star = std::max(c_star, specs[i].dual_norm_upper_const());
      steepness = std::max(steepness,
                           specs[i].smoothness() * specs[i].diameter() / schedule.floor(i));
    }
    out.certified_gap = out.eps * (c_star + 2.0 * steepness) + out.corruption_l1;
  } else {
    out.eps = std::numeric_limits<double>::quiet_NaN();
    out.certified_gap = std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

// First round whose movement certificate falls at or below eps; the
// existence of such a round for long enough runs is what the path-length
// budget guarantees.
inline std::optional<std::size_t> first_iterate_within(const Trajectory& traj,
                                                       const std::vector<RegularizerSpec>& specs,
                                                       double eps) {
  const std::vector<double> path = eps_path(traj, specs);
  for (std::size_t t = 0; t < path.size(); ++t) {
    if (path[t] <= eps) return t + 1;
  }
  return std::nullopt;
}

enum class ConvergenceStatus { ConvergedToPoint, ApproachingSet, Inconclusive };

inline const char* to_string(ConvergenceStatus status) {
  switch (status) {
    case ConvergenceStatus::ConvergedToPoint: return "converged-to-point";
    case ConvergenceStatus::ApproachingSet: return "approaching-set";
    default: return "inconclusive";
  }
}

// Converged to a point when the last `window` played profiles stay within
// tol of each other in l1 and the final gap is within tol; approaching the
// equilibrium set when only the gap condition holds.
inline ConvergenceStatus detect_convergence(const NormalFormGame& game, const Trajectory& traj,
                                            std::size_t window, double tol) {
  if (window < 2) throw std::invalid_argument("detect_convergence: window must be >= 2");
  if (window > traj.length()) {
    throw std::invalid_argument("detect_convergence: window " + std::to_string(window) +
                                " exceeds trajectory length " + std::to_string(traj.length()));
  }
  const double final_gap = nash_gap(game, traj.played.back());
  double spread = 0.0;
  const std::size_t start = traj.length() - window;
  for (std::size_t s = start; s < traj.length(); ++s) {
    for (std::size_t t = s + 1; t < traj.length(); ++t) {
      double d = 0.0;
      for (std::size_t i = 0; i < traj.num_players(); ++i) {
        d += l1_distance(traj.played[s][i].probs(), traj.played[t][i].probs());
      }
      spread = std::max(spread, d);
    }
  }
  if (final_gap <= tol && spread <= tol) return ConvergenceStatus::ConvergedToPoint;
  if (final_gap <= tol) return ConvergenceStatus::ApproachingSet;
  return ConvergenceStatus::Inconclusive;
}

// Per-round norms recorded into trace files.
struct RoundDiagnostics {
  double nash_gap = 0.0;
  double eps = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> anchor_dist;       // |x~^t - g^t| per player, paired norm
  std::vector<double> anchor_dist_prev;  // |x~^t - g^{t-1}|
  std::vector<double> payoff_delta_inf;  // |v^t - v^{t-1}|_inf
  std::vector<double> step_l1;           // |x^t - x^{t-1}|_1, played
  std::vector<double> corruption_l1;
};

inline std::vector<RoundDiagnostics> compute_round_diagnostics(
    const NormalFormGame& game, const Trajectory& traj,
    const std::vector<RegularizerSpec>& specs) {
  const std::size_t n = traj.num_players();
  std::vector<RoundDiagnostics> rows(traj.length());
  std::vector<double> eps;
  if (traj.has_anchors()) eps = eps_path(traj, specs);

  for (std::size_t t = 1; t <= traj.length(); ++t) {
    RoundDiagnostics& row = rows[t - 1];
    row.nash_gap = nash_gap(game, traj.played[t - 1]);
    if (!eps.empty()) row.eps = eps[t - 1];
    row.corruption_l1 = traj.corruption_l1[t - 1];
    row.payoff_delta_inf.resize(n);
    row.step_l1.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const PayoffVector& now = detail::payoff_at(traj, t, i);
      const PayoffVector& before = detail::payoff_at(traj, t - 1, i);
      double d = 0.0;
      for (std::size_t a = 0; a < now.size(); ++a) d = std::max(d, std::abs(now[a] - before[a]));
      row.payoff_delta_inf[i] = d;
      row.step_l1[i] = l1_distance(detail::played_at(traj, t)[i].probs(),
                                   detail::played_at(traj, t - 1)[i].probs());
    }
    if (traj.has_anchors()) {
      row.anchor_dist.resize(n);
      row.anchor_dist_prev.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        const MixedStrategy& prescribed = traj.prescribed[t - 1][i];
        std::vector<double> da(prescribed.size());
        std::vector<double> dp(prescribed.size());
        for (std::size_t a = 0; a < prescribed.size(); ++a) {
          da[a] = traj.anchors[t][i][a] - prescribed[a];
          dp[a] = prescribed[a] - traj.anchors[t - 1][i][a];
        }
        row.anchor_dist[i] = specs[i].primal_norm(da);
        row.anchor_dist_prev[i] = specs[i].primal_norm(dp);
      }
    }
  }
  return rows;
}

// Per-prefix slack (bound - regret) of the variation-driven regret bound,
// computed incrementally so whole-run sweeps stay linear in T.
inline std::vector<double> rvu_prefix_slacks(const Trajectory& traj,
                                             const std::vector<RegularizerSpec>& specs,
                                             const LearningRateSchedule& schedule,
                                             std::size_t player) {
  detail::require_anchors(traj, "rvu_prefix_slacks");
  const RegularizerSpec& spec = specs[player];
  const std::size_t dim = spec.dimension();
  std::vector<double> action_sum(dim, 0.0);
  double score = 0.0;
  double variation = 0.0;
  double path = 0.0;
  double deviation = 0.0;
  std::vector<double> slacks;
  slacks.reserve(traj.length());
  for (std::size_t t = 1; t <= traj.length(); ++t) {
    const double eta_t = schedule.rate(player, t);
    const PayoffVector& now = detail::payoff_at(traj, t, player);
    const PayoffVector& before = detail::payoff_at(traj, t - 1, player);
    std::vector<double> dv(dim);
    for (std::size_t a = 0; a < dim; ++a) dv[a] = now[a] - before[a];
    const double dual = spec.dual_norm(dv);
    variation += eta_t * dual * dual;

    const MixedStrategy& prescribed = traj.prescribed[t - 1][player];
    std::vector<double> da(dim);
    std::vector<double> dp(dim);
    for (std::size_t a = 0; a < dim; ++a) {
      da[a] = traj.anchors[t][player][a] - prescribed[a];
      dp[a] = prescribed[a] - traj.anchors[t - 1][player][a];
    }
    const double d1 = spec.primal_norm(da);
    const double d2 = spec.primal_norm(dp);
    path += (d1 * d1 + d2 * d2) / eta_t;
    deviation += traj.corruption_l1[t - 1][player];

    const MixedStrategy& played = traj.played[t - 1][player];
    for (std::size_t a = 0; a < dim; ++a) {
      action_sum[a] += now[a];
      score += played[a] * now[a];
    }
    double best = action_sum[0];
    for (double s : action_sum) best = std::max(best, s);
    const double lhs = best - score;
    const double rhs =
        spec.divergence_bound() / schedule.rate(player, t) + variation - 0.25 * path + deviation;
    slacks.push_back(rhs - lhs);
  }
  return slacks;
}

inline double min_rvu_slack(const Trajectory& traj, const std::vector<RegularizerSpec>& specs,
                            const LearningRateSchedule& schedule, std::size_t player) {
  double worst = std::numeric_limits<double>::infinity();
  for (double s : rvu_prefix_slacks(traj, specs, schedule, player)) worst = std::min(worst, s);
  return worst;
}

}  // namespace regretlab
