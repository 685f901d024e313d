#pragma once

// Optimistic learning rounds over a normal-form game.
//
// Mirror-descent rounds keep a per-player anchor: the next strategy is a
// prox step from the anchor along the previous payoff, payoffs are then
// observed at the played profile, and the anchor takes a prox step along
// the fresh payoff. Both steps share the pre-round anchor. The optimistic
// regularized-leader variant accumulates observed payoffs and counts the
// most recent one twice.
//
// A corruption layer may replace the prescribed profile by a nearby played
// profile; payoffs are observed, and internal state updated, from what was
// actually played.

#include <cstdint>
#include <optional>
#include <random>

#include "regretlab/game.hpp"
#include "regretlab/game_classes.hpp"
#include "regretlab/regularizers.hpp"

namespace regretlab {

// Per-player learning rates eta_i^t, non-increasing in t with a strictly
// positive floor eta_i. Rounds are 1-based.
class LearningRateSchedule {
 public:
  static LearningRateSchedule constant(std::vector<double> eta) {
    LearningRateSchedule s;
    s.initial_ = eta;
    s.floor_ = std::move(eta);
    s.validate();
    return s;
  }

  static LearningRateSchedule constant(std::size_t num_players, double eta) {
    return constant(std::vector<double>(num_players, eta));
  }

  // eta_i^t = max(floor_i, initial_i / sqrt(t)).
  static LearningRateSchedule inv_sqrt(std::vector<double> initial, std::vector<double> floor) {
    LearningRateSchedule s;
    s.initial_ = std::move(initial);
    s.floor_ = std::move(floor);
    s.decay_ = true;
    s.validate();
    return s;
  }

  double rate(std::size_t player, std::size_t round) const {
    if (round == 0) throw std::invalid_argument("LearningRateSchedule: rounds are 1-based");
    if (!decay_) return floor_[player];
    return std::max(floor_[player], initial_[player] / std::sqrt(static_cast<double>(round)));
  }

  double floor(std::size_t player) const { return floor_[player]; }
  double initial_max() const {
    double m = 0.0;
    for (std::size_t i = 0; i < initial_.size(); ++i) m = std::max(m, rate(i, 1));
    return m;
  }
  std::size_t num_players() const { return floor_.size(); }
  bool is_constant() const { return !decay_; }

 private:
  void validate() const {
    if (floor_.empty() || floor_.size() != initial_.size()) {
      throw std::invalid_argument("LearningRateSchedule: inconsistent player counts");
    }
    for (std::size_t i = 0; i < floor_.size(); ++i) {
      if (!(floor_[i] > 0.0) || !std::isfinite(floor_[i])) {
        throw std::invalid_argument("LearningRateSchedule: floor rate must be positive");
      }
      if (!(initial_[i] >= floor_[i]) || !std::isfinite(initial_[i])) {
        throw std::invalid_argument(
            "LearningRateSchedule: initial rate below floor would force an increasing schedule");
      }
    }
  }

  std::vector<double> initial_;
  std::vector<double> floor_;
  bool decay_ = false;
};

enum class CorruptionKind { None, GeometricDecay, Burst, Custom };

// Configuration of the deviation generator. Builtin generators mix the
// prescribed strategy toward a seeded random vertex with a round-dependent
// weight, so played profiles stay on the simplex and per-player deviation
// budgets are finite by construction.
struct CorruptionSpec {
  CorruptionKind kind = CorruptionKind::None;
  double rho = 0.5;        // geometric decay factor, in (0, 1)
  double magnitude = 0.0;  // mixing weight scale, in [0, 1]
  std::size_t burst_start = 1;
  std::size_t burst_width = 0;
  std::uint64_t seed = 0;
  // round -> per-player replacement strategy (empty slot = play prescribed)
  std::vector<std::vector<std::optional<std::vector<double>>>> custom;

  static CorruptionSpec none() { return CorruptionSpec{}; }

  static CorruptionSpec geometric_decay(double rho, double magnitude, std::uint64_t seed = 0) {
    if (!(rho > 0.0) || rho >= 1.0) throw std::invalid_argument("corruption: rho must lie in (0, 1)");
    if (!(magnitude >= 0.0) || magnitude > 1.0) {
      throw std::invalid_argument("corruption: magnitude must lie in [0, 1]");
    }
    CorruptionSpec s;
    s.kind = CorruptionKind::GeometricDecay;
    s.rho = rho;
    s.magnitude = magnitude;
    s.seed = seed;
    return s;
  }

  static CorruptionSpec burst(std::size_t start, std::size_t width, double magnitude,
                              std::uint64_t seed = 0) {
    if (!(magnitude >= 0.0) || magnitude > 1.0) {
      throw std::invalid_argument("corruption: magnitude must lie in [0, 1]");
    }
    CorruptionSpec s;
    s.kind = CorruptionKind::Burst;
    s.burst_start = start;
    s.burst_width = width;
    s.magnitude = magnitude;
    s.seed = seed;
    return s;
  }

  static CorruptionSpec custom_list(
      std::vector<std::vector<std::optional<std::vector<double>>>> played_overrides) {
    CorruptionSpec s;
    s.kind = CorruptionKind::Custom;
    s.custom = std::move(played_overrides);
    return s;
  }
};

// Applies the deviation generator round by round and accumulates the
// per-player deviation totals C_i = sum_t |c_i^t|_1 and the running
// suprema M_i = sup_t |c_i^t|_1.
class CorruptionTracker {
 public:
  CorruptionTracker(CorruptionSpec spec, std::vector<std::size_t> action_counts)
      : spec_(std::move(spec)),
        action_counts_(std::move(action_counts)),
        rng_(spec_.seed),
        total_(action_counts_.size(), 0.0),
        sup_(action_counts_.size(), 0.0),
        last_l1_(action_counts_.size(), 0.0) {}

  // Produces the played profile for a 1-based round and records c^t.
  StrategyProfile apply(const StrategyProfile& prescribed, std::size_t round) {
    std::vector<MixedStrategy> played;
    played.reserve(prescribed.num_players());
    for (std::size_t i = 0; i < prescribed.num_players(); ++i) {
      MixedStrategy strategy = deviate(prescribed[i], i, round);
      const double c = l1_distance(strategy.probs(), prescribed[i].probs());
      last_l1_[i] = c;
      total_[i] += c;
      sup_[i] = std::max(sup_[i], c);
      played.push_back(std::move(strategy));
    }
    return StrategyProfile{std::move(played)};
  }

  const std::vector<double>& totals() const { return total_; }
  const std::vector<double>& suprema() const { return sup_; }
  const std::vector<double>& last_l1() const { return last_l1_; }

 private:
  double mix_weight(std::size_t round) const {
    switch (spec_.kind) {
      case CorruptionKind::GeometricDecay:
        return spec_.magnitude * std::pow(spec_.rho, static_cast<double>(round - 1));
      case CorruptionKind::Burst:
        return (round >= spec_.burst_start && round < spec_.burst_start + spec_.burst_width)
                   ? spec_.magnitude
                   : 0.0;
      default:
        return 0.0;
    }
  }

  MixedStrategy deviate(const MixedStrategy& prescribed, std::size_t player, std::size_t round) {
    if (spec_.kind == CorruptionKind::None) return prescribed;
    if (spec_.kind == CorruptionKind::Custom) {
      if (round - 1 >= spec_.custom.size()) return prescribed;
      const auto& slot = spec_.custom[round - 1];
      if (player >= slot.size() || !slot[player].has_value()) return prescribed;
      const std::vector<double>& probs = *slot[player];
      if (probs.size() != action_counts_[player]) {
        throw std::invalid_argument("corruption: custom strategy for player " +
                                    std::to_string(player) + " has dimension " +
                                    std::to_string(probs.size()) + ", expected " +
                                    std::to_string(action_counts_[player]));
      }
      return MixedStrategy(probs);  // validates simplex membership
    }
    const double w = mix_weight(round);
    if (w <= 0.0) return prescribed;
    std::uniform_int_distribution<std::size_t> pick(0, action_counts_[player] - 1);
    const std::size_t target = pick(rng_);
    std::vector<double> probs = prescribed.probs();
    for (double& p : probs) p *= 1.0 - w;
    probs[target] += w;
    MixedStrategy played(std::move(probs));
    // mixing weight w moves mass by at most 2w in l1
    if (l1_distance(played.probs(), prescribed.probs()) > 2.0 * w + 1e-12) {
      throw std::logic_error("corruption: generator exceeded its deviation budget");
    }
    return played;
  }

  CorruptionSpec spec_;
  std::vector<std::size_t> action_counts_;
  std::mt19937_64 rng_;
  std::vector<double> total_;
  std::vector<double> sup_;
  std::vector<double> last_l1_;
};

// Theorem learning-rate cap: eta^1 <= c / (4 c* (n-1)) * sqrt(m_min/m_max),
// with the ratio tightened by a factor 3 under corruption. Exceeding the
// cap does not invalidate a run, only the path-length bound certificates.
inline double theorem_lr_cap(std::size_t num_players, double c, double c_star,
                             const RegretWeights& weights, bool corrupted) {
  if (num_players < 2) {
    throw std::invalid_argument("theorem_lr_cap: need at least 2 players, got " +
                                std::to_string(num_players));
  }
  weights.validate(num_players);
  double ratio = weights.min() / weights.max();
  if (corrupted) ratio /= 3.0;
  return c / (4.0 * c_star * static_cast<double>(num_players - 1)) * std::sqrt(ratio);
}

// Per-player mirror-descent state.
struct OmdState {
  MixedStrategy x;           // most recent played strategy
  MixedStrategy g;           // anchor
  PayoffVector last_payoff;  // v^t observed at the played profile
};

// Per-player regularized-leader state.
struct OftrlState {
  MixedStrategy x;
  std::vector<double> cumulative;  // sum of observed payoffs, rounds 1..t
  PayoffVector last_payoff;
};

inline std::vector<OmdState> omd_init(const NormalFormGame& game,
                                      const std::vector<RegularizerSpec>& specs,
                                      const StrategyProfile& initial) {
  game.check_profile(initial);
  std::vector<OmdState> states;
  states.reserve(game.num_players());
  for (std::size_t i = 0; i < game.num_players(); ++i) {
    states.push_back(OmdState{initial[i], min_point(specs[i]), payoff_field(game, initial, i)});
  }
  return states;
}

inline StrategyProfile omd_prescribe(const std::vector<RegularizerSpec>& specs,
                                     const LearningRateSchedule& schedule, std::size_t round,
                                     const std::vector<OmdState>& states) {
  std::vector<MixedStrategy> xs;
  xs.reserve(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    xs.push_back(prox_step(specs[i], states[i].g, states[i].last_payoff, schedule.rate(i, round)));
  }
  return StrategyProfile{std::move(xs)};
}

inline void omd_observe(const NormalFormGame& game, const std::vector<RegularizerSpec>& specs,
                        const LearningRateSchedule& schedule, std::size_t round,
                        std::vector<OmdState>& states, const StrategyProfile& played) {
  const std::vector<PayoffVector> observed = payoff_fields(game, played);
  for (std::size_t i = 0; i < states.size(); ++i) {
    states[i].g = prox_step(specs[i], states[i].g, observed[i], schedule.rate(i, round));
    states[i].x = played[i];
    states[i].last_payoff = observed[i];
  }
}

// One uncorrupted round: returns the profile played at this round.
inline StrategyProfile omd_round(const NormalFormGame& game,
                                 const std::vector<RegularizerSpec>& specs,
                                 const LearningRateSchedule& schedule, std::size_t round,
                                 std::vector<OmdState>& states) {
  StrategyProfile profile = omd_prescribe(specs, schedule, round, states);
  omd_observe(game, specs, schedule, round, states, profile);
  return profile;
}

inline std::vector<OftrlState> oftrl_init(const NormalFormGame& game,
                                          const std::vector<RegularizerSpec>& specs,
                                          const StrategyProfile& initial) {
  game.check_profile(initial);
  std::vector<OftrlState> states;
  states.reserve(game.num_players());
  for (std::size_t i = 0; i < game.num_players(); ++i) {
    states.push_back(OftrlState{initial[i],
                                std::vector<double>(specs[i].dimension(), 0.0),
                                payoff_field(game, initial, i)});
  }
  return states;
}

inline StrategyProfile oftrl_prescribe(const std::vector<RegularizerSpec>& specs,
                                       const LearningRateSchedule& schedule,
                                       const std::vector<OftrlState>& states) {
  if (!schedule.is_constant()) {
    throw std::invalid_argument("oftrl: requires a constant learning-rate schedule");
  }
  std::vector<MixedStrategy> xs;
  xs.reserve(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    std::vector<double> combined = states[i].cumulative;
    for (std::size_t a = 0; a < combined.size(); ++a) combined[a] += states[i].last_payoff[a];
    xs.push_back(ftrl_step(specs[i], combined, schedule.floor(i)));
  }
  return StrategyProfile{std::move(xs)};
}

inline void oftrl_observe(const NormalFormGame& game, std::vector<OftrlState>& states,
                          const StrategyProfile& played) {
  const std::vector<PayoffVector> observed = payoff_fields(game, played);
  for (std::size_t i = 0; i < states.size(); ++i) {
    for (std::size_t a = 0; a < states[i].cumulative.size(); ++a) {
      states[i].cumulative[a] += observed[i][a];
    }
    states[i].x = played[i];
    states[i].last_payoff = observed[i];
  }
}

inline StrategyProfile oftrl_round(const NormalFormGame& game,
                                   const std::vector<RegularizerSpec>& specs,
                                   const LearningRateSchedule& schedule,
                                   std::vector<OftrlState>& states) {
  StrategyProfile profile = oftrl_prescribe(specs, schedule, states);
  oftrl_observe(game, states, profile);
  return profile;
}

enum class Algorithm { Omd, Oftrl };

struct DynamicsConfig {
  Algorithm algorithm = Algorithm::Omd;
  RegularizerKind regularizer = RegularizerKind::NegativeEntropy;
  double interior_clip = 1e-8;
  LearningRateSchedule schedule = LearningRateSchedule::constant(2, 0.1);
  CorruptionSpec corruption = CorruptionSpec::none();
  std::size_t iterations = 100;
  // The library default start is the regularizer minimum for every player;
  // experiments may override it, e.g. to move off a payoff-field zero.
  std::optional<StrategyProfile> initial_profile;
};

inline std::vector<RegularizerSpec> make_specs(const NormalFormGame& game,
                                               RegularizerKind kind, double interior_clip) {
  std::vector<RegularizerSpec> specs;
  specs.reserve(game.num_players());
  for (std::size_t c : game.action_counts()) {
    specs.push_back(kind == RegularizerKind::NegativeEntropy
                        ? RegularizerSpec::negative_entropy(c, interior_clip)
                        : RegularizerSpec::squared_euclidean(c));
  }
  return specs;
}

// Runs T rounds and records the full trajectory. Deterministic for a fixed
// configuration; distinct runs may execute concurrently since the game is
// immutable and all run state is local.
inline Trajectory run_dynamics(const NormalFormGame& game, const DynamicsConfig& config) {
  if (config.iterations == 0) throw std::invalid_argument("run_dynamics: need at least 1 iteration");
  if (config.schedule.num_players() != game.num_players()) {
    throw std::invalid_argument("run_dynamics: schedule covers " +
                                std::to_string(config.schedule.num_players()) +
                                " players, game has " + std::to_string(game.num_players()));
  }
  const std::vector<RegularizerSpec> specs =
      make_specs(game, config.regularizer, config.interior_clip);

  StrategyProfile initial = config.initial_profile.value_or([&] {
    std::vector<MixedStrategy> xs;
    for (const auto& spec : specs) xs.push_back(min_point(spec));
    return StrategyProfile{std::move(xs)};
  }());
  game.check_profile(initial);

  CorruptionTracker tracker(config.corruption, game.action_counts());

  Trajectory traj;
  traj.initial = initial;
  traj.initial_payoffs = payoff_fields(game, initial);
  traj.prescribed.reserve(config.iterations);
  traj.played.reserve(config.iterations);
  traj.payoffs.reserve(config.iterations);

  if (config.algorithm == Algorithm::Omd) {
    std::vector<OmdState> states = omd_init(game, specs, initial);
    traj.anchors.reserve(config.iterations + 1);
    traj.anchors.push_back([&] {
      std::vector<MixedStrategy> gs;
      for (const auto& s : states) gs.push_back(s.g);
      return StrategyProfile{std::move(gs)};
    }());
    for (std::size_t round = 1; round <= config.iterations; ++round) {
      StrategyProfile prescribed = omd_prescribe(specs, config.schedule, round, states);
      StrategyProfile played = tracker.apply(prescribed, round);
      omd_observe(game, specs, config.schedule, round, states, played);
      traj.prescribed.push_back(std::move(prescribed));
      traj.played.push_back(played);
      std::vector<PayoffVector> vs;
      std::vector<MixedStrategy> gs;
      for (const auto& s : states) {
        vs.push_back(s.last_payoff);
        gs.push_back(s.g);
      }
      traj.payoffs.push_back(std::move(vs));
      traj.anchors.push_back(StrategyProfile{std::move(gs)});
      traj.corruption_l1.push_back(tracker.last_l1());
    }
  } else {
    std::vector<OftrlState> states = oftrl_init(game, specs, initial);
    for (std::size_t round = 1; round <= config.iterations; ++round) {
      StrategyProfile prescribed = oftrl_prescribe(specs, config.schedule, states);
      StrategyProfile played = tracker.apply(prescribed, round);
      oftrl_observe(game, states, played);
      traj.prescribed.push_back(std::move(prescribed));
      traj.played.push_back(played);
      std::vector<PayoffVector> vs;
      for (const auto& s : states) vs.push_back(s.last_payoff);
      traj.payoffs.push_back(std::move(vs));
      traj.corruption_l1.push_back(tracker.last_l1());
    }
  }
  traj.corruption_total = tracker.totals();
  traj.corruption_sup = tracker.suprema();
  return traj;
}

}  // namespace regretlab
