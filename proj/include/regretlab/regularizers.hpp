#pragma once

// Regularizers on the probability simplex with exact Bregman divergences
// and closed-form / projection-based argmax solvers.
//
// Two families are provided, each 1-strongly convex with respect to its
// paired norm:
//   negative entropy   --  pairs with (l1, linf), multiplicative updates
//   squared euclidean  --  pairs with (l2, l2), projection updates
//
// Negative entropy is not smooth at the simplex boundary, so entropy
// solvers keep their outputs in a delta-interior: any coordinate below the
// clip is raised to it and the vector renormalized. The clip is skipped
// entirely when no coordinate is below delta, so interior solutions are
// returned exactly. The effective smoothness and divergence-bound
// constants reported for bound checks account for the clip.

#include <algorithm>
#include <cmath>
#include <numeric>

#include "regretlab/game.hpp"

namespace regretlab {

enum class RegularizerKind { NegativeEntropy, SquaredEuclidean };

class RegularizerSpec {
 public:
  static RegularizerSpec negative_entropy(std::size_t dim, double interior_clip = 1e-8) {
    if (dim == 0) throw std::invalid_argument("RegularizerSpec: zero dimension");
    if (!(interior_clip > 0.0) || interior_clip > 0.5 / static_cast<double>(dim)) {
      throw std::invalid_argument("RegularizerSpec: interior clip must lie in (0, 1/(2 dim)]");
    }
    return RegularizerSpec(RegularizerKind::NegativeEntropy, dim, interior_clip);
  }

  static RegularizerSpec squared_euclidean(std::size_t dim) {
    if (dim == 0) throw std::invalid_argument("RegularizerSpec: zero dimension");
    return RegularizerSpec(RegularizerKind::SquaredEuclidean, dim, 0.0);
  }

  RegularizerKind kind() const { return kind_; }
  std::size_t dimension() const { return dim_; }
  double interior_clip() const { return clip_; }

  // G_i: smoothness of the regularizer over its effective domain. Entropy
  // hessian is diag(1/x), bounded by 1/delta on the delta-interior.
  double smoothness() const {
    return kind_ == RegularizerKind::NegativeEntropy ? 1.0 / clip_ : 1.0;
  }

  // Omega_i: simplex diameter under the paired norm.
  double diameter() const {
    return kind_ == RegularizerKind::NegativeEntropy ? 2.0 : std::sqrt(2.0);
  }

  // Rbar_i: divergence bound entering the regret/path-length budgets.
  double divergence_bound() const {
    if (kind_ == RegularizerKind::NegativeEntropy) {
      return std::log(static_cast<double>(dim_)) + static_cast<double>(dim_) * clip_;
    }
    return 0.5 * diameter() * diameter();
  }

  // c:  ||x|| >= c ||x||_1 for the paired primal norm.
  double norm_lower_const() const {
    return kind_ == RegularizerKind::NegativeEntropy
               ? 1.0
               : 1.0 / std::sqrt(static_cast<double>(dim_));
  }

  // c*: ||x||_* <= c* ||x||_inf for the paired dual norm.
  double dual_norm_upper_const() const {
    return kind_ == RegularizerKind::NegativeEntropy ? 1.0
                                                     : std::sqrt(static_cast<double>(dim_));
  }

  double primal_norm(const std::vector<double>& v) const {
    if (kind_ == RegularizerKind::NegativeEntropy) {
      double s = 0.0;
      for (double x : v) s += std::abs(x);
      return s;
    }
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
  }

  double dual_norm(const std::vector<double>& v) const {
    if (kind_ == RegularizerKind::NegativeEntropy) {
      double s = 0.0;
      for (double x : v) s = std::max(s, std::abs(x));
      return s;
    }
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
  }

  double value(const MixedStrategy& x) const {
    if (x.size() != dim_) {
      throw std::invalid_argument("RegularizerSpec: point has dimension " +
                                  std::to_string(x.size()) + ", spec has " + std::to_string(dim_));
    }
    if (kind_ == RegularizerKind::NegativeEntropy) {
      double s = 0.0;
      for (std::size_t a = 0; a < dim_; ++a) {
        const double p = x[a];
        if (p > 0.0) s += p * std::log(p);
      }
      return s;
    }
    double s = 0.0;
    for (std::size_t a = 0; a < dim_; ++a) s += x[a] * x[a];
    return 0.5 * s;
  }

  // Raises sub-clip coordinates to the clip and renormalizes; identity for
  // the euclidean kind and for already-interior points.
  MixedStrategy interior(MixedStrategy x) const {
    if (kind_ != RegularizerKind::NegativeEntropy) return x;
    bool needs_clip = false;
    for (std::size_t a = 0; a < x.size(); ++a) {
      if (x[a] < clip_) {
        needs_clip = true;
        break;
      }
    }
    if (!needs_clip) return x;
    std::vector<double> p = x.probs();
    double sum = 0.0;
    for (double& v : p) {
      v = std::max(v, clip_);
      sum += v;
    }
    for (double& v : p) v /= sum;
    return MixedStrategy(std::move(p));
  }

 private:
  RegularizerSpec(RegularizerKind kind, std::size_t dim, double clip)
      : kind_(kind), dim_(dim), clip_(clip) {}

  RegularizerKind kind_;
  std::size_t dim_;
  double clip_;
};

// Euclidean projection onto the simplex by sort and threshold: the result
// is max(y - tau, 0) for the unique tau with unit mass.
inline MixedStrategy project_simplex(const std::vector<double>& y) {
  if (y.empty()) throw std::invalid_argument("project_simplex: empty vector");
  for (double v : y) {
    if (!std::isfinite(v)) throw std::invalid_argument("project_simplex: non-finite input");
  }
  std::vector<double> sorted = y;
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  double cumulative = 0.0;
  double tau = 0.0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    cumulative += sorted[k];
    const double candidate = (cumulative - 1.0) / static_cast<double>(k + 1);
    if (sorted[k] - candidate > 0.0) tau = candidate;
  }
  std::vector<double> x(y.size());
  for (std::size_t a = 0; a < y.size(); ++a) x[a] = std::max(y[a] - tau, 0.0);
  return MixedStrategy(std::move(x));
}

// D_R(x, y) = R(x) - R(y) - <grad R(y), x - y>. Entropy gives KL(x || y)
// and requires y strictly positive; euclidean gives half squared distance.
inline double bregman(const RegularizerSpec& spec, const MixedStrategy& x,
                      const MixedStrategy& y) {
  if (x.size() != spec.dimension() || y.size() != spec.dimension()) {
    throw std::invalid_argument("bregman: dimension mismatch");
  }
  if (spec.kind() == RegularizerKind::NegativeEntropy) {
    double d = 0.0;
    for (std::size_t a = 0; a < x.size(); ++a) {
      if (y[a] <= 0.0) {
        throw std::domain_error("bregman: entropy reference point has a zero coordinate " +
                                std::to_string(a) + "; callers must keep iterates clipped");
      }
      if (x[a] > 0.0) d += x[a] * std::log(x[a] / y[a]);
    }
    return d;
  }
  double d = 0.0;
  for (std::size_t a = 0; a < x.size(); ++a) {
    const double diff = x[a] - y[a];
    d += diff * diff;
  }
  return 0.5 * d;
}

namespace detail {

// Stabilized softmax over arbitrary logits.
inline std::vector<double> softmax(std::vector<double> logits) {
  double peak = logits[0];
  for (double v : logits) peak = std::max(peak, v);
  double z = 0.0;
  for (double& v : logits) {
    v = std::exp(v - peak);
    z += v;
  }
  for (double& v : logits) v /= z;
  return logits;
}

}  // namespace detail

// argmax over the simplex of eta <x, v> - D_R(x, anchor). Entropy: the
// closed-form multiplicative update anchor * exp(eta v), renormalized.
// Euclidean: projection of anchor + eta v.
inline MixedStrategy prox_step(const RegularizerSpec& spec, const MixedStrategy& anchor,
                               const PayoffVector& payoff, double eta) {
  if (!(eta > 0.0)) throw std::invalid_argument("prox_step: eta must be positive, got " + std::to_string(eta));
  if (anchor.size() != spec.dimension() || payoff.size() != spec.dimension()) {
    throw std::invalid_argument("prox_step: dimension mismatch");
  }
  if (spec.kind() == RegularizerKind::NegativeEntropy) {
    std::vector<double> logits(anchor.size());
    for (std::size_t a = 0; a < anchor.size(); ++a) {
      if (anchor[a] <= 0.0) {
        throw std::domain_error("prox_step: entropy anchor has a zero coordinate " +
                                std::to_string(a));
      }
      logits[a] = std::log(anchor[a]) + eta * payoff[a];
    }
    return spec.interior(MixedStrategy(detail::softmax(std::move(logits))));
  }
  std::vector<double> y(anchor.size());
  for (std::size_t a = 0; a < anchor.size(); ++a) y[a] = anchor[a] + eta * payoff[a];
  return project_simplex(y);
}

// argmax over the simplex of eta <x, s> - R(x) for a cumulative payoff
// vector s (the caller supplies the optimism term already added in).
inline MixedStrategy ftrl_step(const RegularizerSpec& spec, const std::vector<double>& cumulative,
                               double eta) {
  if (!(eta > 0.0)) throw std::invalid_argument("ftrl_step: eta must be positive, got " + std::to_string(eta));
  if (cumulative.size() != spec.dimension()) {
    throw std::invalid_argument("ftrl_step: dimension mismatch");
  }
  if (spec.kind() == RegularizerKind::NegativeEntropy) {
    std::vector<double> logits(cumulative.size());
    for (std::size_t a = 0; a < cumulative.size(); ++a) logits[a] = eta * cumulative[a];
    return spec.interior(MixedStrategy(detail::softmax(std::move(logits))));
  }
  std::vector<double> y(cumulative.size());
  for (std::size_t a = 0; a < cumulative.size(); ++a) y[a] = eta * cumulative[a];
  return project_simplex(y);
}

// Minimizer of the regularizer over the simplex: uniform for both kinds.
inline MixedStrategy min_point(const RegularizerSpec& spec) {
  return MixedStrategy::uniform(spec.dimension());
}

}  // namespace regretlab
