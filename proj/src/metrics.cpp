#include "adadiff/metrics.hpp"

#include <cmath>

namespace adadiff {

std::string policy_name(PolicyKind policy) {
  return policy == PolicyKind::AdaGrad ? "adagrad" : "adagrad-diff";
}

PolicyKind parse_policy(const std::string& name) {
  if (name == "adagrad") {
    return PolicyKind::AdaGrad;
  }
  if (name == "adagrad-diff" || name == "adagrad_diff" || name == "diff") {
    return PolicyKind::AdaGradDiff;
  }
  throw ConfigError("unknown policy: " + name);
}

AccumulatorState::AccumulatorState(SpacePtr space, double eps)
    : eps_(eps),
      v_sq_(space ? space->block_count() : 0, 0.0),
      prev_grad_(std::move(space)) {
  if (!(eps_ >= 0.0) || !std::isfinite(eps_)) {
    throw DomainError("eps must be a finite nonnegative real");
  }
}

MetricWeights AccumulatorState::weights() const {
  std::vector<double> w(v_sq_.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    w[i] = eps_ + std::sqrt(v_sq_[i]);
  }
  return MetricWeights(std::move(w));
}

MetricWeights update_weights(AccumulatorState& state, PolicyKind policy,
                             const BlockVector& g) {
  check_same_space(state.prev_grad_, g);
  if (!g.all_finite()) {
    throw NumericError("subgradient has non-finite components");
  }
  const std::size_t d = state.v_sq_.size();
  if (policy == PolicyKind::AdaGradDiff) {
    for (std::size_t i = 0; i < d; ++i) {
      auto gi = g.block(i);
      auto pi = state.prev_grad_.block(i);
      double diff_sq = 0.0;
      for (std::size_t k = 0; k < gi.size(); ++k) {
        const double delta = gi[k] - pi[k];
        diff_sq += delta * delta;
      }
      state.v_sq_[i] += diff_sq;
    }
  } else {
    for (std::size_t i = 0; i < d; ++i) {
      state.v_sq_[i] += g.block_norm_sq(i);
    }
  }
  state.prev_grad_ = g;
  ++state.step_count_;
  return state.weights();
}

double chi_n(const AccumulatorState& before, const AccumulatorState& after) {
  if (before.v_sq().size() != after.v_sq().size()) {
    throw StructuralError("snapshots have different block counts");
  }
  double max_ratio = 1.0;
  for (std::size_t i = 0; i < before.v_sq().size(); ++i) {
    const double denom = before.eps() + std::sqrt(before.v_sq()[i]);
    const double numer = after.eps() + std::sqrt(after.v_sq()[i]);
    if (denom <= 0.0) {
      throw DomainError("chi requires positive eps + v");
    }
    max_ratio = std::max(max_ratio, numer / denom);
  }
  return max_ratio - 1.0;
}

double chi_from_weights(const MetricWeights& before,
                        const MetricWeights& after) {
  if (before.size() != after.size()) {
    throw StructuralError("weight snapshots have different block counts");
  }
  double max_ratio = 1.0;
  for (std::size_t i = 0; i < before.size(); ++i) {
    max_ratio = std::max(max_ratio, after[i] / before[i]);
  }
  return max_ratio - 1.0;
}

double prefix_sqrt_ratio_sum(std::span<const double> a, double eps) {
  double prefix = 0.0;
  double total = 0.0;
  for (double ak : a) {
    if (ak < 0.0) {
      throw DomainError("sequence terms must be nonnegative");
    }
    prefix += ak;
    const double denom = eps + std::sqrt(prefix);
    if (denom > 0.0) {
      total += ak / denom;
    }
  }
  return total;
}

}  // namespace adadiff
