#pragma once

#include <span>
#include <string>
#include <vector>

#include "adadiff/block_vector.hpp"

namespace adadiff {

/// Which quantity the metric accumulates: squared subgradient norms
/// (classic AdaGrad) or squared norms of successive subgradient differences.
enum class PolicyKind { AdaGrad, AdaGradDiff };

std::string policy_name(PolicyKind policy);
PolicyKind parse_policy(const std::string& name);

/// Running accumulator behind the metric: per-block sums v_i^2 and the
/// previous subgradient (g^0 = 0 by convention).
class AccumulatorState {
 public:
  AccumulatorState(SpacePtr space, double eps);

  double eps() const { return eps_; }
  std::size_t step_count() const { return step_count_; }
  const std::vector<double>& v_sq() const { return v_sq_; }
  const BlockVector& prev_grad() const { return prev_grad_; }

  /// Current weights w_i = eps + sqrt(v_i^2).
  MetricWeights weights() const;

  friend MetricWeights update_weights(AccumulatorState& state,
                                      PolicyKind policy, const BlockVector& g);

 private:
  double eps_;
  std::vector<double> v_sq_;
  BlockVector prev_grad_;
  std::size_t step_count_ = 0;
};

/// Folds the iteration-n subgradient into the accumulator and returns the
/// resulting weights. AdaGradDiff adds ||g_i - g_i^{prev}||^2 per block and
/// remembers g; AdaGrad adds ||g_i||^2. Throws NumericError on non-finite g.
MetricWeights update_weights(AccumulatorState& state, PolicyKind policy,
                             const BlockVector& g);

/// max_i (eps + v_i^after) / (eps + v_i^before) - 1 for consecutive snapshots.
double chi_n(const AccumulatorState& before, const AccumulatorState& after);

/// Same ratio expressed on the weights w_i = eps + v_i directly.
double chi_from_weights(const MetricWeights& before, const MetricWeights& after);

/// sum_k a_k / (eps + sqrt(sum_{j<=k} a_j)) for a nonnegative sequence.
/// Bounded by 2 sqrt(sum_k a_k); exposed so the bound can be property-tested.
double prefix_sqrt_ratio_sum(std::span<const double> a, double eps);

}  // namespace adadiff
