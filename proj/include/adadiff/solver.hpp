#pragma once

#include <optional>
#include <set>
#include <string>

#include "adadiff/metrics.hpp"
#include "adadiff/problems.hpp"

namespace adadiff {

enum class MonitorKind { Lemma1, Fejer, DiffSummability };

struct SolverConfig {
  double eta = 1.0;
  double eps = 1e-8;
  std::size_t budget = 2;  // iterations; averaging starts at the 2nd iterate
  PolicyKind policy = PolicyKind::AdaGradDiff;
  std::set<MonitorKind> monitors;
  std::optional<BlockVector> reference_point;  // x_ref / x_star for monitors
  std::size_t monitor_stride = 1;
  bool track_stabilization = false;  // pairwise diameter of the final 10%
};

/// State at the head of one iteration: x^n, g^n, W_n and F(x^n).
struct StepSnapshot {
  BlockVector x;
  BlockVector grad;
  MetricWeights weights;
  double objective;
};

/// Per-iteration record of a solver run. Row n (1-based) corresponds to the
/// iterate x^n at the head of iteration n; monitor rows cover steps
/// n -> n+1 and therefore end one iteration early.
struct Trace {
  std::vector<double> objective;      // F(x^n)
  std::vector<double> avg_objective;  // F(xbar^n), NaN at n = 1
  std::vector<double> mean_step;      // (eta/d) sum_i 1/w_i^n
  std::vector<double> grad_diff_sq;   // ||g^n - g^{n-1}||^2, g^0 = 0

  std::vector<std::size_t> monitor_steps;
  std::vector<double> lemma1_residual;
  std::vector<double> lemma1_rhs;  // RHS values, for relative tolerances
  std::vector<double> fejer_residual;

  BlockVector final_iterate;  // x^{budget+1}
  BlockVector final_average;  // mean of x^2 ... x^{budget+1}
  std::size_t iterations = 0;
  double max_iterate_norm = 0.0;
  std::optional<double> stabilization_diameter;

  bool aborted = false;
  std::size_t abort_step = 0;
  std::string abort_reason;
};

/// Runs the proximal (sub)gradient loop for exactly config.budget iterations:
/// g^n from the oracle, weights from the configured policy, then
/// x^{n+1} = prox_{eta phi}^{W_n}(x^n - eta W_n^{-1} g^n). Deterministic in
/// (problem, config, x1); a non-finite value aborts with the partial trace.
Trace run(const Problem& problem, const SolverConfig& config,
          const BlockVector& x1);

/// Slack of the per-step descent inequality
///   2 eta (F(x^{n+1}) - F(x_ref)) <= ||x^n - x_ref||_{W_n}^2
///     - ||x^{n+1} - x_ref||_{W_n}^2 + eta^2 ||g^{n+1} - g^n||_{W_n^{-1}}^2,
/// returned as RHS - LHS. objective_ref is F(x_ref).
double lemma1_residual(const StepSnapshot& prev, const StepSnapshot& next,
                       const BlockVector& x_ref, double objective_ref,
                       double eta);

/// Slack of the quasi-Fejer inequality toward a minimizer x_star:
///   ||x^{n+1} - x_star||_{W_{n+1}}^2 <= (1 + chi) ||x^n - x_star||_{W_n}^2
///     + eta^2 ||g^{n+1} - g^n||_{W_n^{-1}}^2,
/// with chi the maximal ratio between the consecutive weight vectors.
double fejer_residual(const StepSnapshot& prev, const StepSnapshot& next,
                      const BlockVector& x_star, double eta);

struct SummabilityReport {
  double total;          // sum of ||g^{n+1} - g^n||^2 over the run
  double tail_fraction;  // share contributed by the last 10% of iterations
};

SummabilityReport summability_report(const Trace& trace);

}  // namespace adadiff
