#include "adadiff/solver.hpp"

#include <cmath>
#include <deque>
#include <limits>

namespace adadiff {

namespace {

double mean_effective_step(const MetricWeights& w, double eta) {
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    acc += eta / w[i];
  }
  return acc / static_cast<double>(w.size());
}

}  // namespace

namespace {

double lemma1_rhs_value(const StepSnapshot& prev, const StepSnapshot& next,
                        const BlockVector& x_ref, double eta) {
  return wnorm_sq(prev.x - x_ref, prev.weights) -
         wnorm_sq(next.x - x_ref, prev.weights) +
         eta * eta * winv_norm_sq(next.grad - prev.grad, prev.weights);
}

}  // namespace

double lemma1_residual(const StepSnapshot& prev, const StepSnapshot& next,
                       const BlockVector& x_ref, double objective_ref,
                       double eta) {
  const double lhs = 2.0 * eta * (next.objective - objective_ref);
  return lemma1_rhs_value(prev, next, x_ref, eta) - lhs;
}

double fejer_residual(const StepSnapshot& prev, const StepSnapshot& next,
                      const BlockVector& x_star, double eta) {
  const double chi = chi_from_weights(prev.weights, next.weights);
  const double lhs = wnorm_sq(next.x - x_star, next.weights);
  const double rhs =
      (1.0 + chi) * wnorm_sq(prev.x - x_star, prev.weights) +
      eta * eta * winv_norm_sq(next.grad - prev.grad, prev.weights);
  return rhs - lhs;
}

Trace run(const Problem& problem, const SolverConfig& config,
          const BlockVector& x1) {
  if (config.budget < 2) {
    throw ConfigError("budget must be at least 2");
  }
  if (!(config.eta > 0.0)) {
    throw ConfigError("eta must be positive");
  }
  if (!(config.eps >= 0.0)) {
    throw ConfigError("eps must be nonnegative");
  }
  if (config.monitor_stride == 0) {
    throw ConfigError("monitor stride must be positive");
  }
  const bool lemma1_on = config.monitors.count(MonitorKind::Lemma1) > 0;
  const bool fejer_on = config.monitors.count(MonitorKind::Fejer) > 0;
  if ((lemma1_on || fejer_on) && !config.reference_point) {
    throw ConfigError("monitors need a reference point");
  }
  if (fejer_on && problem.smoothness != Smoothness::LipschitzSmooth) {
    throw ConfigError("Fejer monitor needs a Lipschitz-smooth objective");
  }
  if (!x1.all_finite()) {
    throw NumericError("initial point has non-finite components");
  }

  const double eta = config.eta;
  double objective_ref = 0.0;
  if (lemma1_on) {
    objective_ref = objective(problem, *config.reference_point);
  }

  Trace trace;
  const std::size_t budget = config.budget;
  trace.objective.reserve(budget);
  trace.avg_objective.reserve(budget);
  trace.mean_step.reserve(budget);
  trace.grad_diff_sq.reserve(budget);

  BlockVector x = x1;
  AccumulatorState accum(x1.space(), config.eps);
  BlockVector avg_sum(x1.space());  // sum of x^2 ... x^n
  const bool monitors_on = lemma1_on || fejer_on;
  std::optional<StepSnapshot> prev_snapshot;

  // iterates live at indices 2 .. budget+1; keep the last max(1, budget/10)
  const std::size_t stabilization_start =
      budget + 2 - std::max<std::size_t>(1, budget / 10);
  std::deque<BlockVector> tail_iterates;

  auto abort_run = [&](std::size_t step, const std::string& reason) {
    trace.aborted = true;
    trace.abort_step = step;
    trace.abort_reason = reason;
    trace.final_iterate = x;
    trace.final_average =
        trace.iterations > 0
            ? (1.0 / static_cast<double>(trace.iterations)) * avg_sum
            : x;
    return trace;
  };

  for (std::size_t n = 1; n <= budget; ++n) {
    FEval f = problem.eval(x);
    if (!std::isfinite(f.value) || !f.grad.all_finite()) {
      return abort_run(n, "objective or subgradient is not finite");
    }

    const BlockVector grad_diff = f.grad - accum.prev_grad();
    trace.grad_diff_sq.push_back(grad_diff.norm_sq());

    MetricWeights weights = update_weights(accum, config.policy, f.grad);
    const double objective_x =
        f.value + regularizer_value(problem.reg, x);

    trace.objective.push_back(objective_x);
    if (n >= 2) {
      const BlockVector xbar =
          (1.0 / static_cast<double>(n - 1)) * avg_sum;
      trace.avg_objective.push_back(problem.value(xbar) +
                                    regularizer_value(problem.reg, xbar));
    } else {
      trace.avg_objective.push_back(
          std::numeric_limits<double>::quiet_NaN());
    }
    trace.mean_step.push_back(mean_effective_step(weights, eta));
    trace.max_iterate_norm = std::max(trace.max_iterate_norm, x.norm());

    if (monitors_on && prev_snapshot) {
      StepSnapshot current{x, f.grad, weights, objective_x};
      trace.monitor_steps.push_back(n - 1);
      if (lemma1_on) {
        trace.lemma1_residual.push_back(lemma1_residual(
            *prev_snapshot, current, *config.reference_point, objective_ref,
            eta));
        trace.lemma1_rhs.push_back(lemma1_rhs_value(
            *prev_snapshot, current, *config.reference_point, eta));
      }
      if (fejer_on) {
        trace.fejer_residual.push_back(fejer_residual(
            *prev_snapshot, current, *config.reference_point, eta));
      }
      prev_snapshot.reset();
    }
    // snapshot x^n so step n can be checked once g^{n+1} exists
    if (monitors_on && n < budget && (n - 1) % config.monitor_stride == 0) {
      prev_snapshot = StepSnapshot{x, f.grad, weights, objective_x};
    }

    x = prox_step(scaled_step(x, f.grad, eta, weights), problem.reg, eta,
                  weights);
    if (!x.all_finite()) {
      return abort_run(n, "iterate has non-finite components");
    }
    avg_sum += x;
    ++trace.iterations;

    if (config.track_stabilization && n + 1 >= stabilization_start) {
      tail_iterates.push_back(x);
    }
  }

  trace.final_iterate = x;
  trace.final_average = (1.0 / static_cast<double>(budget)) * avg_sum;

  if (config.track_stabilization) {
    double diameter = 0.0;
    for (std::size_t i = 0; i < tail_iterates.size(); ++i) {
      for (std::size_t j = i + 1; j < tail_iterates.size(); ++j) {
        diameter =
            std::max(diameter, (tail_iterates[i] - tail_iterates[j]).norm());
      }
    }
    trace.stabilization_diameter = diameter;
  }
  return trace;
}

SummabilityReport summability_report(const Trace& trace) {
  const std::size_t n = trace.grad_diff_sq.size();
  double total = 0.0;
  for (double v : trace.grad_diff_sq) {
    total += v;
  }
  const std::size_t tail_count = std::max<std::size_t>(1, n / 10);
  double tail = 0.0;
  for (std::size_t k = n - std::min(tail_count, n); k < n; ++k) {
    tail += trace.grad_diff_sq[k];
  }
  return {total, total > 0.0 ? tail / total : 0.0};
}

}  // namespace adadiff
