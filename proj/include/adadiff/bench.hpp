#pragma once

#include <array>
#include <cstdint>
#include <set>

#include "adadiff/data.hpp"
#include "adadiff/solver.hpp"

namespace adadiff {

enum class Preset { HingeSynth, LadSynth, LogRegL2, LogRegL1, SvmDual };

Preset parse_preset(const std::string& name);
std::string preset_name(Preset preset);

/// Paper-table defaults for one experiment family.
struct PresetDefaults {
  const char* name;
  double lambda;  // l1 weight, or the dual regularization for svm-dual
  double sigma;   // l2 weight inside f (logreg-l2 only)
  std::size_t budget;
  SyntheticSpec synth;                  // fallback synthetic shape
  std::array<double, 3> reference_etas; // low / mid / high panel values
};

const PresetDefaults& preset_defaults(Preset preset);

/// count log-spaced values on [lo, hi], endpoints included.
std::vector<double> log_grid(double lo, double hi, std::size_t count);

struct EtaGrid {
  double lo = 1e-5;
  double hi = 1e2;
  std::size_t count = 0;  // 0 means "use the explicit eta list"
};

enum class InitKind { Zero, Random };

struct ExperimentConfig {
  Preset preset = Preset::LogRegL2;
  std::string data_path;    // LIBSVM file; empty -> synthetic fallback
  std::size_t max_rows = 0; // truncate parsed datasets; 0 keeps all rows
  double lambda = -1.0;     // negative -> preset default
  double sigma = -1.0;
  std::size_t budget = 0;   // 0 -> preset default
  std::vector<double> etas; // explicit values; empty -> grid
  EtaGrid grid{1e-5, 1e2, 200};
  std::vector<std::uint64_t> seeds{1};
  std::vector<PolicyKind> policies{PolicyKind::AdaGrad,
                                   PolicyKind::AdaGradDiff};
  std::uint64_t data_seed = 7;
  double noise_std = 0.1;    // two-moons jitter
  double kernel_width = 1.0;
  double eps = 1e-8;
  std::optional<InitKind> init;  // unset: zero for run, random for sweeps
  std::string out_dir;
  std::size_t threads = 1;
  bool write_traces = true;
  std::set<MonitorKind> monitors;
  std::size_t monitor_stride = 1;
};

/// Dataset plus assembled problem for one experiment.
struct ExperimentInstance {
  std::shared_ptr<const Dataset> data;
  Problem problem;
  SpacePtr space;  // iterate space: scalar blocks of size d (or N for the dual)
};

ExperimentInstance build_instance(const ExperimentConfig& config);

/// x^1 for one seed: zero, or uniform on [-1,1]^d; for box-constrained duals
/// the random draw is placed inside the feasible box instead. The fallback
/// applies when the config leaves the initialization unset.
BlockVector initial_point(const ExperimentInstance& instance,
                          const ExperimentConfig& config, std::uint64_t seed,
                          InitKind fallback = InitKind::Random);

struct RunSummary {
  PolicyKind policy;
  std::size_t eta_index;
  double eta;
  std::uint64_t seed;
  double final_objective = 0.0;      // F(x^n) at the last iteration
  double final_avg_objective = 0.0;  // F(xbar) at the last iteration
  double min_objective = 0.0;        // min over F(x^n) and F(xbar^n)
  double final_gap = 0.0;            // final_avg_objective - fstar
  bool aborted = false;
  std::string diagnostic;
  std::string trace_path;  // written trace CSV, empty if not written
};

struct EtaAggregate {
  PolicyKind policy;
  double eta;
  double mean_gap;
  double std_gap;  // sample standard deviation over seeds
  double median_gap;
};

struct SweepResult {
  ExperimentConfig config;
  std::vector<double> etas;
  std::vector<RunSummary> runs;  // ordered by (policy, eta, seed)
  double observed_min = 0.0;     // smallest objective seen in the sweep
  double fstar = 0.0;
  bool refined = false;  // true once the 10x-budget refinement ran
  std::vector<EtaAggregate> aggregates;
};

/// Runs every (policy, eta, seed) combination. Gaps are measured against the
/// smallest objective observed so far; estimate_fstar refines the estimate.
/// The instance overloads accept a problem assembled outside the presets.
SweepResult sweep(const ExperimentConfig& config);
SweepResult sweep(const ExperimentConfig& config,
                  const ExperimentInstance& instance);

/// The running-minimum protocol: take the sweep minimum, rerun the
/// best-decaying (policy, eta) at 10x budget, and keep the smaller value.
/// Recomputes all gaps and aggregates in place.
double estimate_fstar(const ExperimentConfig& config, SweepResult& result);
double estimate_fstar(const ExperimentConfig& config,
                      const ExperimentInstance& instance, SweepResult& result);
double estimate_fstar(const ExperimentConfig& config);

/// Mid panel = mean of the per-policy best grid values; sides scale by 10^-1
/// and 10^1.
std::array<double, 3> derive_reference_etas(const SweepResult& result);

enum class ReportKind { GapVsEta, GapVsIter, StepsizeVsIter };
ReportKind parse_report_kind(const std::string& name);

/// Writes the CSV (always) and SVG plot for one report kind into the
/// configured output directory; returns the written paths. Iteration-indexed
/// reports rerun the three reference stepsizes with full traces.
std::vector<std::string> report(const SweepResult& result, ReportKind kind);

/// Writes sweep_runs.csv and fstar.csv for a finished sweep.
std::vector<std::string> write_sweep_outputs(const SweepResult& result);

void write_trace_csv(const std::string& path, const Trace& trace,
                     const std::string& metadata);

/// Flat key = value file; `#` starts a comment. Unknown keys are an error.
ExperimentConfig load_config_file(const std::string& path);
void apply_config_entry(ExperimentConfig& config, const std::string& key,
                        const std::string& value);

}  // namespace adadiff
