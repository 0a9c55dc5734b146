// adabench: benchmark CLI for the AdaGrad-Diff proximal solver.
//
// Subcommands: datagen, run, sweep, fstar, report. Options mirror the flat
// config-file keys; --config is applied first and explicit flags override it.

#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "adadiff/bench.hpp"

namespace {

using namespace adadiff;

struct RawOptions {
  std::string config_file;
  std::vector<std::pair<std::string, std::string>> entries;
};

// Every flag funnels into the config-file key it shadows.
void add_common_options(CLI::App* cmd, RawOptions& raw) {
  auto bind = [cmd, &raw](const std::string& flag, const std::string& key,
                          const std::string& help) {
    cmd->add_option_function<std::string>(
        flag,
        [&raw, key](const std::string& value) {
          raw.entries.emplace_back(key, value);
        },
        help);
  };
  cmd->add_option("--config", raw.config_file, "flat key=value config file");
  bind("--preset", "preset",
       "hinge-synth | lad-synth | logreg-l2 | logreg-l1 | svm-dual");
  bind("--data", "data", "LIBSVM dataset file (default: synthetic fallback)");
  bind("--max-rows", "max_rows", "truncate the parsed dataset to this many rows");
  bind("--lambda", "lambda", "l1 / dual regularization weight");
  bind("--sigma", "sigma", "l2 weight inside the smooth term");
  bind("--budget", "budget", "iteration budget (default: preset value)");
  bind("--eta", "eta", "stepsize parameter, or comma list");
  bind("--eta-grid", "eta_grid", "log-spaced grid as min,max,count");
  bind("--seeds", "seeds", "comma list of initialization seeds");
  bind("--policy", "policy", "comma subset of {adagrad, adagrad-diff}");
  bind("--data-seed", "data_seed", "seed for synthetic dataset generation");
  bind("--noise-std", "noise_std", "two-moons noise standard deviation");
  bind("--kernel-width", "kernel_width", "Gaussian kernel width");
  bind("--eps", "eps", "metric floor epsilon");
  bind("--init", "init", "initial point: zero | random");
  bind("--out", "out", "output directory");
  bind("--threads", "threads", "sweep worker count");
  bind("--write-traces", "write_traces", "write per-run trace CSVs (0/1)");
  bind("--monitors", "monitors", "comma subset of {lemma1, fejer, diffsum}");
  bind("--monitor-stride", "monitor_stride", "evaluate monitors every k steps");
}

ExperimentConfig assemble_config(const RawOptions& raw) {
  ExperimentConfig config;
  if (!raw.config_file.empty()) {
    config = load_config_file(raw.config_file);
  }
  for (const auto& [key, value] : raw.entries) {
    apply_config_entry(config, key, value);
  }
  return config;
}

int cmd_datagen(const RawOptions& raw) {
  ExperimentConfig config = assemble_config(raw);
  const ExperimentInstance instance = build_instance(config);
  std::filesystem::create_directories(
      config.out_dir.empty() ? "." : config.out_dir);
  const std::filesystem::path dir =
      config.out_dir.empty() ? "." : config.out_dir;
  const std::string path = (dir / "dataset.libsvm").string();
  write_libsvm_file(*instance.data, path);
  std::cout << "wrote " << path << " (" << instance.data->rows << " x "
            << instance.data->cols << ")\n";
  if (!instance.data->true_weights.empty()) {
    const std::string wpath = (dir / "true_weights.txt").string();
    std::ofstream out(wpath);
    for (double w : instance.data->true_weights) {
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.17g\n", w);
      out << buf;
    }
    std::cout << "wrote " << wpath << "\n";
  }
  return 0;
}

int cmd_run(const RawOptions& raw) {
  ExperimentConfig config = assemble_config(raw);
  const ExperimentInstance instance = build_instance(config);
  const PresetDefaults& defaults = preset_defaults(config.preset);
  const double eta =
      config.etas.empty() ? defaults.reference_etas[1] : config.etas.front();
  const std::size_t budget =
      config.budget > 0 ? config.budget : defaults.budget;
  const PolicyKind policy = config.policies.size() == 1
                                ? config.policies.front()
                                : PolicyKind::AdaGradDiff;
  std::filesystem::create_directories(
      config.out_dir.empty() ? "." : config.out_dir);
  const std::filesystem::path dir =
      config.out_dir.empty() ? "." : config.out_dir;

  for (std::uint64_t seed : config.seeds) {
    // single runs start at zero unless the config says otherwise
    const BlockVector x1 = initial_point(instance, config, seed, InitKind::Zero);
    SolverConfig solver_config;
    solver_config.eta = eta;
    solver_config.eps = config.eps;
    solver_config.budget = budget;
    solver_config.policy = policy;
    solver_config.monitors = config.monitors;
    solver_config.monitor_stride = config.monitor_stride;
    if (config.monitors.count(MonitorKind::Fejer) > 0) {
      // minimizer estimate from the 10x-budget refinement run
      SolverConfig ref_config;
      ref_config.eta = eta;
      ref_config.eps = config.eps;
      ref_config.budget = 10 * budget;
      ref_config.policy = PolicyKind::AdaGradDiff;
      const Trace ref_trace =
          run(instance.problem, ref_config, BlockVector(instance.space));
      solver_config.reference_point = ref_trace.final_average;
    } else if (config.monitors.count(MonitorKind::Lemma1) > 0) {
      solver_config.reference_point = x1;
    }

    const Trace trace = run(instance.problem, solver_config, x1);
    std::ostringstream name;
    name << "trace_" << policy_name(policy) << "_seed" << seed << ".csv";
    const std::string path = (dir / name.str()).string();
    std::ostringstream meta;
    meta << "# preset=" << preset_name(config.preset)
         << " policy=" << policy_name(policy) << " eta=" << eta
         << " seed=" << seed << " budget=" << budget;
    write_trace_csv(path, trace, meta.str());

    std::cout << policy_name(policy) << " seed " << seed << ": ";
    if (trace.aborted) {
      std::cout << "aborted at step " << trace.abort_step << " ("
                << trace.abort_reason << ")\n";
      continue;
    }
    std::cout << "F(x_n) = " << trace.objective.back()
              << "  F(xbar) = " << objective(instance.problem,
                                             trace.final_average)
              << "  max||x|| = " << trace.max_iterate_norm << "\n";
    if (!trace.lemma1_residual.empty()) {
      const double worst = *std::min_element(trace.lemma1_residual.begin(),
                                             trace.lemma1_residual.end());
      std::cout << "  lemma1 min residual = " << worst << "\n";
    }
    if (!trace.fejer_residual.empty()) {
      const double worst = *std::min_element(trace.fejer_residual.begin(),
                                             trace.fejer_residual.end());
      std::cout << "  fejer min residual = " << worst << "\n";
    }
    if (config.monitors.count(MonitorKind::DiffSummability) > 0) {
      const SummabilityReport report = summability_report(trace);
      std::cout << "  sum ||g_diff||^2 = " << report.total
                << "  tail fraction = " << report.tail_fraction << "\n";
    }
    std::cout << "  trace: " << path << "\n";
  }
  return 0;
}

int cmd_sweep(const RawOptions& raw) {
  ExperimentConfig config = assemble_config(raw);
  SweepResult result = sweep(config);
  estimate_fstar(config, result);
  for (const std::string& path : write_sweep_outputs(result)) {
    std::cout << "wrote " << path << "\n";
  }
  for (const std::string& path : report(result, ReportKind::GapVsEta)) {
    std::cout << "wrote " << path << "\n";
  }
  std::cout << "fstar = " << result.fstar << "\n";
  return 0;
}

int cmd_fstar(const RawOptions& raw) {
  ExperimentConfig config = assemble_config(raw);
  SweepResult result = sweep(config);
  const double fstar = estimate_fstar(config, result);
  write_sweep_outputs(result);
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", fstar);
  std::cout << "fstar = " << buf << "\n";
  return 0;
}

int cmd_report(const RawOptions& raw, const std::string& kind_name) {
  ExperimentConfig config = assemble_config(raw);
  const ReportKind kind = parse_report_kind(kind_name);
  SweepResult result = sweep(config);
  estimate_fstar(config, result);
  for (const std::string& path : report(result, kind)) {
    std::cout << "wrote " << path << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"AdaGrad-Diff proximal solver benchmark"};
  app.require_subcommand(1);

  RawOptions datagen_raw, run_raw, sweep_raw, fstar_raw, report_raw;
  std::string report_kind = "gap-vs-eta";

  CLI::App* datagen =
      app.add_subcommand("datagen", "generate and write a preset dataset");
  add_common_options(datagen, datagen_raw);
  CLI::App* run_cmd =
      app.add_subcommand("run", "single configuration run with trace output");
  add_common_options(run_cmd, run_raw);
  CLI::App* sweep_cmd = app.add_subcommand(
      "sweep", "grid sweep over (policy, eta, seed) with gap CSVs");
  add_common_options(sweep_cmd, sweep_raw);
  CLI::App* fstar_cmd = app.add_subcommand(
      "fstar", "estimate the optimal value via the running-minimum protocol");
  add_common_options(fstar_cmd, fstar_raw);
  CLI::App* report_cmd = app.add_subcommand(
      "report", "rerun reference configurations and write report CSV/SVG");
  add_common_options(report_cmd, report_raw);
  report_cmd->add_option("--kind", report_kind,
                         "gap-vs-eta | gap-vs-iter | stepsize-vs-iter");

  CLI11_PARSE(app, argc, argv);

  try {
    if (datagen->parsed()) {
      return cmd_datagen(datagen_raw);
    }
    if (run_cmd->parsed()) {
      return cmd_run(run_raw);
    }
    if (sweep_cmd->parsed()) {
      return cmd_sweep(sweep_raw);
    }
    if (fstar_cmd->parsed()) {
      return cmd_fstar(fstar_raw);
    }
    if (report_cmd->parsed()) {
      return cmd_report(report_raw, report_kind);
    }
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 0;
}
