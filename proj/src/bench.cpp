#include "adadiff/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace adadiff {

namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

constexpr double kPlotFloor = 1e-16;  // log-plot clamp; CSVs keep signed values

const PresetDefaults kPresets[] = {
    {"hinge-synth", 1e-2, 0.0, 1000,
     {500, 100, 20, SyntheticTask::SignRegression, 0},
     {0.0063, 0.063, 0.63}},
    {"lad-synth", 1e-2, 0.0, 1000,
     {500, 100, 20, SyntheticTask::Regression, 0},
     {0.0042, 0.042, 0.42}},
    {"logreg-l2", 0.0, 1e-4, 2500,
     {1000, 100, 20, SyntheticTask::SignRegression, 0},
     {0.0863, 0.863, 8.63}},
    {"logreg-l1", 1e-2, 0.0, 1000,
     {2175, 60, 20, SyntheticTask::SignRegression, 0},
     {0.0238, 0.238, 2.38}},
    {"svm-dual", 1e-3, 0.0, 20,
     {300, 2, 2, SyntheticTask::SignRegression, 0},
     {0.0002, 0.002, 0.02}},
};

}  // namespace

const PresetDefaults& preset_defaults(Preset preset) {
  return kPresets[static_cast<std::size_t>(preset)];
}

Preset parse_preset(const std::string& name) {
  for (std::size_t i = 0; i < std::size(kPresets); ++i) {
    if (name == kPresets[i].name) {
      return static_cast<Preset>(i);
    }
  }
  throw ConfigError("unknown preset: " + name);
}

std::string preset_name(Preset preset) { return preset_defaults(preset).name; }

std::vector<double> log_grid(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi > lo)) {
    throw ConfigError("grid needs 0 < min < max");
  }
  if (count == 0) {
    throw ConfigError("grid needs at least one point");
  }
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  const double llo = std::log10(lo);
  const double step = (std::log10(hi) - llo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = std::pow(10.0, llo + step * static_cast<double>(i));
  }
  return out;
}

namespace {

Dataset truncate_rows(Dataset data, std::size_t max_rows) {
  if (max_rows == 0 || data.rows <= max_rows) {
    return data;
  }
  Dataset out;
  out.rows = max_rows;
  out.cols = data.cols;
  out.labels.assign(data.labels.begin(), data.labels.begin() + max_rows);
  const std::size_t end = data.row_ptr[max_rows];
  out.row_ptr.assign(data.row_ptr.begin(), data.row_ptr.begin() + max_rows + 1);
  out.col_idx.assign(data.col_idx.begin(), data.col_idx.begin() + end);
  out.values.assign(data.values.begin(), data.values.begin() + end);
  out.validate();
  return out;
}

double preset_lambda(const ExperimentConfig& config) {
  return config.lambda >= 0.0 ? config.lambda
                              : preset_defaults(config.preset).lambda;
}

double preset_sigma(const ExperimentConfig& config) {
  return config.sigma >= 0.0 ? config.sigma
                             : preset_defaults(config.preset).sigma;
}

}  // namespace

ExperimentInstance build_instance(const ExperimentConfig& config) {
  const PresetDefaults& defaults = preset_defaults(config.preset);
  ExperimentInstance out;

  if (config.preset == Preset::SvmDual) {
    auto data = std::make_shared<Dataset>(
        config.data_path.empty()
            ? gen_two_moons(defaults.synth.rows, config.noise_std,
                            config.data_seed)
            : truncate_rows(parse_libsvm_file(config.data_path),
                            config.max_rows));
    auto kernel = std::make_shared<Eigen::MatrixXd>(
        gaussian_kernel(dataset_dense(*data), config.kernel_width));
    out.data = data;
    out.problem =
        make_svm_dual_problem(kernel, data->labels, preset_lambda(config));
    out.space = SpaceDescriptor::scalar_blocks(data->rows);
    return out;
  }

  SyntheticSpec synth = defaults.synth;
  synth.seed = config.data_seed;
  auto data = std::make_shared<Dataset>(
      config.data_path.empty()
          ? gen_synthetic(synth)
          : truncate_rows(parse_libsvm_file(config.data_path),
                          config.max_rows));
  out.data = data;
  out.space = SpaceDescriptor::scalar_blocks(data->cols);
  switch (config.preset) {
    case Preset::HingeSynth:
      out.problem = make_hinge_problem(data, preset_lambda(config));
      break;
    case Preset::LadSynth:
      out.problem = make_lad_problem(data, preset_lambda(config));
      break;
    case Preset::LogRegL2:
      out.problem = make_logistic_l2_problem(data, preset_sigma(config));
      break;
    case Preset::LogRegL1:
      out.problem = make_logistic_l1_problem(data, preset_lambda(config));
      break;
    default:
      throw ConfigError("unhandled preset");
  }
  return out;
}

BlockVector initial_point(const ExperimentInstance& instance,
                          const ExperimentConfig& config, std::uint64_t seed,
                          InitKind fallback) {
  BlockVector x1(instance.space);
  if (config.init.value_or(fallback) == InitKind::Zero) {
    return x1;
  }
  RngStream rng(seed);
  if (const auto* box = std::get_if<SignedBoxReg>(&instance.problem.reg)) {
    // stay feasible: alpha_j = b_j * u / n with u uniform on [0, 1]
    const double hi = 1.0 / static_cast<double>(box->n);
    for (std::size_t j = 0; j < x1.dim(); ++j) {
      x1[j] = box->labels[j] * hi * rng.uniform01();
    }
    return x1;
  }
  for (std::size_t i = 0; i < x1.dim(); ++i) {
    x1[i] = rng.uniform(-1.0, 1.0);
  }
  return x1;
}

namespace {

std::vector<double> config_etas(const ExperimentConfig& config) {
  if (!config.etas.empty()) {
    return config.etas;
  }
  if (config.grid.count == 0) {
    throw ConfigError("no eta values configured");
  }
  return log_grid(config.grid.lo, config.grid.hi, config.grid.count);
}

std::size_t config_budget(const ExperimentConfig& config) {
  return config.budget > 0 ? config.budget
                           : preset_defaults(config.preset).budget;
}

struct RunOutput {
  RunSummary summary;
  std::string trace_csv;  // serialized trace when traces are requested
};

double finite_min(double a, double b) {
  if (!std::isfinite(b)) {
    return a;
  }
  return std::isfinite(a) ? std::min(a, b) : b;
}

double trace_min_objective(const Trace& trace) {
  double best = std::numeric_limits<double>::quiet_NaN();
  for (double v : trace.objective) {
    best = finite_min(best, v);
  }
  for (double v : trace.avg_objective) {
    best = finite_min(best, v);
  }
  return best;
}

std::string trace_metadata(const ExperimentConfig& config, PolicyKind policy,
                           double eta, std::uint64_t seed,
                           std::size_t budget) {
  std::ostringstream meta;
  meta << "# preset=" << preset_name(config.preset)
       << " policy=" << policy_name(policy) << " eta=" << g17(eta)
       << " seed=" << seed << " budget=" << budget
       << " eps=" << g17(config.eps);
  return meta.str();
}

std::string render_trace_csv(const Trace& trace, const std::string& metadata) {
  std::ostringstream out;
  const bool with_lemma1 = !trace.lemma1_residual.empty();
  const bool with_fejer = !trace.fejer_residual.empty();
  out << "# adabench-csv trace v1\n" << metadata << "\n";
  out << "iter,objective,avg_objective,mean_step,grad_diff_sq";
  if (with_lemma1) {
    out << ",lemma1_residual";
  }
  if (with_fejer) {
    out << ",fejer_residual";
  }
  out << "\n";
  std::map<std::size_t, std::size_t> monitor_row;
  for (std::size_t k = 0; k < trace.monitor_steps.size(); ++k) {
    monitor_row[trace.monitor_steps[k]] = k;
  }
  for (std::size_t n = 0; n < trace.objective.size(); ++n) {
    out << (n + 1) << ',' << g17(trace.objective[n]) << ','
        << g17(trace.avg_objective[n]) << ',' << g17(trace.mean_step[n]) << ','
        << g17(trace.grad_diff_sq[n]);
    const auto row = monitor_row.find(n + 1);
    if (with_lemma1) {
      out << ',';
      if (row != monitor_row.end()) {
        out << g17(trace.lemma1_residual[row->second]);
      }
    }
    if (with_fejer) {
      out << ',';
      if (row != monitor_row.end()) {
        out << g17(trace.fejer_residual[row->second]);
      }
    }
    out << "\n";
  }
  return out.str();
}

RunOutput execute_item(const ExperimentInstance& instance,
                       const ExperimentConfig& config, PolicyKind policy,
                       std::size_t eta_index, double eta, std::uint64_t seed,
                       std::size_t budget, bool keep_trace,
                       Trace* trace_out = nullptr) {
  RunOutput out;
  out.summary.policy = policy;
  out.summary.eta_index = eta_index;
  out.summary.eta = eta;
  out.summary.seed = seed;

  Trace trace;
  try {
    SolverConfig solver_config;
    solver_config.eta = eta;
    solver_config.eps = config.eps;
    solver_config.budget = budget;
    solver_config.policy = policy;
    solver_config.monitors = config.monitors;
    solver_config.monitor_stride = config.monitor_stride;
    if (config.monitors.count(MonitorKind::Lemma1) > 0 ||
        config.monitors.count(MonitorKind::Fejer) > 0) {
      solver_config.reference_point = initial_point(instance, config, seed);
    }
    trace = run(instance.problem, solver_config,
                initial_point(instance, config, seed));
  } catch (const std::exception& err) {
    out.summary.aborted = true;
    out.summary.diagnostic = err.what();
    out.summary.final_gap = std::numeric_limits<double>::quiet_NaN();
    out.summary.min_objective = std::numeric_limits<double>::quiet_NaN();
    return out;
  }

  out.summary.aborted = trace.aborted;
  out.summary.diagnostic = trace.abort_reason;
  out.summary.final_objective =
      trace.objective.empty() ? std::numeric_limits<double>::quiet_NaN()
                              : trace.objective.back();
  double final_avg = std::numeric_limits<double>::quiet_NaN();
  if (!trace.aborted) {
    final_avg = objective(instance.problem, trace.final_average);
  }
  out.summary.final_avg_objective = final_avg;
  out.summary.min_objective =
      finite_min(trace_min_objective(trace), final_avg);
  out.summary.final_gap = std::numeric_limits<double>::quiet_NaN();

  if (keep_trace) {
    out.trace_csv = render_trace_csv(
        trace, trace_metadata(config, policy, eta, seed, budget));
  }
  if (trace_out != nullptr) {
    *trace_out = std::move(trace);
  }
  return out;
}

void recompute_gaps(SweepResult& result) {
  for (RunSummary& run : result.runs) {
    run.final_gap = run.aborted
                        ? std::numeric_limits<double>::quiet_NaN()
                        : run.final_avg_objective - result.fstar;
  }
  result.aggregates.clear();
  for (PolicyKind policy : result.config.policies) {
    for (std::size_t e = 0; e < result.etas.size(); ++e) {
      std::vector<double> gaps;
      for (const RunSummary& run : result.runs) {
        if (run.policy == policy && run.eta_index == e && !run.aborted) {
          gaps.push_back(run.final_gap);
        }
      }
      EtaAggregate agg{policy, result.etas[e],
                       std::numeric_limits<double>::quiet_NaN(),
                       std::numeric_limits<double>::quiet_NaN(),
                       std::numeric_limits<double>::quiet_NaN()};
      if (!gaps.empty()) {
        double mean = 0.0;
        for (double g : gaps) {
          mean += g;
        }
        mean /= static_cast<double>(gaps.size());
        double var = 0.0;
        for (double g : gaps) {
          var += (g - mean) * (g - mean);
        }
        agg.mean_gap = mean;
        agg.std_gap = gaps.size() > 1
                          ? std::sqrt(var / static_cast<double>(gaps.size() - 1))
                          : 0.0;
        std::sort(gaps.begin(), gaps.end());
        const std::size_t mid = gaps.size() / 2;
        agg.median_gap = gaps.size() % 2 == 1
                             ? gaps[mid]
                             : 0.5 * (gaps[mid - 1] + gaps[mid]);
      }
      result.aggregates.push_back(agg);
    }
  }
}

void ensure_out_dir(const std::string& out_dir) {
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
  }
}

std::string join_path(const std::string& dir, const std::string& name) {
  return dir.empty() ? name : (std::filesystem::path(dir) / name).string();
}

}  // namespace

SweepResult sweep(const ExperimentConfig& config) {
  return sweep(config, build_instance(config));
}

SweepResult sweep(const ExperimentConfig& config,
                  const ExperimentInstance& instance) {
  if (config.seeds.empty()) {
    throw ConfigError("at least one seed is required");
  }
  if (config.policies.empty()) {
    throw ConfigError("at least one policy is required");
  }
  if (config.monitors.count(MonitorKind::Fejer) > 0) {
    // the Fejer monitor needs a minimizer estimate, which a sweep item
    // cannot provide; the run subcommand computes one via a reference solve
    throw ConfigError("fejer monitor is not available inside sweeps");
  }
  SweepResult result;
  result.config = config;
  result.etas = config_etas(config);
  const std::size_t budget = config_budget(config);
  ensure_out_dir(config.out_dir);

  struct Item {
    PolicyKind policy;
    std::size_t eta_index;
    std::uint64_t seed;
  };
  std::vector<Item> items;
  for (PolicyKind policy : config.policies) {
    for (std::size_t e = 0; e < result.etas.size(); ++e) {
      for (std::uint64_t seed : config.seeds) {
        items.push_back({policy, e, seed});
      }
    }
  }

  std::vector<RunOutput> outputs(items.size());
  std::vector<char> done(items.size(), 0);
  std::mutex done_mutex;
  std::condition_variable done_cv;
  std::atomic<std::size_t> next{0};

  auto work = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= items.size()) {
        return;
      }
      const Item& item = items[i];
      outputs[i] = execute_item(instance, config, item.policy, item.eta_index,
                                result.etas[item.eta_index], item.seed, budget,
                                config.write_traces);
      {
        std::lock_guard<std::mutex> lock(done_mutex);
        done[i] = 1;
      }
      done_cv.notify_all();
    }
  };

  const std::size_t worker_count =
      std::max<std::size_t>(1, std::min(config.threads, items.size()));
  std::vector<std::thread> workers;
  workers.reserve(worker_count);
  for (std::size_t t = 0; t < worker_count; ++t) {
    workers.emplace_back(work);
  }

  // single collector: consume items in deterministic order
  result.runs.reserve(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    {
      std::unique_lock<std::mutex> lock(done_mutex);
      done_cv.wait(lock, [&] { return done[i] != 0; });
    }
    RunOutput& out = outputs[i];
    if (config.write_traces && !out.trace_csv.empty()) {
      std::ostringstream name;
      name << "trace_" << policy_name(items[i].policy) << "_eta"
           << items[i].eta_index << "_seed" << items[i].seed << ".csv";
      const std::string path = join_path(config.out_dir, name.str());
      std::ofstream file(path);
      file << out.trace_csv;
      out.trace_csv.clear();
      out.summary.trace_path = path;
    }
    result.runs.push_back(std::move(out.summary));
  }
  for (std::thread& worker : workers) {
    worker.join();
  }

  double observed = std::numeric_limits<double>::quiet_NaN();
  for (const RunSummary& run : result.runs) {
    observed = finite_min(observed, run.min_objective);
  }
  if (!std::isfinite(observed)) {
    throw NumericError("no finite objective observed in the sweep");
  }
  result.observed_min = observed;
  result.fstar = observed;
  recompute_gaps(result);
  return result;
}

double estimate_fstar(const ExperimentConfig& config, SweepResult& result) {
  (void)config;
  return estimate_fstar(result.config, build_instance(result.config), result);
}

double estimate_fstar(const ExperimentConfig& config,
                      const ExperimentInstance& instance, SweepResult& result) {
  // best-decaying configuration: smallest mean final averaged objective
  double best_score = std::numeric_limits<double>::infinity();
  PolicyKind best_policy = result.config.policies.front();
  std::size_t best_eta = 0;
  for (PolicyKind policy : result.config.policies) {
    for (std::size_t e = 0; e < result.etas.size(); ++e) {
      double mean = 0.0;
      std::size_t count = 0;
      for (const RunSummary& run : result.runs) {
        if (run.policy == policy && run.eta_index == e && !run.aborted &&
            std::isfinite(run.final_avg_objective)) {
          mean += run.final_avg_objective;
          ++count;
        }
      }
      if (count == 0) {
        continue;
      }
      mean /= static_cast<double>(count);
      if (mean < best_score) {
        best_score = mean;
        best_policy = policy;
        best_eta = e;
      }
    }
  }
  if (!std::isfinite(best_score)) {
    throw NumericError("fstar estimation failed: every run aborted");
  }

  (void)config;  // the sweep's own config drives the refinement
  const std::size_t long_budget = 10 * config_budget(result.config);
  double refined = result.observed_min;
  for (std::uint64_t seed : result.config.seeds) {
    const RunOutput out =
        execute_item(instance, result.config, best_policy, best_eta,
                     result.etas[best_eta], seed, long_budget, false);
    refined = finite_min(refined, out.summary.min_objective);
  }
  result.fstar = refined;
  result.refined = true;
  recompute_gaps(result);
  return result.fstar;
}

double estimate_fstar(const ExperimentConfig& config) {
  SweepResult result = sweep(config);
  return estimate_fstar(config, result);
}

std::array<double, 3> derive_reference_etas(const SweepResult& result) {
  double sum = 0.0;
  std::size_t count = 0;
  for (PolicyKind policy : result.config.policies) {
    double best_gap = std::numeric_limits<double>::infinity();
    double best_eta = 0.0;
    for (const EtaAggregate& agg : result.aggregates) {
      if (agg.policy == policy && std::isfinite(agg.mean_gap) &&
          agg.mean_gap < best_gap) {
        best_gap = agg.mean_gap;
        best_eta = agg.eta;
      }
    }
    if (best_gap < std::numeric_limits<double>::infinity()) {
      sum += best_eta;
      ++count;
    }
  }
  if (count == 0) {
    throw NumericError("no finite aggregate to derive reference etas from");
  }
  const double mid = sum / static_cast<double>(count);
  return {0.1 * mid, mid, 10.0 * mid};
}

void write_trace_csv(const std::string& path, const Trace& trace,
                     const std::string& metadata) {
  std::ofstream file(path);
  if (!file) {
    throw ConfigError("cannot write " + path);
  }
  file << render_trace_csv(trace, metadata);
}

namespace {

// --- minimal self-contained SVG line plots ---

struct PlotSeries {
  std::string label;
  std::string color;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> band_lo;  // optional, same length as x
  std::vector<double> band_hi;
};

double plot_value(double v, bool log_scale) {
  if (!log_scale) {
    return v;
  }
  return std::log10(std::max(v, kPlotFloor));
}

void write_svg_plot(const std::string& path, const std::string& title,
                    const std::string& xlabel, const std::string& ylabel,
                    bool logx, bool logy,
                    const std::vector<PlotSeries>& series) {
  const double width = 640.0, height = 440.0;
  const double left = 70.0, right = 20.0, top = 40.0, bottom = 55.0;
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const PlotSeries& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.y[i])) {
        continue;
      }
      xmin = std::min(xmin, plot_value(s.x[i], logx));
      xmax = std::max(xmax, plot_value(s.x[i], logx));
      double lo = s.band_lo.empty() ? s.y[i] : s.band_lo[i];
      double hi = s.band_hi.empty() ? s.y[i] : s.band_hi[i];
      ymin = std::min(ymin, plot_value(std::min(lo, s.y[i]), logy));
      ymax = std::max(ymax, plot_value(std::max(hi, s.y[i]), logy));
    }
  }
  if (!std::isfinite(xmin) || !std::isfinite(ymin)) {
    xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
  }
  if (xmax - xmin < 1e-12) {
    xmax = xmin + 1.0;
  }
  if (ymax - ymin < 1e-12) {
    ymax = ymin + 1.0;
  }
  auto sx = [&](double v) {
    return left + (plot_value(v, logx) - xmin) / (xmax - xmin) *
                      (width - left - right);
  };
  auto sy = [&](double v) {
    return height - bottom - (plot_value(v, logy) - ymin) / (ymax - ymin) *
                                 (height - top - bottom);
  };

  std::ofstream file(path);
  if (!file) {
    throw ConfigError("cannot write " + path);
  }
  file << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
       << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " "
       << height << "\">\n";
  file << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  file << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" "
       << "font-family=\"sans-serif\" font-size=\"15\">" << title
       << "</text>\n";

  auto axis_ticks = [](double lo, double hi, bool log_scale) {
    std::vector<double> ticks;
    if (log_scale) {
      for (int p = static_cast<int>(std::ceil(lo - 1e-9));
           p <= static_cast<int>(std::floor(hi + 1e-9)); ++p) {
        ticks.push_back(static_cast<double>(p));
      }
    } else {
      const double step = (hi - lo) / 5.0;
      for (int k = 0; k <= 5; ++k) {
        ticks.push_back(lo + step * k);
      }
    }
    return ticks;
  };

  file << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"black\">\n";
  for (double t : axis_ticks(xmin, xmax, logx)) {
    const double px = left + (t - xmin) / (xmax - xmin) * (width - left - right);
    file << "<line x1=\"" << px << "\" y1=\"" << top << "\" x2=\"" << px
         << "\" y2=\"" << height - bottom << "\" stroke=\"#dddddd\"/>\n";
    file << "<text x=\"" << px << "\" y=\"" << height - bottom + 16
         << "\" text-anchor=\"middle\">"
         << (logx ? "1e" + std::to_string(static_cast<int>(t)) : g17(t))
         << "</text>\n";
  }
  for (double t : axis_ticks(ymin, ymax, logy)) {
    const double py =
        height - bottom - (t - ymin) / (ymax - ymin) * (height - top - bottom);
    file << "<line x1=\"" << left << "\" y1=\"" << py << "\" x2=\""
         << width - right << "\" y2=\"" << py << "\" stroke=\"#dddddd\"/>\n";
    file << "<text x=\"" << left - 6 << "\" y=\"" << py + 4
         << "\" text-anchor=\"end\">"
         << (logy ? "1e" + std::to_string(static_cast<int>(t)) : g17(t))
         << "</text>\n";
  }
  file << "</g>\n";
  file << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\""
       << width - left - right << "\" height=\"" << height - top - bottom
       << "\" fill=\"none\" stroke=\"black\"/>\n";
  file << "<text x=\"" << width / 2 << "\" y=\"" << height - 12
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
       << "font-size=\"13\">" << xlabel << "</text>\n";
  file << "<text x=\"16\" y=\"" << height / 2
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
       << "font-size=\"13\" transform=\"rotate(-90 16 " << height / 2 << ")\">"
       << ylabel << "</text>\n";

  for (const PlotSeries& s : series) {
    if (!s.band_lo.empty()) {
      std::ostringstream pts;
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        pts << sx(s.x[i]) << "," << sy(s.band_hi[i]) << " ";
      }
      for (std::size_t i = s.x.size(); i-- > 0;) {
        pts << sx(s.x[i]) << "," << sy(s.band_lo[i]) << " ";
      }
      file << "<polygon points=\"" << pts.str() << "\" fill=\"" << s.color
           << "\" fill-opacity=\"0.15\" stroke=\"none\"/>\n";
    }
    std::ostringstream pts;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (std::isfinite(s.y[i])) {
        pts << sx(s.x[i]) << "," << sy(s.y[i]) << " ";
      }
    }
    file << "<polyline points=\"" << pts.str() << "\" fill=\"none\" stroke=\""
         << s.color << "\" stroke-width=\"1.5\"/>\n";
  }

  double legend_y = top + 16.0;
  for (const PlotSeries& s : series) {
    file << "<line x1=\"" << width - right - 150 << "\" y1=\"" << legend_y - 4
         << "\" x2=\"" << width - right - 126 << "\" y2=\"" << legend_y - 4
         << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>\n";
    file << "<text x=\"" << width - right - 120 << "\" y=\"" << legend_y
         << "\" font-family=\"sans-serif\" font-size=\"12\">" << s.label
         << "</text>\n";
    legend_y += 16.0;
  }
  file << "</svg>\n";
}

const char* policy_color(PolicyKind policy) {
  return policy == PolicyKind::AdaGrad ? "#1f77b4" : "#d62728";
}

struct IterationStats {
  // [policy][eta][iter] -> mean/std over seeds
  std::vector<std::vector<std::vector<double>>> mean;
  std::vector<std::vector<std::vector<double>>> stdev;
};

IterationStats rerun_reference(const SweepResult& result,
                               const std::array<double, 3>& etas,
                               bool gap_not_step) {
  const ExperimentConfig& config = result.config;
  const ExperimentInstance instance = build_instance(config);
  const std::size_t budget = config_budget(config);
  IterationStats stats;
  stats.mean.resize(config.policies.size());
  stats.stdev.resize(config.policies.size());
  for (std::size_t p = 0; p < config.policies.size(); ++p) {
    stats.mean[p].resize(etas.size());
    stats.stdev[p].resize(etas.size());
    for (std::size_t e = 0; e < etas.size(); ++e) {
      std::vector<std::vector<double>> curves;
      for (std::uint64_t seed : config.seeds) {
        Trace trace;
        execute_item(instance, config, config.policies[p], e, etas[e], seed,
                     budget, false, &trace);
        if (trace.aborted) {
          continue;
        }
        std::vector<double> curve(budget);
        for (std::size_t n = 0; n < budget; ++n) {
          curve[n] = gap_not_step ? trace.objective[n] - result.fstar
                                  : trace.mean_step[n];
        }
        curves.push_back(std::move(curve));
      }
      std::vector<double> mean(budget,
                               std::numeric_limits<double>::quiet_NaN());
      std::vector<double> stdev(budget,
                                std::numeric_limits<double>::quiet_NaN());
      if (!curves.empty()) {
        for (std::size_t n = 0; n < budget; ++n) {
          double m = 0.0;
          for (const auto& c : curves) {
            m += c[n];
          }
          m /= static_cast<double>(curves.size());
          double var = 0.0;
          for (const auto& c : curves) {
            var += (c[n] - m) * (c[n] - m);
          }
          mean[n] = m;
          stdev[n] = curves.size() > 1
                         ? std::sqrt(var / static_cast<double>(curves.size() - 1))
                         : 0.0;
        }
      }
      stats.mean[p][e] = std::move(mean);
      stats.stdev[p][e] = std::move(stdev);
    }
  }
  return stats;
}

}  // namespace

ReportKind parse_report_kind(const std::string& name) {
  if (name == "gap-vs-eta" || name == "gap_vs_eta") {
    return ReportKind::GapVsEta;
  }
  if (name == "gap-vs-iter" || name == "gap_vs_iter") {
    return ReportKind::GapVsIter;
  }
  if (name == "stepsize-vs-iter" || name == "stepsize_vs_iter") {
    return ReportKind::StepsizeVsIter;
  }
  throw ConfigError("unknown report kind: " + name);
}

std::vector<std::string> write_sweep_outputs(const SweepResult& result) {
  ensure_out_dir(result.config.out_dir);
  std::vector<std::string> written;

  const std::string runs_path =
      join_path(result.config.out_dir, "sweep_runs.csv");
  {
    std::ofstream file(runs_path);
    if (!file) {
      throw ConfigError("cannot write " + runs_path);
    }
    file << "# adabench-csv sweep-runs v1\n";
    file << "# preset=" << preset_name(result.config.preset)
         << " fstar=" << g17(result.fstar) << " refined=" << result.refined
         << "\n";
    file << "policy,eta,seed,final_objective,final_avg_objective,"
            "min_objective,final_gap,aborted\n";
    for (const RunSummary& run : result.runs) {
      file << policy_name(run.policy) << ',' << g17(run.eta) << ',' << run.seed
           << ',' << g17(run.final_objective) << ','
           << g17(run.final_avg_objective) << ',' << g17(run.min_objective)
           << ',' << g17(run.final_gap) << ',' << (run.aborted ? 1 : 0)
           << "\n";
    }
  }
  written.push_back(runs_path);

  const std::string fstar_path = join_path(result.config.out_dir, "fstar.csv");
  {
    std::ofstream file(fstar_path);
    file << "# adabench-csv fstar v1\n";
    file << "fstar,refined\n";
    file << g17(result.fstar) << ',' << (result.refined ? 1 : 0) << "\n";
  }
  written.push_back(fstar_path);
  return written;
}

std::vector<std::string> report(const SweepResult& result, ReportKind kind) {
  ensure_out_dir(result.config.out_dir);
  std::vector<std::string> written;

  if (kind == ReportKind::GapVsEta) {
    const std::string csv_path =
        join_path(result.config.out_dir, "gap_vs_eta.csv");
    {
      std::ofstream file(csv_path);
      if (!file) {
        throw ConfigError("cannot write " + csv_path);
      }
      file << "# adabench-csv gap-vs-eta v1\n";
      file << "# preset=" << preset_name(result.config.preset)
           << " fstar=" << g17(result.fstar) << "\n";
      file << "policy,eta,mean_final_gap,std_final_gap,median_final_gap\n";
      for (const EtaAggregate& agg : result.aggregates) {
        file << policy_name(agg.policy) << ',' << g17(agg.eta) << ','
             << g17(agg.mean_gap) << ',' << g17(agg.std_gap) << ','
             << g17(agg.median_gap) << "\n";
      }
    }
    written.push_back(csv_path);

    std::vector<PlotSeries> series;
    for (std::size_t p = 0; p < result.config.policies.size(); ++p) {
      const PolicyKind policy = result.config.policies[p];
      PlotSeries s;
      s.label = policy_name(policy);
      s.color = policy_color(policy);
      for (const EtaAggregate& agg : result.aggregates) {
        if (agg.policy != policy || !std::isfinite(agg.mean_gap)) {
          continue;
        }
        s.x.push_back(agg.eta);
        s.y.push_back(std::max(agg.mean_gap, kPlotFloor));
        s.band_lo.push_back(std::max(agg.mean_gap - agg.std_gap, kPlotFloor));
        s.band_hi.push_back(std::max(agg.mean_gap + agg.std_gap, kPlotFloor));
      }
      series.push_back(std::move(s));
    }
    const std::string svg_path =
        join_path(result.config.out_dir, "gap_vs_eta.svg");
    write_svg_plot(svg_path,
                   "final optimality gap vs eta (" +
                       preset_name(result.config.preset) + ")",
                   "eta", "final gap", true, true, series);
    written.push_back(svg_path);
    return written;
  }

  const bool gap_kind = kind == ReportKind::GapVsIter;
  const std::array<double, 3> etas = derive_reference_etas(result);
  const IterationStats stats = rerun_reference(result, etas, gap_kind);
  const std::string stem = gap_kind ? "gap_vs_iter" : "stepsize_vs_iter";
  const std::string csv_path =
      join_path(result.config.out_dir, stem + ".csv");
  {
    std::ofstream file(csv_path);
    if (!file) {
      throw ConfigError("cannot write " + csv_path);
    }
    file << "# adabench-csv " << (gap_kind ? "gap-vs-iter" : "stepsize-vs-iter")
         << " v1\n";
    file << "# preset=" << preset_name(result.config.preset)
         << " fstar=" << g17(result.fstar) << " etas=" << g17(etas[0]) << ';'
         << g17(etas[1]) << ';' << g17(etas[2]) << "\n";
    file << "policy,eta,iter," << (gap_kind ? "mean_gap,std_gap"
                                            : "mean_step,std_step")
         << "\n";
    for (std::size_t p = 0; p < result.config.policies.size(); ++p) {
      for (std::size_t e = 0; e < etas.size(); ++e) {
        const auto& mean = stats.mean[p][e];
        const auto& stdev = stats.stdev[p][e];
        for (std::size_t n = 0; n < mean.size(); ++n) {
          file << policy_name(result.config.policies[p]) << ',' << g17(etas[e])
               << ',' << (n + 1) << ',' << g17(mean[n]) << ',' << g17(stdev[n])
               << "\n";
        }
      }
    }
  }
  written.push_back(csv_path);

  for (std::size_t e = 0; e < etas.size(); ++e) {
    std::vector<PlotSeries> series;
    for (std::size_t p = 0; p < result.config.policies.size(); ++p) {
      const PolicyKind policy = result.config.policies[p];
      PlotSeries s;
      s.label = policy_name(policy);
      s.color = policy_color(policy);
      const auto& mean = stats.mean[p][e];
      const auto& stdev = stats.stdev[p][e];
      for (std::size_t n = 0; n < mean.size(); ++n) {
        if (!std::isfinite(mean[n])) {
          continue;
        }
        s.x.push_back(static_cast<double>(n + 1));
        s.y.push_back(std::max(mean[n], kPlotFloor));
        s.band_lo.push_back(std::max(mean[n] - stdev[n], kPlotFloor));
        s.band_hi.push_back(std::max(mean[n] + stdev[n], kPlotFloor));
      }
      series.push_back(std::move(s));
    }
    const std::string svg_path = join_path(
        result.config.out_dir, stem + "_eta" + std::to_string(e) + ".svg");
    write_svg_plot(svg_path,
                   (gap_kind ? "optimality gap, eta=" : "mean stepsize, eta=") +
                       g17(etas[e]),
                   "iteration", gap_kind ? "F - F*" : "mean effective step",
                   true, true, series);
    written.push_back(svg_path);
  }
  return written;
}

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) {
    return "";
  }
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string token;
  std::istringstream stream(s);
  while (std::getline(stream, token, sep)) {
    out.push_back(trim(token));
  }
  return out;
}

}  // namespace

void apply_config_entry(ExperimentConfig& config, const std::string& key,
                        const std::string& value) {
  if (key == "preset") {
    config.preset = parse_preset(value);
  } else if (key == "data") {
    config.data_path = value;
  } else if (key == "max_rows") {
    config.max_rows = std::stoull(value);
  } else if (key == "lambda") {
    config.lambda = std::stod(value);
  } else if (key == "sigma") {
    config.sigma = std::stod(value);
  } else if (key == "budget") {
    config.budget = std::stoull(value);
  } else if (key == "eta") {
    config.etas.clear();
    for (const std::string& v : split(value, ',')) {
      config.etas.push_back(std::stod(v));
    }
    config.grid.count = 0;
  } else if (key == "eta_grid") {
    const auto parts = split(value, ',');
    if (parts.size() != 3) {
      throw ConfigError("eta_grid needs min,max,count");
    }
    config.grid = {std::stod(parts[0]), std::stod(parts[1]),
                   std::stoull(parts[2])};
    config.etas.clear();
  } else if (key == "seeds") {
    config.seeds.clear();
    for (const std::string& v : split(value, ',')) {
      config.seeds.push_back(std::stoull(v));
    }
  } else if (key == "policy" || key == "policies") {
    config.policies.clear();
    for (const std::string& v : split(value, ',')) {
      config.policies.push_back(parse_policy(v));
    }
  } else if (key == "data_seed") {
    config.data_seed = std::stoull(value);
  } else if (key == "noise_std") {
    config.noise_std = std::stod(value);
  } else if (key == "kernel_width") {
    config.kernel_width = std::stod(value);
  } else if (key == "eps") {
    config.eps = std::stod(value);
  } else if (key == "init") {
    if (value == "zero") {
      config.init = InitKind::Zero;
    } else if (value == "random") {
      config.init = InitKind::Random;
    } else {
      throw ConfigError("init must be zero or random");
    }
  } else if (key == "out") {
    config.out_dir = value;
  } else if (key == "threads") {
    config.threads = std::stoull(value);
  } else if (key == "write_traces") {
    config.write_traces = value == "1" || value == "true";
  } else if (key == "monitors") {
    config.monitors.clear();
    for (const std::string& v : split(value, ',')) {
      if (v == "lemma1") {
        config.monitors.insert(MonitorKind::Lemma1);
      } else if (v == "fejer") {
        config.monitors.insert(MonitorKind::Fejer);
      } else if (v == "diffsum") {
        config.monitors.insert(MonitorKind::DiffSummability);
      } else {
        throw ConfigError("unknown monitor: " + v);
      }
    }
  } else if (key == "monitor_stride") {
    config.monitor_stride = std::stoull(value);
  } else {
    throw ConfigError("unknown config key: " + key);
  }
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file: " + path);
  }
  ExperimentConfig config;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.resize(hash);
    }
    const std::string text = trim(line);
    if (text.empty()) {
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw ParseError("expected key = value", line_number);
    }
    apply_config_entry(config, trim(text.substr(0, eq)),
                       trim(text.substr(eq + 1)));
  }
  return config;
}

}  // namespace adadiff
