// Python bindings for the core operations: solver runs, prox operators,
// dataset generation/parsing and Gaussian kernels.

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "adadiff/bench.hpp"

namespace py = pybind11;
using namespace adadiff;

namespace {

BlockVector to_block_vector(const py::array_t<double>& array) {
  auto buf = array.request();
  if (buf.ndim != 1) {
    throw StructuralError("expected a 1-d array");
  }
  const auto* ptr = static_cast<const double*>(buf.ptr);
  std::vector<double> values(ptr, ptr + buf.shape[0]);
  auto space = SpaceDescriptor::scalar_blocks(values.size());
  return BlockVector(std::move(space), std::move(values));
}

py::array_t<double> to_array(const BlockVector& v) {
  py::array_t<double> out(v.dim());
  std::copy(v.data().begin(), v.data().end(),
            static_cast<double*>(out.request().ptr));
  return out;
}

Dataset dataset_from_dense(const Eigen::MatrixXd& a,
                           const std::vector<double>& labels) {
  std::vector<std::vector<double>> rows(a.rows());
  for (Eigen::Index j = 0; j < a.rows(); ++j) {
    rows[j].assign(a.row(j).begin(), a.row(j).end());
  }
  return Dataset::from_dense(rows, labels);
}

Problem build_problem(const std::string& loss, const Dataset& data,
                      double lambda, double sigma) {
  auto shared = std::make_shared<Dataset>(data);
  if (loss == "hinge") {
    return make_hinge_problem(shared, lambda);
  }
  if (loss == "lad") {
    return make_lad_problem(shared, lambda);
  }
  if (loss == "logistic-l2") {
    return make_logistic_l2_problem(shared, sigma);
  }
  if (loss == "logistic-l1") {
    return make_logistic_l1_problem(shared, lambda);
  }
  throw ConfigError("unknown loss: " + loss);
}

py::dict trace_to_dict(const Trace& trace) {
  py::dict out;
  out["objective"] = py::cast(trace.objective);
  out["avg_objective"] = py::cast(trace.avg_objective);
  out["mean_step"] = py::cast(trace.mean_step);
  out["grad_diff_sq"] = py::cast(trace.grad_diff_sq);
  out["final_iterate"] = to_array(trace.final_iterate);
  out["final_average"] = to_array(trace.final_average);
  out["aborted"] = trace.aborted;
  out["max_iterate_norm"] = trace.max_iterate_norm;
  const SummabilityReport report = summability_report(trace);
  out["diff_sq_total"] = report.total;
  out["diff_sq_tail_fraction"] = report.tail_fraction;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "AdaGrad-Diff variable-metric proximal solver";

  m.def(
      "solve",
      [](const Eigen::MatrixXd& a, const std::vector<double>& labels,
         const std::string& loss, const std::string& policy, double eta,
         std::size_t budget, double lambda, double sigma, double eps,
         py::object x1) {
        const Dataset data = dataset_from_dense(a, labels);
        const Problem problem = build_problem(loss, data, lambda, sigma);
        SolverConfig config;
        config.eta = eta;
        config.eps = eps;
        config.budget = budget;
        config.policy = parse_policy(policy);
        BlockVector start(SpaceDescriptor::scalar_blocks(data.cols));
        if (!x1.is_none()) {
          start = to_block_vector(x1.cast<py::array_t<double>>());
        }
        return trace_to_dict(run(problem, config, start));
      },
      py::arg("a"), py::arg("labels"), py::arg("loss"),
      py::arg("policy") = "adagrad-diff", py::arg("eta") = 1.0,
      py::arg("budget") = 100, py::arg("lambda_") = 1e-2,
      py::arg("sigma") = 1e-4, py::arg("eps") = 1e-8,
      py::arg("x1") = py::none(),
      "Run the proximal solver on a dense dataset; returns the trace.");

  m.def(
      "solve_svm_dual",
      [](const Eigen::MatrixXd& kernel, const std::vector<double>& labels,
         const std::string& policy, double eta, std::size_t budget,
         double lambda, double eps) {
        auto shared = std::make_shared<Eigen::MatrixXd>(kernel);
        const Problem problem = make_svm_dual_problem(shared, labels, lambda);
        SolverConfig config;
        config.eta = eta;
        config.eps = eps;
        config.budget = budget;
        config.policy = parse_policy(policy);
        BlockVector start(SpaceDescriptor::scalar_blocks(labels.size()));
        return trace_to_dict(run(problem, config, start));
      },
      py::arg("kernel"), py::arg("labels"), py::arg("policy") = "adagrad-diff",
      py::arg("eta") = 0.002, py::arg("budget") = 20,
      py::arg("lambda_") = 1e-3, py::arg("eps") = 1e-8,
      "Run the box-constrained SVM dual with a precomputed kernel.");

  m.def(
      "prox_l1",
      [](const py::array_t<double>& y, double lambda, double eta,
         const py::array_t<double>& w) {
        const BlockVector yv = to_block_vector(y);
        auto wbuf = w.request();
        const auto* wptr = static_cast<const double*>(wbuf.ptr);
        MetricWeights weights(std::vector<double>(wptr, wptr + wbuf.shape[0]));
        return to_array(prox_l1(yv, lambda, eta, weights));
      },
      py::arg("y"), py::arg("lambda_"), py::arg("eta"), py::arg("w"),
      "Soft threshold with per-coordinate threshold eta*lambda/w_i.");

  m.def(
      "prox_signed_box",
      [](const py::array_t<double>& y, const std::vector<double>& labels,
         std::size_t n) {
        return to_array(prox_signed_box(to_block_vector(y), labels, n));
      },
      py::arg("y"), py::arg("labels"), py::arg("n"),
      "Clip to [0, 1/n] (label +1) or [-1/n, 0] (label -1) per coordinate.");

  m.def(
      "gen_synthetic",
      [](std::size_t rows, std::size_t cols, std::size_t nnz,
         const std::string& task, std::uint64_t seed) {
        SyntheticSpec spec{rows, cols, nnz,
                           task == "regression" ? SyntheticTask::Regression
                                                : SyntheticTask::SignRegression,
                           seed};
        const Dataset data = gen_synthetic(spec);
        return py::make_tuple(dataset_dense(data), py::cast(data.labels),
                              py::cast(data.true_weights));
      },
      py::arg("rows"), py::arg("cols"), py::arg("nnz") = 20,
      py::arg("task") = "sign", py::arg("seed") = 0,
      "Seeded standard-normal dataset; returns (A, b, true_w).");

  m.def(
      "gen_two_moons",
      [](std::size_t n, double noise_std, std::uint64_t seed) {
        const Dataset data = gen_two_moons(n, noise_std, seed);
        return py::make_tuple(dataset_dense(data), py::cast(data.labels));
      },
      py::arg("n") = 300, py::arg("noise_std") = 0.1, py::arg("seed") = 0,
      "Two interleaving half-circles with +-1 labels; returns (X, b).");

  m.def(
      "gaussian_kernel",
      [](const Eigen::MatrixXd& points, double width) {
        return gaussian_kernel(points, width);
      },
      py::arg("points"), py::arg("width") = 1.0,
      "exp(-||a_j - a_k||^2 / (2 width^2)) kernel matrix.");

  m.def(
      "parse_libsvm",
      [](const std::string& text, std::size_t dim_override) {
        std::istringstream in(text);
        const Dataset data = parse_libsvm(in, dim_override);
        return py::make_tuple(dataset_dense(data), py::cast(data.labels));
      },
      py::arg("text"), py::arg("dim_override") = 0,
      "Parse LIBSVM-format text; returns (A, b) densely.");

  m.def(
      "serialize_libsvm",
      [](const Eigen::MatrixXd& a, const std::vector<double>& labels) {
        return serialize_libsvm(dataset_from_dense(a, labels));
      },
      py::arg("a"), py::arg("labels"),
      "Render a dataset in LIBSVM text form (%.17g precision).");
}
