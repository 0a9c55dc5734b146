#include "adadiff/problems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace adadiff {

namespace {

constexpr double kMarginCut = 500.0;  // beyond this the logistic terms saturate

double softplus(double t) {
  if (t > kMarginCut) {
    return t;
  }
  if (t < -kMarginCut) {
    return 0.0;
  }
  return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

double sigmoid(double t) {
  if (t > kMarginCut) {
    return 1.0;
  }
  if (t < -kMarginCut) {
    return 0.0;
  }
  if (t >= 0.0) {
    return 1.0 / (1.0 + std::exp(-t));
  }
  const double e = std::exp(t);
  return e / (1.0 + e);
}

void check_dim(const BlockVector& x, const Dataset& data) {
  if (x.dim() != data.cols) {
    throw StructuralError("iterate dimension does not match dataset columns");
  }
}

void check_scalar_blocks(const BlockVector& y, const char* what) {
  if (y.block_count() != y.dim()) {
    throw ConfigError(std::string(what) + " requires scalar blocks");
  }
}

}  // namespace

Dataset Dataset::from_dense(const std::vector<std::vector<double>>& a,
                            std::vector<double> labels) {
  Dataset out;
  out.rows = a.size();
  out.cols = a.empty() ? 0 : a.front().size();
  out.labels = std::move(labels);
  out.row_ptr.reserve(out.rows + 1);
  out.row_ptr.push_back(0);
  for (const auto& row : a) {
    if (row.size() != out.cols) {
      throw StructuralError("ragged dense matrix");
    }
    for (std::size_t k = 0; k < row.size(); ++k) {
      out.col_idx.push_back(k);
      out.values.push_back(row[k]);
    }
    out.row_ptr.push_back(out.col_idx.size());
  }
  out.validate();
  return out;
}

double Dataset::row_dot(std::size_t j, std::span<const double> x) const {
  double acc = 0.0;
  for (std::size_t k = row_ptr[j]; k < row_ptr[j + 1]; ++k) {
    acc += values[k] * x[col_idx[k]];
  }
  return acc;
}

void Dataset::add_row(std::size_t j, double coef, std::span<double> out) const {
  for (std::size_t k = row_ptr[j]; k < row_ptr[j + 1]; ++k) {
    out[col_idx[k]] += coef * values[k];
  }
}

void Dataset::validate() const {
  if (row_ptr.size() != rows + 1 || row_ptr.front() != 0 ||
      row_ptr.back() != col_idx.size() || col_idx.size() != values.size()) {
    throw StructuralError("inconsistent CSR layout");
  }
  if (labels.size() != rows) {
    throw StructuralError("label count does not match row count");
  }
  for (std::size_t j = 0; j < rows; ++j) {
    if (row_ptr[j] > row_ptr[j + 1]) {
      throw StructuralError("row pointers must be nondecreasing");
    }
    for (std::size_t k = row_ptr[j]; k < row_ptr[j + 1]; ++k) {
      if (col_idx[k] >= cols) {
        throw StructuralError("column index out of range");
      }
      if (k > row_ptr[j] && col_idx[k] <= col_idx[k - 1]) {
        throw StructuralError("column indices must increase within a row");
      }
    }
  }
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw NumericError("dataset value is not finite");
    }
  }
}

FEval hinge_eval(const BlockVector& x, const Dataset& data) {
  check_dim(x, data);
  const double inv_n = 1.0 / static_cast<double>(data.rows);
  FEval out{0.0, BlockVector::zeros_like(x)};
  for (std::size_t j = 0; j < data.rows; ++j) {
    const double margin = data.labels[j] * data.row_dot(j, x.data());
    if (margin < 1.0) {
      out.value += (1.0 - margin) * inv_n;
      data.add_row(j, -data.labels[j] * inv_n, out.grad.data());
    }
    // margin == 1: the kink admits 0, which we pick
  }
  return out;
}

double hinge_value(const BlockVector& x, const Dataset& data) {
  check_dim(x, data);
  double acc = 0.0;
  for (std::size_t j = 0; j < data.rows; ++j) {
    const double margin = data.labels[j] * data.row_dot(j, x.data());
    if (margin < 1.0) {
      acc += 1.0 - margin;
    }
  }
  return acc / static_cast<double>(data.rows);
}

FEval lad_eval(const BlockVector& x, const Dataset& data) {
  check_dim(x, data);
  const double inv_n = 1.0 / static_cast<double>(data.rows);
  FEval out{0.0, BlockVector::zeros_like(x)};
  for (std::size_t j = 0; j < data.rows; ++j) {
    const double residual = data.labels[j] - data.row_dot(j, x.data());
    out.value += std::abs(residual) * inv_n;
    if (residual > 0.0) {
      data.add_row(j, -inv_n, out.grad.data());
    } else if (residual < 0.0) {
      data.add_row(j, inv_n, out.grad.data());
    }
    // residual == 0: sign(0) = 0
  }
  return out;
}

double lad_value(const BlockVector& x, const Dataset& data) {
  check_dim(x, data);
  double acc = 0.0;
  for (std::size_t j = 0; j < data.rows; ++j) {
    acc += std::abs(data.labels[j] - data.row_dot(j, x.data()));
  }
  return acc / static_cast<double>(data.rows);
}

FEval logistic_eval(const BlockVector& x, const Dataset& data, double sigma) {
  check_dim(x, data);
  if (sigma < 0.0) {
    throw DomainError("sigma must be nonnegative");
  }
  const double inv_n = 1.0 / static_cast<double>(data.rows);
  FEval out{0.0, BlockVector::zeros_like(x)};
  for (std::size_t j = 0; j < data.rows; ++j) {
    const double margin = data.labels[j] * data.row_dot(j, x.data());
    out.value += softplus(-margin) * inv_n;
    const double coef = -data.labels[j] * sigmoid(-margin) * inv_n;
    if (coef != 0.0) {
      data.add_row(j, coef, out.grad.data());
    }
  }
  if (sigma > 0.0) {
    out.value += 0.5 * sigma * x.norm_sq();
    for (std::size_t i = 0; i < x.dim(); ++i) {
      out.grad[i] += sigma * x[i];
    }
  }
  return out;
}

double logistic_value(const BlockVector& x, const Dataset& data, double sigma) {
  check_dim(x, data);
  double acc = 0.0;
  for (std::size_t j = 0; j < data.rows; ++j) {
    acc += softplus(-data.labels[j] * data.row_dot(j, x.data()));
  }
  acc /= static_cast<double>(data.rows);
  if (sigma > 0.0) {
    acc += 0.5 * sigma * x.norm_sq();
  }
  return acc;
}

namespace {

void check_kernel(const BlockVector& alpha, const Eigen::MatrixXd& kernel,
                  std::span<const double> labels) {
  if (kernel.rows() != kernel.cols()) {
    throw StructuralError("kernel matrix must be square");
  }
  if (static_cast<std::size_t>(kernel.rows()) != alpha.dim() ||
      labels.size() != alpha.dim()) {
    throw StructuralError("kernel/label size does not match dual dimension");
  }
}

}  // namespace

FEval svm_dual_eval(const BlockVector& alpha, const Eigen::MatrixXd& kernel,
                    std::span<const double> labels, double lambda) {
  check_kernel(alpha, kernel, labels);
  if (lambda <= 0.0) {
    throw DomainError("lambda must be positive");
  }
  Eigen::Map<const Eigen::VectorXd> a(alpha.data().data(), alpha.dim());
  Eigen::Map<const Eigen::VectorXd> b(labels.data(), labels.size());
  const Eigen::VectorXd ka = kernel * a;
  FEval out{0.5 / lambda * a.dot(ka) - a.dot(b), BlockVector::zeros_like(alpha)};
  Eigen::Map<Eigen::VectorXd>(out.grad.data().data(), alpha.dim()) =
      ka / lambda - b;
  return out;
}

double svm_dual_value(const BlockVector& alpha, const Eigen::MatrixXd& kernel,
                      std::span<const double> labels, double lambda) {
  check_kernel(alpha, kernel, labels);
  if (lambda <= 0.0) {
    throw DomainError("lambda must be positive");
  }
  Eigen::Map<const Eigen::VectorXd> a(alpha.data().data(), alpha.dim());
  Eigen::Map<const Eigen::VectorXd> b(labels.data(), labels.size());
  return 0.5 / lambda * a.dot(kernel * a) - a.dot(b);
}

BlockVector prox_l1(const BlockVector& y, double lambda, double eta,
                    const MetricWeights& w) {
  check_scalar_blocks(y, "l1 prox");
  if (lambda <= 0.0 || eta <= 0.0) {
    throw DomainError("lambda and eta must be positive");
  }
  if (w.size() != y.dim()) {
    throw StructuralError("weight count does not match dimension");
  }
  BlockVector out = y;
  for (std::size_t i = 0; i < y.dim(); ++i) {
    const double threshold = eta * lambda / w[i];
    const double yi = y[i];
    if (yi > threshold) {
      out[i] = yi - threshold;
    } else if (yi < -threshold) {
      out[i] = yi + threshold;
    } else {
      out[i] = 0.0;
    }
  }
  return out;
}

BlockVector prox_signed_box(const BlockVector& y,
                            std::span<const double> labels, std::size_t n) {
  check_scalar_blocks(y, "signed-box prox");
  if (labels.size() != y.dim()) {
    throw StructuralError("label count does not match dimension");
  }
  if (n == 0) {
    throw DomainError("box requires n >= 1");
  }
  const double hi = 1.0 / static_cast<double>(n);
  BlockVector out = y;
  for (std::size_t j = 0; j < y.dim(); ++j) {
    const double b = labels[j];
    if (b == 1.0) {
      out[j] = std::clamp(y[j], 0.0, hi);
    } else if (b == -1.0) {
      out[j] = std::clamp(y[j], -hi, 0.0);
    } else {
      throw DomainError("labels must be +1 or -1");
    }
  }
  return out;
}

BlockVector prox_step(const BlockVector& y, const RegularizerSpec& reg,
                      double eta, const MetricWeights& w) {
  if (std::holds_alternative<ZeroReg>(reg)) {
    return y;
  }
  if (const auto* l1 = std::get_if<L1Reg>(&reg)) {
    return prox_l1(y, l1->lambda, eta, w);
  }
  const auto& box = std::get<SignedBoxReg>(reg);
  return prox_signed_box(y, box.labels, box.n);
}

double regularizer_value(const RegularizerSpec& reg, const BlockVector& x) {
  if (std::holds_alternative<ZeroReg>(reg)) {
    return 0.0;
  }
  if (const auto* l1 = std::get_if<L1Reg>(&reg)) {
    double acc = 0.0;
    for (double xi : x.data()) {
      acc += std::abs(xi);
    }
    return l1->lambda * acc;
  }
  const auto& box = std::get<SignedBoxReg>(reg);
  if (box.labels.size() != x.dim()) {
    throw StructuralError("label count does not match dimension");
  }
  const double hi = 1.0 / static_cast<double>(box.n);
  for (std::size_t j = 0; j < x.dim(); ++j) {
    const double signed_x = box.labels[j] * x[j];
    if (signed_x < 0.0 || signed_x > hi) {
      return std::numeric_limits<double>::infinity();
    }
  }
  return 0.0;
}

double objective(const Problem& problem, const BlockVector& x) {
  return problem.value(x) + regularizer_value(problem.reg, x);
}

Problem make_hinge_problem(std::shared_ptr<const Dataset> data, double lambda) {
  Problem p;
  p.eval = [data](const BlockVector& x) { return hinge_eval(x, *data); };
  p.value = [data](const BlockVector& x) { return hinge_value(x, *data); };
  p.reg = L1Reg{lambda};
  p.smoothness = Smoothness::LipschitzContinuous;
  return p;
}

Problem make_lad_problem(std::shared_ptr<const Dataset> data, double lambda) {
  Problem p;
  p.eval = [data](const BlockVector& x) { return lad_eval(x, *data); };
  p.value = [data](const BlockVector& x) { return lad_value(x, *data); };
  p.reg = L1Reg{lambda};
  p.smoothness = Smoothness::LipschitzContinuous;
  return p;
}

Problem make_logistic_l2_problem(std::shared_ptr<const Dataset> data,
                                 double sigma) {
  Problem p;
  p.eval = [data, sigma](const BlockVector& x) {
    return logistic_eval(x, *data, sigma);
  };
  p.value = [data, sigma](const BlockVector& x) {
    return logistic_value(x, *data, sigma);
  };
  p.reg = ZeroReg{};
  p.smoothness = Smoothness::LipschitzSmooth;
  return p;
}

Problem make_logistic_l1_problem(std::shared_ptr<const Dataset> data,
                                 double lambda) {
  Problem p;
  p.eval = [data](const BlockVector& x) { return logistic_eval(x, *data, 0.0); };
  p.value = [data](const BlockVector& x) {
    return logistic_value(x, *data, 0.0);
  };
  p.reg = L1Reg{lambda};
  p.smoothness = Smoothness::LipschitzSmooth;
  return p;
}

Problem make_svm_dual_problem(std::shared_ptr<const Eigen::MatrixXd> kernel,
                              std::vector<double> labels, double lambda) {
  auto shared_labels = std::make_shared<std::vector<double>>(std::move(labels));
  Problem p;
  p.eval = [kernel, shared_labels, lambda](const BlockVector& alpha) {
    return svm_dual_eval(alpha, *kernel, *shared_labels, lambda);
  };
  p.value = [kernel, shared_labels, lambda](const BlockVector& alpha) {
    return svm_dual_value(alpha, *kernel, *shared_labels, lambda);
  };
  p.reg = SignedBoxReg{*shared_labels, shared_labels->size()};
  p.smoothness = Smoothness::LipschitzSmooth;
  return p;
}

}  // namespace adadiff
