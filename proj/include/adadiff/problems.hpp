#pragma once

#include <Eigen/Core>
#include <functional>
#include <memory>
#include <span>
#include <variant>
#include <vector>

#include "adadiff/block_vector.hpp"

namespace adadiff {

/// Sample matrix A (CSR) with per-row labels/targets b.
struct Dataset {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::size_t> row_ptr;  // rows + 1 entries
  std::vector<std::size_t> col_idx;  // 0-based, increasing within a row
  std::vector<double> values;
  std::vector<double> labels;        // length rows
  std::vector<double> true_weights;  // synthetic ground truth, else empty

  static Dataset from_dense(const std::vector<std::vector<double>>& a,
                            std::vector<double> labels);

  double row_dot(std::size_t j, std::span<const double> x) const;
  void add_row(std::size_t j, double coef, std::span<double> out) const;
  std::size_t row_nnz(std::size_t j) const { return row_ptr[j + 1] - row_ptr[j]; }
  void validate() const;  // throws StructuralError on inconsistent shape
};

struct ZeroReg {};
struct L1Reg {
  double lambda;
};
/// Indicator of { x : 0 <= b_j x_j <= 1/n } for labels b_j in {+1,-1}.
struct SignedBoxReg {
  std::vector<double> labels;
  std::size_t n;
};
using RegularizerSpec = std::variant<ZeroReg, L1Reg, SignedBoxReg>;

enum class Smoothness { LipschitzContinuous, LipschitzSmooth };

struct FEval {
  double value;
  BlockVector grad;
};

/// Composite objective F = f + phi: value/subgradient oracle for f plus a
/// regularizer with a tractable prox.
struct Problem {
  std::function<FEval(const BlockVector&)> eval;
  std::function<double(const BlockVector&)> value;  // value-only path
  RegularizerSpec reg = ZeroReg{};
  Smoothness smoothness = Smoothness::LipschitzContinuous;
};

// Loss oracles. Each returns (value, subgradient) of the averaged loss.
FEval hinge_eval(const BlockVector& x, const Dataset& data);
double hinge_value(const BlockVector& x, const Dataset& data);
FEval lad_eval(const BlockVector& x, const Dataset& data);
double lad_value(const BlockVector& x, const Dataset& data);
FEval logistic_eval(const BlockVector& x, const Dataset& data, double sigma);
double logistic_value(const BlockVector& x, const Dataset& data, double sigma);
FEval svm_dual_eval(const BlockVector& alpha, const Eigen::MatrixXd& kernel,
                    std::span<const double> labels, double lambda);
double svm_dual_value(const BlockVector& alpha, const Eigen::MatrixXd& kernel,
                      std::span<const double> labels, double lambda);

/// Soft threshold with per-coordinate threshold eta * lambda / w_i.
/// Requires scalar blocks; throws ConfigError otherwise.
BlockVector prox_l1(const BlockVector& y, double lambda, double eta,
                    const MetricWeights& w);

/// Clip y_j to [0, 1/n] when b_j = +1 and to [-1/n, 0] when b_j = -1.
/// For a diagonal metric on scalar blocks this equals the W-projection.
BlockVector prox_signed_box(const BlockVector& y,
                            std::span<const double> labels, std::size_t n);

/// Dispatch on the regularizer kind; ZeroReg returns y unchanged.
BlockVector prox_step(const BlockVector& y, const RegularizerSpec& reg,
                      double eta, const MetricWeights& w);

/// phi(x); +infinity for an infeasible point under SignedBoxReg.
double regularizer_value(const RegularizerSpec& reg, const BlockVector& x);

/// F(x) = f(x) + phi(x).
double objective(const Problem& problem, const BlockVector& x);

// Experiment families: averaged loss f plus the regularizer from the setup.
Problem make_hinge_problem(std::shared_ptr<const Dataset> data, double lambda);
Problem make_lad_problem(std::shared_ptr<const Dataset> data, double lambda);
Problem make_logistic_l2_problem(std::shared_ptr<const Dataset> data,
                                 double sigma);
Problem make_logistic_l1_problem(std::shared_ptr<const Dataset> data,
                                 double lambda);
Problem make_svm_dual_problem(std::shared_ptr<const Eigen::MatrixXd> kernel,
                              std::vector<double> labels, double lambda);

}  // namespace adadiff
