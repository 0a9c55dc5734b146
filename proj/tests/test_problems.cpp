#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "adadiff/problems.hpp"
#include "test_util.hpp"

using namespace adadiff;
using testutil::TestRng;

namespace {

Dataset tiny_classification() {
  return Dataset::from_dense({{1.0, 0.0}, {0.5, -1.0}, {-2.0, 0.25}},
                             {1.0, -1.0, 1.0});
}

}  // namespace

TEST_CASE("hinge value and subgradient at reference points") {
  const Dataset data = tiny_classification();
  auto space = SpaceDescriptor::scalar_blocks(2);

  SUBCASE("x = 0: every margin is zero") {
    FEval r = hinge_eval(BlockVector(space), data);
    CHECK(r.value == doctest::Approx(1.0));
    // subgradient = -(1/N) sum_j b_j a_j
    BlockVector expect(space);
    for (std::size_t j = 0; j < data.rows; ++j) {
      data.add_row(j, -data.labels[j] / 3.0, expect.data());
    }
    for (std::size_t i = 0; i < 2; ++i) {
      CHECK(r.grad[i] == doctest::Approx(expect[i]));
    }
  }

  SUBCASE("confident sample contributes nothing") {
    const Dataset one = Dataset::from_dense({{1.0, 0.0}}, {1.0});
    FEval r = hinge_eval(BlockVector(space, {2.0, 0.0}), one);
    CHECK(r.value == 0.0);
    CHECK(r.grad[0] == 0.0);
    CHECK(r.grad[1] == 0.0);
  }

  SUBCASE("the kink at margin one picks the zero subgradient") {
    const Dataset one = Dataset::from_dense({{1.0, 0.0}}, {1.0});
    FEval r = hinge_eval(BlockVector(space, {1.0, 0.0}), one);
    CHECK(r.value == 0.0);
    CHECK(r.grad[0] == 0.0);
  }
}

TEST_CASE("lad value and subgradient at reference points") {
  auto space1 = SpaceDescriptor::scalar_blocks(1);

  SUBCASE("exact fit") {
    const Dataset fit = Dataset::from_dense({{1.0}, {2.0}}, {3.0, 6.0});
    FEval r = lad_eval(BlockVector(space1, {3.0}), fit);
    CHECK(r.value == 0.0);
    CHECK(r.grad[0] == 0.0);  // sign(0) = 0 at both kinks
  }

  SUBCASE("single sample") {
    const Dataset one = Dataset::from_dense({{1.0}}, {2.0});
    FEval r = lad_eval(BlockVector(space1), one);
    CHECK(r.value == doctest::Approx(2.0));
    CHECK(r.grad[0] == doctest::Approx(-1.0));
  }
}

TEST_CASE("subgradient inequality holds for the nonsmooth losses") {
  TestRng rng(101);
  const Dataset data = [&] {
    std::vector<std::vector<double>> rows(8, std::vector<double>(4));
    std::vector<double> labels(8);
    for (auto& row : rows) {
      for (double& v : row) {
        v = rng.normal();
      }
    }
    for (double& b : labels) {
      b = rng.index(2) == 0 ? -1.0 : 1.0;
    }
    return Dataset::from_dense(rows, labels);
  }();
  const Dataset lad_data = [&] {
    Dataset d = data;
    for (double& b : d.labels) {
      b = rng.normal();
    }
    return d;
  }();
  auto space = SpaceDescriptor::scalar_blocks(4);

  for (int trial = 0; trial < 1000; ++trial) {
    BlockVector x = testutil::random_vector(space, rng);
    BlockVector y = testutil::random_vector(space, rng);
    {
      FEval at_x = hinge_eval(x, data);
      const double fy = hinge_value(y, data);
      CHECK(fy >= at_x.value + (y - x).dot(at_x.grad) -
                      1e-10 * (1.0 + std::abs(fy)));
    }
    {
      FEval at_x = lad_eval(x, lad_data);
      const double fy = lad_value(y, lad_data);
      CHECK(fy >= at_x.value + (y - x).dot(at_x.grad) -
                      1e-10 * (1.0 + std::abs(fy)));
    }
  }
}

TEST_CASE("logistic value and gradient") {
  const Dataset data = tiny_classification();
  auto space = SpaceDescriptor::scalar_blocks(2);

  SUBCASE("x = 0 gives log 2 and the half-sum gradient") {
    FEval r = logistic_eval(BlockVector(space), data, 0.0);
    CHECK(r.value == doctest::Approx(std::log(2.0)));
    BlockVector expect(space);
    for (std::size_t j = 0; j < data.rows; ++j) {
      data.add_row(j, -data.labels[j] / 6.0, expect.data());
    }
    for (std::size_t i = 0; i < 2; ++i) {
      CHECK(r.grad[i] == doctest::Approx(expect[i]));
    }
  }

  SUBCASE("saturated margins leave only the l2 term") {
    const Dataset one = Dataset::from_dense({{1.0}}, {1.0});
    auto space1 = SpaceDescriptor::scalar_blocks(1);
    const double sigma = 0.25;
    BlockVector x(space1, {1000.0});
    FEval r = logistic_eval(x, one, sigma);
    CHECK(r.value == doctest::Approx(0.5 * sigma * 1e6));
    CHECK(r.grad[0] == doctest::Approx(sigma * 1000.0));
  }

  SUBCASE("huge negative margins stay finite") {
    const Dataset one = Dataset::from_dense({{1.0}}, {1.0});
    auto space1 = SpaceDescriptor::scalar_blocks(1);
    FEval r = logistic_eval(BlockVector(space1, {-1e4}), one, 0.0);
    CHECK(std::isfinite(r.value));
    CHECK(r.value == doctest::Approx(1e4));
    CHECK(r.grad[0] == doctest::Approx(-1.0));
  }

  SUBCASE("gradient matches central differences") {
    TestRng rng(103);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<std::vector<double>> rows(6, std::vector<double>(3));
      std::vector<double> labels(6);
      for (auto& row : rows) {
        for (double& v : row) {
          v = rng.normal();
        }
      }
      for (double& b : labels) {
        b = rng.index(2) == 0 ? -1.0 : 1.0;
      }
      const Dataset d = Dataset::from_dense(rows, labels);
      auto space3 = SpaceDescriptor::scalar_blocks(3);
      BlockVector x = testutil::random_vector(space3, rng);
      const double sigma = trial % 2 == 0 ? 0.0 : 1e-2;
      FEval r = logistic_eval(x, d, sigma);
      BlockVector fd = testutil::central_diff_grad(
          [&](const BlockVector& p) { return logistic_value(p, d, sigma); }, x);
      for (std::size_t i = 0; i < 3; ++i) {
        CHECK(r.grad[i] ==
              doctest::Approx(fd[i]).epsilon(1e-5));
      }
    }
  }
}

TEST_CASE("svm dual value and gradient") {
  auto space = SpaceDescriptor::scalar_blocks(3);

  SUBCASE("alpha = 0") {
    Eigen::MatrixXd k = Eigen::MatrixXd::Identity(3, 3);
    std::vector<double> b{1.0, -1.0, 1.0};
    FEval r = svm_dual_eval(BlockVector(space), k, b, 0.5);
    CHECK(r.value == 0.0);
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK(r.grad[j] == doctest::Approx(-b[j]));
    }
  }

  SUBCASE("identity kernel, zero labels") {
    Eigen::MatrixXd k = Eigen::MatrixXd::Identity(3, 3);
    std::vector<double> b{0.0, 0.0, 0.0};
    BlockVector alpha(space, {1.0, -2.0, 0.5});
    FEval r = svm_dual_eval(alpha, k, b, 1.0);
    CHECK(r.value == doctest::Approx(0.5 * alpha.norm_sq()));
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK(r.grad[j] == doctest::Approx(alpha[j]));
    }
  }

  SUBCASE("gradient matches central differences on a random PSD kernel") {
    TestRng rng(107);
    const int n = 10;
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        m(i, j) = rng.normal();
      }
    }
    Eigen::MatrixXd k = m.transpose() * m / n;
    std::vector<double> b(n);
    for (double& v : b) {
      v = rng.index(2) == 0 ? -1.0 : 1.0;
    }
    auto space10 = SpaceDescriptor::scalar_blocks(n);
    const double lambda = 0.3;
    for (int trial = 0; trial < 10; ++trial) {
      BlockVector alpha = testutil::random_vector(space10, rng);
      FEval r = svm_dual_eval(alpha, k, b, lambda);
      BlockVector fd = testutil::central_diff_grad(
          [&](const BlockVector& p) { return svm_dual_value(p, k, b, lambda); },
          alpha);
      for (int j = 0; j < n; ++j) {
        CHECK(r.grad[j] == doctest::Approx(fd[j]).epsilon(1e-5));
      }
    }
  }

  SUBCASE("non-square kernels are rejected") {
    Eigen::MatrixXd bad = Eigen::MatrixXd::Zero(3, 2);
    std::vector<double> b{1.0, -1.0, 1.0};
    CHECK_THROWS_AS(svm_dual_eval(BlockVector(space), bad, b, 1.0),
                    StructuralError);
  }
}

TEST_CASE("l1 prox soft-thresholds per coordinate") {
  auto space = SpaceDescriptor::scalar_blocks(1);

  SUBCASE("closed-form values") {
    MetricWeights w({1.0});
    CHECK(prox_l1(BlockVector(space, {0.5}), 0.2, 1.0, w)[0] ==
          doctest::Approx(0.3));
    CHECK(prox_l1(BlockVector(space, {-0.1}), 0.2, 1.0, w)[0] == 0.0);
  }

  SUBCASE("vanishing threshold returns the input") {
    auto space3 = SpaceDescriptor::scalar_blocks(3);
    BlockVector y(space3, {0.7, -1.3, 0.0});
    BlockVector p = prox_l1(y, 1e-300, 1.0, MetricWeights({1.0, 2.0, 3.0}));
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(p[i] == doctest::Approx(y[i]).epsilon(1e-12));
    }
  }

  SUBCASE("multi-length blocks are unsupported") {
    BlockVector y(SpaceDescriptor::make({2}), {1.0, 2.0});
    CHECK_THROWS_AS(prox_l1(y, 0.5, 1.0, MetricWeights({1.0})), ConfigError);
  }
}

TEST_CASE("signed-box prox clips by label") {
  auto space = SpaceDescriptor::scalar_blocks(2);

  SUBCASE("feasible points are fixed") {
    BlockVector y(space, {0.1, -0.2});
    BlockVector p = prox_signed_box(y, std::vector<double>{1.0, -1.0}, 4);
    CHECK(p[0] == y[0]);
    CHECK(p[1] == y[1]);
  }

  SUBCASE("clipping") {
    BlockVector y(space, {0.9, 0.9});
    BlockVector p = prox_signed_box(y, std::vector<double>{1.0, -1.0}, 4);
    CHECK(p[0] == doctest::Approx(0.25));
    CHECK(p[1] == 0.0);
  }

  SUBCASE("labels must be +-1") {
    BlockVector y(space, {0.0, 0.0});
    CHECK_THROWS_AS(prox_signed_box(y, std::vector<double>{1.0, 0.5}, 4),
                    DomainError);
  }
}

TEST_CASE("prox outputs minimize the prox-step objective") {
  // oracle: per-coordinate golden-section minimization of
  //   g_i (t - x_i) + phi_i(t) + w_i (t - x_i)^2 / (2 eta)
  TestRng rng(113);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t d = 1 + rng.index(3);
    auto space = SpaceDescriptor::scalar_blocks(d);
    BlockVector x = testutil::random_vector(space, rng);
    BlockVector g = testutil::random_vector(space, rng);
    std::vector<double> wv(d);
    for (auto& wi : wv) {
      wi = rng.uniform(0.05, 5.0);
    }
    MetricWeights w(wv);
    const double eta = rng.uniform(0.05, 3.0);
    const BlockVector y = scaled_step(x, g, eta, w);

    if (trial % 2 == 0) {
      const double lambda = rng.uniform(1e-3, 2.0);
      const BlockVector p = prox_l1(y, lambda, eta, w);
      for (std::size_t i = 0; i < d; ++i) {
        auto h = [&](double t) {
          return g[i] * (t - x[i]) + lambda * std::abs(t) +
                 wv[i] * (t - x[i]) * (t - x[i]) / (2.0 * eta);
        };
        const double span = std::abs(y[i]) + eta * lambda / wv[i] + 1.0;
        const double t_star =
            testutil::golden_section(h, y[i] - span, y[i] + span);
        CHECK(std::abs(p[i] - t_star) <= 1e-6);
      }
    } else {
      const std::size_t n = 2 + rng.index(6);
      std::vector<double> labels(d);
      for (auto& b : labels) {
        b = rng.index(2) == 0 ? -1.0 : 1.0;
      }
      const BlockVector p = prox_signed_box(y, labels, n);
      for (std::size_t i = 0; i < d; ++i) {
        auto h = [&](double t) {
          return g[i] * (t - x[i]) +
                 wv[i] * (t - x[i]) * (t - x[i]) / (2.0 * eta);
        };
        const double hi = 1.0 / static_cast<double>(n);
        const double lo_bound = labels[i] > 0 ? 0.0 : -hi;
        const double hi_bound = labels[i] > 0 ? hi : 0.0;
        const double t_star = testutil::golden_section(h, lo_bound, hi_bound);
        CHECK(std::abs(p[i] - t_star) <= 1e-6);
      }
    }
  }
}

TEST_CASE("prox operators are nonexpansive in the metric") {
  TestRng rng(127);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d = 1 + rng.index(5);
    auto space = SpaceDescriptor::scalar_blocks(d);
    BlockVector y = testutil::random_vector(space, rng);
    BlockVector z = testutil::random_vector(space, rng);
    std::vector<double> wv(d);
    for (auto& wi : wv) {
      wi = rng.uniform(0.05, 5.0);
    }
    MetricWeights w(wv);
    const double eta = rng.uniform(0.05, 3.0);
    const double lambda = rng.uniform(1e-3, 2.0);
    {
      const BlockVector py = prox_l1(y, lambda, eta, w);
      const BlockVector pz = prox_l1(z, lambda, eta, w);
      CHECK(wnorm_sq(py - pz, w) <= wnorm_sq(y - z, w) * (1.0 + 1e-12));
    }
    {
      std::vector<double> labels(d);
      for (auto& b : labels) {
        b = rng.index(2) == 0 ? -1.0 : 1.0;
      }
      const BlockVector py = prox_signed_box(y, labels, 3);
      const BlockVector pz = prox_signed_box(z, labels, 3);
      CHECK(wnorm_sq(py - pz, w) <= wnorm_sq(y - z, w) * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("objective adds the regularizer to f") {
  const Dataset data = tiny_classification();
  auto shared = std::make_shared<Dataset>(data);
  auto space = SpaceDescriptor::scalar_blocks(2);

  SUBCASE("zero regularizer") {
    Problem p = make_logistic_l2_problem(shared, 0.0);
    BlockVector x(space, {0.3, -0.4});
    CHECK(objective(p, x) == doctest::Approx(logistic_value(x, data, 0.0)));
  }

  SUBCASE("l1 adds lambda times the 1-norm") {
    Problem p = make_hinge_problem(shared, 0.5);
    BlockVector x(space, {1.0, -2.0});
    CHECK(objective(p, x) ==
          doctest::Approx(hinge_value(x, data) + 1.5));
  }

  SUBCASE("infeasible box points map to +infinity") {
    auto kernel = std::make_shared<Eigen::MatrixXd>(
        Eigen::MatrixXd::Identity(2, 2));
    Problem p = make_svm_dual_problem(kernel, {1.0, -1.0}, 1.0);
    BlockVector bad(space, {2.0, 0.0});
    CHECK(objective(p, bad) == std::numeric_limits<double>::infinity());
    BlockVector good(space, {0.1, -0.1});
    CHECK(std::isfinite(objective(p, good)));
  }
}

TEST_CASE("dimension mismatches are structural errors") {
  const Dataset data = tiny_classification();
  BlockVector wrong(SpaceDescriptor::scalar_blocks(5));
  CHECK_THROWS_AS(hinge_eval(wrong, data), StructuralError);
  CHECK_THROWS_AS(lad_eval(wrong, data), StructuralError);
  CHECK_THROWS_AS(logistic_eval(wrong, data, 0.0), StructuralError);
}
