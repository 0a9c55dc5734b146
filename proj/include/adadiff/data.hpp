#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <istream>
#include <random>
#include <string>

#include "adadiff/problems.hpp"

namespace adadiff {

enum class SyntheticTask { SignRegression, Regression };

/// Shape of a synthetic regression/classification instance: standard normal
/// A, w and noise, with w masked down to nnz nonzero entries.
struct SyntheticSpec {
  std::size_t rows = 500;
  std::size_t cols = 100;
  std::size_t nnz = 20;
  SyntheticTask task = SyntheticTask::SignRegression;
  std::uint64_t seed = 0;
};

/// Deterministic random stream: mt19937_64 with uniforms taken as
/// (x >> 11) * 2^-53 and normals via the Marsaglia polar method. The
/// algorithm is fixed so a seed reproduces the same dataset everywhere.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : gen_(seed) {}

  double uniform01();                    // [0, 1)
  double uniform(double lo, double hi);  // [lo, hi)
  double normal();
  std::size_t index(std::size_t n);  // uniform over {0, ..., n-1}

 private:
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// A, w, noise ~ N(0,1) i.i.d. from the seeded stream; d - nnz entries of w
/// zeroed; b = sgn(Aw + noise) or Aw + noise depending on the task. The true
/// w is kept on the dataset for diagnostics.
Dataset gen_synthetic(const SyntheticSpec& spec);

/// LIBSVM sparse text: per line `<label> <index>:<value> ...` with 1-based
/// strictly increasing indices; `#` starts a comment. Labels are mapped to
/// {+1,-1}, accepting {0,1} (0 -> -1) and {-1,+1}. Columns default to the
/// max index seen; dim_override forces a larger dimension.
Dataset parse_libsvm(std::istream& in, std::size_t dim_override = 0);
Dataset parse_libsvm_file(const std::string& path, std::size_t dim_override = 0);

/// Inverse of parse_libsvm: %.17g values, single spaces, newline-terminated.
std::string serialize_libsvm(const Dataset& data);
void write_libsvm_file(const Dataset& data, const std::string& path);

/// Two interleaving half-circles of radius 1 with +-1 labels: upper arc
/// (cos t, sin t) centered at the origin, lower arc (1 - cos t, 1/2 - sin t)
/// dipping to (1, -1/2), t evenly spaced on [0, pi] per class. Isotropic
/// Gaussian noise of the given standard deviation is added to every point.
Dataset gen_two_moons(std::size_t n, double noise_std, std::uint64_t seed);

/// Dense copy of the sample matrix (rows x cols).
Eigen::MatrixXd dataset_dense(const Dataset& data);

/// K_jk = exp(-||a_j - a_k||^2 / (2 width^2)); upper triangle mirrored so the
/// result is exactly symmetric with unit diagonal.
Eigen::MatrixXd gaussian_kernel(const Eigen::MatrixXd& points, double width);

}  // namespace adadiff
