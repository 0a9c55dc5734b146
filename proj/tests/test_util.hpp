#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "adadiff/block_vector.hpp"

namespace testutil {

// test-local randomness, independent of the library's RngStream
struct TestRng {
  std::mt19937_64 gen;
  explicit TestRng(std::uint64_t seed) : gen(seed) {}
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(gen);
  }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(gen); }
  std::size_t index(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(gen);
  }
};

inline adadiff::BlockVector random_vector(const adadiff::SpacePtr& space,
                                          TestRng& rng, double lo = -2.0,
                                          double hi = 2.0) {
  adadiff::BlockVector v(space);
  for (std::size_t i = 0; i < v.dim(); ++i) {
    v[i] = rng.uniform(lo, hi);
  }
  return v;
}

// central finite differences of a scalar function of a BlockVector
inline adadiff::BlockVector central_diff_grad(
    const std::function<double(const adadiff::BlockVector&)>& f,
    const adadiff::BlockVector& x, double h = 1e-6) {
  adadiff::BlockVector g = adadiff::BlockVector::zeros_like(x);
  adadiff::BlockVector probe = x;
  for (std::size_t i = 0; i < x.dim(); ++i) {
    probe[i] = x[i] + h;
    const double up = f(probe);
    probe[i] = x[i] - h;
    const double down = f(probe);
    probe[i] = x[i];
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

// golden-section search for the minimizer of a unimodal scalar function
inline double golden_section(const std::function<double(double)>& f, double lo,
                             double hi, double tol = 1e-9) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - phi * (b - a);
  double d = a + phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace testutil
