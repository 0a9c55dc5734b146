#include "adadiff/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

namespace adadiff {

double RngStream::uniform01() {
  return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform01();
}

double RngStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform01() - 1.0;
    v = 2.0 * uniform01() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double m = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * m;
  has_spare_ = true;
  return u * m;
}

std::size_t RngStream::index(std::size_t n) {
  // rejection sampling over the top bits keeps the draw unbiased
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = gen_();
  } while (x >= limit);
  return static_cast<std::size_t>(x % n);
}

Dataset gen_synthetic(const SyntheticSpec& spec) {
  if (spec.rows == 0 || spec.cols == 0) {
    throw StructuralError("synthetic dataset needs positive N and d");
  }
  if (spec.nnz > spec.cols) {
    throw StructuralError("nnz cannot exceed d");
  }
  RngStream rng(spec.seed);

  std::vector<std::vector<double>> a(spec.rows,
                                     std::vector<double>(spec.cols));
  for (auto& row : a) {
    for (double& v : row) {
      v = rng.normal();
    }
  }
  std::vector<double> w(spec.cols);
  for (double& v : w) {
    v = rng.normal();
  }
  std::vector<double> noise(spec.rows);
  for (double& v : noise) {
    v = rng.normal();
  }

  // zero d - nnz entries of w, drawn without replacement (partial shuffle)
  std::vector<std::size_t> order(spec.cols);
  for (std::size_t i = 0; i < spec.cols; ++i) {
    order[i] = i;
  }
  const std::size_t zeros = spec.cols - spec.nnz;
  for (std::size_t i = 0; i < zeros; ++i) {
    std::swap(order[i], order[i + rng.index(spec.cols - i)]);
    w[order[i]] = 0.0;
  }

  std::vector<double> b(spec.rows);
  for (std::size_t j = 0; j < spec.rows; ++j) {
    double dot = 0.0;
    for (std::size_t k = 0; k < spec.cols; ++k) {
      dot += a[j][k] * w[k];
    }
    const double y = dot + noise[j];
    b[j] = spec.task == SyntheticTask::SignRegression ? (y < 0.0 ? -1.0 : 1.0)
                                                      : y;
  }

  Dataset out = Dataset::from_dense(a, std::move(b));
  out.true_weights = std::move(w);
  return out;
}

namespace {

double parse_double(const std::string& token, std::size_t line_number,
                    const char* what) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(token, &used);
  } catch (const std::exception&) {
    throw ParseError(std::string("bad ") + what + " '" + token + "'",
                     line_number);
  }
  if (used != token.size()) {
    throw ParseError(std::string("bad ") + what + " '" + token + "'",
                     line_number);
  }
  if (!std::isfinite(value)) {
    throw ParseError(std::string(what) + " is not finite", line_number);
  }
  return value;
}

double normalize_label(double raw, std::size_t line_number) {
  if (raw == 1.0 || raw == -1.0) {
    return raw;
  }
  if (raw == 0.0) {
    return -1.0;
  }
  throw ParseError("label must be one of {-1, 0, +1}", line_number);
}

}  // namespace

Dataset parse_libsvm(std::istream& in, std::size_t dim_override) {
  Dataset out;
  std::string line;
  std::size_t line_number = 0;
  std::size_t max_index = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.resize(hash);
    }
    std::istringstream tokens(line);
    std::string token;
    if (!(tokens >> token)) {
      continue;  // blank or comment-only line
    }
    out.labels.push_back(normalize_label(
        parse_double(token, line_number, "label"), line_number));
    std::size_t prev_index = 0;
    while (tokens >> token) {
      const auto colon = token.find(':');
      if (colon == std::string::npos) {
        throw ParseError("expected index:value, got '" + token + "'",
                         line_number);
      }
      const std::string index_text = token.substr(0, colon);
      std::size_t used = 0;
      unsigned long long index = 0;
      try {
        index = std::stoull(index_text, &used);
      } catch (const std::exception&) {
        throw ParseError("bad feature index '" + index_text + "'", line_number);
      }
      if (used != index_text.size()) {
        throw ParseError("bad feature index '" + index_text + "'", line_number);
      }
      if (index < 1) {
        throw ParseError("feature indices are 1-based", line_number);
      }
      if (index <= prev_index) {
        throw ParseError("feature indices must be strictly increasing",
                         line_number);
      }
      prev_index = index;
      const double value =
          parse_double(token.substr(colon + 1), line_number, "feature value");
      out.col_idx.push_back(static_cast<std::size_t>(index - 1));
      out.values.push_back(value);
      max_index = std::max(max_index, static_cast<std::size_t>(index));
    }
    out.row_ptr.push_back(out.col_idx.size());
  }
  out.rows = out.labels.size();
  out.row_ptr.insert(out.row_ptr.begin(), 0);
  out.cols = std::max(max_index, dim_override);
  out.validate();
  return out;
}

Dataset parse_libsvm_file(const std::string& path, std::size_t dim_override) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open dataset file: " + path);
  }
  return parse_libsvm(in, dim_override);
}

std::string serialize_libsvm(const Dataset& data) {
  std::string out;
  char buf[64];
  for (std::size_t j = 0; j < data.rows; ++j) {
    std::snprintf(buf, sizeof(buf), "%.17g", data.labels[j]);
    out += buf;
    for (std::size_t k = data.row_ptr[j]; k < data.row_ptr[j + 1]; ++k) {
      if (data.values[k] == 0.0) {
        continue;  // sparse form drops explicit zeros
      }
      std::snprintf(buf, sizeof(buf), " %zu:%.17g", data.col_idx[k] + 1,
                    data.values[k]);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

void write_libsvm_file(const Dataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw ConfigError("cannot write dataset file: " + path);
  }
  out << serialize_libsvm(data);
}

Dataset gen_two_moons(std::size_t n, double noise_std, std::uint64_t seed) {
  if (n < 2) {
    throw StructuralError("two moons needs at least 2 points");
  }
  if (noise_std < 0.0) {
    throw DomainError("noise std must be nonnegative");
  }
  const std::size_t upper = (n + 1) / 2;
  const std::size_t lower = n / 2;
  std::vector<std::vector<double>> points;
  points.reserve(n);
  std::vector<double> labels;
  labels.reserve(n);
  const double pi = std::numbers::pi;
  for (std::size_t i = 0; i < upper; ++i) {
    const double t = upper > 1 ? pi * static_cast<double>(i) /
                                     static_cast<double>(upper - 1)
                               : 0.0;
    points.push_back({std::cos(t), std::sin(t)});
    labels.push_back(1.0);
  }
  for (std::size_t i = 0; i < lower; ++i) {
    const double t = lower > 1 ? pi * static_cast<double>(i) /
                                     static_cast<double>(lower - 1)
                               : 0.0;
    points.push_back({1.0 - std::cos(t), 0.5 - std::sin(t)});
    labels.push_back(-1.0);
  }
  if (noise_std > 0.0) {
    RngStream rng(seed);
    for (auto& p : points) {
      p[0] += noise_std * rng.normal();
      p[1] += noise_std * rng.normal();
    }
  }
  return Dataset::from_dense(points, std::move(labels));
}

Eigen::MatrixXd dataset_dense(const Dataset& data) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(
      static_cast<Eigen::Index>(data.rows), static_cast<Eigen::Index>(data.cols));
  for (std::size_t j = 0; j < data.rows; ++j) {
    for (std::size_t k = data.row_ptr[j]; k < data.row_ptr[j + 1]; ++k) {
      out(static_cast<Eigen::Index>(j),
          static_cast<Eigen::Index>(data.col_idx[k])) = data.values[k];
    }
  }
  return out;
}

Eigen::MatrixXd gaussian_kernel(const Eigen::MatrixXd& points, double width) {
  if (width <= 0.0) {
    throw DomainError("kernel width must be positive");
  }
  const Eigen::Index n = points.rows();
  Eigen::MatrixXd kernel(n, n);
  const double scale = -0.5 / (width * width);
  for (Eigen::Index j = 0; j < n; ++j) {
    kernel(j, j) = 1.0;
    for (Eigen::Index k = j + 1; k < n; ++k) {
      const double dist_sq = (points.row(j) - points.row(k)).squaredNorm();
      const double value = std::exp(scale * dist_sq);
      kernel(j, k) = value;
      kernel(k, j) = value;
    }
  }
  return kernel;
}

}  // namespace adadiff
