#include "adadiff/block_vector.hpp"

#include <cmath>
#include <numeric>
#include <utility>

namespace adadiff {

SpaceDescriptor::SpaceDescriptor(std::vector<std::size_t> block_lengths)
    : lengths_(std::move(block_lengths)) {
  if (lengths_.empty()) {
    throw StructuralError("space needs at least one block");
  }
  offsets_.reserve(lengths_.size());
  for (std::size_t len : lengths_) {
    if (len == 0) {
      throw StructuralError("block lengths must be positive");
    }
    offsets_.push_back(dim_);
    dim_ += len;
  }
}

SpacePtr SpaceDescriptor::scalar_blocks(std::size_t d) {
  return make(std::vector<std::size_t>(d, 1));
}

SpacePtr SpaceDescriptor::make(std::vector<std::size_t> block_lengths) {
  return std::make_shared<const SpaceDescriptor>(std::move(block_lengths));
}

BlockVector::BlockVector(SpacePtr space)
    : space_(std::move(space)), values_(space_ ? space_->dim() : 0, 0.0) {
  if (!space_) {
    throw StructuralError("null space descriptor");
  }
}

BlockVector::BlockVector(SpacePtr space, std::vector<double> values)
    : space_(std::move(space)), values_(std::move(values)) {
  if (!space_) {
    throw StructuralError("null space descriptor");
  }
  if (values_.size() != space_->dim()) {
    throw StructuralError("value count does not match space dimension");
  }
}

void check_same_space(const BlockVector& a, const BlockVector& b) {
  if (a.space() == b.space()) {
    return;  // shared descriptor, common case
  }
  if (!a.space() || !b.space() || !(*a.space() == *b.space())) {
    throw StructuralError("block signatures differ");
  }
}

BlockVector& BlockVector::operator+=(const BlockVector& rhs) {
  check_same_space(*this, rhs);
  for (std::size_t i = 0; i < values_.size(); ++i) {
    values_[i] += rhs.values_[i];
  }
  return *this;
}

BlockVector& BlockVector::operator-=(const BlockVector& rhs) {
  check_same_space(*this, rhs);
  for (std::size_t i = 0; i < values_.size(); ++i) {
    values_[i] -= rhs.values_[i];
  }
  return *this;
}

BlockVector& BlockVector::operator*=(double s) {
  for (double& v : values_) {
    v *= s;
  }
  return *this;
}

double BlockVector::dot(const BlockVector& rhs) const {
  check_same_space(*this, rhs);
  double acc = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    acc += values_[i] * rhs.values_[i];
  }
  return acc;
}

double BlockVector::norm_sq() const {
  double acc = 0.0;
  for (double v : values_) {
    acc += v * v;
  }
  return acc;
}

double BlockVector::norm() const { return std::sqrt(norm_sq()); }

double BlockVector::block_norm_sq(std::size_t i) const {
  double acc = 0.0;
  for (double v : block(i)) {
    acc += v * v;
  }
  return acc;
}

bool BlockVector::all_finite() const {
  for (double v : values_) {
    if (!std::isfinite(v)) {
      return false;
    }
  }
  return true;
}

BlockVector operator+(BlockVector lhs, const BlockVector& rhs) {
  lhs += rhs;
  return lhs;
}

BlockVector operator-(BlockVector lhs, const BlockVector& rhs) {
  lhs -= rhs;
  return lhs;
}

BlockVector operator*(double s, BlockVector v) {
  v *= s;
  return v;
}

MetricWeights::MetricWeights(std::vector<double> w) : w_(std::move(w)) {
  if (w_.empty()) {
    throw StructuralError("metric needs at least one weight");
  }
  for (double wi : w_) {
    if (!std::isfinite(wi)) {
      throw NumericError("metric weight is not finite");
    }
    if (wi <= 0.0) {
      throw DomainError("metric weights must be positive");
    }
  }
}

MetricWeights MetricWeights::constant(std::size_t d, double w) {
  return MetricWeights(std::vector<double>(d, w));
}

namespace {

void check_weight_count(const BlockVector& v, const MetricWeights& w) {
  if (v.block_count() != w.size()) {
    throw StructuralError("weight count does not match block count");
  }
}

}  // namespace

double wnorm_sq(const BlockVector& v, const MetricWeights& w) {
  check_weight_count(v, w);
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    acc += w[i] * v.block_norm_sq(i);
  }
  return acc;
}

double winv_norm_sq(const BlockVector& v, const MetricWeights& w) {
  check_weight_count(v, w);
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] <= 0.0) {
      throw DomainError("inverse metric requires positive weights");
    }
    acc += v.block_norm_sq(i) / w[i];
  }
  return acc;
}

BlockVector scaled_step(const BlockVector& x, const BlockVector& g, double eta,
                        const MetricWeights& w) {
  check_same_space(x, g);
  check_weight_count(x, w);
  BlockVector out = x;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double step = eta / w[i];
    auto gi = g.block(i);
    auto oi = out.block(i);
    for (std::size_t k = 0; k < oi.size(); ++k) {
      oi[k] -= step * gi[k];
    }
  }
  return out;
}

}  // namespace adadiff
