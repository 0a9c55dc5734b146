#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "adadiff/errors.hpp"

namespace adadiff {

/// Block structure of a direct-sum space: d blocks with fixed positive lengths.
class SpaceDescriptor {
 public:
  explicit SpaceDescriptor(std::vector<std::size_t> block_lengths);

  /// d blocks of length 1 each (the component-wise setting on R^d).
  static std::shared_ptr<const SpaceDescriptor> scalar_blocks(std::size_t d);
  static std::shared_ptr<const SpaceDescriptor> make(
      std::vector<std::size_t> block_lengths);

  std::size_t block_count() const { return lengths_.size(); }
  std::size_t dim() const { return dim_; }
  std::size_t block_length(std::size_t i) const { return lengths_[i]; }
  std::size_t block_offset(std::size_t i) const { return offsets_[i]; }

  bool operator==(const SpaceDescriptor& other) const {
    return lengths_ == other.lengths_;
  }

 private:
  std::vector<std::size_t> lengths_;
  std::vector<std::size_t> offsets_;
  std::size_t dim_ = 0;
};

using SpacePtr = std::shared_ptr<const SpaceDescriptor>;

/// Element of the direct sum: contiguous storage, block views per descriptor.
class BlockVector {
 public:
  BlockVector() = default;
  explicit BlockVector(SpacePtr space);  // zero vector
  BlockVector(SpacePtr space, std::vector<double> values);

  static BlockVector zeros_like(const BlockVector& other) {
    return BlockVector(other.space());
  }

  const SpacePtr& space() const { return space_; }
  std::size_t dim() const { return values_.size(); }
  std::size_t block_count() const { return space_ ? space_->block_count() : 0; }

  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }
  std::span<const double> data() const { return values_; }
  std::span<double> data() { return values_; }

  std::span<const double> block(std::size_t i) const {
    return {values_.data() + space_->block_offset(i), space_->block_length(i)};
  }
  std::span<double> block(std::size_t i) {
    return {values_.data() + space_->block_offset(i), space_->block_length(i)};
  }

  BlockVector& operator+=(const BlockVector& rhs);
  BlockVector& operator-=(const BlockVector& rhs);
  BlockVector& operator*=(double s);

  double dot(const BlockVector& rhs) const;
  double norm_sq() const;
  double norm() const;
  double block_norm_sq(std::size_t i) const;
  bool all_finite() const;

 private:
  SpacePtr space_;
  std::vector<double> values_;
};

BlockVector operator+(BlockVector lhs, const BlockVector& rhs);
BlockVector operator-(BlockVector lhs, const BlockVector& rhs);
BlockVector operator*(double s, BlockVector v);

/// Throws StructuralError if the two vectors do not share a block signature.
void check_same_space(const BlockVector& a, const BlockVector& b);

/// Per-block positive scalars defining a diagonal metric W.
class MetricWeights {
 public:
  explicit MetricWeights(std::vector<double> w);
  static MetricWeights constant(std::size_t d, double w);

  std::size_t size() const { return w_.size(); }
  double operator[](std::size_t i) const { return w_[i]; }
  std::span<const double> values() const { return w_; }

 private:
  std::vector<double> w_;
};

/// ||v||_W^2 = sum_i w_i ||v_i||^2.
double wnorm_sq(const BlockVector& v, const MetricWeights& w);

/// ||v||_{W^{-1}}^2 = sum_i ||v_i||^2 / w_i.
double winv_norm_sq(const BlockVector& v, const MetricWeights& w);

/// Blockwise x_i - (eta / w_i) g_i, the gradient step in the W geometry.
BlockVector scaled_step(const BlockVector& x, const BlockVector& g, double eta,
                        const MetricWeights& w);

}  // namespace adadiff
