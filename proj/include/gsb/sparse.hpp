#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace gsb {

/// Dense identifier assigned to an interned canonical feature string.
using FeatureId = std::uint64_t;

namespace detail {

// Reference sparse dot over sorted id arrays; matches are accumulated in
// ascending id order.
double dot_scalar(std::span<const FeatureId> ia, std::span<const double> va,
                  std::span<const FeatureId> ib, std::span<const double> vb);

#if defined(GSB_HAVE_AVX2_TU)
// Blocked 4x64-bit intersection. Accumulates matches in ascending id order,
// so the result is bitwise identical to dot_scalar.
double dot_avx2(std::span<const FeatureId> ia, std::span<const double> va,
                std::span<const FeatureId> ib, std::span<const double> vb);
#endif

using DotFn = double (*)(std::span<const FeatureId>, std::span<const double>,
                         std::span<const FeatureId>, std::span<const double>);

// Variant picked once per process from CPU capabilities.
DotFn active_dot_kernel();
const char* active_dot_kernel_name();

}  // namespace detail

/// Sparse feature vector: parallel arrays sorted by feature id, no stored
/// zeros. nnz() is the paper-facing |phi(G)| / |w| count.
class SparseVector {
 public:
  SparseVector() = default;

  /// Builds from unordered (id, value) pairs; duplicate ids are summed and
  /// exact zeros dropped.
  static SparseVector from_pairs(std::vector<std::pair<FeatureId, double>> pairs);

  std::size_t nnz() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }

  std::span<const FeatureId> ids() const { return ids_; }
  std::span<const double> values() const { return vals_; }

  /// 0.0 when absent.
  double value(FeatureId id) const;

  double dot(const SparseVector& other) const;
  double squared_norm() const;

  /// Scales every entry; scaling by 0 clears the vector.
  void scale(double factor);
  /// Scales to unit Euclidean norm; empty vectors are left unchanged.
  void normalize();

  bool operator==(const SparseVector& other) const = default;

 private:
  std::vector<FeatureId> ids_;
  std::vector<double> vals_;
};

}  // namespace gsb
