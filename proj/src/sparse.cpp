#include "gsb/sparse.hpp"

#include <algorithm>
#include <cmath>

namespace gsb {
namespace detail {

double dot_scalar(std::span<const FeatureId> ia, std::span<const double> va,
                  std::span<const FeatureId> ib, std::span<const double> vb) {
  double acc = 0.0;
  std::size_t i = 0, j = 0;
  const std::size_t na = ia.size(), nb = ib.size();
  while (i < na && j < nb) {
    const FeatureId a = ia[i], b = ib[j];
    if (a < b) {
      ++i;
    } else if (b < a) {
      ++j;
    } else {
      acc += va[i] * vb[j];
      ++i;
      ++j;
    }
  }
  return acc;
}

DotFn resolve_dot_kernel();

DotFn active_dot_kernel() {
  static const DotFn fn = resolve_dot_kernel();
  return fn;
}

const char* active_dot_kernel_name() {
#if defined(GSB_HAVE_AVX2_TU)
  if (active_dot_kernel() != &dot_scalar) return "avx2";
#endif
  return "scalar";
}

#if !defined(GSB_HAVE_AVX2_TU)
DotFn resolve_dot_kernel() { return &dot_scalar; }
#endif

}  // namespace detail

SparseVector SparseVector::from_pairs(std::vector<std::pair<FeatureId, double>> pairs) {
  std::sort(pairs.begin(), pairs.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  SparseVector out;
  out.ids_.reserve(pairs.size());
  out.vals_.reserve(pairs.size());
  std::size_t i = 0;
  while (i < pairs.size()) {
    const FeatureId id = pairs[i].first;
    double v = 0.0;
    for (; i < pairs.size() && pairs[i].first == id; ++i) v += pairs[i].second;
    if (v != 0.0) {
      out.ids_.push_back(id);
      out.vals_.push_back(v);
    }
  }
  return out;
}

double SparseVector::value(FeatureId id) const {
  const auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id) return 0.0;
  return vals_[static_cast<std::size_t>(it - ids_.begin())];
}

double SparseVector::dot(const SparseVector& other) const {
  return detail::active_dot_kernel()(ids_, vals_, other.ids_, other.vals_);
}

double SparseVector::squared_norm() const {
  double acc = 0.0;
  for (const double v : vals_) acc += v * v;
  return acc;
}

void SparseVector::scale(double factor) {
  if (factor == 0.0) {
    ids_.clear();
    vals_.clear();
    return;
  }
  for (double& v : vals_) v *= factor;
}

void SparseVector::normalize() {
  const double sq = squared_norm();
  if (sq > 0.0) scale(1.0 / std::sqrt(sq));
}

}  // namespace gsb
