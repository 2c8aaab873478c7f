#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>

#include "gsb/sparse.hpp"

namespace gsb {

/// Global class counts plus per-feature sufficient statistics for the
/// incremental F-score: for each feature, the sums of its values and squared
/// values over the positive and negative examples seen so far. Single-writer.
class FScoreTracker {
 public:
  struct FeatureStats {
    double f_pos = 0.0;
    double f_neg = 0.0;
    double f2_pos = 0.0;
    double f2_neg = 0.0;
  };

  /// Folds one example into the statistics. Features absent from phi hold
  /// value 0 and stay untouched.
  void record(const SparseVector& phi, int label);

  /// F-score of feature i from the incremental statistics, with a 1e-12
  /// denominator guard for the zero-variance case; 0 when the numerator is 0.
  /// nullopt until both classes have at least two examples (the variance
  /// denominators need n-1 >= 1); callers treat that as score 0.
  std::optional<double> fscore(FeatureId i) const;

  std::uint64_t positive_count() const { return n_pos_; }
  std::uint64_t negative_count() const { return n_neg_; }
  /// nullptr for features never seen (all four sums are 0).
  const FeatureStats* stats(FeatureId i) const;
  std::size_t tracked_features() const { return stats_.size(); }

 private:
  std::uint64_t n_pos_ = 0;
  std::uint64_t n_neg_ = 0;
  std::unordered_map<FeatureId, FeatureStats> stats_;
};

}  // namespace gsb
