#include "gsb/fscore.hpp"

#include <algorithm>

namespace gsb {

void FScoreTracker::record(const SparseVector& phi, int label) {
  const bool positive = label > 0;
  if (positive) {
    ++n_pos_;
  } else {
    ++n_neg_;
  }
  const auto ids = phi.ids();
  const auto vals = phi.values();
  for (std::size_t k = 0; k < ids.size(); ++k) {
    auto& s = stats_[ids[k]];
    const double v = vals[k];
    if (positive) {
      s.f_pos += v;
      s.f2_pos += v * v;
    } else {
      s.f_neg += v;
      s.f2_neg += v * v;
    }
  }
}

std::optional<double> FScoreTracker::fscore(FeatureId i) const {
  if (n_pos_ < 2 || n_neg_ < 2) return std::nullopt;
  static constexpr FeatureStats kZero{};
  const auto it = stats_.find(i);
  const FeatureStats& s = it == stats_.end() ? kZero : it->second;

  const double np = static_cast<double>(n_pos_);
  const double nn = static_cast<double>(n_neg_);
  const double avg_pos = s.f_pos / np;
  const double avg_neg = s.f_neg / nn;
  const double avg = (s.f_pos + s.f_neg) / (np + nn);

  const double dp = avg_pos - avg;
  const double dn = avg_neg - avg;
  const double numerator = dp * dp + dn * dn;
  if (numerator == 0.0) return 0.0;

  // Expanded within-class scatter; clamped at 0 against cancellation noise.
  const double var_pos =
      std::max(0.0, (s.f2_pos - 2.0 * avg_pos * s.f_pos + np * avg_pos * avg_pos) / (np - 1.0));
  const double var_neg =
      std::max(0.0, (s.f2_neg - 2.0 * avg_neg * s.f_neg + nn * avg_neg * avg_neg) / (nn - 1.0));
  return numerator / (var_pos + var_neg + 1e-12);
}

const FScoreTracker::FeatureStats* FScoreTracker::stats(FeatureId i) const {
  const auto it = stats_.find(i);
  return it == stats_.end() ? nullptr : &it->second;
}

}  // namespace gsb
