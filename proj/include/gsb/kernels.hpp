#pragma once

#include <cstdint>
#include <string>

#include "gsb/graph.hpp"
#include "gsb/interner.hpp"
#include "gsb/sparse.hpp"

namespace gsb {

enum class KernelKind { FS, NSPDK, ODD };

const char* kernel_kind_name(KernelKind kind);
KernelKind kernel_kind_from_name(const std::string& name);

/// Kernel selection plus parameters. The usual grids are FS h 0..8,
/// NSPDK d 1..6 h 1..4, ODD h 1..4 with lambda in {0.8 .. 1.8}; values outside
/// them are accepted with a warning on stderr.
struct KernelConfig {
  KernelKind kind = KernelKind::FS;
  std::uint32_t h = 2;
  std::uint32_t d = 2;       // NSPDK pair distance cap
  double lambda = 1.0;       // ODD subtree weight base, > 0
  bool normalize = false;    // unit-norm feature images

  /// Throws std::invalid_argument on hard violations (lambda <= 0); warns on
  /// out-of-grid parameter values.
  void validate() const;
  std::string describe() const;
};

/// Explicit feature maps for the three graph kernels over one run-scoped
/// feature dictionary. features() interns new canonical feature strings as it
/// encounters them; kernel() recomputes both images from scratch on every
/// call, which is deliberately the Dual algorithm's cost model.
class FeatureMap {
 public:
  explicit FeatureMap(KernelConfig cfg);

  SparseVector features(const Graph& g);
  double kernel(const Graph& a, const Graph& b);

  const KernelConfig& config() const { return cfg_; }
  /// Distinct canonical strings interned so far.
  std::size_t dictionary_size() const { return dict_.size(); }

 private:
  SparseVector features_fs(const Graph& g);
  SparseVector features_nspdk(const Graph& g);
  SparseVector features_odd(const Graph& g);

  KernelConfig cfg_;
  Interner dict_;
};

}  // namespace gsb
