#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gsb/graph.hpp"
#include "gsb/learner.hpp"

namespace gsb {

struct EvalConfig {
  std::uint32_t eval_every = 50;  // sampling cadence
  std::uint32_t window = 1000;    // sliding window the metrics are computed over

  void validate() const;  // eval_every >= 1, eval_every <= window
};

/// One prequential sample. Metrics are nullopt when the window held a single
/// class and no earlier defined value existed to carry forward.
struct EvalRecord {
  std::int64_t t = 0;
  std::optional<double> auroc_window;
  std::optional<double> balanced_accuracy_window;
  std::uint64_t cumulative_errors = 0;  // sign(score) != y so far
  std::uint64_t model_size = 0;         // in the model's own memory units
  std::uint64_t elapsed_ns = 0;         // cumulative predict+learn wall time
};

struct RunSummary {
  std::optional<double> mean_auroc;  // over defined sampled values
  std::optional<double> mean_balanced_accuracy;
  std::uint64_t total_errors = 0;
  std::uint64_t total_elapsed_ns = 0;
  std::uint64_t final_model_size = 0;
  std::uint64_t examples = 0;
};

struct RunResult {
  std::vector<EvalRecord> records;
  RunSummary summary;
};

/// Probability that a random positive is scored above a random negative, ties
/// counting one half; computed by midranks, exactly equal to pair counting.
/// nullopt when either class is missing.
std::optional<double> auroc(std::span<const double> scores, std::span<const int> labels);

/// (TPR + TNR) / 2 over sign predictions; nullopt when either class is
/// missing.
std::optional<double> balanced_accuracy(std::span<const int> predictions,
                                        std::span<const int> labels);

/// Test-then-train over the stream: each example is scored before its label
/// reaches the learner; every eval_every examples a record samples the most
/// recent window. Timing covers the predict+learn path only.
RunResult run_prequential(std::span<const LabeledExample> stream, OnlineLearner& learner,
                          const EvalConfig& cfg);

}  // namespace gsb
