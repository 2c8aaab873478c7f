#include "gsb/eval.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <stdexcept>

namespace gsb {

void EvalConfig::validate() const {
  if (eval_every < 1) throw std::invalid_argument("eval_every must be >= 1");
  if (window < eval_every) throw std::invalid_argument("eval_every must be <= window");
}

std::optional<double> auroc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw std::invalid_argument("scores/labels length mismatch");
  const std::size_t n = scores.size();
  std::size_t n_pos = 0;
  for (const int y : labels) n_pos += y > 0;
  const std::size_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0) return std::nullopt;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Midrank sum over positives; half-integers stay exact in doubles, so the
  // result matches brute-force pair counting bit for bit.
  double rank_sum_pos = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]] > 0) rank_sum_pos += midrank;
    }
    i = j;
  }
  const double np = static_cast<double>(n_pos);
  const double u = rank_sum_pos - np * (np + 1.0) / 2.0;
  return u / (np * static_cast<double>(n_neg));
}

std::optional<double> balanced_accuracy(std::span<const int> predictions,
                                        std::span<const int> labels) {
  if (predictions.size() != labels.size())
    throw std::invalid_argument("predictions/labels length mismatch");
  std::uint64_t tp = 0, fn = 0, tn = 0, fp = 0;
  for (std::size_t k = 0; k < labels.size(); ++k) {
    if (labels[k] > 0) {
      ++(predictions[k] > 0 ? tp : fn);
    } else {
      ++(predictions[k] > 0 ? fp : tn);
    }
  }
  if (tp + fn == 0 || tn + fp == 0) return std::nullopt;
  const double tpr = static_cast<double>(tp) / static_cast<double>(tp + fn);
  const double tnr = static_cast<double>(tn) / static_cast<double>(tn + fp);
  return (tpr + tnr) / 2.0;
}

RunResult run_prequential(std::span<const LabeledExample> stream, OnlineLearner& learner,
                          const EvalConfig& cfg) {
  cfg.validate();
  using Clock = std::chrono::steady_clock;

  RunResult result;
  std::vector<double> win_scores;
  std::vector<int> win_labels;
  std::vector<int> win_preds;
  std::size_t win_head = 0;  // ring index once the window is full

  std::uint64_t errors = 0;
  std::uint64_t elapsed_ns = 0;
  std::optional<double> last_auroc;
  std::optional<double> last_bacc;
  double auroc_sum = 0.0, bacc_sum = 0.0;
  std::uint64_t auroc_n = 0, bacc_n = 0;

  for (std::size_t idx = 0; idx < stream.size(); ++idx) {
    const LabeledExample& ex = stream[idx];

    const auto start = Clock::now();
    Prediction pred = learner.predict(ex.graph);
    const double score = pred.score;
    learner.learn(ex.graph, ex.label, std::move(pred), ex.position);
    elapsed_ns += static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start).count());

    const int predicted = score > 0.0 ? 1 : -1;
    if (predicted != ex.label) ++errors;
    if (win_scores.size() < cfg.window) {
      win_scores.push_back(score);
      win_labels.push_back(ex.label);
      win_preds.push_back(predicted);
    } else {
      win_scores[win_head] = score;
      win_labels[win_head] = ex.label;
      win_preds[win_head] = predicted;
      win_head = (win_head + 1) % cfg.window;
    }

    if ((idx + 1) % cfg.eval_every != 0) continue;

    EvalRecord rec;
    rec.t = ex.position;
    rec.cumulative_errors = errors;
    rec.model_size = learner.size_units();
    rec.elapsed_ns = elapsed_ns;

    const auto a = auroc(win_scores, win_labels);
    const auto b = balanced_accuracy(win_preds, win_labels);
    // A single-class window carries the previous defined value forward; with
    // none yet the record stays null and is excluded from the summary means.
    rec.auroc_window = a ? a : last_auroc;
    rec.balanced_accuracy_window = b ? b : last_bacc;
    if (rec.auroc_window) {
      last_auroc = rec.auroc_window;
      auroc_sum += *rec.auroc_window;
      ++auroc_n;
    }
    if (rec.balanced_accuracy_window) {
      last_bacc = rec.balanced_accuracy_window;
      bacc_sum += *rec.balanced_accuracy_window;
      ++bacc_n;
    }
    result.records.push_back(rec);
  }

  result.summary.total_errors = errors;
  result.summary.total_elapsed_ns = elapsed_ns;
  result.summary.final_model_size = learner.size_units();
  result.summary.examples = stream.size();
  if (auroc_n > 0) result.summary.mean_auroc = auroc_sum / static_cast<double>(auroc_n);
  if (bacc_n > 0)
    result.summary.mean_balanced_accuracy = bacc_sum / static_cast<double>(bacc_n);
  return result;
}

}  // namespace gsb
