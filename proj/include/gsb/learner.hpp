#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gsb/graph.hpp"
#include "gsb/kernels.hpp"
#include "gsb/policy.hpp"
#include "gsb/sparse.hpp"

namespace gsb {

enum class Algorithm { Dual, Mixed, Primal };

const char* algorithm_name(Algorithm algo);
Algorithm algorithm_from_name(const std::string& name);

struct LearnerConfig {
  Algorithm algorithm = Algorithm::Primal;
  PolicyConfig policy{PolicyKind::Weight, 0};
  std::optional<std::uint64_t> budget;  // memory units; nullopt = infinite
  double C = 0.01;                      // aggressiveness cap on tau
  double beta = 1.0;                    // margin threshold
  KernelConfig kernel;

  /// Throws std::invalid_argument on C <= 0, zero budget, or a policy that
  /// does not match the algorithm family.
  void validate() const;
};

/// Score context handed from predict() to learn(). Mixed and Primal carry the
/// feature image so it is computed once per round; Dual leaves it empty (its
/// cost model recomputes everything from graphs).
struct Prediction {
  double score = 0.0;
  SparseVector phi;
  double k_self = 0.0;  // ||phi||^2 when phi is carried
};

struct UpdateOutcome {
  double score = 0.0;
  bool margin_error = false;   // y * score <= beta
  double tau = 0.0;            // 0 when the hypothesis was left unchanged
  std::uint32_t evicted = 0;   // entries or features removed this round
  bool inserted = false;       // hypothesis grew or changed
  bool dropped_example = false;  // could not fit even into an empty model
};

/// BPA-S coefficient: tau = min(C, max(0, 1 - y*score) / k_self).
/// Throws std::domain_error when k_self <= 0 (degenerate kernel self-value).
double compute_tau(double score, int label, double k_self, double C);

/// One online learner bound to a run-scoped feature dictionary. Single writer;
/// step() is the prequential predict-then-learn round.
class OnlineLearner {
 public:
  virtual ~OnlineLearner() = default;

  virtual Prediction predict(const Graph& g) = 0;
  virtual UpdateOutcome learn(const Graph& g, int label, Prediction pred,
                              std::int64_t t) = 0;
  UpdateOutcome step(const Graph& g, int label, std::int64_t t) {
    return learn(g, label, predict(g), t);
  }

  /// Model size in the algorithm's own memory units, maintained incrementally.
  virtual std::uint64_t size_units() const = 0;
  /// Same quantity recomputed from stored state, for auditing.
  virtual std::uint64_t recount_size_units() const = 0;
  /// Stored examples (Dual, Mixed) or stored features (Primal).
  virtual std::size_t stored_count() const = 0;
  virtual const LearnerConfig& config() const = 0;

  /// Read-only dump of the stored hypothesis.
  struct ModelView {
    struct EntryInfo {
      std::int64_t timestamp;
      double tau;
      std::uint64_t units;
    };
    std::vector<EntryInfo> entries;                     // Dual, Mixed
    std::vector<std::pair<FeatureId, double>> weights;  // Primal, id-sorted
  };
  virtual ModelView inspect() const = 0;
};

std::unique_ptr<OnlineLearner> make_learner(const LearnerConfig& cfg);

}  // namespace gsb
