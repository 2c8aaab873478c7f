#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>

#include "gsb/sparse.hpp"

namespace gsb {

/// Eviction policies. Random/Oldest/Tau remove whole examples (Dual, Mixed);
/// Random/Weight/OldestFeature/FScore remove single features (Primal).
enum class PolicyKind { Random, Oldest, Tau, Weight, OldestFeature, FScore };

const char* policy_kind_name(PolicyKind kind);
PolicyKind policy_kind_from_name(const std::string& name);

bool policy_evicts_examples(PolicyKind kind);
bool policy_evicts_features(PolicyKind kind);

struct PolicyConfig {
  PolicyKind kind = PolicyKind::Oldest;
  std::uint64_t seed = 0;
};

struct ExampleEntryView {
  std::int64_t timestamp;
  double tau;
};

/// Picks the entry to remove from an example-based model. Random draws
/// uniformly; Oldest takes the minimum timestamp; Tau takes the minimum tau,
/// ties broken uniformly. nullopt when there is nothing to evict. Pure given
/// (entries, policy, rng state).
std::optional<std::size_t> select_victim_example(std::span<const ExampleEntryView> entries,
                                                 PolicyKind policy, std::mt19937_64& rng);

/// Admission decision for one candidate feature against a slot-limited model.
struct AdmitDecision {
  enum class Action { InsertFresh, EvictAndInsert, Reject };
  Action action = Action::Reject;
  FeatureId victim = 0;  // meaningful for EvictAndInsert
};

/// Weight-like admission: with a free slot the candidate enters directly;
/// otherwise it displaces the lowest-scored stored feature only when its own
/// score is strictly higher. Ties on the minimum score resolve toward the
/// smaller feature id. The candidate must not already be stored. score_of is
/// |w_i| for Weight (candidate scored by |contribution|), the last-touch
/// timestamp for OldestFeature (a fresh candidate always wins), and the
/// tracker F-score for FScore.
AdmitDecision admit_feature_weightlike(std::span<const FeatureId> model_features,
                                       const std::function<double(FeatureId)>& score_of,
                                       double candidate_score, std::size_t budget_slots);

}  // namespace gsb
