#include "gsb/policy.hpp"

#include <stdexcept>
#include <vector>

#include "gsb/rng.hpp"

namespace gsb {

const char* policy_kind_name(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::Random: return "random";
    case PolicyKind::Oldest: return "oldest";
    case PolicyKind::Tau: return "tau";
    case PolicyKind::Weight: return "weight";
    case PolicyKind::OldestFeature: return "oldest-feature";
    case PolicyKind::FScore: return "fscore";
  }
  return "?";
}

PolicyKind policy_kind_from_name(const std::string& name) {
  if (name == "random") return PolicyKind::Random;
  if (name == "oldest") return PolicyKind::Oldest;
  if (name == "tau") return PolicyKind::Tau;
  if (name == "weight") return PolicyKind::Weight;
  if (name == "oldest-feature") return PolicyKind::OldestFeature;
  if (name == "fscore") return PolicyKind::FScore;
  throw std::invalid_argument("unknown policy: '" + name + "'");
}

bool policy_evicts_examples(PolicyKind kind) {
  return kind == PolicyKind::Random || kind == PolicyKind::Oldest ||
         kind == PolicyKind::Tau;
}

bool policy_evicts_features(PolicyKind kind) {
  return kind == PolicyKind::Random || kind == PolicyKind::Weight ||
         kind == PolicyKind::OldestFeature || kind == PolicyKind::FScore;
}

std::optional<std::size_t> select_victim_example(std::span<const ExampleEntryView> entries,
                                                 PolicyKind policy, std::mt19937_64& rng) {
  if (entries.empty()) return std::nullopt;
  switch (policy) {
    case PolicyKind::Random:
      return static_cast<std::size_t>(bounded(rng, entries.size()));
    case PolicyKind::Oldest: {
      std::size_t best = 0;
      for (std::size_t k = 1; k < entries.size(); ++k) {
        if (entries[k].timestamp < entries[best].timestamp) best = k;
      }
      return best;
    }
    case PolicyKind::Tau: {
      double min_tau = entries[0].tau;
      for (const auto& e : entries) min_tau = std::min(min_tau, e.tau);
      std::vector<std::size_t> tied;
      for (std::size_t k = 0; k < entries.size(); ++k) {
        if (entries[k].tau == min_tau) tied.push_back(k);
      }
      if (tied.size() == 1) return tied[0];
      return tied[bounded(rng, tied.size())];
    }
    default:
      throw std::invalid_argument("policy does not evict whole examples");
  }
}

AdmitDecision admit_feature_weightlike(std::span<const FeatureId> model_features,
                                       const std::function<double(FeatureId)>& score_of,
                                       double candidate_score, std::size_t budget_slots) {
  if (model_features.size() < budget_slots)
    return {AdmitDecision::Action::InsertFresh, 0};
  if (budget_slots == 0 || model_features.empty())
    return {AdmitDecision::Action::Reject, 0};

  FeatureId victim = model_features[0];
  double victim_score = score_of(victim);
  for (const FeatureId f : model_features.subspan(1)) {
    const double s = score_of(f);
    if (s < victim_score || (s == victim_score && f < victim)) {
      victim = f;
      victim_score = s;
    }
  }
  if (candidate_score > victim_score)
    return {AdmitDecision::Action::EvictAndInsert, victim};
  return {AdmitDecision::Action::Reject, 0};
}

}  // namespace gsb
