#include <doctest.h>

#include <map>
#include <set>
#include <stdexcept>

#include "gsb/policy.hpp"
#include "gsb/rng.hpp"

using namespace gsb;

TEST_CASE("select_victim_example: oldest picks the minimum timestamp") {
  auto rng = make_engine(1);
  const std::vector<ExampleEntryView> entries = {{5, 0.1}, {9, 0.2}, {2, 0.3}};
  CHECK(select_victim_example(entries, PolicyKind::Oldest, rng) == 2);
}

TEST_CASE("select_victim_example: tau breaks ties with the seeded rng") {
  const std::vector<ExampleEntryView> entries = {{0, 0.01}, {1, 0.003}, {2, 0.003}};
  auto rng1 = make_engine(7, 1);
  const auto first = select_victim_example(entries, PolicyKind::Tau, rng1);
  REQUIRE(first.has_value());
  CHECK((*first == 1 || *first == 2));
  auto rng2 = make_engine(7, 1);
  CHECK(select_victim_example(entries, PolicyKind::Tau, rng2) == first);

  // Unique minimum needs no rng draw.
  auto rng3 = make_engine(7, 1);
  const std::vector<ExampleEntryView> unique = {{0, 0.2}, {1, 0.1}, {2, 0.3}};
  CHECK(select_victim_example(unique, PolicyKind::Tau, rng3) == 1);
}

TEST_CASE("select_victim_example: random is deterministic per seed and roughly uniform") {
  const std::vector<ExampleEntryView> entries(10, ExampleEntryView{0, 0.0});
  auto rng1 = make_engine(99, 1);
  auto rng2 = make_engine(99, 1);
  std::map<std::size_t, int> histogram;
  for (int round = 0; round < 1000; ++round) {
    const auto a = select_victim_example(entries, PolicyKind::Random, rng1);
    const auto b = select_victim_example(entries, PolicyKind::Random, rng2);
    REQUIRE(a.has_value());
    CHECK(a == b);
    ++histogram[*a];
  }
  CHECK(histogram.size() == 10);
  for (const auto& [idx, count] : histogram) {
    (void)idx;
    CHECK(count > 50);
    CHECK(count < 200);
  }
}

TEST_CASE("select_victim_example: empty model cannot evict") {
  auto rng = make_engine(1);
  CHECK(!select_victim_example({}, PolicyKind::Oldest, rng).has_value());
  const std::vector<ExampleEntryView> one = {{0, 0.0}};
  CHECK_THROWS_AS(select_victim_example(one, PolicyKind::Weight, rng),
                  std::invalid_argument);
}

TEST_CASE("admit_feature_weightlike on the stated examples") {
  const auto abs_weight = [](const std::map<FeatureId, double>& w) {
    return [&w](FeatureId f) { return std::abs(w.at(f)); };
  };

  // Free slot.
  {
    const std::map<FeatureId, double> w = {{1, 0.5}};
    const std::vector<FeatureId> feats = {1};
    const auto d = admit_feature_weightlike(feats, abs_weight(w), 0.1, 2);
    CHECK(d.action == AdmitDecision::Action::InsertFresh);
  }
  // Candidate outweighs the weakest stored feature.
  {
    const std::map<FeatureId, double> w = {{1, 0.5}, {2, -0.05}};
    const std::vector<FeatureId> feats = {1, 2};
    const auto d = admit_feature_weightlike(feats, abs_weight(w), 0.1, 2);
    CHECK(d.action == AdmitDecision::Action::EvictAndInsert);
    CHECK(d.victim == 2);
  }
  // Candidate weaker than everything stored.
  {
    const std::map<FeatureId, double> w = {{1, 0.5}, {2, -0.3}};
    const std::vector<FeatureId> feats = {1, 2};
    const auto d = admit_feature_weightlike(feats, abs_weight(w), 0.1, 2);
    CHECK(d.action == AdmitDecision::Action::Reject);
  }
  // Equal scores reject (strict improvement required).
  {
    const std::map<FeatureId, double> w = {{1, 0.1}};
    const std::vector<FeatureId> feats = {1};
    CHECK(admit_feature_weightlike(feats, abs_weight(w), 0.1, 1).action ==
          AdmitDecision::Action::Reject);
  }
  // Min-score ties resolve toward the smaller feature id.
  {
    const std::map<FeatureId, double> w = {{4, 0.2}, {2, 0.2}, {9, 0.5}};
    const std::vector<FeatureId> feats = {4, 2, 9};
    const auto d = admit_feature_weightlike(feats, abs_weight(w), 0.3, 3);
    CHECK(d.action == AdmitDecision::Action::EvictAndInsert);
    CHECK(d.victim == 2);
  }
  // Zero slots never admit.
  {
    CHECK(admit_feature_weightlike({}, [](FeatureId) { return 0.0; }, 5.0, 0).action ==
          AdmitDecision::Action::Reject);
  }
}

TEST_CASE("policy families") {
  CHECK(policy_evicts_examples(PolicyKind::Random));
  CHECK(policy_evicts_examples(PolicyKind::Oldest));
  CHECK(policy_evicts_examples(PolicyKind::Tau));
  CHECK(!policy_evicts_examples(PolicyKind::Weight));
  CHECK(policy_evicts_features(PolicyKind::Random));
  CHECK(policy_evicts_features(PolicyKind::FScore));
  CHECK(policy_evicts_features(PolicyKind::OldestFeature));
  CHECK(!policy_evicts_features(PolicyKind::Tau));
  CHECK(policy_kind_from_name("oldest-feature") == PolicyKind::OldestFeature);
  CHECK_THROWS_AS(policy_kind_from_name("newest"), std::invalid_argument);
}
