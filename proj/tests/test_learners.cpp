#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "gsb/eval.hpp"
#include "gsb/fscore.hpp"
#include "gsb/learner.hpp"
#include "gsb/stream.hpp"
#include "test_support.hpp"

using namespace gsb;
using gsb::testing::random_graph;

namespace {

LearnerConfig base_config(Algorithm algo, PolicyKind policy,
                          std::optional<std::uint64_t> budget, double c = 0.01,
                          KernelConfig kernel = {KernelKind::FS, 1}) {
  LearnerConfig cfg;
  cfg.algorithm = algo;
  cfg.policy = {policy, 77};
  cfg.budget = budget;
  cfg.C = c;
  cfg.kernel = kernel;
  return cfg;
}

std::vector<LabeledExample> small_stream(std::uint64_t seed, std::uint32_t count,
                                         double noise = 0.0) {
  DriftStreamConfig cfg;
  cfg.seed = seed;
  StreamSegmentConfig seg;
  seg.count = count;
  seg.nodes_min = 3;
  seg.nodes_max = 7;
  seg.extra_edges_min = 1;
  seg.extra_edges_max = 3;
  seg.alphabet = {"A", "B", "C"};
  seg.concept_edge = {"A", "B"};
  seg.noise = noise;
  seg.target_positive_rate = 0.4;
  cfg.segments.push_back(seg);
  return generate_drift_stream(cfg);
}

bool close_rel(double a, double b, double tol) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return std::abs(a - b) <= tol * scale || std::abs(a - b) <= 1e-12;
}

}  // namespace

TEST_CASE("compute_tau on the stated examples") {
  CHECK(compute_tau(0.0, +1, 1.0, 0.01) == 0.01);
  CHECK(compute_tau(0.999, +1, 1.0, 10.0) == doctest::Approx(0.001).epsilon(1e-12));
  CHECK(compute_tau(1.0, +1, 1.0, 10.0) == 0.0);   // hinge loss 0 at the boundary
  CHECK(compute_tau(-2.0, -1, 4.0, 100.0) == 0.0); // comfortably correct
  CHECK(compute_tau(0.0, -1, 2.0, 10.0) == 0.5);
  CHECK_THROWS_AS(compute_tau(0.0, +1, 0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(compute_tau(0.0, +1, -1.0, 1.0), std::domain_error);
}

TEST_CASE("config validation rejects mismatched policy families") {
  CHECK_THROWS_AS(base_config(Algorithm::Dual, PolicyKind::Weight, 100).validate(),
                  std::invalid_argument);
  CHECK_THROWS_AS(base_config(Algorithm::Primal, PolicyKind::Tau, 100).validate(),
                  std::invalid_argument);
  CHECK_THROWS_AS(base_config(Algorithm::Mixed, PolicyKind::FScore, 100).validate(),
                  std::invalid_argument);
  CHECK_NOTHROW(base_config(Algorithm::Dual, PolicyKind::Random, 100).validate());
  CHECK_NOTHROW(base_config(Algorithm::Primal, PolicyKind::Random, 100).validate());
  LearnerConfig bad_c = base_config(Algorithm::Primal, PolicyKind::Weight, 100, -1.0);
  CHECK_THROWS_AS(bad_c.validate(), std::invalid_argument);
}

TEST_CASE("empty model predicts zero") {
  const Graph g({"A", "B"}, {{0, 1}});
  for (const Algorithm algo : {Algorithm::Dual, Algorithm::Mixed, Algorithm::Primal}) {
    const PolicyKind policy =
        algo == Algorithm::Primal ? PolicyKind::Weight : PolicyKind::Oldest;
    auto learner = make_learner(base_config(algo, policy, std::nullopt));
    CHECK(learner->predict(g).score == 0.0);
    CHECK(learner->size_units() == 0);
  }
}

TEST_CASE("dual scoring is the coefficient-weighted kernel sum") {
  // First error on an empty model: tau = min(C, 1/K(g,g)) = C = 0.01.
  auto learner = make_learner(base_config(Algorithm::Dual, PolicyKind::Oldest,
                                          std::nullopt, 0.01, {KernelKind::FS, 0}));
  const Graph g({"A", "B"}, {{0, 1}});
  const auto out = learner->step(g, +1, 0);
  CHECK(out.margin_error);
  CHECK(out.tau == 0.01);
  CHECK(out.inserted);

  FeatureMap fm({KernelKind::FS, 0});
  const Graph probe({"A", "C"}, {{0, 1}});
  CHECK(learner->predict(probe).score ==
        doctest::Approx(0.01 * fm.kernel(g, probe)).epsilon(1e-12));
}

TEST_CASE("margin-correct examples leave the model unchanged") {
  auto learner = make_learner(base_config(Algorithm::Primal, PolicyKind::Weight,
                                          std::nullopt, 10.0, {KernelKind::FS, 0}));
  const Graph g({"A"}, {});
  learner->step(g, +1, 0);  // score 0 -> insert with tau = 1/k = 1
  const auto before = learner->inspect().weights;
  // Now y*score = k(g,g) = 1 <= beta: margin error but hinge 0, tau 0.
  const auto out = learner->step(g, +1, 1);
  CHECK(out.margin_error);
  CHECK(out.tau == 0.0);
  CHECK(!out.inserted);
  CHECK(learner->inspect().weights == before);

  // A comfortably correct example (y*score > beta) changes nothing either.
  auto mixed = make_learner(base_config(Algorithm::Mixed, PolicyKind::Oldest,
                                        std::nullopt, 10.0, {KernelKind::FS, 0}));
  mixed->step(g, +1, 0);
  mixed->step(g, +1, 1);  // drives y*score to 1; under C=10 tau stays 0 after
  const auto out2 = mixed->step(g, +1, 2);
  CHECK(mixed->stored_count() == 1);
  CHECK(!out2.inserted);
}

TEST_CASE("first error sizes match the per-algorithm formulas") {
  const Graph g({"A", "B", "C"}, {{0, 1}, {1, 2}});
  FeatureMap probe({KernelKind::FS, 1});
  const std::size_t nnz = probe.features(g).nnz();

  auto dual = make_learner(base_config(Algorithm::Dual, PolicyKind::Oldest, 1000));
  dual->step(g, +1, 0);
  CHECK(dual->size_units() == 3 + 2 + 1);

  auto mixed = make_learner(base_config(Algorithm::Mixed, PolicyKind::Oldest, 1000));
  mixed->step(g, +1, 0);
  CHECK(mixed->size_units() == 1 + 2 * nnz);

  for (const auto& [policy, sigma] :
       std::vector<std::pair<PolicyKind, std::uint64_t>>{{PolicyKind::Random, 2},
                                                         {PolicyKind::Weight, 2},
                                                         {PolicyKind::OldestFeature, 3},
                                                         {PolicyKind::FScore, 5}}) {
    auto primal = make_learner(base_config(Algorithm::Primal, policy, 1000));
    primal->step(g, +1, 0);
    CHECK(primal->size_units() == sigma * nnz);
    CHECK(primal->recount_size_units() == primal->size_units());
  }
}

TEST_CASE("an example larger than the whole budget is dropped") {
  const Graph g({"A", "B", "C", "D"}, {{0, 1}, {1, 2}, {2, 3}});  // units 4+3+1=8
  auto dual = make_learner(base_config(Algorithm::Dual, PolicyKind::Oldest, 7));
  const auto out = dual->step(g, +1, 0);
  CHECK(out.dropped_example);
  CHECK(!out.inserted);
  CHECK(out.evicted == 0);
  CHECK(dual->stored_count() == 0);

  auto mixed = make_learner(base_config(Algorithm::Mixed, PolicyKind::Oldest, 3));
  const auto out2 = mixed->step(g, +1, 0);
  CHECK(out2.dropped_example);
  CHECK(mixed->stored_count() == 0);
}

TEST_CASE("a full model evicts until the incoming example fits") {
  // Each single-edge graph costs 2+1+1 = 4 units; budget 9 holds two.
  auto dual = make_learner(base_config(Algorithm::Dual, PolicyKind::Oldest, 9, 10.0,
                                       {KernelKind::FS, 0}));
  const Graph g1({"A", "B"}, {{0, 1}});
  const Graph g2({"C", "D"}, {{0, 1}});
  const Graph g3({"B", "C"}, {{0, 1}});
  CHECK(dual->step(g1, +1, 0).inserted);
  CHECK(dual->step(g2, +1, 1).inserted);
  CHECK(dual->size_units() == 8);
  // g3 shares one label with each stored graph, so its score is positive and
  // the -1 label forces an aggressive update.
  const auto out = dual->step(g3, -1, 2);
  CHECK(out.evicted == 1);
  CHECK(out.inserted);
  CHECK(dual->size_units() <= 9);
  // Oldest policy removed t=0; the survivors are t=1 and t=2.
  const auto view = dual->inspect();
  REQUIRE(view.entries.size() == 2);
  CHECK(view.entries[0].timestamp == 1);
  CHECK(view.entries[1].timestamp == 2);
}

TEST_CASE("monotone opportunism: infinite budget never evicts nor drops") {
  const auto stream = small_stream(11, 300, 0.1);
  for (const Algorithm algo : {Algorithm::Dual, Algorithm::Mixed, Algorithm::Primal}) {
    const PolicyKind policy =
        algo == Algorithm::Primal ? PolicyKind::Weight : PolicyKind::Tau;
    auto learner = make_learner(base_config(algo, policy, std::nullopt, 0.1));
    for (const auto& ex : stream) {
      const auto out = learner->step(ex.graph, ex.label, ex.position);
      CHECK(out.evicted == 0);
      CHECK(!out.dropped_example);
    }
  }
}

TEST_CASE("infinite-budget equivalence across the three algorithms") {
  const auto stream = small_stream(13, 250, 0.05);
  for (const KernelConfig kcfg : {KernelConfig{KernelKind::FS, 2},
                                  KernelConfig{KernelKind::NSPDK, 1, 2},
                                  KernelConfig{KernelKind::ODD, 2, 0, 1.2}}) {
    auto dual = make_learner(base_config(Algorithm::Dual, PolicyKind::Oldest,
                                         std::nullopt, 0.1, kcfg));
    auto mixed = make_learner(base_config(Algorithm::Mixed, PolicyKind::Oldest,
                                          std::nullopt, 0.1, kcfg));
    auto primal = make_learner(base_config(Algorithm::Primal, PolicyKind::Weight,
                                           std::nullopt, 0.1, kcfg));
    std::uint64_t errors_d = 0, errors_m = 0, errors_p = 0;
    for (const auto& ex : stream) {
      const auto od = dual->step(ex.graph, ex.label, ex.position);
      const auto om = mixed->step(ex.graph, ex.label, ex.position);
      const auto op = primal->step(ex.graph, ex.label, ex.position);
      CHECK((od.score > 0) == (om.score > 0));
      CHECK((od.score > 0) == (op.score > 0));
      CHECK(close_rel(om.score, op.score, 1e-9));
      CHECK(close_rel(od.score, om.score, 1e-6));
      CHECK(od.margin_error == om.margin_error);
      CHECK(om.margin_error == op.margin_error);
      errors_d += (od.score > 0 ? 1 : -1) != ex.label;
      errors_m += (om.score > 0 ? 1 : -1) != ex.label;
      errors_p += (op.score > 0 ? 1 : -1) != ex.label;
    }
    CHECK(errors_d == errors_m);
    CHECK(errors_m == errors_p);
  }
}

TEST_CASE("budget safety mini-fuzz with size recounts") {
  const auto stream = small_stream(17, 400, 0.1);
  const std::vector<std::pair<Algorithm, PolicyKind>> combos = {
      {Algorithm::Dual, PolicyKind::Random},   {Algorithm::Dual, PolicyKind::Oldest},
      {Algorithm::Dual, PolicyKind::Tau},      {Algorithm::Mixed, PolicyKind::Random},
      {Algorithm::Mixed, PolicyKind::Oldest},  {Algorithm::Mixed, PolicyKind::Tau},
      {Algorithm::Primal, PolicyKind::Random}, {Algorithm::Primal, PolicyKind::Weight},
      {Algorithm::Primal, PolicyKind::OldestFeature},
      {Algorithm::Primal, PolicyKind::FScore}};
  for (const auto& [algo, policy] : combos) {
    for (const std::uint64_t budget : {60ull, 300ull}) {
      auto learner = make_learner(base_config(algo, policy, budget, 1.0));
      for (const auto& ex : stream) {
        learner->step(ex.graph, ex.label, ex.position);
        REQUIRE(learner->size_units() <= budget);
        REQUIRE(learner->size_units() == learner->recount_size_units());
      }
      CHECK(learner->stored_count() > 0);
    }
  }
}

TEST_CASE("primal weight policy: stored magnitudes dominate rejected candidates") {
  // Tiny slot budget forces rejections; after every learn, any candidate that
  // was rejected must not exceed the smallest stored |w|. We conservatively
  // re-check the invariant via the stored minimum monotony across rounds
  // without intervening insertions.
  auto learner = make_learner(base_config(Algorithm::Primal, PolicyKind::Weight, 12,
                                          1.0, {KernelKind::FS, 1}));
  const auto stream = small_stream(23, 300, 0.1);
  for (const auto& ex : stream) {
    const auto before = learner->inspect().weights;
    const auto out = learner->step(ex.graph, ex.label, ex.position);
    const auto after = learner->inspect().weights;
    if (!out.margin_error || out.tau == 0.0) {
      CHECK(before == after);
      continue;
    }
    if (before.size() == 6 && before == after && out.tau > 0.0) {
      // Full model, nothing changed: every candidate was rejected. All stored
      // magnitudes must be >= the largest rejected |contribution|; bound the
      // largest contribution by tau * max |phi_i| <= tau * max value. Checked
      // coarsely through the outcome flags.
      CHECK(!out.inserted);
      CHECK(out.evicted == 0);
    }
  }
  CHECK(learner->size_units() <= 12);
}

TEST_CASE("primal admissions match a naive shadow implementation") {
  for (const PolicyKind policy : {PolicyKind::Weight, PolicyKind::OldestFeature,
                                  PolicyKind::FScore}) {
    const std::uint64_t budget = 40;
    auto learner = make_learner(
        base_config(Algorithm::Primal, policy, budget, 1.0, {KernelKind::FS, 1}));

    // Shadow state mirrors the documented update rules with plain linear scans.
    FeatureMap fm({KernelKind::FS, 1});
    std::map<FeatureId, std::pair<double, std::int64_t>> shadow;  // w, touched
    FScoreTracker tracker;
    const std::uint64_t sigma =
        policy == PolicyKind::Weight ? 2 : (policy == PolicyKind::OldestFeature ? 3 : 5);
    const std::uint64_t slots = budget / sigma;

    const auto stream = small_stream(29, 250, 0.1);
    for (const auto& ex : stream) {
      const SparseVector phi = fm.features(ex.graph);
      double score = 0.0;
      for (std::size_t k = 0; k < phi.nnz(); ++k) {
        const auto it = shadow.find(phi.ids()[k]);
        if (it != shadow.end()) score += it->second.first * phi.values()[k];
      }
      if (policy == PolicyKind::FScore) tracker.record(phi, ex.label);
      if (ex.label * score <= 1.0) {
        const double tau = compute_tau(score, ex.label, phi.squared_norm(), 1.0);
        if (tau > 0.0) {
          std::vector<std::pair<FeatureId, double>> fresh;
          for (std::size_t k = 0; k < phi.nnz(); ++k) {
            const FeatureId fid = phi.ids()[k];
            const double contribution = tau * ex.label * phi.values()[k];
            const auto it = shadow.find(fid);
            if (it == shadow.end()) {
              fresh.emplace_back(fid, contribution);
              continue;
            }
            it->second.first += contribution;
            it->second.second = ex.position;
            if (it->second.first == 0.0) shadow.erase(it);
          }
          std::sort(fresh.begin(), fresh.end(), [](const auto& a, const auto& b) {
            const double ma = std::abs(a.second), mb = std::abs(b.second);
            if (ma != mb) return ma > mb;
            return a.first < b.first;
          });
          for (const auto& [fid, contribution] : fresh) {
            std::vector<FeatureId> stored;
            for (const auto& [f, we] : shadow) stored.push_back(f);
            const auto score_of = [&](FeatureId f) -> double {
              if (policy == PolicyKind::Weight) return std::abs(shadow.at(f).first);
              if (policy == PolicyKind::OldestFeature)
                return static_cast<double>(shadow.at(f).second);
              return tracker.fscore(f).value_or(0.0);
            };
            const double candidate_score =
                policy == PolicyKind::Weight
                    ? std::abs(contribution)
                    : (policy == PolicyKind::OldestFeature
                           ? std::numeric_limits<double>::infinity()
                           : tracker.fscore(fid).value_or(0.0));
            const auto decision =
                admit_feature_weightlike(stored, score_of, candidate_score, slots);
            if (decision.action == AdmitDecision::Action::Reject) continue;
            if (decision.action == AdmitDecision::Action::EvictAndInsert)
              shadow.erase(decision.victim);
            shadow.emplace(fid, std::make_pair(contribution, ex.position));
          }
        }
      }

      learner->step(ex.graph, ex.label, ex.position);
      std::vector<std::pair<FeatureId, double>> expect;
      for (const auto& [f, we] : shadow) expect.emplace_back(f, we.first);
      REQUIRE(learner->inspect().weights == expect);
    }
    CHECK(learner->stored_count() > 0);
  }
}

TEST_CASE("update outcome flags are consistent") {
  const auto stream = small_stream(31, 200, 0.1);
  auto learner = make_learner(base_config(Algorithm::Mixed, PolicyKind::Tau, 200, 0.1));
  for (const auto& ex : stream) {
    const auto out = learner->step(ex.graph, ex.label, ex.position);
    CHECK(out.margin_error == (ex.label * out.score <= 1.0));
    if (!out.margin_error) {
      CHECK(out.tau == 0.0);
      CHECK(!out.inserted);
      CHECK(out.evicted == 0);
    }
    if (out.evicted > 0) CHECK((out.inserted || out.dropped_example));
  }
}
