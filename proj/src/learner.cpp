#include "gsb/learner.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "gsb/fscore.hpp"
#include "gsb/rng.hpp"

namespace gsb {

const char* algorithm_name(Algorithm algo) {
  switch (algo) {
    case Algorithm::Dual: return "dual";
    case Algorithm::Mixed: return "mixed";
    case Algorithm::Primal: return "primal";
  }
  return "?";
}

Algorithm algorithm_from_name(const std::string& name) {
  if (name == "dual") return Algorithm::Dual;
  if (name == "mixed") return Algorithm::Mixed;
  if (name == "primal") return Algorithm::Primal;
  throw std::invalid_argument("unknown algorithm: '" + name + "'");
}

void LearnerConfig::validate() const {
  if (!(C > 0.0)) throw std::invalid_argument("C must be positive");
  if (budget && *budget < 1) throw std::invalid_argument("budget must be >= 1");
  const bool feature_model = algorithm == Algorithm::Primal;
  if (feature_model && !policy_evicts_features(policy.kind))
    throw std::invalid_argument("primal supports policies random/weight/oldest-feature/fscore");
  if (!feature_model && !policy_evicts_examples(policy.kind))
    throw std::invalid_argument("dual/mixed support policies random/oldest/tau");
  kernel.validate();
}

double compute_tau(double score, int label, double k_self, double C) {
  if (!(k_self > 0.0)) throw std::domain_error("degenerate kernel self-value");
  const double hinge = std::max(0.0, 1.0 - static_cast<double>(label) * score);
  return std::min(C, hinge / k_self);
}

namespace {

std::uint64_t graph_units(const Graph& g) {
  // |V| + |E| + 1: the trailing unit stores the signed coefficient.
  return static_cast<std::uint64_t>(g.node_count()) +
         static_cast<std::uint64_t>(g.edge_count()) + 1;
}

std::uint64_t phi_units(const SparseVector& phi) {
  // 1 + sigma * nnz with sigma = 2 for (index, value) pairs.
  return 1 + 2 * static_cast<std::uint64_t>(phi.nnz());
}

class LearnerBase : public OnlineLearner {
 public:
  explicit LearnerBase(const LearnerConfig& cfg)
      : cfg_(cfg), fmap_(cfg.kernel), rng_(make_engine(cfg.policy.seed, 1)) {
    cfg_.validate();
  }
  const LearnerConfig& config() const override { return cfg_; }

 protected:
  bool is_margin_error(double score, int label) const {
    return static_cast<double>(label) * score <= cfg_.beta;
  }

  LearnerConfig cfg_;
  FeatureMap fmap_;
  std::mt19937_64 rng_;
};

// Hypothesis stored as (graph, coefficient) pairs; scoring recomputes every
// kernel value from scratch.
class DualLearner final : public LearnerBase {
 public:
  using LearnerBase::LearnerBase;

  Prediction predict(const Graph& g) override {
    Prediction pred;
    for (const Entry& e : entries_) pred.score += e.alpha * fmap_.kernel(e.graph, g);
    return pred;
  }

  UpdateOutcome learn(const Graph& g, int label, Prediction pred, std::int64_t t) override {
    UpdateOutcome out;
    out.score = pred.score;
    out.margin_error = is_margin_error(pred.score, label);
    if (!out.margin_error) return out;

    const double k_self = fmap_.kernel(g, g);
    const double tau = compute_tau(pred.score, label, k_self, cfg_.C);
    out.tau = tau;
    if (tau == 0.0) return out;

    const std::uint64_t units = graph_units(g);
    if (cfg_.budget && units > *cfg_.budget) {
      out.dropped_example = true;
      return out;
    }
    while (cfg_.budget && size_units_ + units > *cfg_.budget) {
      evict_one();
      ++out.evicted;
    }
    entries_.push_back(Entry{g, static_cast<double>(label) * tau, tau, t, units});
    size_units_ += units;
    out.inserted = true;
    return out;
  }

  std::uint64_t size_units() const override { return size_units_; }
  std::uint64_t recount_size_units() const override {
    std::uint64_t total = 0;
    for (const Entry& e : entries_) total += graph_units(e.graph);
    return total;
  }
  std::size_t stored_count() const override { return entries_.size(); }
  ModelView inspect() const override {
    ModelView view;
    for (const Entry& e : entries_) view.entries.push_back({e.timestamp, e.tau, e.units});
    return view;
  }

 private:
  struct Entry {
    Graph graph;
    double alpha;  // y * tau
    double tau;
    std::int64_t timestamp;
    std::uint64_t units;
  };

  void evict_one() {
    std::vector<ExampleEntryView> views;
    views.reserve(entries_.size());
    for (const Entry& e : entries_) views.push_back({e.timestamp, e.tau});
    const auto victim = select_victim_example(views, cfg_.policy.kind, rng_);
    if (!victim) throw std::logic_error("eviction from an empty model");
    size_units_ -= entries_[*victim].units;
    entries_.erase(entries_.begin() + static_cast<std::ptrdiff_t>(*victim));
  }

  std::vector<Entry> entries_;
  std::uint64_t size_units_ = 0;
};

// Hypothesis stored as precomputed feature images; scoring computes the
// incoming image once and dots it against every stored one.
class MixedLearner final : public LearnerBase {
 public:
  using LearnerBase::LearnerBase;

  Prediction predict(const Graph& g) override {
    Prediction pred;
    pred.phi = fmap_.features(g);
    pred.k_self = pred.phi.squared_norm();
    for (const Entry& e : entries_) pred.score += e.alpha * e.phi.dot(pred.phi);
    return pred;
  }

  UpdateOutcome learn(const Graph&, int label, Prediction pred, std::int64_t t) override {
    UpdateOutcome out;
    out.score = pred.score;
    out.margin_error = is_margin_error(pred.score, label);
    if (!out.margin_error) return out;

    const double tau = compute_tau(pred.score, label, pred.k_self, cfg_.C);
    out.tau = tau;
    if (tau == 0.0) return out;

    const std::uint64_t units = phi_units(pred.phi);
    if (cfg_.budget && units > *cfg_.budget) {
      out.dropped_example = true;
      return out;
    }
    while (cfg_.budget && size_units_ + units > *cfg_.budget) {
      evict_one();
      ++out.evicted;
    }
    entries_.push_back(
        Entry{std::move(pred.phi), static_cast<double>(label) * tau, tau, t, units});
    size_units_ += units;
    out.inserted = true;
    return out;
  }

  std::uint64_t size_units() const override { return size_units_; }
  std::uint64_t recount_size_units() const override {
    std::uint64_t total = 0;
    for (const Entry& e : entries_) total += phi_units(e.phi);
    return total;
  }
  std::size_t stored_count() const override { return entries_.size(); }
  ModelView inspect() const override {
    ModelView view;
    for (const Entry& e : entries_) view.entries.push_back({e.timestamp, e.tau, e.units});
    return view;
  }

 private:
  struct Entry {
    SparseVector phi;
    double alpha;
    double tau;
    std::int64_t timestamp;
    std::uint64_t units;
  };

  void evict_one() {
    std::vector<ExampleEntryView> views;
    views.reserve(entries_.size());
    for (const Entry& e : entries_) views.push_back({e.timestamp, e.tau});
    const auto victim = select_victim_example(views, cfg_.policy.kind, rng_);
    if (!victim) throw std::logic_error("eviction from an empty model");
    size_units_ -= entries_[*victim].units;
    entries_.erase(entries_.begin() + static_cast<std::ptrdiff_t>(*victim));
  }

  std::vector<Entry> entries_;
  std::uint64_t size_units_ = 0;
};

// Hypothesis collapsed into one sparse weight vector; the budget caps the
// number of stored features at floor(B / sigma), where sigma depends on the
// per-feature metadata the policy needs.
class PrimalLearner final : public LearnerBase {
 public:
  explicit PrimalLearner(const LearnerConfig& cfg) : LearnerBase(cfg) {
    switch (cfg_.policy.kind) {
      case PolicyKind::Random:
      case PolicyKind::Weight: sigma_ = 2; break;
      case PolicyKind::OldestFeature: sigma_ = 3; break;
      case PolicyKind::FScore: sigma_ = 5; break;
      default: break;  // validate() already rejected example policies
    }
  }

  Prediction predict(const Graph& g) override {
    Prediction pred;
    pred.phi = fmap_.features(g);
    pred.k_self = pred.phi.squared_norm();
    const auto ids = pred.phi.ids();
    const auto vals = pred.phi.values();
    for (std::size_t k = 0; k < ids.size(); ++k) {
      const auto it = w_.find(ids[k]);
      if (it != w_.end()) pred.score += it->second.w * vals[k];
    }
    return pred;
  }

  UpdateOutcome learn(const Graph&, int label, Prediction pred, std::int64_t t) override {
    UpdateOutcome out;
    out.score = pred.score;
    out.margin_error = is_margin_error(pred.score, label);
    if (cfg_.policy.kind == PolicyKind::FScore) {
      tracker_.record(pred.phi, label);
      // Every stored feature's rank moved; cached scores are stale until the
      // per-round rebuild right before admissions.
      score_index_valid_ = false;
    }
    if (!out.margin_error) return out;

    const double tau = compute_tau(pred.score, label, pred.k_self, cfg_.C);
    out.tau = tau;
    if (tau == 0.0) return out;

    // Features already present merge in place; they consume no new slots.
    const auto ids = pred.phi.ids();
    const auto vals = pred.phi.values();
    std::vector<std::pair<FeatureId, double>> fresh;
    for (std::size_t k = 0; k < ids.size(); ++k) {
      const double contribution = tau * static_cast<double>(label) * vals[k];
      const auto it = w_.find(ids[k]);
      if (it == w_.end()) {
        fresh.emplace_back(ids[k], contribution);
        continue;
      }
      merge(it, contribution, t);
      out.inserted = true;
    }
    if (fresh.empty()) return out;

    // Remaining features are admitted one by one in descending |contribution|
    // order (ties toward the smaller id).
    std::sort(fresh.begin(), fresh.end(), [](const auto& a, const auto& b) {
      const double ma = std::abs(a.second), mb = std::abs(b.second);
      if (ma != mb) return ma > mb;
      return a.first < b.first;
    });
    const std::uint64_t slots =
        cfg_.budget ? *cfg_.budget / sigma_ : std::uint64_t(-1);
    if (cfg_.policy.kind == PolicyKind::FScore) rebuild_score_index();
    for (const auto& [fid, contribution] : fresh) {
      if (w_.size() < slots) {
        insert(fid, contribution, t);
        out.inserted = true;
        continue;
      }
      if (slots == 0 || w_.empty()) continue;  // nothing can ever fit
      switch (cfg_.policy.kind) {
        case PolicyKind::Random: {
          erase(slot_list_[bounded(rng_, slot_list_.size())]);
          ++out.evicted;
          insert(fid, contribution, t);
          out.inserted = true;
          break;
        }
        case PolicyKind::Weight: {
          const auto victim = *by_score_.begin();  // (min |w|, smallest id)
          if (std::abs(contribution) > victim.first) {
            erase(victim.second);
            ++out.evicted;
            insert(fid, contribution, t);
            out.inserted = true;
          }
          break;
        }
        case PolicyKind::OldestFeature: {
          erase(by_touch_.begin()->second);  // fresh candidate always wins
          ++out.evicted;
          insert(fid, contribution, t);
          out.inserted = true;
          break;
        }
        case PolicyKind::FScore: {
          const auto victim = *by_score_.begin();
          if (tracker_.fscore(fid).value_or(0.0) > victim.first) {
            erase(victim.second);
            ++out.evicted;
            insert(fid, contribution, t);
            out.inserted = true;
          }
          break;
        }
        default: break;
      }
    }
    return out;
  }

  std::uint64_t size_units() const override {
    return sigma_ * static_cast<std::uint64_t>(w_.size());
  }
  std::uint64_t recount_size_units() const override {
    std::uint64_t nnz = 0;
    for (const auto& [fid, e] : w_) {
      (void)fid;
      if (e.w != 0.0) ++nnz;
    }
    return sigma_ * nnz;
  }
  std::size_t stored_count() const override { return w_.size(); }
  ModelView inspect() const override {
    ModelView view;
    view.weights.reserve(w_.size());
    for (const auto& [fid, e] : w_) view.weights.emplace_back(fid, e.w);
    std::sort(view.weights.begin(), view.weights.end());
    return view;
  }

 private:
  struct Entry {
    double w = 0.0;
    std::int64_t touched = 0;
  };
  using Map = std::unordered_map<FeatureId, Entry>;

  void index_add(FeatureId fid, const Entry& e) {
    switch (cfg_.policy.kind) {
      case PolicyKind::Random:
        slot_pos_[fid] = slot_list_.size();
        slot_list_.push_back(fid);
        break;
      case PolicyKind::Weight:
        by_score_.emplace(std::abs(e.w), fid);
        break;
      case PolicyKind::OldestFeature:
        by_touch_.emplace(e.touched, fid);
        break;
      case PolicyKind::FScore:
        if (score_index_valid_) by_score_.emplace(tracker_.fscore(fid).value_or(0.0), fid);
        break;
      default: break;
    }
  }

  void index_remove(FeatureId fid, const Entry& e) {
    switch (cfg_.policy.kind) {
      case PolicyKind::Random: {
        const std::size_t pos = slot_pos_.at(fid);
        slot_pos_[slot_list_.back()] = pos;
        std::swap(slot_list_[pos], slot_list_.back());
        slot_list_.pop_back();
        slot_pos_.erase(fid);
        break;
      }
      case PolicyKind::Weight:
        by_score_.erase({std::abs(e.w), fid});
        break;
      case PolicyKind::OldestFeature:
        by_touch_.erase({e.touched, fid});
        break;
      case PolicyKind::FScore:
        if (score_index_valid_) by_score_.erase({tracker_.fscore(fid).value_or(0.0), fid});
        break;
      default: break;
    }
  }

  void merge(Map::iterator it, double contribution, std::int64_t t) {
    index_remove(it->first, it->second);
    it->second.w += contribution;
    it->second.touched = t;
    if (it->second.w == 0.0) {
      w_.erase(it);  // exact zeros release budget
      return;
    }
    index_add(it->first, it->second);
  }

  void insert(FeatureId fid, double value, std::int64_t t) {
    const auto [it, added] = w_.emplace(fid, Entry{value, t});
    if (!added) throw std::logic_error("feature inserted twice");
    index_add(fid, it->second);
  }

  void erase(FeatureId fid) {
    const auto it = w_.find(fid);
    if (it == w_.end()) throw std::logic_error("evicting a feature that is not stored");
    index_remove(fid, it->second);
    w_.erase(it);
  }

  // FScore ranks move whenever the tracker absorbs an example, so the index
  // is rebuilt per learning round; within one round the scores are fixed.
  void rebuild_score_index() {
    by_score_.clear();
    for (const auto& [fid, e] : w_) {
      (void)e;
      by_score_.emplace(tracker_.fscore(fid).value_or(0.0), fid);
    }
    score_index_valid_ = true;
  }

  std::uint64_t sigma_ = 2;
  Map w_;
  std::set<std::pair<double, FeatureId>> by_score_;
  std::set<std::pair<std::int64_t, FeatureId>> by_touch_;
  std::vector<FeatureId> slot_list_;
  std::unordered_map<FeatureId, std::size_t> slot_pos_;
  bool score_index_valid_ = false;
  FScoreTracker tracker_;
};

}  // namespace

std::unique_ptr<OnlineLearner> make_learner(const LearnerConfig& cfg) {
  cfg.validate();
  switch (cfg.algorithm) {
    case Algorithm::Dual: return std::make_unique<DualLearner>(cfg);
    case Algorithm::Mixed: return std::make_unique<MixedLearner>(cfg);
    case Algorithm::Primal: return std::make_unique<PrimalLearner>(cfg);
  }
  throw std::invalid_argument("unknown algorithm");
}

}  // namespace gsb
