#pragma once

#include <cstddef>
#include <mutex>
#include <string>
#include <unordered_map>

#include "gsb/sparse.hpp"

namespace gsb {

/// Run-scoped dictionary mapping canonical feature strings to dense ids.
/// Ids follow first-insertion order; get-or-insert is serialized so all users
/// of one run observe a single total insertion order.
class Interner {
 public:
  FeatureId intern(std::string key) {
    std::lock_guard<std::mutex> lock(mu_);
    const auto [it, added] = map_.try_emplace(std::move(key), next_);
    if (added) ++next_;
    return it->second;
  }

  std::size_t size() const {
    std::lock_guard<std::mutex> lock(mu_);
    return map_.size();
  }

 private:
  mutable std::mutex mu_;
  std::unordered_map<std::string, FeatureId> map_;
  FeatureId next_ = 0;
};

}  // namespace gsb
