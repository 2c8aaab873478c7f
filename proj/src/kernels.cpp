#include "gsb/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <unordered_map>

namespace gsb {

const char* kernel_kind_name(KernelKind kind) {
  switch (kind) {
    case KernelKind::FS: return "fs";
    case KernelKind::NSPDK: return "nspdk";
    case KernelKind::ODD: return "odd";
  }
  return "?";
}

KernelKind kernel_kind_from_name(const std::string& name) {
  if (name == "fs") return KernelKind::FS;
  if (name == "nspdk") return KernelKind::NSPDK;
  if (name == "odd") return KernelKind::ODD;
  throw std::invalid_argument("unknown kernel: '" + name + "'");
}

void KernelConfig::validate() const {
  if (kind == KernelKind::ODD && !(lambda > 0.0))
    throw std::invalid_argument("odd kernel needs lambda > 0");
  const auto warn = [this](const char* what) {
    std::fprintf(stderr, "warning: %s outside the usual grid (%s)\n", what,
                 describe().c_str());
  };
  switch (kind) {
    case KernelKind::FS:
      if (h > 8) warn("fs h");
      break;
    case KernelKind::NSPDK:
      if (d < 1 || d > 6) warn("nspdk d");
      if (h < 1 || h > 4) warn("nspdk h");
      break;
    case KernelKind::ODD:
      if (h < 1 || h > 4) warn("odd h");
      if (lambda < 0.8 || lambda > 1.8) warn("odd lambda");
      break;
  }
}

std::string KernelConfig::describe() const {
  char buf[96];
  switch (kind) {
    case KernelKind::FS:
      std::snprintf(buf, sizeof(buf), "fs h=%u", h);
      break;
    case KernelKind::NSPDK:
      std::snprintf(buf, sizeof(buf), "nspdk d=%u h=%u", d, h);
      break;
    case KernelKind::ODD:
      std::snprintf(buf, sizeof(buf), "odd h=%u lambda=%g", h, lambda);
      break;
  }
  std::string out = buf;
  if (normalize) out += " normalized";
  return out;
}

FeatureMap::FeatureMap(KernelConfig cfg) : cfg_(cfg) { cfg_.validate(); }

SparseVector FeatureMap::features(const Graph& g) {
  SparseVector phi;
  switch (cfg_.kind) {
    case KernelKind::FS: phi = features_fs(g); break;
    case KernelKind::NSPDK: phi = features_nspdk(g); break;
    case KernelKind::ODD: phi = features_odd(g); break;
  }
  if (cfg_.normalize) phi.normalize();
  return phi;
}

double FeatureMap::kernel(const Graph& a, const Graph& b) {
  return features(a).dot(features(b));
}

// One feature per (iteration, compressed label): iteration 0 counts raw
// labels, iteration k+1 relabels each node with its own label plus the sorted
// multiset of neighbor labels. Labels are compressed through the run
// dictionary, which keeps identity exact without ever expanding the strings.
SparseVector FeatureMap::features_fs(const Graph& g) {
  const std::size_t n = g.node_count();
  std::vector<FeatureId> label(n);
  for (std::size_t v = 0; v < n; ++v) label[v] = dict_.intern("L|" + g.label(v));

  std::vector<std::pair<FeatureId, double>> acc;
  acc.reserve(n * (cfg_.h + 1));
  std::string key;
  for (std::uint32_t iter = 0;; ++iter) {
    for (std::size_t v = 0; v < n; ++v) {
      key = "F|";
      key += std::to_string(iter);
      key += '|';
      key += std::to_string(label[v]);
      acc.emplace_back(dict_.intern(key), 1.0);
    }
    if (iter == cfg_.h) break;

    std::vector<FeatureId> next(n);
    std::vector<FeatureId> nbr;
    for (std::size_t v = 0; v < n; ++v) {
      nbr.clear();
      for (const NodeId u : g.neighbors(static_cast<NodeId>(v))) nbr.push_back(label[u]);
      std::sort(nbr.begin(), nbr.end());
      key = "W|";
      key += std::to_string(label[v]);
      key += '|';
      for (std::size_t k = 0; k < nbr.size(); ++k) {
        if (k > 0) key += ',';
        key += std::to_string(nbr[k]);
      }
      next[v] = dict_.intern(key);
    }
    label = std::move(next);
  }
  return SparseVector::from_pairs(std::move(acc));
}

// One feature per (neighborhood of u, neighborhood of v, distance) triple for
// every radius r in 0..h and every unordered node pair within distance d,
// counting each distinct triple once per pair. Neighborhoods are encoded as
// the canonical string of the radius-r BFS DAG rooted at the node.
SparseVector FeatureMap::features_nspdk(const Graph& g) {
  const std::size_t n = g.node_count();
  const std::uint32_t radii = cfg_.h + 1;

  std::vector<FeatureId> hood(n * radii);
  for (std::size_t v = 0; v < n; ++v) {
    for (std::uint32_t r = 0; r < radii; ++r) {
      const Dag dag = bfs_dag(g, static_cast<NodeId>(v), r);
      hood[v * radii + r] = dict_.intern("N|" + canonicalize(dag).repr[0]);
    }
  }

  std::vector<std::pair<FeatureId, double>> acc;
  std::vector<FeatureId> per_pair;
  std::string key;
  for (std::size_t u = 0; u < n; ++u) {
    for (const auto& [v, dist] : bfs_distances(g, static_cast<NodeId>(u), cfg_.d)) {
      if (v < u) continue;  // unordered pairs, diagonal included at distance 0
      per_pair.clear();
      for (std::uint32_t r = 0; r < radii; ++r) {
        FeatureId a = hood[u * radii + r];
        FeatureId b = hood[v * radii + r];
        if (a > b) std::swap(a, b);
        key = "P|";
        key += std::to_string(dist);
        key += '|';
        key += std::to_string(a);
        key += '|';
        key += std::to_string(b);
        per_pair.push_back(dict_.intern(key));
      }
      std::sort(per_pair.begin(), per_pair.end());
      per_pair.erase(std::unique(per_pair.begin(), per_pair.end()), per_pair.end());
      for (const FeatureId f : per_pair) acc.emplace_back(f, 1.0);
    }
  }
  return SparseVector::from_pairs(std::move(acc));
}

// Every proper rooted substructure of the n height-h BFS DAGs contributes
// lambda^(|t|/2) per occurrence, |t| being the ordered-tree node count of the
// encoding, so matching substructures are weighted by lambda^|t| in the dot
// product. Occurrences are counted first and weighted once, which keeps the
// image exactly permutation-invariant.
SparseVector FeatureMap::features_odd(const Graph& g) {
  struct Info {
    std::uint64_t count = 0;
    std::uint64_t size = 0;
  };
  std::unordered_map<FeatureId, Info> occurrences;
  for (std::size_t root = 0; root < g.node_count(); ++root) {
    const Dag dag = bfs_dag(g, static_cast<NodeId>(root), cfg_.h);
    const DagCanonical canon = canonicalize(dag);
    for (std::size_t v = 0; v < dag.node_count(); ++v) {
      const FeatureId f = dict_.intern("D|" + canon.repr[v]);
      auto& info = occurrences[f];
      ++info.count;
      info.size = canon.tree_size[v];
    }
  }
  std::vector<std::pair<FeatureId, double>> acc;
  acc.reserve(occurrences.size());
  for (const auto& [f, info] : occurrences) {
    const double weight = std::pow(cfg_.lambda, static_cast<double>(info.size) / 2.0);
    acc.emplace_back(f, static_cast<double>(info.count) * weight);
  }
  return SparseVector::from_pairs(std::move(acc));
}

}  // namespace gsb
