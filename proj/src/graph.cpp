#include "gsb/graph.hpp"

#include <algorithm>
#include <cctype>
#include <queue>
#include <stdexcept>

namespace gsb {

namespace {

bool valid_label(const std::string& label) {
  if (label.empty()) return false;
  for (const char c : label) {
    if (c == '(' || c == ')' || c == ',') return false;
    if (std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

Graph::Graph(std::vector<std::string> labels,
             std::vector<std::pair<NodeId, NodeId>> edges, std::string id)
    : labels_(std::move(labels)), edges_(std::move(edges)), id_(std::move(id)) {
  if (labels_.empty()) throw std::invalid_argument("graph must have at least one node");
  const std::size_t n = labels_.size();
  for (const auto& label : labels_) {
    if (!valid_label(label))
      throw std::invalid_argument("invalid node label: '" + label + "'");
  }
  for (auto& [a, b] : edges_) {
    if (a >= n || b >= n) throw std::invalid_argument("edge endpoint out of range");
    if (a == b) throw std::invalid_argument("self-loops are not allowed");
    if (a > b) std::swap(a, b);
  }
  std::sort(edges_.begin(), edges_.end());
  if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
    throw std::invalid_argument("duplicate edge");

  adjacency_.assign(n, {});
  for (const auto& [a, b] : edges_) {
    adjacency_[a].push_back(b);
    adjacency_[b].push_back(a);
  }
  for (auto& nbrs : adjacency_) std::sort(nbrs.begin(), nbrs.end());
}

std::size_t Graph::max_degree() const {
  std::size_t best = 0;
  for (const auto& nbrs : adjacency_) best = std::max(best, nbrs.size());
  return best;
}

std::vector<std::pair<NodeId, std::uint32_t>> bfs_distances(const Graph& g,
                                                            NodeId source,
                                                            std::uint32_t max_dist) {
  if (source >= g.node_count()) throw std::invalid_argument("bfs source out of range");
  constexpr std::uint32_t kUnseen = 0xffffffffu;
  std::vector<std::uint32_t> dist(g.node_count(), kUnseen);
  std::vector<std::pair<NodeId, std::uint32_t>> order;
  dist[source] = 0;
  order.emplace_back(source, 0);
  std::size_t head = 0;
  while (head < order.size()) {
    const auto [u, du] = order[head++];
    if (du == max_dist) continue;
    for (const NodeId v : g.neighbors(u)) {
      if (dist[v] != kUnseen) continue;
      dist[v] = du + 1;
      order.emplace_back(v, du + 1);
    }
  }
  return order;
}

Dag bfs_dag(const Graph& g, NodeId root, std::uint32_t height) {
  const auto reach = bfs_distances(g, root, height);
  std::vector<std::uint32_t> dag_index(g.node_count(), 0xffffffffu);
  Dag dag;
  dag.original.reserve(reach.size());
  dag.labels.reserve(reach.size());
  dag.depth.reserve(reach.size());
  for (std::uint32_t k = 0; k < reach.size(); ++k) {
    const auto [v, d] = reach[k];
    dag_index[v] = k;
    dag.original.push_back(v);
    dag.labels.push_back(g.label(v));
    dag.depth.push_back(d);
  }
  dag.children.resize(reach.size());
  for (std::uint32_t k = 0; k < reach.size(); ++k) {
    const NodeId u = dag.original[k];
    for (const NodeId v : g.neighbors(u)) {
      const std::uint32_t kv = dag_index[v];
      if (kv == 0xffffffffu) continue;  // beyond the height cut
      if (dag.depth[kv] == dag.depth[k] + 1) dag.children[k].push_back(kv);
    }
  }
  return dag;
}

DagCanonical canonicalize(const Dag& dag) {
  const std::size_t n = dag.node_count();
  DagCanonical out;
  out.repr.resize(n);
  out.tree_size.assign(n, 0);
  // Children sit exactly one level deeper and are discovered later, so a
  // reverse pass visits them before their parents.
  for (std::size_t k = n; k-- > 0;) {
    const auto& kids = dag.children[k];
    if (kids.empty()) {
      out.repr[k] = dag.labels[k];
      out.tree_size[k] = 1;
      continue;
    }
    std::vector<const std::string*> parts;
    parts.reserve(kids.size());
    std::uint64_t size = 1;
    for (const std::uint32_t c : kids) {
      parts.push_back(&out.repr[c]);
      size += out.tree_size[c];
    }
    std::sort(parts.begin(), parts.end(),
              [](const std::string* a, const std::string* b) { return *a < *b; });
    std::string repr = dag.labels[k];
    repr += '(';
    for (std::size_t p = 0; p < parts.size(); ++p) {
      if (p > 0) repr += ',';
      repr += *parts[p];
    }
    repr += ')';
    out.repr[k] = std::move(repr);
    out.tree_size[k] = size;
  }
  return out;
}

std::string canonical_subtree_string(const Dag& dag, std::uint32_t v) {
  if (v >= dag.node_count()) throw std::invalid_argument("dag node out of range");
  return canonicalize(dag).repr[v];
}

}  // namespace gsb
