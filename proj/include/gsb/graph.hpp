#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace gsb {

using NodeId = std::uint32_t;

/// Immutable labeled undirected graph, the stream element.
///
/// Construction enforces: at least one node, valid edge endpoints, no
/// self-loops, no duplicate edges. Labels are non-empty and may not contain
/// whitespace or '(' ')' ',' — the delimiters of canonical encodings and of
/// the stream file format.
class Graph {
 public:
  Graph(std::vector<std::string> labels,
        std::vector<std::pair<NodeId, NodeId>> edges, std::string id = {});

  std::size_t node_count() const { return labels_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::string& label(NodeId v) const { return labels_[v]; }
  const std::vector<std::string>& labels() const { return labels_; }
  /// Ascending neighbor indices.
  const std::vector<NodeId>& neighbors(NodeId v) const { return adjacency_[v]; }
  /// Canonical edge list: first < second, lexicographically sorted.
  const std::vector<std::pair<NodeId, NodeId>>& edges() const { return edges_; }
  /// The maximum adjacency count over all nodes.
  std::size_t max_degree() const;
  const std::string& id() const { return id_; }

  bool same_structure(const Graph& other) const {
    return labels_ == other.labels_ && edges_ == other.edges_;
  }
  bool operator==(const Graph& other) const {
    return same_structure(other) && id_ == other.id_;
  }

 private:
  std::vector<std::string> labels_;
  std::vector<std::pair<NodeId, NodeId>> edges_;
  std::vector<std::vector<NodeId>> adjacency_;
  std::string id_;
};

struct LabeledExample {
  Graph graph;
  int label;                  // -1 or +1
  std::int64_t position = 0;  // 0-based stream index
};

/// BFS-layered DAG rooted at a graph node: directed edges run only from depth
/// k to depth k+1 and a node may keep several parents. Node 0 is the root;
/// nodes are numbered in BFS discovery order (ascending graph index within a
/// level), so depth is non-decreasing in node order.
struct Dag {
  std::vector<NodeId> original;                  // dag node -> source graph node
  std::vector<std::string> labels;               // dag node -> label
  std::vector<std::vector<std::uint32_t>> children;
  std::vector<std::uint32_t> depth;
  std::size_t node_count() const { return labels.size(); }
};

/// Nodes within `max_dist` hops of `source` with exact unweighted shortest
/// path distances, in BFS discovery order (source first, distance 0).
std::vector<std::pair<NodeId, std::uint32_t>> bfs_distances(const Graph& g,
                                                            NodeId source,
                                                            std::uint32_t max_dist);

/// Breadth-first DAG decomposition up to `height`; same-depth and back edges
/// are dropped, all forward edges are kept.
Dag bfs_dag(const Graph& g, NodeId root, std::uint32_t height);

/// Canonical encodings of every proper rooted substructure of a DAG, plus the
/// node count of the ordered tree each encoding denotes (shared descendants
/// counted once per path). repr[v] is label(v) for leaves, otherwise
/// label(v) followed by the sorted child encodings in parentheses.
struct DagCanonical {
  std::vector<std::string> repr;
  std::vector<std::uint64_t> tree_size;
};
DagCanonical canonicalize(const Dag& dag);

/// Canonical encoding of the rooted substructure at one DAG node.
std::string canonical_subtree_string(const Dag& dag, std::uint32_t v);

}  // namespace gsb
