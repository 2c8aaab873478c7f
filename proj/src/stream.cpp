#include "gsb/stream.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "gsb/rng.hpp"

namespace gsb {

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

bool parse_index(const std::string& tok, NodeId& out) {
  if (tok.empty()) return false;
  std::uint64_t v = 0;
  for (const char c : tok) {
    if (c < '0' || c > '9') return false;
    v = v * 10 + static_cast<std::uint64_t>(c - '0');
    if (v > 0xffffffffull) return false;
  }
  out = static_cast<NodeId>(v);
  return true;
}

struct PendingEdge {
  NodeId a, b;
  std::size_t line;
};

}  // namespace

std::vector<LabeledExample> parse_stream(std::istream& in) {
  std::vector<LabeledExample> examples;
  std::string line;
  std::size_t lineno = 0;

  bool in_block = false;
  std::string id;
  std::vector<std::string> labels;
  std::vector<PendingEdge> pending;

  const auto finish_block = [&](int label) {
    std::vector<std::pair<NodeId, NodeId>> edges;
    edges.reserve(pending.size());
    for (const PendingEdge& e : pending) {
      if (e.a >= labels.size() || e.b >= labels.size())
        throw StreamParseError(e.line, "edge endpoint out of range");
      edges.emplace_back(std::min(e.a, e.b), std::max(e.a, e.b));
    }
    try {
      examples.push_back(LabeledExample{Graph(labels, edges, id), label,
                                        static_cast<std::int64_t>(examples.size())});
    } catch (const std::invalid_argument& err) {
      throw StreamParseError(lineno, err.what());
    }
    in_block = false;
    labels.clear();
    pending.clear();
  };

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto toks = split_ws(line);
    if (toks.empty()) continue;
    const std::string& op = toks[0];

    if (op == "g") {
      if (in_block) throw StreamParseError(lineno, "unterminated graph block");
      if (toks.size() != 2) throw StreamParseError(lineno, "expected: g <id>");
      in_block = true;
      id = toks[1];
    } else if (op == "v") {
      if (!in_block) throw StreamParseError(lineno, "node outside a graph block");
      if (toks.size() != 3) throw StreamParseError(lineno, "expected: v <index> <label>");
      NodeId idx;
      if (!parse_index(toks[1], idx)) throw StreamParseError(lineno, "bad node index");
      if (idx != labels.size())
        throw StreamParseError(lineno, "node indices must appear in order 0..n-1");
      labels.push_back(toks[2]);
    } else if (op == "e") {
      if (!in_block) throw StreamParseError(lineno, "edge outside a graph block");
      if (toks.size() != 3) throw StreamParseError(lineno, "expected: e <i> <j>");
      NodeId a, b;
      if (!parse_index(toks[1], a) || !parse_index(toks[2], b))
        throw StreamParseError(lineno, "bad edge endpoint");
      if (a == b) throw StreamParseError(lineno, "self-loops are not allowed");
      pending.push_back({a, b, lineno});
    } else if (op == "l") {
      if (!in_block) throw StreamParseError(lineno, "label outside a graph block");
      if (toks.size() != 2) throw StreamParseError(lineno, "expected: l <+1|-1>");
      int label;
      if (toks[1] == "+1") {
        label = 1;
      } else if (toks[1] == "-1") {
        label = -1;
      } else {
        throw StreamParseError(lineno, "class label must be +1 or -1");
      }
      finish_block(label);
    } else {
      throw StreamParseError(lineno, "unknown directive '" + op + "'");
    }
  }
  if (in_block) throw StreamParseError(lineno, "unterminated graph block at end of input");
  return examples;
}

std::vector<LabeledExample> parse_stream_text(const std::string& text) {
  std::istringstream ss(text);
  return parse_stream(ss);
}

std::vector<LabeledExample> load_stream_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open stream file: " + path);
  return parse_stream(in);
}

void write_stream(const std::vector<LabeledExample>& examples, std::ostream& out) {
  for (std::size_t k = 0; k < examples.size(); ++k) {
    const LabeledExample& ex = examples[k];
    const Graph& g = ex.graph;
    out << "g " << (g.id().empty() ? std::to_string(k) : g.id()) << '\n';
    for (std::size_t v = 0; v < g.node_count(); ++v)
      out << "v " << v << ' ' << g.label(static_cast<NodeId>(v)) << '\n';
    for (const auto& [a, b] : g.edges()) out << "e " << a << ' ' << b << '\n';
    out << "l " << (ex.label > 0 ? "+1" : "-1") << '\n';
  }
}

std::string write_stream_text(const std::vector<LabeledExample>& examples) {
  std::ostringstream ss;
  write_stream(examples, ss);
  return ss.str();
}

void DriftStreamConfig::validate() const {
  if (segments.empty()) throw std::invalid_argument("drift stream needs at least one segment");
  for (std::size_t s = 0; s < segments.size(); ++s) {
    const StreamSegmentConfig& seg = segments[s];
    if (seg.count < 1) throw std::invalid_argument("segment count must be >= 1");
    if (seg.nodes_min < 1 || seg.nodes_min > seg.nodes_max)
      throw std::invalid_argument("bad node count range");
    if (seg.extra_edges_min > seg.extra_edges_max)
      throw std::invalid_argument("bad extra edge range");
    if (seg.alphabet.empty()) throw std::invalid_argument("empty alphabet");
    if (!(seg.noise >= 0.0 && seg.noise < 0.5))
      throw std::invalid_argument("noise must be in [0, 0.5)");
    if (!(seg.target_positive_rate >= 0.0 && seg.target_positive_rate <= 1.0))
      throw std::invalid_argument("target positive rate must be in [0, 1]");
    const auto in_alphabet = [&](const std::string& l) {
      for (const auto& a : seg.alphabet)
        if (a == l) return true;
      return false;
    };
    if (!in_alphabet(seg.concept_edge.first) || !in_alphabet(seg.concept_edge.second))
      throw std::invalid_argument("concept labels must come from the alphabet");
    if (s > 0) {
      const auto& prev = segments[s - 1].concept_edge;
      const auto norm = [](std::pair<std::string, std::string> p) {
        if (p.second < p.first) std::swap(p.first, p.second);
        return p;
      };
      if (norm(prev) == norm(seg.concept_edge))
        throw std::invalid_argument("consecutive segments must have distinct concepts");
    }
  }
}

bool contains_concept_edge(const Graph& g,
                           const std::pair<std::string, std::string>& concept_edge) {
  for (const auto& [a, b] : g.edges()) {
    const std::string& la = g.label(a);
    const std::string& lb = g.label(b);
    if ((la == concept_edge.first && lb == concept_edge.second) ||
        (la == concept_edge.second && lb == concept_edge.first))
      return true;
  }
  return false;
}

namespace {

Graph random_segment_graph(const StreamSegmentConfig& seg, std::mt19937_64& rng,
                           const std::string& id) {
  const std::uint32_t n =
      seg.nodes_min + static_cast<std::uint32_t>(
                          bounded(rng, seg.nodes_max - seg.nodes_min + 1ull));
  std::vector<std::string> labels(n);
  for (auto& l : labels) l = seg.alphabet[bounded(rng, seg.alphabet.size())];

  std::vector<std::pair<NodeId, NodeId>> edges;
  edges.reserve(n);
  for (NodeId v = 1; v < n; ++v) {
    const NodeId parent = static_cast<NodeId>(bounded(rng, v));
    edges.emplace_back(std::min(parent, v), std::max(parent, v));
  }
  const std::uint32_t extra =
      seg.extra_edges_min + static_cast<std::uint32_t>(bounded(
                                rng, seg.extra_edges_max - seg.extra_edges_min + 1ull));
  const std::uint64_t capacity = static_cast<std::uint64_t>(n) * (n - 1) / 2;
  std::uint32_t added = 0;
  std::uint32_t attempts = 0;
  while (added < extra && edges.size() < capacity && attempts < 64 * (extra + 1)) {
    ++attempts;
    if (n < 2) break;
    const NodeId a = static_cast<NodeId>(bounded(rng, n));
    const NodeId b = static_cast<NodeId>(bounded(rng, n));
    if (a == b) continue;
    const auto e = std::make_pair(std::min(a, b), std::max(a, b));
    bool dup = false;
    for (const auto& have : edges) {
      if (have == e) {
        dup = true;
        break;
      }
    }
    if (dup) continue;
    edges.push_back(e);
    ++added;
  }
  return Graph(std::move(labels), std::move(edges), id);
}

}  // namespace

std::vector<LabeledExample> generate_drift_stream(const DriftStreamConfig& cfg) {
  cfg.validate();
  std::mt19937_64 rng = make_engine(cfg.seed, 0);
  std::vector<LabeledExample> out;

  std::int64_t t = 0;
  for (std::size_t s = 0; s < cfg.segments.size(); ++s) {
    const StreamSegmentConfig& seg = cfg.segments[s];
    const std::uint32_t positives = static_cast<std::uint32_t>(
        std::llround(seg.target_positive_rate * static_cast<double>(seg.count)));
    std::vector<int> wanted(seg.count, -1);
    for (std::uint32_t k = 0; k < positives && k < seg.count; ++k) wanted[k] = 1;
    shuffle(wanted, rng);

    for (std::uint32_t k = 0; k < seg.count; ++k, ++t) {
      constexpr int kMaxAttempts = 10000;
      bool placed = false;
      for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        Graph g = random_segment_graph(seg, rng, std::to_string(t));
        const bool positive = contains_concept_edge(g, seg.concept_edge);
        if ((wanted[k] > 0) != positive) continue;
        int label = wanted[k];
        if (seg.noise > 0.0 && uniform01(rng) < seg.noise) label = -label;
        out.push_back(LabeledExample{std::move(g), label, t});
        placed = true;
        break;
      }
      if (!placed) {
        throw std::runtime_error(
            "segment " + std::to_string(s) +
            ": could not hit the target positive rate (concept too rare or too "
            "common for the alphabet)");
      }
    }
  }
  return out;
}

DriftStreamConfig parse_drift_config(const std::string& path_or_json,
                                     std::uint64_t default_seed) {
  nlohmann::json spec;
  if (!path_or_json.empty() && path_or_json[0] == '{') {
    spec = nlohmann::json::parse(path_or_json);
  } else {
    std::ifstream in(path_or_json);
    if (!in) throw std::runtime_error("cannot open synthetic config: " + path_or_json);
    spec = nlohmann::json::parse(in);
  }

  DriftStreamConfig cfg;
  cfg.seed = spec.value("seed", default_seed);
  if (!spec.contains("segments") || !spec["segments"].is_array())
    throw std::invalid_argument("synthetic config needs a 'segments' array");
  for (const auto& js : spec["segments"]) {
    StreamSegmentConfig seg;
    seg.count = js.at("count").get<std::uint32_t>();
    const auto nodes = js.at("nodes");
    seg.nodes_min = nodes.at(0).get<std::uint32_t>();
    seg.nodes_max = nodes.at(1).get<std::uint32_t>();
    if (js.contains("extra_edges")) {
      seg.extra_edges_min = js["extra_edges"].at(0).get<std::uint32_t>();
      seg.extra_edges_max = js["extra_edges"].at(1).get<std::uint32_t>();
    }
    seg.alphabet = js.at("alphabet").get<std::vector<std::string>>();
    const auto concept_pair = js.at("concept");
    seg.concept_edge = {concept_pair.at(0).get<std::string>(),
                        concept_pair.at(1).get<std::string>()};
    seg.noise = js.value("noise", 0.0);
    seg.target_positive_rate = js.value("target_positive_rate", 0.5);
    cfg.segments.push_back(std::move(seg));
  }
  cfg.validate();
  return cfg;
}

}  // namespace gsb
