#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gsb/graph.hpp"

namespace gsb {

/// Parse failure carrying the 1-based input line.
class StreamParseError : public std::runtime_error {
 public:
  StreamParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Stream file format (UTF-8, LF newlines):
///   g <id>            begins a graph block
///   v <index> <label>  node, indices 0..n-1 in order
///   e <i> <j>          undirected edge, i < j
///   l <+1|-1>          class label, ends the block
/// Lines starting with '#' are comments; blank lines are ignored.
std::vector<LabeledExample> parse_stream(std::istream& in);
std::vector<LabeledExample> parse_stream_text(const std::string& text);
std::vector<LabeledExample> load_stream_file(const std::string& path);

void write_stream(const std::vector<LabeledExample>& examples, std::ostream& out);
std::string write_stream_text(const std::vector<LabeledExample>& examples);

/// One stretch of the synthetic stream. A graph is positive iff it contains
/// an edge whose endpoint labels are exactly the concept pair.
struct StreamSegmentConfig {
  std::uint32_t count = 0;
  std::uint32_t nodes_min = 1, nodes_max = 1;
  std::uint32_t extra_edges_min = 0, extra_edges_max = 0;
  std::vector<std::string> alphabet;
  std::pair<std::string, std::string> concept_edge;
  double noise = 0.0;                 // independent label-flip probability
  double target_positive_rate = 0.5;  // hit exactly, up to rounding, pre-noise
};

struct DriftStreamConfig {
  std::vector<StreamSegmentConfig> segments;
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument on empty segments, inverted ranges,
  /// noise >= 0.5, concept labels missing from the alphabet, or equal
  /// concepts on consecutive segments.
  void validate() const;
};

bool contains_concept_edge(const Graph& g, const std::pair<std::string, std::string>& concept_edge);

/// Deterministic given the seed. Each graph is a random spanning tree plus
/// extra edges with uniform labels, rejection-sampled so the pre-noise
/// positive count of each segment is round(count * rate). Throws
/// std::runtime_error when a slot exhausts its rejection budget.
std::vector<LabeledExample> generate_drift_stream(const DriftStreamConfig& cfg);

/// Reads a drift config from a JSON file path, or from inline JSON when the
/// argument starts with '{'. Field "seed" is optional and falls back to
/// `default_seed`.
DriftStreamConfig parse_drift_config(const std::string& path_or_json,
                                     std::uint64_t default_seed);

}  // namespace gsb
