#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gsb/eval.hpp"
#include "gsb/learner.hpp"
#include "gsb/stream.hpp"

namespace gsb {

/// Everything one experiment needs. The stream comes from a file path or a
/// synthetic generator config (path or inline JSON); exactly one must be set.
struct RunSpec {
  KernelConfig kernel;
  Algorithm algorithm = Algorithm::Primal;
  PolicyKind policy = PolicyKind::Weight;
  std::optional<std::uint64_t> budget;  // nullopt = infinite ("inf")
  double C = 0.01;
  std::uint64_t seed = 0;
  std::string stream_path;
  std::string synthetic;
  EvalConfig eval;
  std::string out_path;

  LearnerConfig learner_config() const;
  void validate() const;
};

std::optional<std::uint64_t> parse_budget(const std::string& text);  // "inf" or N >= 1
std::string budget_to_string(const std::optional<std::uint64_t>& budget);

/// Loads or generates the stream named by the spec.
std::vector<LabeledExample> resolve_stream(const RunSpec& spec);

/// Executes the spec in memory.
RunResult execute(const RunSpec& spec);

/// CSV with one row per record, then one summary row flagged kind=summary.
/// Columns: t,auroc,balanced_accuracy,cumulative_errors,model_size,elapsed_ns,kind.
std::string render_csv(const RunResult& result);

/// Executes and writes the CSV atomically (write to a temp file, then rename),
/// so a failed run leaves no partial output behind.
void run_to_file(const RunSpec& spec);

/// Parameter grid: the Cartesian product of the lists below, validated
/// per-combination. Lists left empty default to the standard grids
/// (fs h 0..8; nspdk d 1..6, h 1..4; odd lambda 0.8..1.8, h 1..4;
/// C 0.01/0.1/1.0; budgets 10000/50000; per-algorithm policies).
struct SweepSpec {
  std::vector<KernelKind> kernels;
  std::vector<std::uint32_t> h_values;       // FS
  std::vector<std::uint32_t> nspdk_d;
  std::vector<std::uint32_t> nspdk_h;
  std::vector<std::uint32_t> odd_h;
  std::vector<double> odd_lambda;
  std::vector<Algorithm> algorithms;
  std::vector<PolicyKind> policies;          // empty: per-algorithm defaults
  std::vector<std::optional<std::uint64_t>> budgets;
  std::vector<double> c_values;
  bool normalize = false;
  std::uint64_t seed = 0;
  std::string stream_path;
  std::string synthetic;
  EvalConfig eval;
};

std::vector<std::uint32_t> default_h_grid(KernelKind kind);
std::vector<std::uint32_t> default_d_grid();
std::vector<double> default_lambda_grid();
std::vector<double> default_c_grid();
std::vector<std::optional<std::uint64_t>> default_budget_grid();
std::vector<PolicyKind> default_policies(Algorithm algo);

/// Grid file: JSON object with optional lists "kernel", "h", "d", "lambda",
/// "algo", "policy", "budget", "C" plus scalar "seed", "stream"/"synthetic",
/// "eval_every", "window", "normalize".
SweepSpec parse_sweep_json(const std::string& path_or_json);

/// Cartesian expansion; throws std::invalid_argument when empty.
std::vector<RunSpec> expand_grid(const SweepSpec& spec);

struct SweepOutcome {
  RunSpec spec;
  std::string out_file;
  bool ok = false;
  std::string error;
};

/// Runs every combination (in parallel up to `jobs`), one CSV per run plus an
/// index.csv describing each run and its status. A failing run is recorded in
/// the index and does not disturb the others.
std::vector<SweepOutcome> sweep_to_dir(const SweepSpec& spec, const std::string& out_dir,
                                       unsigned jobs);

}  // namespace gsb
