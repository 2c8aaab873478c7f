// gsb: budget-aware online kernel classification for streams of graphs.
//
// Subcommands:
//   run    one experiment -> CSV trace
//   sweep  Cartesian parameter grid -> one CSV per run plus index.csv
//   gen    synthetic drift stream -> stream file

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "gsb/run.hpp"

namespace {

struct RunFlags {
  std::string kernel = "fs";
  std::uint32_t h = 2;
  std::uint32_t d = 2;
  double lambda = 1.0;
  bool normalize = false;
  std::string algo = "primal";
  std::string policy = "weight";
  std::string budget = "inf";
  double C = 0.01;
  std::uint64_t seed = 0;
  std::string stream;
  std::string synthetic;
  std::uint32_t eval_every = 50;
  std::uint32_t window = 1000;
  std::string out;
};

void add_run_options(CLI::App& cmd, RunFlags& f) {
  cmd.set_help_flag("--help", "Print help");  // frees -h/--h for the kernel height
  cmd.add_option("--kernel", f.kernel, "Kernel: fs|nspdk|odd")
      ->envname("GSB_KERNEL");
  cmd.add_option("--h", f.h, "Kernel height / iterations")->envname("GSB_H");
  cmd.add_option("--d", f.d, "NSPDK max pair distance")->envname("GSB_D");
  cmd.add_option("--lambda", f.lambda, "ODD subtree weight base")->envname("GSB_LAMBDA");
  cmd.add_flag("--normalize", f.normalize, "Unit-norm feature images")
      ->envname("GSB_NORMALIZE");
  cmd.add_option("--algo", f.algo, "Algorithm: dual|mixed|primal")->envname("GSB_ALGO");
  cmd.add_option("--policy", f.policy,
                 "Eviction policy: random|oldest|tau|weight|oldest-feature|fscore")
      ->envname("GSB_POLICY");
  cmd.add_option("--budget", f.budget, "Memory budget in units, or 'inf'")
      ->envname("GSB_BUDGET");
  cmd.add_option("--C", f.C, "Aggressiveness cap on tau")->envname("GSB_C");
  cmd.add_option("--seed", f.seed, "Run seed")->envname("GSB_SEED");
  cmd.add_option("--stream", f.stream, "Stream file path")->envname("GSB_STREAM");
  cmd.add_option("--synthetic", f.synthetic,
                 "Synthetic stream config (JSON file path or inline JSON)")
      ->envname("GSB_SYNTHETIC");
  cmd.add_option("--eval-every", f.eval_every, "Sampling cadence in examples")
      ->envname("GSB_EVAL_EVERY");
  cmd.add_option("--window", f.window, "Sliding evaluation window")->envname("GSB_WINDOW");
}

gsb::RunSpec to_spec(const RunFlags& f) {
  gsb::RunSpec spec;
  spec.kernel.kind = gsb::kernel_kind_from_name(f.kernel);
  spec.kernel.h = f.h;
  spec.kernel.d = f.d;
  spec.kernel.lambda = f.lambda;
  spec.kernel.normalize = f.normalize;
  spec.algorithm = gsb::algorithm_from_name(f.algo);
  spec.policy = gsb::policy_kind_from_name(f.policy);
  spec.budget = gsb::parse_budget(f.budget);
  spec.C = f.C;
  spec.seed = f.seed;
  spec.stream_path = f.stream;
  spec.synthetic = f.synthetic;
  spec.eval.eval_every = f.eval_every;
  spec.eval.window = f.window;
  spec.out_path = f.out;
  return spec;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Budget-aware online kernel classification for streams of graphs"};
  app.require_subcommand(1);
  // Declarative config: same keys as the flags, grouped in a [run] section.
  // Values given on the command line win over file values.
  app.set_config("--config", "", "Read options from an INI/TOML file");

  RunFlags rf;
  CLI::App* run = app.add_subcommand("run", "Execute one experiment");
  run->fallthrough();  // lets --config appear after the subcommand name
  add_run_options(*run, rf);
  run->add_option("--out", rf.out, "Output CSV path")->envname("GSB_OUT")->required();

  std::string grid_arg, sweep_out_dir;
  unsigned jobs = 1;
  CLI::App* sweep = app.add_subcommand("sweep", "Execute a parameter grid");
  sweep->add_option("--grid", grid_arg, "Grid spec (JSON file path or inline JSON)")
      ->required();
  sweep->add_option("--out-dir", sweep_out_dir, "Directory for per-run CSVs and index.csv")
      ->required();
  sweep->add_option("--jobs", jobs, "Parallel runs");

  std::string gen_cfg, gen_out;
  std::uint64_t gen_seed = 0;
  CLI::App* gen = app.add_subcommand("gen", "Generate a synthetic drift stream");
  gen->add_option("--synthetic", gen_cfg, "Generator config (JSON file path or inline JSON)")
      ->required();
  gen->add_option("--seed", gen_seed, "Fallback seed when the config has none");
  gen->add_option("--out", gen_out, "Stream file path (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      gsb::run_to_file(to_spec(rf));
      return 0;
    }
    if (sweep->parsed()) {
      const auto outcomes =
          gsb::sweep_to_dir(gsb::parse_sweep_json(grid_arg), sweep_out_dir, jobs);
      std::size_t failed = 0;
      for (const auto& o : outcomes) failed += !o.ok;
      std::fprintf(stderr, "sweep: %zu runs, %zu failed\n", outcomes.size(), failed);
      return failed == outcomes.size() ? 1 : 0;
    }
    if (gen->parsed()) {
      const auto stream =
          gsb::generate_drift_stream(gsb::parse_drift_config(gen_cfg, gen_seed));
      if (gen_out.empty()) {
        gsb::write_stream(stream, std::cout);
      } else {
        namespace fs = std::filesystem;
        const fs::path target(gen_out);
        if (target.has_parent_path()) fs::create_directories(target.parent_path());
        const fs::path tmp = target.string() + ".tmp";
        {
          std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
          if (!out) throw std::runtime_error("cannot write: " + tmp.string());
          gsb::write_stream(stream, out);
        }
        fs::rename(tmp, target);
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
