#include "gsb/run.hpp"

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace gsb {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_opt(const std::optional<double>& v) {
  return v ? fmt_double(*v) : std::string();
}

}  // namespace

LearnerConfig RunSpec::learner_config() const {
  LearnerConfig cfg;
  cfg.algorithm = algorithm;
  cfg.policy = PolicyConfig{policy, seed};
  cfg.budget = budget;
  cfg.C = C;
  cfg.kernel = kernel;
  return cfg;
}

void RunSpec::validate() const {
  learner_config().validate();
  eval.validate();
  if (stream_path.empty() == synthetic.empty())
    throw std::invalid_argument("exactly one of stream path / synthetic config is required");
}

std::optional<std::uint64_t> parse_budget(const std::string& text) {
  if (text == "inf") return std::nullopt;
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos)
    throw std::invalid_argument("budget must be a positive integer or 'inf'");
  std::uint64_t value = 0;
  try {
    value = std::stoull(text);
  } catch (const std::exception&) {
    throw std::invalid_argument("budget must be a positive integer or 'inf'");
  }
  if (value < 1) throw std::invalid_argument("budget must be a positive integer or 'inf'");
  return value;
}

std::string budget_to_string(const std::optional<std::uint64_t>& budget) {
  return budget ? std::to_string(*budget) : "inf";
}

std::vector<LabeledExample> resolve_stream(const RunSpec& spec) {
  if (!spec.stream_path.empty()) return load_stream_file(spec.stream_path);
  return generate_drift_stream(parse_drift_config(spec.synthetic, spec.seed));
}

RunResult execute(const RunSpec& spec) {
  spec.validate();
  const auto stream = resolve_stream(spec);
  const auto learner = make_learner(spec.learner_config());
  return run_prequential(stream, *learner, spec.eval);
}

std::string render_csv(const RunResult& result) {
  std::ostringstream out;
  out << "t,auroc,balanced_accuracy,cumulative_errors,model_size,elapsed_ns,kind\n";
  for (const EvalRecord& r : result.records) {
    out << r.t << ',' << fmt_opt(r.auroc_window) << ','
        << fmt_opt(r.balanced_accuracy_window) << ',' << r.cumulative_errors << ','
        << r.model_size << ',' << r.elapsed_ns << ",record\n";
  }
  const RunSummary& s = result.summary;
  out << (s.examples == 0 ? 0 : static_cast<std::int64_t>(s.examples) - 1) << ','
      << fmt_opt(s.mean_auroc) << ',' << fmt_opt(s.mean_balanced_accuracy) << ','
      << s.total_errors << ',' << s.final_model_size << ',' << s.total_elapsed_ns
      << ",summary\n";
  return out.str();
}

void run_to_file(const RunSpec& spec) {
  if (spec.out_path.empty()) throw std::invalid_argument("output path is required");
  const RunResult result = execute(spec);
  const std::string csv = render_csv(result);

  namespace fs = std::filesystem;
  const fs::path target(spec.out_path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write: " + tmp.string());
    out << csv;
  }
  fs::rename(tmp, target);
}

std::vector<std::uint32_t> default_h_grid(KernelKind kind) {
  switch (kind) {
    case KernelKind::FS: return {0, 1, 2, 3, 4, 5, 6, 7, 8};
    case KernelKind::NSPDK:
    case KernelKind::ODD: return {1, 2, 3, 4};
  }
  return {};
}

std::vector<std::uint32_t> default_d_grid() { return {1, 2, 3, 4, 5, 6}; }

std::vector<double> default_lambda_grid() { return {0.8, 1.0, 1.2, 1.4, 1.6, 1.8}; }

std::vector<double> default_c_grid() { return {0.01, 0.1, 1.0}; }

std::vector<std::optional<std::uint64_t>> default_budget_grid() {
  return {std::uint64_t(10000), std::uint64_t(50000)};
}

std::vector<PolicyKind> default_policies(Algorithm algo) {
  if (algo == Algorithm::Primal)
    return {PolicyKind::Weight, PolicyKind::OldestFeature, PolicyKind::FScore};
  return {PolicyKind::Oldest, PolicyKind::Tau};
}

SweepSpec parse_sweep_json(const std::string& path_or_json) {
  nlohmann::json js;
  if (!path_or_json.empty() && path_or_json[0] == '{') {
    js = nlohmann::json::parse(path_or_json);
  } else {
    std::ifstream in(path_or_json);
    if (!in) throw std::runtime_error("cannot open grid file: " + path_or_json);
    js = nlohmann::json::parse(in);
  }

  SweepSpec spec;
  // A key that is present but empty would make the whole product empty;
  // that is a usage error rather than a silent fallback to the defaults.
  const auto list = [&js](const char* key) -> const nlohmann::json* {
    if (!js.contains(key)) return nullptr;
    const auto& v = js[key];
    if (!v.is_array() || v.empty())
      throw std::invalid_argument(std::string("grid list '") + key +
                                  "' must be a non-empty array");
    return &v;
  };
  if (const auto* v = list("kernel"))
    for (const auto& k : *v) spec.kernels.push_back(kernel_kind_from_name(k));
  if (const auto* v = list("h"))
    for (const auto& x : *v) spec.h_values.push_back(x.get<std::uint32_t>());
  if (const auto* v = list("d"))
    for (const auto& x : *v) spec.nspdk_d.push_back(x.get<std::uint32_t>());
  if (const auto* v = list("lambda"))
    for (const auto& x : *v) spec.odd_lambda.push_back(x.get<double>());
  if (const auto* v = list("algo"))
    for (const auto& x : *v) spec.algorithms.push_back(algorithm_from_name(x));
  if (const auto* v = list("policy"))
    for (const auto& x : *v) spec.policies.push_back(policy_kind_from_name(x));
  if (const auto* v = list("budget")) {
    for (const auto& x : *v) {
      if (x.is_string()) {
        spec.budgets.push_back(parse_budget(x.get<std::string>()));
      } else {
        spec.budgets.push_back(x.get<std::uint64_t>());
      }
    }
  }
  if (const auto* v = list("C"))
    for (const auto& x : *v) spec.c_values.push_back(x.get<double>());
  spec.normalize = js.value("normalize", false);
  spec.seed = js.value("seed", std::uint64_t(0));
  spec.stream_path = js.value("stream", std::string());
  if (js.contains("synthetic"))
    spec.synthetic = js["synthetic"].is_string() ? js["synthetic"].get<std::string>()
                                                 : js["synthetic"].dump();
  spec.eval.eval_every = js.value("eval_every", std::uint32_t(50));
  spec.eval.window = js.value("window", std::uint32_t(1000));
  // NSPDK reuses "h" when its own list is absent; the shared list is capped
  // to the NSPDK grid elsewhere by validation warnings only.
  spec.nspdk_h = spec.h_values;
  spec.odd_h = spec.h_values;
  return spec;
}

std::vector<RunSpec> expand_grid(const SweepSpec& spec) {
  auto kernels = spec.kernels;
  if (kernels.empty())
    kernels = {KernelKind::FS, KernelKind::NSPDK, KernelKind::ODD};
  auto algorithms = spec.algorithms;
  if (algorithms.empty())
    algorithms = {Algorithm::Primal, Algorithm::Mixed, Algorithm::Dual};
  auto budgets = spec.budgets;
  if (budgets.empty()) budgets = default_budget_grid();
  auto c_values = spec.c_values;
  if (c_values.empty()) c_values = default_c_grid();

  std::vector<RunSpec> runs;
  for (const KernelKind kind : kernels) {
    std::vector<KernelConfig> kernel_cfgs;
    const auto h_grid = [&](const std::vector<std::uint32_t>& own) {
      if (!own.empty()) return own;
      return default_h_grid(kind);
    };
    switch (kind) {
      case KernelKind::FS:
        for (const std::uint32_t h : h_grid(spec.h_values))
          kernel_cfgs.push_back({kind, h, 0, 1.0, spec.normalize});
        break;
      case KernelKind::NSPDK: {
        auto ds = spec.nspdk_d.empty() ? default_d_grid() : spec.nspdk_d;
        for (const std::uint32_t d : ds)
          for (const std::uint32_t h : h_grid(spec.nspdk_h))
            kernel_cfgs.push_back({kind, h, d, 1.0, spec.normalize});
        break;
      }
      case KernelKind::ODD: {
        auto lambdas = spec.odd_lambda.empty() ? default_lambda_grid() : spec.odd_lambda;
        for (const double lambda : lambdas)
          for (const std::uint32_t h : h_grid(spec.odd_h))
            kernel_cfgs.push_back({kind, h, 0, lambda, spec.normalize});
        break;
      }
    }
    for (const KernelConfig& kcfg : kernel_cfgs) {
      for (const Algorithm algo : algorithms) {
        const auto policies =
            spec.policies.empty() ? default_policies(algo) : spec.policies;
        for (const PolicyKind policy : policies) {
          for (const auto& budget : budgets) {
            for (const double c : c_values) {
              RunSpec run;
              run.kernel = kcfg;
              run.algorithm = algo;
              run.policy = policy;
              run.budget = budget;
              run.C = c;
              run.seed = spec.seed;
              run.stream_path = spec.stream_path;
              run.synthetic = spec.synthetic;
              run.eval = spec.eval;
              runs.push_back(std::move(run));
            }
          }
        }
      }
    }
  }
  if (runs.empty()) throw std::invalid_argument("empty parameter grid");
  return runs;
}

namespace {

std::string run_file_name(const RunSpec& spec, std::size_t index) {
  std::ostringstream name;
  name << "run" << index << '_' << kernel_kind_name(spec.kernel.kind);
  name << "_h" << spec.kernel.h;
  if (spec.kernel.kind == KernelKind::NSPDK) name << "_d" << spec.kernel.d;
  if (spec.kernel.kind == KernelKind::ODD) name << "_l" << spec.kernel.lambda;
  name << '_' << algorithm_name(spec.algorithm) << '_'
       << policy_kind_name(spec.policy) << "_b" << budget_to_string(spec.budget)
       << "_C" << spec.C << ".csv";
  return name.str();
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::vector<SweepOutcome> sweep_to_dir(const SweepSpec& spec, const std::string& out_dir,
                                       unsigned jobs) {
  namespace fs = std::filesystem;
  const auto runs = expand_grid(spec);
  fs::create_directories(out_dir);

  std::vector<SweepOutcome> outcomes(runs.size());
  for (std::size_t k = 0; k < runs.size(); ++k) {
    outcomes[k].spec = runs[k];
    outcomes[k].spec.out_path =
        (fs::path(out_dir) / run_file_name(runs[k], k)).string();
    outcomes[k].out_file = outcomes[k].spec.out_path;
  }

  std::atomic<std::size_t> next{0};
  const auto worker = [&]() {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= outcomes.size()) return;
      try {
        run_to_file(outcomes[k].spec);
        outcomes[k].ok = true;
      } catch (const std::exception& e) {
        outcomes[k].ok = false;
        outcomes[k].error = e.what();
      }
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::ostringstream index;
  index << "run,kernel,h,d,lambda,normalize,algo,policy,budget,C,seed,status,detail,file\n";
  for (std::size_t k = 0; k < outcomes.size(); ++k) {
    const RunSpec& r = outcomes[k].spec;
    index << k << ',' << kernel_kind_name(r.kernel.kind) << ',' << r.kernel.h << ','
          << (r.kernel.kind == KernelKind::NSPDK ? std::to_string(r.kernel.d) : std::string())
          << ','
          << (r.kernel.kind == KernelKind::ODD ? fmt_double(r.kernel.lambda) : std::string())
          << ',' << (r.kernel.normalize ? 1 : 0) << ',' << algorithm_name(r.algorithm) << ','
          << policy_kind_name(r.policy) << ',' << budget_to_string(r.budget) << ','
          << fmt_double(r.C) << ',' << r.seed << ','
          << (outcomes[k].ok ? "ok" : "error") << ',' << csv_escape(outcomes[k].error)
          << ',' << csv_escape(outcomes[k].out_file) << '\n';
  }
  const fs::path index_path = fs::path(out_dir) / "index.csv";
  const fs::path tmp = index_path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << index.str();
  }
  fs::rename(tmp, index_path);
  return outcomes;
}

}  // namespace gsb
