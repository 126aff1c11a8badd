// Copyright 2026 The ptmono Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "ptmono/errors.hpp"
#include "ptmono/experiment.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitCapacity = 4;
constexpr int kExitNotFound = 5;

struct Args {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<int> threads;
  bool paper_scale = false;
  std::string replay;
};

int thread_count(const Args& a) {
  if (a.threads) return std::max(1, *a.threads);
  if (const char* env = std::getenv("PTMONO_THREADS")) {
    try {
      return std::max(1, std::stoi(env));
    } catch (const std::exception&) {
      throw ptmono::ConfigError("PTMONO_THREADS", "expected an integer");
    }
  }
  return 1;
}

int replay(const std::string& path) {
  const ptmono::Json report = ptmono::load_config_file(path);
  const ptmono::SearchViolation v = ptmono::replay_counterexample(report);
  const double stored = report.at("result").at("best").at("delta").at("I").get<double>();
  const double again = v.delta().total_I;
  std::cout << "trial " << v.instance.trial << " seed " << v.instance.trial_seed << ": I "
            << ptmono::format_double(v.before.total_I) << " -> " << ptmono::format_double(v.after.total_I) << " (delta "
            << ptmono::format_double(again) << ")\n";
  if (again != stored) {
    std::cerr << "error: replayed delta " << ptmono::format_double(again) << " differs from stored "
              << ptmono::format_double(stored) << "\n";
    return kExitNumerical;
  }
  std::cout << "reproduced bit-exactly\n";
  return 0;
}

int run(const std::string& command, const Args& a) {
  if (!a.replay.empty()) return replay(a.replay);
  if (a.config.empty()) throw ptmono::ConfigError("--config", "required");
  ptmono::RunOptions opts;
  opts.seed = a.seed;
  opts.threads = thread_count(a);
  opts.paper_scale = a.paper_scale;
  opts.log = &std::cerr;

  ptmono::Json doc = ptmono::load_config_file(a.config);
  const ptmono::ExperimentKind kind = ptmono::parse_experiment_kind(command);
  if (!doc.is_object()) throw ptmono::ConfigError("config", "expected an object");
  if (!doc.contains("kind")) doc["kind"] = ptmono::to_string(kind);
  else if (ptmono::parse_experiment_kind(doc["kind"].get<std::string>()) != kind)
    throw ptmono::ConfigError("kind", "config is for " + doc["kind"].get<std::string>() + ", subcommand is " + command);

  const auto base = std::filesystem::path(a.config).parent_path();
  const ptmono::ExperimentConfig cfg = ptmono::make_experiment_config(doc, opts, base.empty() ? "." : base.string());
  const ptmono::ExperimentOutput out = ptmono::run_experiment(cfg, opts);

  std::cout << out.table.render(cfg.config_hash);
  const std::string prefix = a.out.empty() ? cfg.output : a.out;
  if (!prefix.empty()) {
    ptmono::write_outputs(out, cfg.config_hash, prefix);
    std::cerr << "wrote " << prefix << ".csv and " << prefix << ".json\n";
  }
  if (out.not_found) {
    std::cerr << "no violation found\n";
    return kExitNotFound;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ptmono: multitime process quantifiers and irreversibility monotones"};
  app.require_subcommand(1);
  Args a;
  const char* commands[][2] = {{"quantify", "I, M, N, entropies and comb residuals of a model"},
                               {"sweep-time", "channel mutual information per strategy over total times"},
                               {"delta-sweep", "change of I, M, N under DD and MODD coarse-graining"},
                               {"counterexample", "random search for an increase of I under free operations"},
                               {"divergence", "reachable comb divergence between two models"},
                               {"optimize", "estimate an irreversibility monotone"}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", a.config, "experiment config (JSON, // comments allowed)");
    sub->add_option("--seed", a.seed, "master seed, overrides the config");
    sub->add_option("--out", a.out, "output prefix for <out>.csv and <out>.json");
    sub->add_option("--threads", a.threads, "worker threads (default: PTMONO_THREADS or 1)");
    sub->add_flag("--paper-scale", a.paper_scale, "use 15 slots (3 kept in delta sweeps)");
    if (std::string(name) == "counterexample")
      sub->add_option("--replay", a.replay, "re-run the recipe in a counterexample report and check it");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return run(command, a);
  } catch (const ptmono::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ptmono::InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ptmono::CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << "\n";
    return kExitCapacity;
  } catch (const ptmono::NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const ptmono::OptimizerFailure& e) {
    std::cerr << "optimizer failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}
