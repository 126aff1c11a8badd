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


#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ptmono/serialize.hpp"

namespace ptmono {

enum class ExperimentKind { quantify, optimize, sweep_time, delta_sweep, counterexample_search, divergence };

/// Accepts the config spelling (sweep_time) and the subcommand spelling (sweep-time, counterexample).
ExperimentKind parse_experiment_kind(const std::string& name);
std::string to_string(ExperimentKind k);

inline constexpr int kDeskMaxSlots = 6;
inline constexpr int kPaperSlots = 15;
inline constexpr int kPaperKept = 3;

/// Either a builtin spec (completed by the grid section) or an explicit model document.
struct ModelSource {
  std::optional<ModelSpec> builtin;
  std::optional<NoiseModel> model;
};

struct OptimizeSection {
  Quantifier quantifier = Quantifier::I;
  std::vector<int> keep;
  std::string algorithm = "modd";  // modd | odd | estimate
  std::optional<std::vector<int>> schedule;
};

struct SweepSection {
  std::vector<double> times{1.0, 2.0, 4.0, 8.0, 16.0};
  int cdd_level = 2;
  std::optional<std::vector<int>> schedule;
  int keep_count = 2;                     // delta sweep only
  std::optional<std::vector<int>> keep;   // delta sweep only, overrides keep_count
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::quantify;
  std::uint64_t seed = 0;
  std::string output;
  ModelSource model;
  ModelSource reference;  // divergence only
  OptimizerConfig optimizer;
  OptimizeSection optimize;
  SweepSection sweep;
  SearchConfig search;
  Json document;          // effective document after overrides
  std::string config_hash;
};

struct RunOptions {
  std::optional<std::uint64_t> seed;
  int threads = 1;
  bool paper_scale = false;
  std::ostream* log = nullptr;  // warnings and progress
};

/// Parses JSON text (// comments allowed). Syntax errors name line and column.
Json parse_config_text(const std::string& text);
Json load_config_file(const std::string& path);

/// Applies flag overrides, validates the schema and resolves model files relative to `base_dir`.
ExperimentConfig make_experiment_config(Json doc, const RunOptions& opts, const std::string& base_dir = ".");

/// FNV-1a of the document dumped with sorted keys.
std::string config_hash(const Json& doc);

/// Kept slots (0-based) for m of n slots: labels round(k (n+1) / (m+1)), k = 1..m.
std::vector<int> default_keep(int n, int m);

/// Model at total evolution time T: durations rescaled proportionally. Needs a Hamiltonian.
NoiseModel at_total_time(const NoiseModel& m, double total);

NoiseModel resolve_model(const ModelSource& src);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  /// "# config-hash: <hash>", header, then rows.
  std::string render(const std::string& hash) const;
};

std::string format_double(double v);

struct ExperimentOutput {
  Table table;
  Json document;
  bool not_found = false;  // counterexample search without a violation
};

ExperimentOutput run_experiment(const ExperimentConfig& cfg, const RunOptions& opts);

/// Writes <prefix>.csv and <prefix>.json.
void write_outputs(const ExperimentOutput& out, const std::string& config_hash, const std::string& prefix);

/// Rebuilds the best violation of a counterexample document from its recipe (config, seed, trial).
SearchViolation replay_counterexample(const Json& document);

}  // namespace ptmono
