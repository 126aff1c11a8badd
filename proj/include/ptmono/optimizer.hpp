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
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ptmono {

enum class OptimizerMethod { nelder_mead, fd_gradient_ascent };

OptimizerMethod parse_optimizer_method(const std::string& name);
std::string to_string(OptimizerMethod m);

struct OptimizerConfig {
  int budget = 2000;  // objective evaluations, all restarts and seed checks included
  int restarts = 4;
  std::uint64_t seed = 0;
  OptimizerMethod method = OptimizerMethod::nelder_mead;
  double initial_step = 0.6;  // simplex edge, or first line-search step
  double shrink = 0.5;        // line-search backtracking factor
  double tolerance = 1e-9;    // stop a restart once it improves by less than this (bits)
  double start_spread = 3.14159265358979323846;  // random starts are uniform in [-spread, spread]
};

/// Throws ConfigError unless budget >= restarts >= 1 and the step parameters are positive.
void validate(const OptimizerConfig& cfg);

using ObjectiveFn = std::function<double(const Eigen::VectorXd&)>;

struct MaximizeResult {
  Eigen::VectorXd x;
  double value = 0.0;
  std::vector<double> trace;  // best value at the end of each restart
  int evaluations = 0;
};

/// Multi-restart maximization. Every point in `starts` is evaluated first; restart 0
/// begins at the best of them (or at the origin when none are given) and restart r > 0
/// at a uniform random point drawn from derive_seed(cfg.seed, r). The result is the
/// best point ever evaluated. Stops early once `ceiling` is reached within 1e-12.
/// Non-finite objective values count against the budget but never become the incumbent.
MaximizeResult maximize(const ObjectiveFn& f, int dim, const OptimizerConfig& cfg,
                        const std::vector<Eigen::VectorXd>& starts = {}, std::optional<double> ceiling = std::nullopt);

}  // namespace ptmono
