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

// Numerical lower bounds on the irreversibility monotones, reachable comb
// divergences, (multitimescale) optimal dynamical decoupling, and a random
// search for non-monotonicity of the raw quantifiers.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ptmono/interventions.hpp"
#include "ptmono/optimizer.hpp"
#include "ptmono/quantifiers.hpp"
#include "ptmono/unitary_params.hpp"

namespace ptmono {

enum class Quantifier { I, M, N };

Quantifier parse_quantifier(const std::string& name);
std::string to_string(Quantifier q);
double pick(const QuantifierTriple& t, Quantifier q);

struct EstimateResult {
  double value = 0.0;           // lower bound on the supremum, in bits
  UnitaryParams best_params;    // one entry per fine slot; kept slots stay at zero
  ControlComb best_comb;        // re-evaluating this comb reproduces `value`
  std::vector<double> trace;    // best value reached in each restart (per stage for MODD)
  int evaluations_used = 0;
  std::uint64_t seed = 0;
  int candidate_index = -1;     // >= 0 when a supplied candidate comb won
  bool capped = false;          // an infinite divergence was clamped
};

/// Unitary inserts from `params` at every slot not in `keep`, Open at `keep`.
ControlComb unitary_comb(const TimeGrid& grid, const UnitaryParams& params, const std::vector<int>& keep);

double evaluate_comb(const ProcessTensor& t, const ControlComb& comb, Quantifier q);

/// Maximizes quantifier q of [[T | comb]] over per-slot unitaries at the plugged
/// slots. `candidates` (Open exactly at `keep`) are evaluated as well: unitary-only
/// ones also seed the optimizer, others compete as fixed combs.
EstimateResult estimate_monotone(const ProcessTensor& t, const std::vector<int>& keep, Quantifier q,
                                 const OptimizerConfig& cfg, const std::vector<ControlComb>& candidates = {});
EstimateResult estimate_monotone(const ProcessTensor& t, const TimeGrid& keep, Quantifier q,
                                 const OptimizerConfig& cfg, const std::vector<ControlComb>& candidates = {});

// ---------------------------------------------------------------------------
// Optimal dynamical decoupling on the streaming path

/// Throws InvalidInput unless every size divides n and each divides the one before.
void check_block_schedule(const std::vector<int>& schedule, int n);
/// n, then repeatedly the largest proper divisor, down to 1 (6 -> [6, 3, 1]).
std::vector<int> default_block_schedule(int n);

/// Coarse-to-fine: one shared unitary per block of consecutive slots at each level,
/// each level starting from the incumbent, with a per-slot level appended if the
/// schedule does not end at 1. Objective is the channel mutual information of
/// simulate_channel. `seeds` are per-slot pulse lists evaluated up front.
EstimateResult modd_optimize(const NoiseModel& model, const std::vector<int>& block_schedule,
                             const OptimizerConfig& cfg, const std::vector<std::vector<CMatrix>>& seeds = {});
/// MODD adapted to a kept resolution: maximizes quantifier q of the process
/// coarse-grained to `keep`, with the block hierarchy over the plugged slots
/// (the schedule must divide their count). Evaluated through dressed models.
EstimateResult modd_estimate(const NoiseModel& model, const std::vector<int>& keep, Quantifier q,
                             const std::vector<int>& block_schedule, const OptimizerConfig& cfg,
                             const std::vector<std::vector<CMatrix>>& seeds = {}, const DenseLimits& limits = {});
/// Single-level schedule [1]: all slot unitaries optimized jointly.
EstimateResult odd_optimize(const NoiseModel& model, const OptimizerConfig& cfg,
                            const std::vector<std::vector<CMatrix>>& seeds = {});

/// Channel mutual information of the model with the given pulses.
double pulse_objective(const NoiseModel& model, const std::vector<CMatrix>& pulses);

// ---------------------------------------------------------------------------
// Reachable comb divergence

inline constexpr double kDivergenceCap = 60.0;

/// S(a || b) in bits, clamped to kDivergenceCap; `capped` reports the clamp.
double capped_relative_entropy(const CMatrix& a, const CMatrix& b, bool* capped = nullptr);

/// sup over Markovian combs with an insert at every slot of S([[T|S]] || [[R|S]]).
EstimateResult reachable_divergence(const ProcessTensor& t, const ProcessTensor& r, const OptimizerConfig& cfg,
                                    const std::vector<ControlComb>& candidates = {});

// ---------------------------------------------------------------------------
// Candidate transfer between related problems

/// Places a comb on a subgrid into the fine grid, with identity channels at the other slots.
ControlComb embed_comb(const ControlComb& coarse, const TimeGrid& fine, int d);
/// Slotwise tensor product of combs on the same grid (Open only where both are open).
ControlComb product_comb(const ControlComb& a, const ControlComb& b);
/// Comb on T induced by a comb S on T (x) F, where F is a free process emitting
/// `free_outputs[j]` at slot j: E_j(rho) = tr_F[S_j(rho (x) free_outputs[j])].
ControlComb induced_comb(const ControlComb& joint, int d_t, const std::vector<CMatrix>& free_outputs);

// ---------------------------------------------------------------------------
// Quantifier deltas

/// triple([[T | comb]]) - triple(coarse_grain(T, keep)); comb must be Open exactly at `keep`.
QuantifierTriple delta_quantifiers(const ProcessTensor& t, const std::vector<int>& keep, const ControlComb& comb);
/// Same quantity built through dressed models, so only the kept slots are ever dense.
QuantifierTriple delta_quantifiers(const NoiseModel& model, const std::vector<int>& keep,
                                   const std::vector<CMatrix>& pulses, const DenseLimits& limits = {});

// ---------------------------------------------------------------------------
// Non-monotonicity search

struct SearchConfig {
  int d_sys = 2;
  int d_env = 2;
  int n = 2;
  int trials = 10000;
  std::uint64_t seed = 0;
  double threshold = 1e-3;
  int max_ancilla = 2;
};

/// Everything needed to rebuild one trial without the search loop.
struct SearchInstance {
  int trial = 0;
  std::uint64_t trial_seed = 0;
  NoiseModel model;
  std::vector<int> keep;
  std::vector<IqiSlot> instruments;  // applied at every slot first
  ControlComb inserts;               // then these, Open exactly at keep
};

struct SearchViolation {
  SearchInstance instance;
  QuantifierTriple before;
  QuantifierTriple after;
  QuantifierTriple delta() const { return after - before; }
};

struct CounterexampleReport {
  int trials_run = 0;
  int violations_I = 0;
  int violations_M = 0;
  int violations_N = 0;
  std::optional<SearchViolation> best;  // largest increase of I
  bool found() const { return best.has_value(); }
};

SearchInstance sample_instance(const SearchConfig& cfg, int trial);
SearchViolation evaluate_instance(const SearchInstance& inst);
CounterexampleReport search_I_nonmonotonicity(const SearchConfig& cfg);

}  // namespace ptmono
