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

// Process tensors generated by piecewise-constant system-environment dynamics.
//
// Leg convention: a process with n slots consists of n + 1 constituent
// channels and its Choi matrix carries legs (i_1, o_1, ..., i_{n+1}, o_{n+1}),
// input then output for each channel in causal order. Slot j (1-based) sits
// between o_j and i_{j+1}. Choi matrices are stored with unit trace; the
// natural trace is the product of the input dimensions.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ptmono/channel.hpp"
#include "ptmono/linalg.hpp"

namespace ptmono {

class TimeGrid {
 public:
  TimeGrid() = default;
  explicit TimeGrid(std::vector<double> times);
  /// Labels 1, 2, ..., n.
  static TimeGrid uniform(int n);

  int n() const noexcept { return static_cast<int>(times_.size()); }
  const std::vector<double>& times() const noexcept { return times_; }
  bool contains(double t) const;
  /// 0-based positions of `subset` labels in this grid; throws if not a subset.
  std::vector<int> indices_of(const TimeGrid& subset) const;
  TimeGrid select(const std::vector<int>& indices) const;

  bool operator==(const TimeGrid&) const = default;

 private:
  std::vector<double> times_;
};

class ProcessTensor {
 public:
  ProcessTensor(CMatrix choi, Dims legs, TimeGrid grid);
  static ProcessTensor from_channel(const ChannelChoi& c);

  const CMatrix& choi() const noexcept { return choi_; }
  const Dims& legs() const noexcept { return legs_; }
  const TimeGrid& grid() const noexcept { return grid_; }
  int slots() const noexcept { return grid_.n(); }
  int channels() const noexcept { return grid_.n() + 1; }
  int input_dim(int channel) const { return legs_.at(2 * channel); }
  int output_dim(int channel) const { return legs_.at(2 * channel + 1); }
  /// Trace of the Choi matrix in the natural (unnormalized) convention.
  double natural_trace() const;

  bool is_channel() const noexcept { return slots() == 0; }
  /// Only valid for zero-slot processes.
  ChannelChoi to_channel() const;

 private:
  CMatrix choi_;
  Dims legs_;
  TimeGrid grid_;
};

struct CombReport {
  std::vector<double> level_residuals;  // one per causality level, last channel first
  double min_eigenvalue = 0.0;
  double trace_error = 0.0;
  bool passed = false;

  double max_residual() const;
};

/// Checks the causality hierarchy tr_{o_k} T_k = I/d_{i_k} (x) T_{k-1} for every level and positivity.
CombReport validate_comb(const ProcessTensor& t, double tol = 1e-8);

struct NoiseModel {
  int d_sys = 2;
  int d_env = 2;
  CMatrix initial_se;                  // on sys (x) env; only its environment marginal is used
  std::vector<CMatrix> propagators;    // n + 1 joint unitaries on sys (x) env
  std::optional<CMatrix> hamiltonian;  // set when propagators are exp(-i H tau_k)
  std::vector<double> durations;       // tau_k, empty for explicit unitaries
  std::uint64_t seed = 0;
  std::string label;

  int slots() const noexcept { return static_cast<int>(propagators.size()) - 1; }
  /// Slot times are the cumulative durations; labels 1..n without durations.
  TimeGrid grid() const;
  CMatrix environment_state() const;
};

NoiseModel model_from_hamiltonian(int d_sys, int d_env, const CMatrix& h, std::vector<double> durations,
                                  std::optional<CMatrix> initial_se = std::nullopt);
NoiseModel model_from_unitaries(int d_sys, int d_env, std::vector<CMatrix> propagators,
                                std::optional<CMatrix> initial_se = std::nullopt);
/// Throws InvalidInput if dims, propagator unitarity (1e-10) or the initial state are inconsistent.
void check_model(const NoiseModel& m);

struct DenseLimits {
  Eigen::Index max_choi_dim = 4096;
};

/// Choi state from feeding half of a maximally entangled pair into every channel
/// input and tracing out the environment after the last interval.
ProcessTensor build_process_tensor(const NoiseModel& model, const TimeGrid& grid, const DenseLimits& limits = {});
ProcessTensor build_process_tensor(const NoiseModel& model, const DenseLimits& limits = {});

/// Channel from the first input to the final output with pulses[j] applied at slot j + 1.
/// Streams the joint state; cost does not depend on the dense Choi size.
ChannelChoi simulate_channel(const NoiseModel& model, const std::vector<CMatrix>& pulses);

/// Folds pulses at the non-kept slots into the propagators, leaving a model whose
/// slots are the kept ones. `pulses` is indexed by fine slot; entries at kept slots are ignored.
NoiseModel dress_model(const NoiseModel& model, const std::vector<int>& keep, const std::vector<CMatrix>& pulses);

/// Duration layouts for builtin models: symmetric puts half intervals at both ends
/// (tau/2, tau, ..., tau, tau/2); uniform uses n + 1 intervals of tau.
std::vector<double> symmetric_durations(int n_slots, double tau);
std::vector<double> uniform_durations(int n_slots, double tau);

struct ModelSpec {
  std::string name;  // static_dephasing | random_hamiltonian | swap_coupling
  int n_slots = 2;
  double tau = 0.5;
  std::map<std::string, double> params;
  std::optional<std::vector<double>> durations;
  std::optional<std::string> env_state;  // zero | plus | mixed
  std::optional<std::string> layout;     // symmetric | uniform
  int d_sys = 2;
  std::optional<int> d_env;
  std::uint64_t seed = 0;
};

/// static_dephasing:   H = g sz(x)sz + env_field 1(x)sx, d_env = 2, env |+>, symmetric layout.
/// random_hamiltonian: H = strength * GUE(d_sys d_env) / sqrt(d_sys d_env), env |0>, symmetric layout.
/// swap_coupling:      H = (theta / tau) SWAP, d_env = d_sys, env |0>, uniform layout.
NoiseModel builtin_model(const ModelSpec& spec);

namespace pauli {
CMatrix identity();
CMatrix x();
CMatrix y();
CMatrix z();
}  // namespace pauli

}  // namespace ptmono
