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

#include "ptmono/process.hpp"

#include <cmath>
#include <numbers>

#include "ptmono/random.hpp"

namespace ptmono {

namespace pauli {
CMatrix identity() { return CMatrix::Identity(2, 2); }
CMatrix x() {
  CMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
CMatrix y() {
  CMatrix m(2, 2);
  m << 0, cd(0, -1), cd(0, 1), 0;
  return m;
}
CMatrix z() {
  CMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}
}  // namespace pauli

// ---------------------------------------------------------------------------
// TimeGrid

TimeGrid::TimeGrid(std::vector<double> times) : times_(std::move(times)) {
  for (std::size_t k = 1; k < times_.size(); ++k)
    if (!(times_[k] > times_[k - 1])) throw InvalidInput("TimeGrid: times must be strictly increasing");
}

TimeGrid TimeGrid::uniform(int n) {
  if (n < 0) throw InvalidInput("TimeGrid: negative slot count");
  std::vector<double> t(n);
  for (int k = 0; k < n; ++k) t[k] = k + 1.0;
  return TimeGrid(std::move(t));
}

bool TimeGrid::contains(double t) const { return std::binary_search(times_.begin(), times_.end(), t); }

std::vector<int> TimeGrid::indices_of(const TimeGrid& subset) const {
  std::vector<int> out;
  for (double t : subset.times()) {
    auto it = std::lower_bound(times_.begin(), times_.end(), t);
    if (it == times_.end() || *it != t) throw InvalidInput("TimeGrid: time label not in grid");
    out.push_back(static_cast<int>(it - times_.begin()));
  }
  return out;
}

TimeGrid TimeGrid::select(const std::vector<int>& indices) const {
  std::vector<double> t;
  for (int k : indices) t.push_back(times_.at(k));
  return TimeGrid(std::move(t));
}

// ---------------------------------------------------------------------------
// ProcessTensor

ProcessTensor::ProcessTensor(CMatrix choi, Dims legs, TimeGrid grid)
    : choi_(std::move(choi)), legs_(std::move(legs)), grid_(std::move(grid)) {
  if (legs_.size() != 2 * static_cast<std::size_t>(grid_.n() + 1))
    throw InvalidInput("ProcessTensor: leg count must be 2(n+1)");
  require_square(choi_.rows(), choi_.cols(), "ProcessTensor");
  require_dims(choi_.rows(), legs_, "ProcessTensor");
}

ProcessTensor ProcessTensor::from_channel(const ChannelChoi& c) {
  return ProcessTensor(c.choi, c.dims(), TimeGrid{});
}

double ProcessTensor::natural_trace() const {
  double p = 1.0;
  for (int j = 0; j < channels(); ++j) p *= input_dim(j);
  return p;
}

ChannelChoi ProcessTensor::to_channel() const {
  if (!is_channel()) throw InvalidInput("ProcessTensor: process still has open slots");
  return {choi_, legs_[0], legs_[1]};
}

double CombReport::max_residual() const {
  double m = 0.0;
  for (double r : level_residuals) m = std::max(m, r);
  return m;
}

CombReport validate_comb(const ProcessTensor& t, double tol) {
  CombReport report;
  report.trace_error = std::abs(t.choi().trace() - cd(1.0));
  report.min_eigenvalue = eigh(hermitian_part(t.choi()), 1e-6).values.minCoeff();

  CMatrix level = t.choi();
  Dims dims = t.legs();
  for (int k = t.channels(); k >= 1; --k) {
    const int n_legs = 2 * k;
    std::vector<int> all_but_out(n_legs - 1);
    std::iota(all_but_out.begin(), all_but_out.end(), 0);
    const CMatrix traced_out = partial_trace(level, dims, all_but_out);
    std::vector<int> earlier(n_legs - 2);
    std::iota(earlier.begin(), earlier.end(), 0);
    CMatrix previous = n_legs > 2 ? CMatrix(partial_trace(level, dims, earlier)) : CMatrix::Ones(1, 1);
    const CMatrix expected = kron(previous, maximally_mixed(dims[n_legs - 2]));
    report.level_residuals.push_back(max_abs_deviation(traced_out, expected));
    level = std::move(previous);
    dims.resize(n_legs - 2);
  }
  report.passed = report.trace_error < tol && report.min_eigenvalue > -tol && report.max_residual() < tol;
  return report;
}

// ---------------------------------------------------------------------------
// NoiseModel

TimeGrid NoiseModel::grid() const {
  const int n = slots();
  if (durations.empty()) return TimeGrid::uniform(n);
  std::vector<double> t;
  double acc = 0.0;
  for (int k = 0; k < n; ++k) {
    acc += durations[k];
    t.push_back(acc);
  }
  return TimeGrid(std::move(t));
}

CMatrix NoiseModel::environment_state() const { return partial_trace(initial_se, Dims{d_sys, d_env}, {1}); }

namespace {

CMatrix default_initial_se(int d_sys, int d_env) {
  CMatrix rho = CMatrix::Zero(static_cast<Eigen::Index>(d_sys) * d_env, static_cast<Eigen::Index>(d_sys) * d_env);
  rho(0, 0) = 1.0;
  return rho;
}

}  // namespace

void check_model(const NoiseModel& m) {
  if (m.d_sys < 1 || m.d_env < 1) throw InvalidInput("NoiseModel: dimensions must be positive");
  const Eigen::Index de = static_cast<Eigen::Index>(m.d_sys) * m.d_env;
  if (m.propagators.empty()) throw InvalidInput("NoiseModel: needs at least one propagator");
  for (const CMatrix& u : m.propagators) {
    if (u.rows() != de || u.cols() != de) throw InvalidInput("NoiseModel: propagator has wrong shape");
    if (max_abs_deviation(u * u.adjoint(), CMatrix::Identity(de, de)) > 1e-10)
      throw InvalidInput("NoiseModel: propagator is not unitary");
  }
  if (m.initial_se.rows() != de || m.initial_se.cols() != de)
    throw InvalidInput("NoiseModel: initial state has wrong shape");
  if (hermiticity_defect(m.initial_se) > 1e-10 || std::abs(m.initial_se.trace() - cd(1.0)) > 1e-10 ||
      eigh(m.initial_se).values.minCoeff() < -1e-10)
    throw InvalidInput("NoiseModel: initial state is not a density matrix");
  if (!m.durations.empty() && m.durations.size() != m.propagators.size())
    throw InvalidInput("NoiseModel: one duration per propagator required");
}

NoiseModel model_from_hamiltonian(int d_sys, int d_env, const CMatrix& h, std::vector<double> durations,
                                  std::optional<CMatrix> initial_se) {
  if (durations.empty()) throw InvalidInput("NoiseModel: needs at least one duration");
  NoiseModel m;
  m.d_sys = d_sys;
  m.d_env = d_env;
  m.initial_se = initial_se ? *initial_se : default_initial_se(d_sys, d_env);
  m.hamiltonian = h;
  if (h.rows() != static_cast<Eigen::Index>(d_sys) * d_env) throw InvalidInput("NoiseModel: Hamiltonian has wrong shape");
  const Eigensystem es = eigh(h);
  for (double tau : durations) {
    if (!(tau >= 0.0)) throw InvalidInput("NoiseModel: durations must be non-negative");
    const CVector phases = (es.values.cast<cd>() * cd(0.0, -tau)).array().exp().matrix();
    m.propagators.push_back(es.vectors * phases.asDiagonal() * es.vectors.adjoint());
  }
  m.durations = std::move(durations);
  check_model(m);
  return m;
}

NoiseModel model_from_unitaries(int d_sys, int d_env, std::vector<CMatrix> propagators,
                                std::optional<CMatrix> initial_se) {
  NoiseModel m;
  m.d_sys = d_sys;
  m.d_env = d_env;
  m.initial_se = initial_se ? *initial_se : default_initial_se(d_sys, d_env);
  m.propagators = std::move(propagators);
  check_model(m);
  return m;
}

// ---------------------------------------------------------------------------
// Pure-state simulation
//
// The joint state is kept as a vector over (prefix, S, E, R), where the
// prefix collects the Choi legs produced so far and R purifies the initial
// environment state.

namespace {

struct Purified {
  CVector env;  // over (E, R)
  int r = 1;
};

Purified purify_environment(const NoiseModel& m) {
  const Eigensystem es = eigh(hermitian_part(m.environment_state()), 1e-8);
  std::vector<int> support;
  const double top = es.values.maxCoeff();
  for (Eigen::Index k = 0; k < es.values.size(); ++k)
    if (es.values(k) > 1e-14 * std::max(top, 1.0)) support.push_back(static_cast<int>(k));
  Purified p;
  p.r = static_cast<int>(support.size());
  p.env = CVector::Zero(static_cast<Eigen::Index>(m.d_env) * p.r);
  for (int a = 0; a < p.r; ++a) {
    const double w = std::sqrt(es.values(support[a]));
    for (int e = 0; e < m.d_env; ++e) p.env(e * p.r + a) = w * es.vectors(e, support[a]);
  }
  return p;
}

using RowMajorMap = Eigen::Map<Eigen::Matrix<cd, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

/// Applies `op` to the (S, E) factor of a vector laid out as (prefix, S, E, R).
void apply_joint(CVector& psi, const CMatrix& op, Eigen::Index block_rows, int r) {
  const Eigen::Index block = block_rows * r;
  const Eigen::Index prefixes = psi.size() / block;
  for (Eigen::Index p = 0; p < prefixes; ++p) {
    RowMajorMap view(psi.data() + p * block, block_rows, r);
    view = (op * view).eval();
  }
}

/// Appends a fresh input leg entangled with a fresh system: (prefix, E, R) -> (prefix, i, S, E, R).
CVector feed_entangled_input(const CVector& psi, int d, Eigen::Index er) {
  const Eigen::Index prefixes = psi.size() / er;
  CVector out = CVector::Zero(psi.size() * d * d);
  const double amp = 1.0 / std::sqrt(static_cast<double>(d));
  for (Eigen::Index p = 0; p < prefixes; ++p)
    for (int k = 0; k < d; ++k) out.segment(((p * d + k) * d + k) * er, er) = amp * psi.segment(p * er, er);
  return out;
}

CMatrix choi_from_vector(const CVector& psi, Eigen::Index er) {
  const Eigen::Index legs = psi.size() / er;
  Eigen::Map<const Eigen::Matrix<cd, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> view(psi.data(), legs, er);
  CMatrix choi = view * view.adjoint();
  return hermitian_part(choi);
}

}  // namespace

ProcessTensor build_process_tensor(const NoiseModel& model, const TimeGrid& grid, const DenseLimits& limits) {
  check_model(model);
  if (grid.n() != model.slots()) throw InvalidInput("build_process_tensor: grid does not match propagator count");
  const int d = model.d_sys;
  const int channels = grid.n() + 1;
  Eigen::Index choi_dim = 1;
  for (int j = 0; j < channels; ++j) {
    choi_dim *= static_cast<Eigen::Index>(d) * d;
    if (choi_dim > limits.max_choi_dim)
      throw CapacityError("build_process_tensor: dense Choi matrix would exceed " +
                          std::to_string(limits.max_choi_dim) + " rows");
  }

  const Purified env = purify_environment(model);
  const Eigen::Index er = static_cast<Eigen::Index>(model.d_env) * env.r;
  CVector psi = env.env;
  for (int j = 0; j < channels; ++j) {
    psi = feed_entangled_input(psi, d, er);
    apply_joint(psi, model.propagators[j], static_cast<Eigen::Index>(d) * model.d_env, env.r);
  }
  return ProcessTensor(choi_from_vector(psi, er), Dims(2 * channels, d), grid);
}

ProcessTensor build_process_tensor(const NoiseModel& model, const DenseLimits& limits) {
  return build_process_tensor(model, model.grid(), limits);
}

ChannelChoi simulate_channel(const NoiseModel& model, const std::vector<CMatrix>& pulses) {
  check_model(model);
  if (static_cast<int>(pulses.size()) != model.slots())
    throw InvalidInput("simulate_channel: need exactly one pulse per slot");
  const int d = model.d_sys;
  const Purified env = purify_environment(model);
  const Eigen::Index er = static_cast<Eigen::Index>(model.d_env) * env.r;
  const CMatrix env_identity = CMatrix::Identity(model.d_env, model.d_env);

  CVector psi = feed_entangled_input(env.env, d, er);
  apply_joint(psi, model.propagators[0], static_cast<Eigen::Index>(d) * model.d_env, env.r);
  for (std::size_t k = 0; k < pulses.size(); ++k) {
    if (pulses[k].rows() != d || pulses[k].cols() != d) throw InvalidInput("simulate_channel: pulse has wrong shape");
    apply_joint(psi, kron(pulses[k], env_identity), static_cast<Eigen::Index>(d) * model.d_env, env.r);
    apply_joint(psi, model.propagators[k + 1], static_cast<Eigen::Index>(d) * model.d_env, env.r);
  }
  return {choi_from_vector(psi, er), d, d};
}

NoiseModel dress_model(const NoiseModel& model, const std::vector<int>& keep, const std::vector<CMatrix>& pulses) {
  const int n = model.slots();
  if (static_cast<int>(pulses.size()) != n) throw InvalidInput("dress_model: need one pulse entry per fine slot");
  std::vector<bool> kept(n, false);
  for (int k : keep) {
    if (k < 0 || k >= n) throw InvalidInput("dress_model: kept slot out of range");
    kept[k] = true;
  }
  const Eigen::Index de = static_cast<Eigen::Index>(model.d_sys) * model.d_env;
  const CMatrix env_identity = CMatrix::Identity(model.d_env, model.d_env);

  NoiseModel out;
  out.d_sys = model.d_sys;
  out.d_env = model.d_env;
  out.initial_se = model.initial_se;
  out.seed = model.seed;
  out.label = model.label;
  CMatrix acc = CMatrix::Identity(de, de);
  double elapsed = 0.0;
  for (int k = 0; k <= n; ++k) {
    acc = model.propagators[k] * acc;
    if (!model.durations.empty()) elapsed += model.durations[k];
    if (k == n || kept[k]) {
      out.propagators.push_back(acc);
      if (!model.durations.empty()) out.durations.push_back(elapsed);
      acc = CMatrix::Identity(de, de);
      elapsed = 0.0;
    } else {
      acc = kron(pulses[k], env_identity) * acc;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Builtin models

std::vector<double> symmetric_durations(int n_slots, double tau) {
  if (n_slots < 0 || !(tau > 0.0)) throw InvalidInput("durations: need n >= 0 and tau > 0");
  if (n_slots == 0) return {tau};
  std::vector<double> d(n_slots + 1, tau);
  d.front() = tau / 2.0;
  d.back() = tau / 2.0;
  return d;
}

std::vector<double> uniform_durations(int n_slots, double tau) {
  if (n_slots < 0 || !(tau > 0.0)) throw InvalidInput("durations: need n >= 0 and tau > 0");
  return std::vector<double>(n_slots + 1, tau);
}

namespace {

double param(const ModelSpec& spec, const std::string& key, double fallback) {
  auto it = spec.params.find(key);
  return it == spec.params.end() ? fallback : it->second;
}

CMatrix env_state(const std::string& kind, int d_env) {
  if (kind == "zero") {
    CMatrix rho = CMatrix::Zero(d_env, d_env);
    rho(0, 0) = 1.0;
    return rho;
  }
  if (kind == "plus") {
    return CMatrix::Constant(d_env, d_env, cd(1.0 / d_env, 0.0));
  }
  if (kind == "mixed") return maximally_mixed(d_env);
  throw InvalidInput("builtin_model: unknown env_state '" + kind + "'");
}

CMatrix swap_operator(int d) {
  const Eigen::Index n = static_cast<Eigen::Index>(d) * d;
  CMatrix s = CMatrix::Zero(n, n);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) s(b * d + a, a * d + b) = 1.0;
  return s;
}

}  // namespace

NoiseModel builtin_model(const ModelSpec& spec) {
  if (spec.n_slots < 0) throw InvalidInput("builtin_model: negative slot count");
  CMatrix h;
  int d_sys = spec.d_sys;
  int d_env = 2;
  std::string env_kind = "zero";
  std::string layout = "symmetric";

  if (spec.name == "static_dephasing") {
    if (d_sys != 2) throw InvalidInput("static_dephasing: qubit system only");
    if (spec.d_env && *spec.d_env != 2) throw InvalidInput("static_dephasing: d_env must be 2");
    const double g = param(spec, "g", 1.0);
    const double field = param(spec, "env_field", 0.0);
    h = g * kron(pauli::z(), pauli::z()) + field * kron(pauli::identity(), pauli::x());
    env_kind = "plus";
  } else if (spec.name == "random_hamiltonian") {
    d_env = spec.d_env.value_or(2);
    if (d_sys < 1 || d_env < 1) throw InvalidInput("random_hamiltonian: dimensions must be positive");
    Rng rng(derive_seed(spec.seed, 0));
    const double strength = param(spec, "strength", 1.0);
    h = random_hermitian(d_sys * d_env, rng, strength / std::sqrt(static_cast<double>(d_sys * d_env)));
  } else if (spec.name == "swap_coupling") {
    d_env = spec.d_env.value_or(d_sys);
    if (d_env != d_sys) throw InvalidInput("swap_coupling: d_env must equal d_sys");
    const double theta = param(spec, "theta", std::numbers::pi / 2.0);
    h = (theta / spec.tau) * swap_operator(d_sys);
    layout = "uniform";
  } else {
    throw InvalidInput("builtin_model: unknown model '" + spec.name + "'");
  }

  if (spec.env_state) env_kind = *spec.env_state;
  if (spec.layout) layout = *spec.layout;
  std::vector<double> durations;
  if (spec.durations) {
    durations = *spec.durations;
    if (static_cast<int>(durations.size()) != spec.n_slots + 1)
      throw InvalidInput("builtin_model: need n_slots + 1 durations");
  } else if (layout == "symmetric") {
    durations = symmetric_durations(spec.n_slots, spec.tau);
  } else if (layout == "uniform") {
    durations = uniform_durations(spec.n_slots, spec.tau);
  } else {
    throw InvalidInput("builtin_model: unknown layout '" + layout + "'");
  }

  CMatrix sys0 = CMatrix::Zero(d_sys, d_sys);
  sys0(0, 0) = 1.0;
  NoiseModel m = model_from_hamiltonian(d_sys, d_env, h, std::move(durations), kron(sys0, env_state(env_kind, d_env)));
  m.seed = spec.seed;
  m.label = spec.name;
  return m;
}

}  // namespace ptmono
