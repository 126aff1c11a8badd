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


#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "ptmono/density.hpp"
#include "ptmono/errors.hpp"
#include "ptmono/monotones.hpp"
#include "ptmono/random.hpp"

using namespace ptmono;

namespace {

ProcessTensor identity_process(int n) {
  std::vector<CMatrix> pairs(n + 1, max_entangled_state(2));
  return ProcessTensor(kron(pairs), Dims(2 * (n + 1), 2), TimeGrid::uniform(n));
}

OptimizerConfig quick(int budget, std::uint64_t seed = 0) {
  OptimizerConfig cfg;
  cfg.budget = budget;
  cfg.seed = seed;
  return cfg;
}

NoiseModel echo_model(int n, double tau) {
  const CMatrix h = kron(pauli::z(), pauli::z());
  const CMatrix plus = CMatrix::Constant(2, 2, 0.5);
  return model_from_hamiltonian(2, 2, h, symmetric_durations(n, tau), kron(basis_state(2, 0).matrix(), plus));
}

NoiseModel random_ham(int n, double tau, std::uint64_t seed) {
  ModelSpec spec;
  spec.name = "random_hamiltonian";
  spec.n_slots = n;
  spec.tau = tau;
  spec.seed = seed;
  return builtin_model(spec);
}

ProcessTensor depolarizing_product(double p) {
  const CMatrix c = depolarizing_channel(2, p).choi;
  return ProcessTensor(kron(c, c), Dims(4, 2), TimeGrid::uniform(1));
}

}  // namespace

TEST_CASE("identity process reaches two bits at the first evaluation") {
  const EstimateResult r = estimate_monotone(identity_process(2), std::vector<int>{}, Quantifier::I, quick(500));
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(r.evaluations_used == 1);
  CHECK(evaluate_comb(identity_process(2), r.best_comb, Quantifier::I) == doctest::Approx(2.0));
}

TEST_CASE("echo process: optimized pulses refocus the dephasing") {
  const ProcessTensor t = build_process_tensor(echo_model(2, 1.0));
  CHECK(quantify(coarse_grain(t, std::vector<int>{})).total_I < 1.9);
  const EstimateResult r = estimate_monotone(t, std::vector<int>{}, Quantifier::I, quick(4000, 1));
  CHECK(r.value > 2.0 - 1e-6);
}

TEST_CASE("best comb reproduces the estimate and obeys I = M + N") {
  Rng rng(21);
  const ProcessTensor t = build_process_tensor(oracle::random_unitary_model(2, 2, rng));
  for (Quantifier q : {Quantifier::I, Quantifier::M, Quantifier::N}) {
    const EstimateResult r = estimate_monotone(t, std::vector<int>{0}, q, quick(300, 4));
    const QuantifierTriple tr = quantify(apply_control_comb(t, r.best_comb));
    CHECK(pick(tr, q) == doctest::Approx(r.value).epsilon(1e-12));
    CHECK(tr.additivity_defect() < 1e-8);
    CHECK(r.best_comb.kept_indices() == std::vector<int>{0});
    CHECK(r.evaluations_used <= 300);
  }
}

TEST_CASE("estimate dominates plain coarse-graining and the unoptimized comb") {
  Rng rng(8);
  const ProcessTensor t = build_process_tensor(oracle::random_unitary_model(2, 3, rng));
  const std::vector<int> keep{1};
  const double plain = quantify(coarse_grain(t, keep)).total_I;
  const EstimateResult r = estimate_monotone(t, keep, Quantifier::I, quick(400, 2));
  CHECK(r.value >= plain - 1e-12);
}

TEST_CASE("channel candidates compete as fixed combs") {
  const ProcessTensor t = identity_process(1);
  const ControlComb depol({depolarizing_channel(2, 1.0)}, t.grid());
  const EstimateResult r = estimate_monotone(t, std::vector<int>{}, Quantifier::I, quick(50), {depol});
  CHECK(r.candidate_index == -1);
  CHECK(r.value == doctest::Approx(2.0));
  const ControlComb wrong = ControlComb::coarse_graining(t.grid(), 2, {0});
  CHECK_THROWS_AS(estimate_monotone(t, std::vector<int>{}, Quantifier::I, quick(50), {wrong}), InvalidInput);
}

TEST_CASE("zero coupling: ODD is perfect at the first evaluation") {
  const CMatrix h = kron(CMatrix::Identity(2, 2), pauli::x()) + 0.3 * kron(pauli::y(), CMatrix::Identity(2, 2));
  const NoiseModel m = model_from_hamiltonian(2, 2, h, symmetric_durations(4, 0.7));
  const EstimateResult r = odd_optimize(m, quick(500));
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(r.evaluations_used == 1);
}

TEST_CASE("ODD is at least as good as XZXZ on a random Hamiltonian") {
  const NoiseModel m = random_ham(4, 1.0, 7);
  const double xzxz = pulse_objective(m, dd_sequence(DDKind::xzxz, 1, 4).unitaries);
  const EstimateResult r = odd_optimize(m, quick(3000, 3));
  CHECK(r.value >= xzxz - 0.02);
  const EstimateResult seeded = odd_optimize(m, quick(3000, 3), {dd_sequence(DDKind::xzxz, 1, 4).unitaries});
  CHECK(seeded.value >= xzxz - 1e-12);
}

TEST_CASE("MODD with schedule [1] is ODD") {
  const NoiseModel m = random_ham(3, 0.8, 2);
  const EstimateResult a = modd_optimize(m, {1}, quick(600, 5));
  const EstimateResult b = odd_optimize(m, quick(600, 5));
  CHECK(a.value == b.value);
  CHECK(a.best_params.values() == b.best_params.values());
}

TEST_CASE("MODD reaches a ten-times-budget estimate within 0.05 bits") {
  const NoiseModel m = random_ham(6, 1.0, 11);
  const EstimateResult modd = modd_optimize(m, default_block_schedule(6), quick(1500, 1));
  const EstimateResult big = odd_optimize(m, quick(15000, 1));
  CHECK(modd.value >= big.value - 0.05);
  CHECK(modd.evaluations_used <= 1500);
  CHECK(modd.value == doctest::Approx(pulse_objective(m, modd.best_params.unitaries())).epsilon(1e-12));
}

TEST_CASE("MODD value matches the dense process for the same pulses") {
  const NoiseModel m = random_ham(3, 0.5, 4);
  const EstimateResult r = modd_optimize(m, {3, 1}, quick(300, 2));
  const ProcessTensor t = build_process_tensor(m);
  CHECK(evaluate_comb(t, r.best_comb, Quantifier::I) == doctest::Approx(r.value).epsilon(1e-9));
}

TEST_CASE("kept-resolution MODD starts from its DD seed and reproduces its value") {
  ModelSpec spec;
  spec.name = "static_dephasing";
  spec.n_slots = 5;
  spec.tau = 3.0;
  spec.params["env_field"] = 0.5;
  const NoiseModel m = builtin_model(spec);
  const std::vector<int> keep{2};
  const auto xz = dd_sequence(DDKind::xzxz, 1, 5).unitaries;
  const ProcessTensor t = build_process_tensor(m);
  const double dd = quantify(apply_control_comb(t, ControlComb::from_pulses(t.grid(), xz, keep))).total_I;
  const EstimateResult r = modd_estimate(m, keep, Quantifier::I, {4, 2, 1}, quick(300, 1), {xz});
  CHECK(r.value >= dd - 1e-12);
  CHECK(r.evaluations_used <= 300);
  CHECK(evaluate_comb(t, r.best_comb, Quantifier::I) == doctest::Approx(r.value).epsilon(1e-9));
  CHECK_THROWS_AS(modd_estimate(m, keep, Quantifier::I, {3, 1}, quick(50)), InvalidInput);
}

TEST_CASE("kept-resolution MODD with nothing kept is channel mutual information") {
  const NoiseModel m = random_ham(3, 0.7, 4);
  const EstimateResult r = modd_estimate(m, {}, Quantifier::I, {3, 1}, quick(200, 2));
  const double mi = channel_mutual_information(simulate_channel(m, r.best_params.unitaries()));
  CHECK(mi == doctest::Approx(r.value).epsilon(1e-9));
  CHECK(r.value <= 2.0 + 1e-9);
}

TEST_CASE("block schedules") {
  CHECK(default_block_schedule(6) == std::vector<int>{6, 3, 1});
  CHECK(default_block_schedule(15) == std::vector<int>{15, 5, 1});
  CHECK(default_block_schedule(8) == std::vector<int>{8, 4, 2, 1});
  CHECK(default_block_schedule(1) == std::vector<int>{1});
  CHECK_NOTHROW(check_block_schedule({6, 2}, 6));
  CHECK_THROWS_AS(check_block_schedule({4, 2, 1}, 6), InvalidInput);
  CHECK_THROWS_AS(check_block_schedule({3, 6}, 6), InvalidInput);
  CHECK_THROWS_AS(check_block_schedule({6, 3, 2}, 6), InvalidInput);
  CHECK_THROWS_AS(check_block_schedule({}, 6), InvalidInput);
  CHECK_THROWS_AS(modd_optimize(random_ham(6, 1.0, 1), {4}, quick(10)), InvalidInput);
}

TEST_CASE("estimates are deterministic for a fixed seed") {
  Rng rng(30);
  const ProcessTensor t = build_process_tensor(oracle::random_unitary_model(2, 2, rng));
  const EstimateResult a = estimate_monotone(t, std::vector<int>{}, Quantifier::I, quick(200, 9));
  const EstimateResult b = estimate_monotone(t, std::vector<int>{}, Quantifier::I, quick(200, 9));
  CHECK(a.value == b.value);
  CHECK(a.best_params.values() == b.best_params.values());
  CHECK(a.trace == b.trace);
}

TEST_CASE("divergence of a process with itself is zero") {
  Rng rng(12);
  const ProcessTensor t = build_process_tensor(oracle::random_unitary_model(2, 1, rng));
  const EstimateResult r = reachable_divergence(t, t, quick(200));
  CHECK(std::abs(r.value) < 1e-9);
  CHECK_FALSE(r.capped);
}

TEST_CASE("depolarizing pair divergence matches a grid brute force") {
  const ProcessTensor t = depolarizing_product(0.0);
  const ProcessTensor r = depolarizing_product(1.0);
  double brute = -1.0;
  const int steps = 8;
  for (int a = 0; a < steps; ++a)
    for (int b = 0; b < steps; ++b)
      for (int c = 0; c < steps; ++c) {
        Eigen::VectorXd th(3);
        th << M_PI * a / steps, M_PI * b / steps, M_PI * c / steps;
        const CMatrix u = unitary_from_params(th, 2);
        // identity then u then identity: the channel is u itself; the reference is fully depolarizing
        const CMatrix choi = oracle::choi_of([&](const CMatrix& x) { return CMatrix(u * x * u.adjoint()); }, 2);
        brute = std::max(brute, 2.0 - oracle::entropy_from_eigenvalues(choi));
      }
  const EstimateResult est = reachable_divergence(t, r, quick(300));
  CHECK(brute == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(est.value == doctest::Approx(brute).epsilon(0.01));
}

TEST_CASE("orthogonal supports are clamped and flagged") {
  bool capped = false;
  const CMatrix a = basis_state(2, 0).matrix();
  const CMatrix b = basis_state(2, 1).matrix();
  CHECK(capped_relative_entropy(a, b, &capped) == kDivergenceCap);
  CHECK(capped);
  CHECK(capped_relative_entropy(a, a, &capped) == doctest::Approx(0.0));
  CHECK_FALSE(capped);
}

TEST_CASE("delta of the identity comb is zero") {
  Rng rng(13);
  const ProcessTensor t = build_process_tensor(oracle::random_unitary_model(2, 3, rng));
  for (const std::vector<int>& keep : {std::vector<int>{}, std::vector<int>{1}, std::vector<int>{0, 2}}) {
    const QuantifierTriple d = delta_quantifiers(t, keep, ControlComb::coarse_graining(t.grid(), 2, keep));
    CHECK(std::abs(d.total_I) < 1e-10);
    CHECK(std::abs(d.markov_M) < 1e-10);
    CHECK(std::abs(d.nonmarkov_N) < 1e-10);
  }
}

TEST_CASE("dressed-model delta matches the dense delta") {
  Rng rng(14);
  const NoiseModel m = oracle::random_unitary_model(2, 3, rng);
  const ProcessTensor t = build_process_tensor(m);
  std::vector<CMatrix> pulses{haar_unitary(2, rng), haar_unitary(2, rng), haar_unitary(2, rng)};
  const std::vector<int> keep{1};
  const QuantifierTriple dense = delta_quantifiers(t, keep, ControlComb::from_pulses(t.grid(), pulses, keep));
  const QuantifierTriple dressed = delta_quantifiers(m, keep, pulses);
  CHECK(dressed.total_I == doctest::Approx(dense.total_I).epsilon(1e-9));
  CHECK(dressed.markov_M == doctest::Approx(dense.markov_M).epsilon(1e-9));
  CHECK(dressed.nonmarkov_N == doctest::Approx(dense.nonmarkov_N).epsilon(1e-9));
  CHECK(std::abs(dressed.total_I - dressed.markov_M - dressed.nonmarkov_N) < 1e-8);
}

TEST_CASE("embedded coarse comb acts like coarse-graining first") {
  Rng rng(15);
  const ProcessTensor t = build_process_tensor(oracle::random_unitary_model(2, 3, rng));
  const std::vector<int> keep{0, 2};
  const ProcessTensor cg = coarse_grain(t, keep);
  const ControlComb coarse = ControlComb::from_pulses(cg.grid(), {haar_unitary(2, rng), haar_unitary(2, rng)});
  const ControlComb fine = embed_comb(coarse, t.grid(), 2);
  const CMatrix direct = apply_control_comb(cg, coarse).choi();
  const CMatrix embedded = apply_control_comb(t, fine).choi();
  CHECK((direct - embedded).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("induced comb of a product comb recovers the factor on T") {
  Rng rng(16);
  const ProcessTensor t = build_process_tensor(oracle::random_unitary_model(2, 2, rng));
  const ProcessTensor f = free_process(t.grid(), {DensityMatrix(random_density(2, rng), {2}), DensityMatrix(random_density(2, rng), {2}),
                                                              DensityMatrix(random_density(2, rng), {2})});
  const ControlComb a = ControlComb::from_pulses(t.grid(), {haar_unitary(2, rng), haar_unitary(2, rng)});
  const ControlComb b = ControlComb::from_pulses(t.grid(), {haar_unitary(2, rng), haar_unitary(2, rng)});
  const ControlComb joint = product_comb(a, b);
  std::vector<CMatrix> outs;
  for (int j = 1; j <= 2; ++j) outs.push_back(oracle::partial_trace(f.choi(), f.legs(), {2 * j - 1}));
  const ControlComb induced = induced_comb(joint, 2, outs);
  const double on_t = evaluate_comb(t, induced, Quantifier::I);
  CHECK(on_t == doctest::Approx(evaluate_comb(t, a, Quantifier::I)).epsilon(1e-9));
  CHECK(evaluate_comb(parallel_compose(t, f), joint, Quantifier::I) == doctest::Approx(on_t).epsilon(1e-9));
}

TEST_CASE("search with zero trials is empty") {
  SearchConfig cfg;
  cfg.trials = 0;
  const CounterexampleReport r = search_I_nonmonotonicity(cfg);
  CHECK(r.trials_run == 0);
  CHECK_FALSE(r.found());
  CHECK(r.violations_I + r.violations_M + r.violations_N == 0);
}

TEST_CASE("identity dynamics never shows an increase of I") {
  SearchConfig cfg;
  cfg.seed = 4;
  for (int trial = 0; trial < 40; ++trial) {
    SearchInstance inst = sample_instance(cfg, trial);
    for (auto& u : inst.model.propagators) u = CMatrix::Identity(4, 4);
    const SearchViolation v = evaluate_instance(inst);
    CHECK(v.delta().total_I <= 1e-3);
  }
}

TEST_CASE("sampled instances are reproducible from the trial index") {
  SearchConfig cfg;
  cfg.seed = 17;
  const SearchInstance a = sample_instance(cfg, 5);
  const SearchInstance b = sample_instance(cfg, 5);
  CHECK(a.trial_seed == b.trial_seed);
  CHECK(a.keep == b.keep);
  for (std::size_t k = 0; k < a.model.propagators.size(); ++k) CHECK(a.model.propagators[k] == b.model.propagators[k]);
  const SearchViolation va = evaluate_instance(a);
  const SearchViolation vb = evaluate_instance(b);
  CHECK(va.after.total_I == vb.after.total_I);
  CHECK(va.before.total_I == vb.before.total_I);
}

TEST_CASE("resetting an input raises I when the environment can compute AND") {
  // basis index s * 4 + e1 * 2 + e2; step 1 copies s into e1, step 2 writes
  // e1 AND s into e2 and swaps it out, so o_2 = a AND i_2 with a = i_1.
  auto idx = [](int s, int e1, int e2) { return s * 4 + e1 * 2 + e2; };
  CMatrix copy = CMatrix::Zero(8, 8), andgate = CMatrix::Zero(8, 8);
  for (int s = 0; s < 2; ++s)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        copy(idx(s, a ^ s, b), idx(s, a, b)) = 1.0;
        andgate(idx(b ^ (a & s), a, s), idx(s, a, b)) = 1.0;
      }
  CMatrix se = CMatrix::Zero(8, 8);
  se(0, 0) = 1.0;
  const ProcessTensor t = build_process_tensor(model_from_unitaries(2, 4, {copy, andgate}, se));
  // classical legs: i1, o1 = i1, i2, o2 = i1 AND i2; total correlation = 3 + h(1/4) - 2
  CHECK(quantify(t).total_I == doctest::Approx(1.0 + oracle::binary_entropy(0.25)).epsilon(1e-9));
  const IqiSlot reset{identity_channel(2), replacement_channel(2, basis_state(2, 1).matrix()), 1};
  // after the reset o2 = i1 and i2 is idle: 4 - 2
  CHECK(quantify(apply_iqi_superprocess(t, {reset})).total_I == doctest::Approx(2.0).epsilon(1e-9));
}
