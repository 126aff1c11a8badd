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

#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "ptmono/density.hpp"
#include "ptmono/errors.hpp"
#include "ptmono/linalg.hpp"
#include "ptmono/random.hpp"

using namespace ptmono;

TEST_CASE("eigh on known spectra") {
  auto id = eigh(CMatrix::Identity(2, 2));
  CHECK(id.values(0) == doctest::Approx(1.0));
  CHECK(id.values(1) == doctest::Approx(1.0));

  auto z = eigh(pauli::z());
  CHECK(z.values(0) == doctest::Approx(-1.0));
  CHECK(z.values(1) == doctest::Approx(1.0));
}

TEST_CASE("eigh reconstructs random Hermitian matrices") {
  Rng rng(11);
  for (int d : {8, 32, 256}) {
    const CMatrix h = random_hermitian(d, rng);
    const Eigensystem es = eigh(h);
    const CMatrix back = es.vectors * es.values.cast<cd>().asDiagonal() * es.vectors.adjoint();
    CHECK(max_abs_deviation(back, h) < 1e-9);
    for (Eigen::Index k = 1; k < es.values.size(); ++k) CHECK(es.values(k - 1) <= es.values(k));
  }
}

TEST_CASE("eigh rejects bad input") {
  CHECK_THROWS_AS(eigh(CMatrix::Zero(2, 3)), InvalidInput);
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 1) = 1.0;
  CHECK_THROWS_AS(eigh(m), InvalidInput);
}

TEST_CASE("partial trace examples") {
  const DensityMatrix phi(max_entangled_state(2), {2, 2});
  CHECK(max_abs_deviation(partial_trace(phi, {0}).matrix(), maximally_mixed(2)) < 1e-14);
  CHECK(max_abs_deviation(partial_trace(phi, {0, 1}).matrix(), phi.matrix()) == 0.0);

  Rng rng(3);
  const DensityMatrix a(random_density(2, rng), {2});
  const DensityMatrix b(random_density(3, rng), {3});
  const DensityMatrix ab = tensor_product({a, b});
  const DensityMatrix rb = partial_trace(ab, {1});
  CHECK(rb.dims() == Dims{3});
  CHECK(max_abs_deviation(rb.matrix(), b.matrix()) < 1e-14);

  CHECK_THROWS_AS(partial_trace(ab, {2}), InvalidInput);
  CHECK_THROWS_AS(partial_trace(ab, {-1}), InvalidInput);
}

TEST_CASE("partial trace matches the digit-loop reference and preserves trace") {
  Rng rng(5);
  const Dims dims{2, 3, 2};
  const CMatrix m = random_density(12, rng);
  for (std::vector<int> keep : {std::vector<int>{0}, {1}, {2}, {0, 2}, {1, 2}, {}}) {
    const CMatrix ours = partial_trace(m, dims, keep);
    CHECK(max_abs_deviation(ours, oracle::partial_trace(m, dims, keep)) < 1e-14);
    CHECK(std::abs(ours.trace().real() - 1.0) < 1e-12);
  }
  // linearity
  const CMatrix n = random_density(12, rng);
  const CMatrix lhs = partial_trace(CMatrix(0.3 * m + 0.7 * n), dims, {1});
  const CMatrix rhs = 0.3 * partial_trace(m, dims, {1}) + 0.7 * partial_trace(n, dims, {1});
  CHECK(max_abs_deviation(lhs, rhs) < 1e-14);
}

TEST_CASE("tensor product examples") {
  const DensityMatrix mixed(maximally_mixed(2), {2});
  const DensityMatrix both = tensor_product({mixed, mixed});
  CHECK(both.dims() == Dims{2, 2});
  CHECK(max_abs_deviation(both.matrix(), maximally_mixed(4)) < 1e-15);

  CHECK(max_abs_deviation(tensor_product({mixed}).matrix(), mixed.matrix()) == 0.0);

  const DensityMatrix p = tensor_product({basis_state(2, 0), basis_state(2, 1)});
  CMatrix expected = CMatrix::Zero(4, 4);
  expected(1, 1) = 1.0;
  CHECK(max_abs_deviation(p.matrix(), expected) == 0.0);

  CHECK_THROWS_AS(tensor_product({}), InvalidInput);
}

TEST_CASE("subsystem permutation") {
  Rng rng(9);
  const DensityMatrix a(random_density(2, rng), {2});
  const DensityMatrix b(random_density(3, rng), {3});
  const DensityMatrix ab = tensor_product({a, b});
  CHECK(max_abs_deviation(permute_subsystems(ab, {0, 1}).matrix(), ab.matrix()) == 0.0);
  const DensityMatrix ba = permute_subsystems(ab, {1, 0});
  CHECK(ba.dims() == Dims{3, 2});
  CHECK(max_abs_deviation(ba.matrix(), tensor_product({b, a}).matrix()) < 1e-15);

  const DensityMatrix r(random_density(8, rng), {2, 2, 2});
  const std::vector<int> perm{2, 0, 1};
  const DensityMatrix there = permute_subsystems(r, perm);
  const DensityMatrix back = permute_subsystems(there, inverse_permutation(perm));
  CHECK(max_abs_deviation(back.matrix(), r.matrix()) == 0.0);

  CHECK_THROWS_AS(permute_subsystems(r, {0, 0, 1}), InvalidInput);
  CHECK_THROWS_AS(permute_subsystems(r, {0, 1}), InvalidInput);
}

TEST_CASE("Hermitian exponential") {
  CHECK(max_abs_deviation(matrix_exp_hermitian(CMatrix::Zero(3, 3), cd(0, -1)), CMatrix::Identity(3, 3)) < 1e-15);

  const CMatrix rot = matrix_exp_hermitian(pauli::x(), cd(0, -std::numbers::pi / 2));
  CHECK(max_abs_deviation(rot, CMatrix(cd(0, -1) * pauli::x())) < 1e-10);

  Rng rng(1);
  const CMatrix u = matrix_exp_hermitian(random_hermitian(6, rng), cd(0, -0.3));
  CHECK(max_abs_deviation(CMatrix(u * u.adjoint()), CMatrix::Identity(6, 6)) < 1e-10);

  CMatrix bad = CMatrix::Zero(2, 2);
  bad(0, 1) = 1.0;
  CHECK_THROWS_AS(matrix_exp_hermitian(bad, cd(0, -1)), InvalidInput);
}

TEST_CASE("maximally entangled state") {
  const CMatrix phi = max_entangled_state(2);
  for (int r : {0, 3})
    for (int c : {0, 3}) CHECK(phi(r, c).real() == doctest::Approx(0.5));
  CHECK(std::abs(phi.sum() - cd(2.0)) < 1e-15);
  CHECK(max_abs_deviation(partial_trace(phi, {2, 2}, {0}), maximally_mixed(2)) < 1e-15);
  CHECK(max_abs_deviation(partial_trace(phi, {2, 2}, {1}), maximally_mixed(2)) < 1e-15);
  CHECK(std::abs((phi * phi).trace() - cd(1.0)) < 1e-15);
  CHECK_THROWS_AS(max_entangled_state(0), InvalidInput);
}

TEST_CASE("density matrix validation") {
  CMatrix m = CMatrix::Identity(2, 2);
  CHECK_THROWS_AS(DensityMatrix(m, {2}), InvalidInput);  // trace 2
  CHECK_THROWS_AS(DensityMatrix(maximally_mixed(4), {2, 3}), InvalidInput);
  CMatrix neg = CMatrix::Zero(2, 2);
  neg(0, 0) = 1.5;
  neg(1, 1) = -0.5;
  CHECK_THROWS_AS(DensityMatrix(neg, {2}), InvalidInput);
}
