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
#include "ptmono/entropy.hpp"
#include "ptmono/errors.hpp"
#include "ptmono/random.hpp"

using namespace ptmono;

TEST_CASE("von Neumann entropy examples") {
  Rng rng(2);
  CVector psi = CVector::Random(3);
  CHECK(von_neumann_entropy(pure_state(psi)) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(von_neumann_entropy(maximally_mixed(5)) == doctest::Approx(std::log2(5.0)));

  CMatrix d = CMatrix::Zero(2, 2);
  d(0, 0) = 0.25;
  d(1, 1) = 0.75;
  CHECK(std::abs(von_neumann_entropy(d) - 0.8113) < 1e-4);
  CHECK(std::abs(von_neumann_entropy(d) - oracle::binary_entropy(0.25)) < 1e-12);
}

TEST_CASE("von Neumann entropy is additive and bounded") {
  Rng rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const CMatrix a = random_density(2, rng);
    const CMatrix b = random_density(4, rng);
    const double sa = von_neumann_entropy(a);
    const double sb = von_neumann_entropy(b);
    CHECK(std::abs(von_neumann_entropy(CMatrix(kron(a, b))) - sa - sb) < 1e-9);
    CHECK(sb >= 0.0);
    CHECK(sb <= 2.0 + 1e-12);
    CHECK(std::abs(sb - oracle::entropy_from_eigenvalues(b)) < 1e-9);
  }
}

TEST_CASE("von Neumann entropy rejects negative spectra") {
  CMatrix neg = CMatrix::Zero(2, 2);
  neg(0, 0) = 1.1;
  neg(1, 1) = -0.1;
  CHECK_THROWS_AS(von_neumann_entropy(neg), InvalidInput);
  CMatrix skew = maximally_mixed(2);
  skew(0, 1) = 1e-6;
  CHECK_THROWS_AS(von_neumann_entropy(skew), InvalidInput);
}

TEST_CASE("relative entropy examples") {
  Rng rng(6);
  const CMatrix rho = random_density(3, rng);
  CHECK(std::abs(relative_entropy(rho, rho)) < 1e-10);

  const CMatrix zero = basis_state(2, 0).matrix();
  const CMatrix one = basis_state(2, 1).matrix();
  CHECK(relative_entropy(zero, maximally_mixed(2)) == doctest::Approx(1.0));
  CHECK(std::isinf(relative_entropy(zero, one)));

  CHECK_THROWS_AS(relative_entropy(rho, maximally_mixed(2)), InvalidInput);
}

TEST_CASE("relative entropy against a closed form for commuting states") {
  CMatrix x = CMatrix::Zero(2, 2), y = CMatrix::Zero(2, 2);
  x(0, 0) = 0.3;
  x(1, 1) = 0.7;
  y(0, 0) = 0.6;
  y(1, 1) = 0.4;
  const double expected = 0.3 * std::log2(0.3 / 0.6) + 0.7 * std::log2(0.7 / 0.4);
  CHECK(std::abs(relative_entropy(x, y) - expected) < 1e-12);
}

TEST_CASE("relative entropy is nonnegative and jointly convex") {
  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + trial % 7;
    const CMatrix x1 = random_density(d, rng), x2 = random_density(d, rng);
    const CMatrix y1 = random_density(d, rng), y2 = random_density(d, rng);
    const double p = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const double lhs = relative_entropy(CMatrix(p * x1 + (1 - p) * x2), CMatrix(p * y1 + (1 - p) * y2));
    const double rhs = p * relative_entropy(x1, y1) + (1 - p) * relative_entropy(x2, y2);
    CHECK(lhs >= -1e-12);
    CHECK(lhs <= rhs + 1e-9);
  }
}

TEST_CASE("mutual information of a Bell pair and a product state") {
  CHECK(mutual_information(max_entangled_state(2), 2, 2) == doctest::Approx(2.0));
  Rng rng(10);
  const CMatrix prod = kron(random_density(2, rng), random_density(3, rng));
  CHECK(std::abs(mutual_information(prod, 2, 3)) < 1e-9);
}
