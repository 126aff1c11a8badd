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
#include "ptmono/errors.hpp"
#include "ptmono/optimizer.hpp"
#include "ptmono/random.hpp"
#include "ptmono/unitary_params.hpp"

using namespace ptmono;

TEST_CASE("qubit generators are the Pauli matrices") {
  const auto& g = generator_basis(2);
  REQUIRE(g.size() == 3);
  CHECK((g[0] - pauli::x()).norm() < 1e-14);
  CHECK((g[1] - pauli::y()).norm() < 1e-14);
  CHECK((g[2] - pauli::z()).norm() < 1e-14);
}

TEST_CASE("generator basis is traceless, Hermitian and orthogonal") {
  for (int d : {2, 3, 4}) {
    const auto& g = generator_basis(d);
    REQUIRE(static_cast<int>(g.size()) == d * d - 1);
    for (std::size_t a = 0; a < g.size(); ++a) {
      CHECK(std::abs(g[a].trace()) < 1e-14);
      CHECK((g[a] - g[a].adjoint()).norm() < 1e-14);
      for (std::size_t b = 0; b < g.size(); ++b)
        CHECK(std::abs((g[a] * g[b]).trace() - (a == b ? 2.0 : 0.0)) < 1e-12);
    }
  }
}

TEST_CASE("parametrized matrices are unitary and zero gives the identity") {
  Rng rng(3);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (int d : {2, 3}) {
    CHECK((unitary_from_params(Eigen::VectorXd::Zero(d * d - 1), d) - CMatrix::Identity(d, d)).norm() < 1e-14);
    for (int k = 0; k < 20; ++k) {
      Eigen::VectorXd th(d * d - 1);
      for (auto& v : th) v = u(rng);
      const CMatrix m = unitary_from_params(th, d);
      CHECK((m.adjoint() * m - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("X pulse is exp(-i pi/2 X) up to phase") {
  Eigen::VectorXd th = Eigen::VectorXd::Zero(3);
  th(0) = M_PI / 2;
  CHECK(oracle::equal_up_to_phase(unitary_from_params(th, 2), pauli::x(), 1e-12));
}

TEST_CASE("params_from_unitary inverts unitary_from_params up to phase") {
  Rng rng(11);
  for (int d : {2, 3}) {
    for (int k = 0; k < 20; ++k) {
      const CMatrix v = haar_unitary(d, rng);
      CHECK(oracle::equal_up_to_phase(unitary_from_params(params_from_unitary(v), d), v, 1e-9));
    }
  }
  CHECK(oracle::equal_up_to_phase(unitary_from_params(params_from_unitary(pauli::z()), 2), pauli::z(), 1e-9));
}

TEST_CASE("UnitaryParams round trips per-slot unitaries") {
  Rng rng(5);
  std::vector<CMatrix> us{haar_unitary(2, rng), pauli::x(), CMatrix::Identity(2, 2)};
  const UnitaryParams p = UnitaryParams::from_unitaries(us);
  REQUIRE(p.slots() == 3);
  CHECK(p.values().size() == 9);
  for (int j = 0; j < 3; ++j) CHECK(oracle::equal_up_to_phase(p.unitary(j), us[j], 1e-9));
  CHECK(p.slot(2).norm() < 1e-12);
  CHECK_THROWS_AS(UnitaryParams(2, 2, Eigen::VectorXd::Zero(5)), InvalidInput);
}

namespace {

double bowl(const Eigen::VectorXd& x) {
  double s = 0.0;
  for (Eigen::Index k = 0; k < x.size(); ++k) s -= (x(k) - 0.1 * (k + 1)) * (x(k) - 0.1 * (k + 1));
  return 1.0 + s;
}

}  // namespace

TEST_CASE("both methods find the top of a concave bowl") {
  for (auto method : {OptimizerMethod::nelder_mead, OptimizerMethod::fd_gradient_ascent}) {
    OptimizerConfig cfg;
    cfg.method = method;
    cfg.budget = 4000;
    cfg.restarts = 2;
    const MaximizeResult r = maximize(bowl, 4, cfg);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(r.evaluations <= cfg.budget);
    CHECK(r.trace.size() <= 2);
    CHECK(bowl(r.x) == r.value);
  }
}

TEST_CASE("budget is a hard limit on evaluations") {
  int calls = 0;
  OptimizerConfig cfg;
  cfg.budget = 37;
  cfg.restarts = 3;
  const MaximizeResult r = maximize([&](const Eigen::VectorXd& x) { ++calls; return bowl(x); }, 6, cfg);
  CHECK(calls <= 37);
  CHECK(r.evaluations == calls);
}

TEST_CASE("ceiling stops the search at the first evaluation that reaches it") {
  int calls = 0;
  OptimizerConfig cfg;
  const MaximizeResult r =
      maximize([&](const Eigen::VectorXd&) { ++calls; return 2.0; }, 3, cfg, {}, 2.0);
  CHECK(calls == 1);
  CHECK(r.value == 2.0);
}

TEST_CASE("supplied starts are used before random restarts") {
  Eigen::VectorXd start(2);
  start << 0.1, 0.2;
  OptimizerConfig cfg;
  cfg.budget = 1;
  cfg.restarts = 1;
  const MaximizeResult r = maximize(bowl, 2, cfg, {start});
  CHECK(r.value == doctest::Approx(1.0));
}

TEST_CASE("optimizer is deterministic for a fixed seed") {
  OptimizerConfig cfg;
  cfg.seed = 99;
  cfg.budget = 500;
  auto noisy = [](const Eigen::VectorXd& x) { return std::cos(3 * x(0)) * std::sin(2 * x(1)) - 0.01 * x.squaredNorm(); };
  const MaximizeResult a = maximize(noisy, 2, cfg);
  const MaximizeResult b = maximize(noisy, 2, cfg);
  CHECK(a.value == b.value);
  CHECK(a.x == b.x);
  CHECK(a.trace == b.trace);
}

TEST_CASE("objective that is never finite is an optimizer failure") {
  OptimizerConfig cfg;
  cfg.budget = 20;
  CHECK_THROWS_AS(maximize([](const Eigen::VectorXd&) { return std::nan(""); }, 2, cfg), OptimizerFailure);
}

TEST_CASE("invalid optimizer settings are config errors") {
  OptimizerConfig cfg;
  cfg.budget = 0;
  CHECK_THROWS_AS(validate(cfg), ConfigError);
  cfg = {};
  cfg.restarts = 0;
  CHECK_THROWS_AS(validate(cfg), ConfigError);
  cfg = {};
  cfg.shrink = 1.5;
  CHECK_THROWS_AS(validate(cfg), ConfigError);
  CHECK_THROWS_AS(parse_optimizer_method("simplex"), ConfigError);
  CHECK(parse_optimizer_method("nelder_mead") == OptimizerMethod::nelder_mead);
  CHECK(parse_optimizer_method(to_string(OptimizerMethod::fd_gradient_ascent)) == OptimizerMethod::fd_gradient_ascent);
}
