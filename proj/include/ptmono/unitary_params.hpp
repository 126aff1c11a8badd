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

#include <vector>

#include "ptmono/linalg.hpp"

namespace ptmono {

/// Generalized Gell-Mann basis of traceless Hermitian d x d matrices,
/// normalized tr(G_a G_b) = 2 delta_ab. For d = 2 this is (X, Y, Z).
const std::vector<CMatrix>& generator_basis(int d);

/// exp(-i sum_a theta[a] G_a).
CMatrix unitary_from_params(const Eigen::Ref<const Eigen::VectorXd>& theta, int d);

/// Parameters of a unitary up to global phase (principal logarithm).
Eigen::VectorXd params_from_unitary(const CMatrix& u);

/// Per-slot parameter vectors, stored back to back.
class UnitaryParams {
 public:
  UnitaryParams() = default;
  UnitaryParams(int d, int slots);
  UnitaryParams(int d, int slots, Eigen::VectorXd values);
  static UnitaryParams from_unitaries(const std::vector<CMatrix>& us);

  static int per_slot(int d) { return d * d - 1; }
  int d() const noexcept { return d_; }
  int slots() const noexcept { return slots_; }
  const Eigen::VectorXd& values() const noexcept { return values_; }
  Eigen::VectorXd slot(int j) const { return values_.segment(j * per_slot(d_), per_slot(d_)); }
  CMatrix unitary(int j) const { return unitary_from_params(slot(j), d_); }
  std::vector<CMatrix> unitaries() const;

 private:
  int d_ = 2;
  int slots_ = 0;
  Eigen::VectorXd values_;
};

}  // namespace ptmono
