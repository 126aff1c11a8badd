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

/// Unit-trace positive semidefinite operator on a composite space.
///
/// The checked constructor enforces Hermiticity (1e-10 max deviation), unit
/// trace (1e-10) and positivity (minimum eigenvalue >= -1e-10). Internal code
/// that already guarantees these uses `unchecked`.
class DensityMatrix {
 public:
  DensityMatrix(CMatrix matrix, Dims dims);
  static DensityMatrix unchecked(CMatrix matrix, Dims dims);

  const CMatrix& matrix() const noexcept { return matrix_; }
  const Dims& dims() const noexcept { return dims_; }
  Eigen::Index dim() const noexcept { return matrix_.rows(); }
  int subsystems() const noexcept { return static_cast<int>(dims_.size()); }

 private:
  struct NoCheck {};
  DensityMatrix(CMatrix matrix, Dims dims, NoCheck);

  CMatrix matrix_;
  Dims dims_;
};

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep);
DensityMatrix tensor_product(const std::vector<DensityMatrix>& parts);
DensityMatrix permute_subsystems(const DensityMatrix& rho, const std::vector<int>& perm);

/// Projector onto |psi><psi| / <psi|psi> for a single subsystem of dimension psi.size().
DensityMatrix pure_state(const CVector& psi);
DensityMatrix basis_state(int d, int k);

}  // namespace ptmono
