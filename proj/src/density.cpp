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

#include "ptmono/density.hpp"

#include <utility>

namespace ptmono {

namespace {
constexpr double kStateTol = 1e-10;
}

DensityMatrix::DensityMatrix(CMatrix matrix, Dims dims) : matrix_(std::move(matrix)), dims_(std::move(dims)) {
  require_square(matrix_.rows(), matrix_.cols(), "DensityMatrix");
  require_dims(matrix_.rows(), dims_, "DensityMatrix");
  if (hermiticity_defect(matrix_) > kStateTol) throw InvalidInput("DensityMatrix: not Hermitian");
  if (std::abs(matrix_.trace() - cd(1.0)) > kStateTol) throw InvalidInput("DensityMatrix: trace is not 1");
  if (eigh(matrix_).values.minCoeff() < -kStateTol) throw InvalidInput("DensityMatrix: not positive semidefinite");
}

DensityMatrix::DensityMatrix(CMatrix matrix, Dims dims, NoCheck)
    : matrix_(std::move(matrix)), dims_(std::move(dims)) {}

DensityMatrix DensityMatrix::unchecked(CMatrix matrix, Dims dims) {
  require_dims(matrix.rows(), dims, "DensityMatrix");
  return DensityMatrix(std::move(matrix), std::move(dims), NoCheck{});
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep) {
  std::vector<int> sorted = keep;
  std::sort(sorted.begin(), sorted.end());
  CMatrix reduced = partial_trace(rho.matrix(), rho.dims(), sorted);
  Dims kept;
  for (int k : sorted) kept.push_back(rho.dims()[k]);
  if (kept.empty()) kept.push_back(1);
  return DensityMatrix::unchecked(std::move(reduced), std::move(kept));
}

DensityMatrix tensor_product(const std::vector<DensityMatrix>& parts) {
  if (parts.empty()) throw InvalidInput("tensor_product: empty factor list");
  CMatrix out = parts.front().matrix();
  Dims dims = parts.front().dims();
  for (std::size_t k = 1; k < parts.size(); ++k) {
    out = kron(out, parts[k].matrix());
    dims.insert(dims.end(), parts[k].dims().begin(), parts[k].dims().end());
  }
  return DensityMatrix::unchecked(std::move(out), std::move(dims));
}

DensityMatrix permute_subsystems(const DensityMatrix& rho, const std::vector<int>& perm) {
  CMatrix out = permute_subsystems(rho.matrix(), rho.dims(), perm);
  return DensityMatrix::unchecked(std::move(out), permuted_dims(rho.dims(), perm));
}

DensityMatrix pure_state(const CVector& psi) {
  const double norm2 = psi.squaredNorm();
  if (psi.size() == 0 || norm2 == 0.0) throw InvalidInput("pure_state: zero vector");
  return DensityMatrix::unchecked(psi * psi.adjoint() / norm2, Dims{static_cast<int>(psi.size())});
}

DensityMatrix basis_state(int d, int k) {
  if (d < 1 || k < 0 || k >= d) throw InvalidInput("basis_state: index out of range");
  CVector psi = CVector::Zero(d);
  psi(k) = 1.0;
  return pure_state(psi);
}

}  // namespace ptmono
