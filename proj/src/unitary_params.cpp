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

#include "ptmono/unitary_params.hpp"

#include <map>
#include <mutex>

#include "ptmono/errors.hpp"

namespace ptmono {

namespace {

std::vector<CMatrix> build_basis(int d) {
  std::vector<CMatrix> basis;
  for (int j = 0; j < d; ++j)
    for (int k = j + 1; k < d; ++k) {
      CMatrix sym = CMatrix::Zero(d, d), anti = CMatrix::Zero(d, d);
      sym(j, k) = sym(k, j) = 1.0;
      anti(j, k) = cd(0, -1);
      anti(k, j) = cd(0, 1);
      basis.push_back(sym);
      basis.push_back(anti);
    }
  for (int l = 1; l < d; ++l) {
    CMatrix diag = CMatrix::Zero(d, d);
    const double norm = std::sqrt(2.0 / (l * (l + 1.0)));
    for (int m = 0; m < l; ++m) diag(m, m) = norm;
    diag(l, l) = -l * norm;
    basis.push_back(diag);
  }
  return basis;
}

}  // namespace

const std::vector<CMatrix>& generator_basis(int d) {
  if (d < 1) throw InvalidInput("generator_basis: dimension must be positive");
  static std::mutex lock;
  static std::map<int, std::vector<CMatrix>> cache;
  std::lock_guard<std::mutex> guard(lock);
  auto it = cache.find(d);
  if (it == cache.end()) it = cache.emplace(d, build_basis(d)).first;
  return it->second;
}

CMatrix unitary_from_params(const Eigen::Ref<const Eigen::VectorXd>& theta, int d) {
  const auto& basis = generator_basis(d);
  if (theta.size() != static_cast<Eigen::Index>(basis.size()))
    throw InvalidInput("unitary_from_params: need d^2 - 1 parameters");
  CMatrix h = CMatrix::Zero(d, d);
  for (std::size_t a = 0; a < basis.size(); ++a) h += theta(static_cast<Eigen::Index>(a)) * basis[a];
  return matrix_exp_hermitian(hermitian_part(h), cd(0, -1));
}

Eigen::VectorXd params_from_unitary(const CMatrix& u) {
  require_square(u.rows(), u.cols(), "params_from_unitary");
  const int d = static_cast<int>(u.rows());
  if (max_abs_deviation(CMatrix(u.adjoint() * u), CMatrix::Identity(d, d)) > 1e-8)
    throw InvalidInput("params_from_unitary: matrix is not unitary");
  // Unitaries are normal, so the Schur form is diagonal.
  Eigen::ComplexSchur<CMatrix> schur(u);
  const CMatrix& q = schur.matrixU();
  CVector h_diag(d);
  for (int k = 0; k < d; ++k) h_diag(k) = -std::arg(schur.matrixT()(k, k));
  CMatrix h = q * h_diag.asDiagonal() * q.adjoint();
  h -= (h.trace() / static_cast<double>(d)) * CMatrix::Identity(d, d);
  const auto& basis = generator_basis(d);
  Eigen::VectorXd theta(basis.size());
  for (std::size_t a = 0; a < basis.size(); ++a) theta(static_cast<Eigen::Index>(a)) = (h * basis[a]).trace().real() / 2.0;
  return theta;
}

UnitaryParams::UnitaryParams(int d, int slots) : UnitaryParams(d, slots, Eigen::VectorXd::Zero(slots * per_slot(d))) {}

UnitaryParams::UnitaryParams(int d, int slots, Eigen::VectorXd values) : d_(d), slots_(slots), values_(std::move(values)) {
  if (d < 1 || slots < 0) throw InvalidInput("UnitaryParams: bad shape");
  if (values_.size() != static_cast<Eigen::Index>(slots) * per_slot(d))
    throw InvalidInput("UnitaryParams: parameter count does not match slots * (d^2 - 1)");
}

UnitaryParams UnitaryParams::from_unitaries(const std::vector<CMatrix>& us) {
  if (us.empty()) return UnitaryParams(2, 0);
  const int d = static_cast<int>(us.front().rows());
  Eigen::VectorXd v(static_cast<Eigen::Index>(us.size()) * per_slot(d));
  for (std::size_t j = 0; j < us.size(); ++j) {
    if (us[j].rows() != d) throw InvalidInput("UnitaryParams: mixed dimensions");
    v.segment(static_cast<Eigen::Index>(j) * per_slot(d), per_slot(d)) = params_from_unitary(us[j]);
  }
  return UnitaryParams(d, static_cast<int>(us.size()), std::move(v));
}

std::vector<CMatrix> UnitaryParams::unitaries() const {
  std::vector<CMatrix> us;
  for (int j = 0; j < slots_; ++j) us.push_back(unitary(j));
  return us;
}

}  // namespace ptmono
