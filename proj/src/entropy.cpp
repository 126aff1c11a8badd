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

#include "ptmono/entropy.hpp"

#include <cmath>

namespace ptmono {

namespace {

double cutoff(const RVector& values, double clip) {
  const double top = values.size() ? values.maxCoeff() : 0.0;
  return clip * std::max(top, 0.0);
}

}  // namespace

Spectrum spectrum(const CMatrix& m) {
  require_square(m.rows(), m.cols(), "spectrum");
  if (hermiticity_defect(m) > kHermitianEnforceTol) throw InvalidInput("entropy: operator is not Hermitian");
  CMatrix sym = hermitian_part(m);
  Eigensystem es = eigh(sym, kHermitianEnforceTol);
  if (es.values.size() && es.values.minCoeff() < -kNegativeEigenTol)
    throw InvalidInput("entropy: operator has a negative eigenvalue");
  return {std::move(es.values), std::move(es.vectors), std::move(sym)};
}

double von_neumann_entropy(const Spectrum& s, double clip) {
  const double cut = cutoff(s.values, clip);
  double h = 0.0;
  for (Eigen::Index k = 0; k < s.values.size(); ++k) {
    const double p = s.values(k);
    if (p > cut) h -= p * std::log2(p);
  }
  return h;
}

double von_neumann_entropy(const CMatrix& rho, double clip) { return von_neumann_entropy(spectrum(rho), clip); }

double von_neumann_entropy(const DensityMatrix& rho) { return von_neumann_entropy(rho.matrix()); }

double relative_entropy(const Spectrum& x, const Spectrum& y, double clip) {
  if (x.values.size() != y.values.size()) throw InvalidInput("relative_entropy: dimension mismatch");
  const double y_cut = cutoff(y.values, clip);
  // Weight of x along each eigenvector of y.
  const RVector weights = (y.vectors.adjoint() * x.matrix * y.vectors).diagonal().real();

  double cross = 0.0;
  double null_mass = 0.0;
  for (Eigen::Index j = 0; j < weights.size(); ++j) {
    if (y.values(j) > y_cut)
      cross += weights(j) * std::log2(y.values(j));
    else
      null_mass += weights(j);
  }
  const double scale = std::max(x.matrix.trace().real(), 1.0);
  if (null_mass > kSupportMassTol * scale) return kInfiniteBits;
  return -von_neumann_entropy(x, clip) - cross;
}

double relative_entropy(const CMatrix& x, const CMatrix& y, double clip) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) throw InvalidInput("relative_entropy: dimension mismatch");
  return relative_entropy(spectrum(x), spectrum(y), clip);
}

double relative_entropy(const DensityMatrix& x, const DensityMatrix& y) {
  if (x.dim() != y.dim()) throw InvalidInput("relative_entropy: dimension mismatch");
  return relative_entropy(x.matrix(), y.matrix());
}

double mutual_information(const CMatrix& rho_ab, int d_a, int d_b) {
  const Dims dims{d_a, d_b};
  require_dims(rho_ab.rows(), dims, "mutual_information");
  return von_neumann_entropy(CMatrix(partial_trace(rho_ab, dims, {0}))) +
         von_neumann_entropy(CMatrix(partial_trace(rho_ab, dims, {1}))) - von_neumann_entropy(rho_ab);
}

}  // namespace ptmono
