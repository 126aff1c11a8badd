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

// Entropic quantities in bits.
//
// Eigenvalues at or below kClipRelative times the largest eigenvalue are
// treated as exact zeros: they contribute nothing to x log x terms and they
// define the null space used for support checks in the relative entropy.

#pragma once

#include <limits>

#include "ptmono/density.hpp"

namespace ptmono {

inline constexpr double kClipRelative = 1e-12;
inline constexpr double kHermitianEnforceTol = 1e-8;
inline constexpr double kNegativeEigenTol = 1e-10;
inline constexpr double kSupportMassTol = 1e-10;
inline constexpr double kInfiniteBits = std::numeric_limits<double>::infinity();

/// Eigensystem of a symmetrized positive semidefinite operator.
struct Spectrum {
  RVector values;
  CMatrix vectors;
  CMatrix matrix;  // the symmetrized operator
};

/// Symmetrizes (m + m^dagger)/2 after checking the deviation is within 1e-8,
/// then diagonalizes. Throws InvalidInput on a negative eigenvalue beyond 1e-10.
Spectrum spectrum(const CMatrix& m);

double von_neumann_entropy(const Spectrum& s, double clip = kClipRelative);
double von_neumann_entropy(const CMatrix& rho, double clip = kClipRelative);
double von_neumann_entropy(const DensityMatrix& rho);

/// S(x||y) = tr[x log2 x - x log2 y]; +infinity when supp(x) is not contained in supp(y).
double relative_entropy(const Spectrum& x, const Spectrum& y, double clip = kClipRelative);
double relative_entropy(const CMatrix& x, const CMatrix& y, double clip = kClipRelative);
double relative_entropy(const DensityMatrix& x, const DensityMatrix& y);

/// S(A) + S(B) - S(AB) for a bipartite operator split as dims {dA, dB}.
double mutual_information(const CMatrix& rho_ab, int d_a, int d_b);

}  // namespace ptmono
