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

#include "ptmono/random.hpp"

namespace ptmono {

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

CMatrix ginibre(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix g(rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(r, c) = cd(re, im) / std::sqrt(2.0);
    }
  return g;
}

}  // namespace

CMatrix random_hermitian(int d, Rng& rng, double scale) {
  const CMatrix g = ginibre(d, d, rng);
  return scale * (g + g.adjoint()) / std::sqrt(2.0);
}

CMatrix haar_unitary(int d, Rng& rng) { return haar_isometry(d, d, rng); }

CMatrix random_permutation(int d, Rng& rng) {
  if (d < 1) throw InvalidInput("random_permutation: dimension must be positive");
  std::vector<int> p(d);
  for (int k = 0; k < d; ++k) p[k] = k;
  for (int k = d - 1; k > 0; --k) std::swap(p[k], p[std::uniform_int_distribution<int>(0, k)(rng)]);
  CMatrix m = CMatrix::Zero(d, d);
  for (int k = 0; k < d; ++k) m(p[k], k) = 1.0;
  return m;
}

CMatrix haar_isometry(int d_in, int d_out, Rng& rng) {
  if (d_in < 1 || d_out < d_in) throw InvalidInput("haar_isometry: need 1 <= d_in <= d_out");
  const CMatrix g = ginibre(d_out, d_in, rng);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(d_out, d_in);
  const CMatrix r = qr.matrixQR().topRows(d_in).triangularView<Eigen::Upper>();
  for (int k = 0; k < d_in; ++k) {
    const cd diag = r(k, k);
    if (std::abs(diag) > 0) q.col(k) *= diag / std::abs(diag);
  }
  return q;
}

CMatrix random_density(int d, Rng& rng, int rank) {
  if (rank <= 0) rank = d;
  const CMatrix g = ginibre(d, rank, rng);
  CMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return hermitian_part(rho);
}

CMatrix random_channel_choi(int d_in, int d_out, Rng& rng, int kraus_rank) {
  if (kraus_rank < 1) throw InvalidInput("random_channel_choi: kraus rank must be positive");
  // V : in -> out (x) env; Kraus K_a = (I_out (x) <a|) V.
  const CMatrix v = haar_isometry(d_in, d_out * kraus_rank, rng);
  CMatrix choi = CMatrix::Zero(static_cast<Eigen::Index>(d_in) * d_out, static_cast<Eigen::Index>(d_in) * d_out);
  for (int a = 0; a < kraus_rank; ++a) {
    CMatrix kraus(d_out, d_in);
    for (int o = 0; o < d_out; ++o) kraus.row(o) = v.row(o * kraus_rank + a);
    // |K>> = sum_i |i> (x) K|i>
    CVector vec(static_cast<Eigen::Index>(d_in) * d_out);
    for (int i = 0; i < d_in; ++i)
      for (int o = 0; o < d_out; ++o) vec(i * d_out + o) = kraus(o, i);
    choi += vec * vec.adjoint();
  }
  return hermitian_part(choi) / static_cast<double>(d_in);
}

}  // namespace ptmono
