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

// Dense complex matrix kernels for multipartite operators.
//
// Composite indices follow the Kronecker convention: for subsystem dims
// [d0, d1, ..., dk] the first subsystem is the most significant digit, so
// kron(A, B) acts as A on subsystem 0 and B on subsystem 1.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ptmono/errors.hpp"

namespace ptmono {

using cd = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using Dims = std::vector<int>;

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

inline Eigen::Index dims_product(const Dims& dims) {
  Eigen::Index p = 1;
  for (int d : dims) p *= d;
  return p;
}

/// Offset in the full composite index of every multi-index over `subset`
/// (enumerated lexicographically in the order given).
inline std::vector<Eigen::Index> subsystem_offsets(const Dims& dims, const std::vector<int>& subset) {
  std::vector<Eigen::Index> stride(dims.size(), 1);
  for (int k = static_cast<int>(dims.size()) - 2; k >= 0; --k) stride[k] = stride[k + 1] * dims[k + 1];

  std::vector<Eigen::Index> offsets{0};
  for (int k : subset) {
    std::vector<Eigen::Index> next;
    next.reserve(offsets.size() * dims[k]);
    for (Eigen::Index base : offsets)
      for (int v = 0; v < dims[k]; ++v) next.push_back(base + v * stride[k]);
    offsets = std::move(next);
  }
  return offsets;
}

template <typename Derived>
double max_abs_entry(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

template <typename A, typename B>
double max_abs_deviation(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw InvalidInput("max_abs_deviation: shape mismatch");
  return max_abs_entry(a - b);
}

template <typename Derived>
double hermiticity_defect(const Eigen::MatrixBase<Derived>& m) {
  return max_abs_entry(m - m.adjoint());
}

inline void require_square(Eigen::Index rows, Eigen::Index cols, const char* who) {
  if (rows != cols) throw InvalidInput(std::string(who) + ": matrix is not square");
}

inline void require_dims(Eigen::Index size, const Dims& dims, const char* who) {
  for (int d : dims)
    if (d <= 0) throw InvalidInput(std::string(who) + ": subsystem dimensions must be positive");
  if (dims_product(dims) != size) throw InvalidInput(std::string(who) + ": subsystem dims do not match matrix size");
}

struct Eigensystem {
  RVector values;   // ascending
  CMatrix vectors;  // columns are orthonormal eigenvectors
};

/// Hermitian eigendecomposition. Throws if `m` deviates from Hermitian by more than `tol`.
template <typename Derived>
Eigensystem eigh(const Eigen::MatrixBase<Derived>& m, double tol = 1e-10) {
  require_square(m.rows(), m.cols(), "eigh");
  if (hermiticity_defect(m) > tol) throw InvalidInput("eigh: matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(m.template cast<cd>().eval());
  if (solver.info() != Eigen::Success) throw NumericalFailure("eigh: eigensolver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

template <typename Derived>
DenseMatrix<typename Derived::Scalar> partial_trace(const Eigen::MatrixBase<Derived>& m, const Dims& dims,
                                                    std::vector<int> keep) {
  require_square(m.rows(), m.cols(), "partial_trace");
  require_dims(m.rows(), dims, "partial_trace");
  std::sort(keep.begin(), keep.end());
  if (std::adjacent_find(keep.begin(), keep.end()) != keep.end())
    throw InvalidInput("partial_trace: repeated subsystem index");
  for (int k : keep)
    if (k < 0 || k >= static_cast<int>(dims.size())) throw InvalidInput("partial_trace: subsystem index out of range");
  std::vector<int> traced;
  for (int k = 0; k < static_cast<int>(dims.size()); ++k) {
    if (std::binary_search(keep.begin(), keep.end(), k)) continue;
    traced.push_back(k);
  }

  const auto kept_off = subsystem_offsets(dims, keep);
  const auto traced_off = subsystem_offsets(dims, traced);
  const auto n = static_cast<Eigen::Index>(kept_off.size());
  DenseMatrix<typename Derived::Scalar> out(n, n);
  for (Eigen::Index c = 0; c < n; ++c)
    for (Eigen::Index r = 0; r < n; ++r) {
      typename Derived::Scalar acc(0);
      for (Eigen::Index t : traced_off) acc += m(kept_off[r] + t, kept_off[c] + t);
      out(r, c) = acc;
    }
  return out;
}

inline void require_permutation(const std::vector<int>& perm, std::size_t n, const char* who) {
  if (perm.size() != n) throw InvalidInput(std::string(who) + ": permutation has wrong length");
  std::vector<int> sorted = perm;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t k = 0; k < n; ++k)
    if (sorted[k] != static_cast<int>(k)) throw InvalidInput(std::string(who) + ": not a permutation");
}

inline std::vector<int> inverse_permutation(const std::vector<int>& perm) {
  std::vector<int> inv(perm.size());
  for (std::size_t k = 0; k < perm.size(); ++k) inv[perm[k]] = static_cast<int>(k);
  return inv;
}

inline Dims permuted_dims(const Dims& dims, const std::vector<int>& perm) {
  Dims out(perm.size());
  for (std::size_t k = 0; k < perm.size(); ++k) out[k] = dims[perm[k]];
  return out;
}

/// Reorders subsystems so that output subsystem k is input subsystem perm[k].
template <typename Derived>
DenseMatrix<typename Derived::Scalar> permute_subsystems(const Eigen::MatrixBase<Derived>& m, const Dims& dims,
                                                         const std::vector<int>& perm) {
  require_square(m.rows(), m.cols(), "permute_subsystems");
  require_dims(m.rows(), dims, "permute_subsystems");
  require_permutation(perm, dims.size(), "permute_subsystems");
  const auto src = subsystem_offsets(dims, perm);
  const auto n = static_cast<Eigen::Index>(src.size());
  DenseMatrix<typename Derived::Scalar> out(n, n);
  for (Eigen::Index c = 0; c < n; ++c)
    for (Eigen::Index r = 0; r < n; ++r) out(r, c) = m(src[r], src[c]);
  return out;
}

template <typename A, typename B>
DenseMatrix<typename A::Scalar> kron(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  DenseMatrix<typename A::Scalar> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline CMatrix kron(const std::vector<CMatrix>& parts) {
  if (parts.empty()) throw InvalidInput("kron: empty factor list");
  CMatrix out = parts.front();
  for (std::size_t k = 1; k < parts.size(); ++k) out = kron(out, parts[k]);
  return out;
}

/// exp(scale * h) for Hermitian h, through its eigendecomposition.
template <typename Derived>
CMatrix matrix_exp_hermitian(const Eigen::MatrixBase<Derived>& h, cd scale) {
  const Eigensystem es = eigh(h);
  const CVector phases = (es.values.template cast<cd>() * scale).array().exp().matrix();
  return es.vectors * phases.asDiagonal() * es.vectors.adjoint();
}

/// Unit-trace projector onto (1/sqrt(d)) sum_k |kk>.
inline CMatrix max_entangled_state(int d) {
  if (d < 1) throw InvalidInput("max_entangled_state: dimension must be positive");
  CVector phi = CVector::Zero(static_cast<Eigen::Index>(d) * d);
  for (int k = 0; k < d; ++k) phi(k * d + k) = 1.0 / std::sqrt(static_cast<double>(d));
  return phi * phi.adjoint();
}

inline CMatrix maximally_mixed(int d) {
  return CMatrix::Identity(d, d) / static_cast<double>(d);
}

template <typename Derived>
CMatrix hermitian_part(const Eigen::MatrixBase<Derived>& m) {
  return (m + m.adjoint()) / 2.0;
}

}  // namespace ptmono
