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

#include "ptmono/channel.hpp"

namespace ptmono {

ChannelChoi make_channel(CMatrix choi, int d_in, int d_out) {
  require_square(choi.rows(), choi.cols(), "make_channel");
  require_dims(choi.rows(), Dims{d_in, d_out}, "make_channel");
  return {std::move(choi), d_in, d_out};
}

ChannelChoi identity_channel(int d) { return {max_entangled_state(d), d, d}; }

ChannelChoi unitary_channel(const CMatrix& u) {
  require_square(u.rows(), u.cols(), "unitary_channel");
  return kraus_channel({u});
}

ChannelChoi kraus_channel(const std::vector<CMatrix>& kraus) {
  if (kraus.empty()) throw InvalidInput("kraus_channel: no Kraus operators");
  const auto d_out = static_cast<int>(kraus.front().rows());
  const auto d_in = static_cast<int>(kraus.front().cols());
  CMatrix choi = CMatrix::Zero(static_cast<Eigen::Index>(d_in) * d_out, static_cast<Eigen::Index>(d_in) * d_out);
  for (const CMatrix& k : kraus) {
    if (k.rows() != d_out || k.cols() != d_in) throw InvalidInput("kraus_channel: inconsistent Kraus shapes");
    CVector vec(static_cast<Eigen::Index>(d_in) * d_out);
    for (int i = 0; i < d_in; ++i)
      for (int o = 0; o < d_out; ++o) vec(i * d_out + o) = k(o, i);
    choi += vec * vec.adjoint();
  }
  return {choi / static_cast<double>(d_in), d_in, d_out};
}

ChannelChoi depolarizing_channel(int d, double p) {
  if (p < 0.0 || p > 1.0) throw InvalidInput("depolarizing_channel: p outside [0, 1]");
  const auto n = static_cast<Eigen::Index>(d) * d;
  CMatrix choi = (1.0 - p) * max_entangled_state(d) + p * CMatrix::Identity(n, n) / static_cast<double>(n);
  return {choi, d, d};
}

ChannelChoi replacement_channel(int d_in, const CMatrix& sigma) {
  require_square(sigma.rows(), sigma.cols(), "replacement_channel");
  return {kron(maximally_mixed(d_in), sigma), d_in, static_cast<int>(sigma.rows())};
}

ChannelDefects channel_defects(const ChannelChoi& c) {
  ChannelDefects out;
  out.min_eigenvalue = eigh(hermitian_part(c.choi), 1e-8).values.minCoeff() * c.d_in;
  const CMatrix in_marginal = partial_trace(c.choi, c.dims(), {0});
  out.tp_residual = max_abs_deviation(in_marginal, maximally_mixed(c.d_in));
  out.trace_error = std::abs(c.choi.trace() - cd(1.0));
  return out;
}

bool is_cptp(const ChannelChoi& c, double cp_tol, double tp_tol) {
  const ChannelDefects d = channel_defects(c);
  return d.min_eigenvalue >= -cp_tol && d.tp_residual <= tp_tol;
}

ChannelChoi compose(const ChannelChoi& first, const ChannelChoi& second) {
  if (first.d_out != second.d_in) throw InvalidInput("compose: dimension mismatch");
  // Link product over the shared middle system; both factors are unit trace.
  const int a = first.d_in, b = first.d_out, c = second.d_out;
  CMatrix out = CMatrix::Zero(static_cast<Eigen::Index>(a) * c, static_cast<Eigen::Index>(a) * c);
  for (int i = 0; i < a; ++i)
    for (int k = 0; k < c; ++k)
      for (int j = 0; j < a; ++j)
        for (int l = 0; l < c; ++l) {
          cd acc = 0.0;
          for (int y = 0; y < b; ++y)
            for (int yp = 0; yp < b; ++yp) acc += first.choi(i * b + y, j * b + yp) * second.choi(y * c + k, yp * c + l);
          out(i * c + k, j * c + l) = acc;
        }
  return {out * static_cast<double>(b), a, c};
}

CMatrix apply_channel(const ChannelChoi& c, const CMatrix& rho) {
  if (rho.rows() != c.d_in || rho.cols() != c.d_in) throw InvalidInput("apply_channel: dimension mismatch");
  // E(rho) = d_in * sum_ij rho_ij * (block ij of choi)
  CMatrix out = CMatrix::Zero(c.d_out, c.d_out);
  for (int i = 0; i < c.d_in; ++i)
    for (int j = 0; j < c.d_in; ++j)
      out += rho(i, j) * c.choi.block(i * c.d_out, j * c.d_out, c.d_out, c.d_out);
  return out * static_cast<double>(c.d_in);
}

}  // namespace ptmono
