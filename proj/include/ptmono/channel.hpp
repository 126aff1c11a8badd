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

#include "ptmono/linalg.hpp"

namespace ptmono {

/// Unit-trace Choi matrix of a channel, legs ordered (input, output):
/// choi = (1/d_in) sum_ij |i><j| (x) E(|i><j|).
struct ChannelChoi {
  CMatrix choi;
  int d_in = 0;
  int d_out = 0;

  Dims dims() const { return {d_in, d_out}; }
};

ChannelChoi make_channel(CMatrix choi, int d_in, int d_out);
ChannelChoi identity_channel(int d);
ChannelChoi unitary_channel(const CMatrix& u);
ChannelChoi kraus_channel(const std::vector<CMatrix>& kraus);
/// rho -> (1 - p) rho + p tr(rho) I/d.
ChannelChoi depolarizing_channel(int d, double p);
/// rho -> tr(rho) sigma.
ChannelChoi replacement_channel(int d_in, const CMatrix& sigma);

struct ChannelDefects {
  double min_eigenvalue = 0.0;  // on the natural (trace d_in) normalization
  double tp_residual = 0.0;     // max |tr_out choi - I/d_in|
  double trace_error = 0.0;
};

ChannelDefects channel_defects(const ChannelChoi& c);
bool is_cptp(const ChannelChoi& c, double cp_tol = 1e-10, double tp_tol = 1e-9);

/// Sequential composition: `first` then `second`.
ChannelChoi compose(const ChannelChoi& first, const ChannelChoi& second);

/// Applies the channel to an input state.
CMatrix apply_channel(const ChannelChoi& c, const CMatrix& rho);

}  // namespace ptmono
