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

#include "ptmono/process.hpp"

namespace ptmono {

/// Total, Markovian and non-Markovian correlations of a process, in bits.
struct QuantifierTriple {
  double total_I = 0.0;
  double markov_M = 0.0;
  double nonmarkov_N = 0.0;

  QuantifierTriple operator+(const QuantifierTriple& o) const {
    return {total_I + o.total_I, markov_M + o.markov_M, nonmarkov_N + o.nonmarkov_N};
  }
  QuantifierTriple operator-(const QuantifierTriple& o) const {
    return {total_I - o.total_I, markov_M - o.markov_M, nonmarkov_N - o.nonmarkov_N};
  }
  double additivity_defect() const { return std::abs(total_I - (markov_M + nonmarkov_N)); }
};

/// Tensor product of the per-channel (i_j, o_j) marginals.
ProcessTensor markov_marginal(const ProcessTensor& t);
/// Tensor product of all single-leg marginals.
ProcessTensor full_marginal(const ProcessTensor& t);

struct QuantifierReport {
  QuantifierTriple triple;
  double entropy_T = 0.0;
  double entropy_markov = 0.0;
  double entropy_marginal = 0.0;
};

/// I = S(T||T^marg), M = S(T^Mkv||T^marg), N = S(T||T^Mkv).
/// Throws NumericalFailure if any relative entropy comes out infinite.
QuantifierTriple quantify(const ProcessTensor& t);
QuantifierReport quantify_detailed(const ProcessTensor& t);

/// S(rho_in) + S(rho_out) - S(choi).
double channel_mutual_information(const ChannelChoi& c);

}  // namespace ptmono
