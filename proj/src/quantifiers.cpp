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

#include "ptmono/quantifiers.hpp"

#include <cmath>

#include "ptmono/entropy.hpp"

namespace ptmono {

ProcessTensor markov_marginal(const ProcessTensor& t) {
  std::vector<CMatrix> parts;
  for (int j = 0; j < t.channels(); ++j) parts.push_back(partial_trace(t.choi(), t.legs(), {2 * j, 2 * j + 1}));
  return ProcessTensor(kron(parts), t.legs(), t.grid());
}

ProcessTensor full_marginal(const ProcessTensor& t) {
  std::vector<CMatrix> parts;
  for (int k = 0; k < static_cast<int>(t.legs().size()); ++k) parts.push_back(partial_trace(t.choi(), t.legs(), {k}));
  return ProcessTensor(kron(parts), t.legs(), t.grid());
}

// Both references are products of marginals of T, so tr T log ref is a sum of
// marginal entropies and each divergence is an entropy difference. This avoids
// support tests against near-singular products.
QuantifierReport quantify_detailed(const ProcessTensor& t) {
  double legs = 0.0;
  for (int k = 0; k < static_cast<int>(t.legs().size()); ++k)
    legs += von_neumann_entropy(CMatrix(partial_trace(t.choi(), t.legs(), {k})));
  double channels = 0.0;
  for (int j = 0; j < t.channels(); ++j)
    channels += von_neumann_entropy(CMatrix(partial_trace(t.choi(), t.legs(), {2 * j, 2 * j + 1})));
  QuantifierReport r;
  r.entropy_T = von_neumann_entropy(t.choi());
  r.entropy_markov = channels;
  r.entropy_marginal = legs;
  r.triple.total_I = legs - r.entropy_T;
  r.triple.markov_M = legs - channels;
  r.triple.nonmarkov_N = channels - r.entropy_T;
  return r;
}

QuantifierTriple quantify(const ProcessTensor& t) { return quantify_detailed(t).triple; }

double channel_mutual_information(const ChannelChoi& c) {
  if (!is_cptp(c, 1e-8, 1e-8)) throw InvalidInput("channel_mutual_information: not a valid channel Choi");
  if (std::abs(c.choi.trace() - cd(1.0)) > 1e-8) throw InvalidInput("channel_mutual_information: Choi not unit trace");
  return mutual_information(c.choi, c.d_in, c.d_out);
}

}  // namespace ptmono
