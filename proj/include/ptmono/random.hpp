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

// Seeded random ensembles. Every consumer derives its own stream from a
// master seed with derive_seed(master, stream), so results do not depend on
// the order in which workers run.

#pragma once

#include <cstdint>
#include <random>

#include "ptmono/linalg.hpp"

namespace ptmono {

using Rng = std::mt19937_64;

/// splitmix64 mix of (master, stream).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

/// Gaussian unitary ensemble, normalized so off-diagonal entries have unit variance times `scale`.
CMatrix random_hermitian(int d, Rng& rng, double scale = 1.0);

/// Haar-random unitary (QR of a Ginibre matrix with phase correction).
CMatrix haar_unitary(int d, Rng& rng);

/// Uniformly random permutation matrix (Fisher-Yates).
CMatrix random_permutation(int d, Rng& rng);

/// Ginibre-induced random density matrix of the given rank.
CMatrix random_density(int d, Rng& rng, int rank = -1);

/// Haar-random isometry C^d_in -> C^d_out (d_out >= d_in).
CMatrix haar_isometry(int d_in, int d_out, Rng& rng);

/// Unit-trace Choi matrix (legs: in, out) of a channel with `kraus_rank` Kraus operators
/// from a Haar isometry d_in -> d_out * kraus_rank.
CMatrix random_channel_choi(int d_in, int d_out, Rng& rng, int kraus_rank = 2);

}  // namespace ptmono
