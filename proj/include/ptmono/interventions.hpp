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

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ptmono/density.hpp"
#include "ptmono/process.hpp"

namespace ptmono {

// ---------------------------------------------------------------------------
// Link product

struct LinkResult {
  CMatrix matrix;
  Dims dims;  // remaining legs of the first operand, then of the second
};

/// tr_Y[(A^{T_Y} (x) 1)(1 (x) B)] over the leg pairs `shared` (leg of A, leg of B).
LinkResult link_product(const CMatrix& a, const Dims& a_dims, const CMatrix& b, const Dims& b_dims,
                        const std::vector<std::pair<int, int>>& shared);

// ---------------------------------------------------------------------------
// Control combs

struct Open {};
struct UnitaryInsert {
  CMatrix unitary;
};
using SlotAction = std::variant<Open, UnitaryInsert, ChannelChoi>;

class ControlComb {
 public:
  ControlComb() = default;
  ControlComb(std::vector<SlotAction> slots, TimeGrid grid);

  /// Open at `keep` (0-based slot indices), identity channels elsewhere.
  static ControlComb coarse_graining(const TimeGrid& grid, int d, const std::vector<int>& keep);
  /// Open at `keep`, pulses[j] at every other slot.
  static ControlComb from_pulses(const TimeGrid& grid, const std::vector<CMatrix>& pulses,
                                 const std::vector<int>& keep = {});

  const std::vector<SlotAction>& slots() const noexcept { return slots_; }
  const TimeGrid& grid() const noexcept { return grid_; }
  std::vector<int> kept_indices() const;
  TimeGrid kept_grid() const { return grid_.select(kept_indices()); }
  bool unitary_only() const;

 private:
  std::vector<SlotAction> slots_;
  TimeGrid grid_;
};

ChannelChoi as_channel(const SlotAction& action);

/// Contracts every inserted channel against its slot's (o_j, i_{j+1}) legs; open
/// slots stay open. The result lives on the kept grid and has unit trace.
ProcessTensor apply_control_comb(const ProcessTensor& t, const ControlComb& comb);

/// Plugs identity channels into every slot not in `keep` by projecting the
/// (o_j, i_{j+1}) pair onto the maximally entangled state.
ProcessTensor coarse_grain(const ProcessTensor& t, const TimeGrid& keep);
ProcessTensor coarse_grain(const ProcessTensor& t, const std::vector<int>& keep);

/// Same as build_process_tensor(model) followed by apply_control_comb, with
/// unitary inserts folded into the propagators so only the kept slots are stored.
ProcessTensor dressed_process(const NoiseModel& model, const ControlComb& comb, const DenseLimits& limits = {});

// ---------------------------------------------------------------------------
// Superprocesses with temporally uncorrelated instruments

/// Per-slot instrument: pre maps the slot output d -> d (x) d_anc (legs sys, anc);
/// post maps d (x) d_anc -> d back into the next input.
struct IqiSlot {
  ChannelChoi pre;
  ChannelChoi post;
  int d_anc = 1;

  static IqiSlot identity(int d);
  static IqiSlot unitaries(const CMatrix& before, const CMatrix& after);
};

inline constexpr int kDefaultAncillaCap = 2;

ProcessTensor apply_iqi_superprocess(const ProcessTensor& t, const std::vector<IqiSlot>& slots,
                                     int ancilla_cap = kDefaultAncillaCap);

/// The single channel obtained by running `inner` between pre and post (inner (x) id on the ancilla).
ChannelChoi sandwich(const IqiSlot& slot, const ChannelChoi& inner);

/// Slotwise composition: `second` applied after `first`.
IqiSlot compose_slots(const IqiSlot& first, const IqiSlot& second, int ancilla_cap = kDefaultAncillaCap);

// ---------------------------------------------------------------------------
// Composition and free processes

/// Processes run back to back; the junction becomes a new slot between them.
ProcessTensor sequential_compose(const ProcessTensor& first, const ProcessTensor& second);
/// Slotwise tensor product; leg k of the result is (leg k of t1) (x) (leg k of t2).
ProcessTensor parallel_compose(const ProcessTensor& t1, const ProcessTensor& t2);
/// (I/d (x) rho_1) (x) ... (x) (I/d (x) rho_{n+1}).
ProcessTensor free_process(const TimeGrid& grid, const std::vector<DensityMatrix>& states);

// ---------------------------------------------------------------------------
// Dynamical decoupling sequences

enum class DDKind { none, xzxz, cdd };

struct PulseSequence {
  std::vector<CMatrix> unitaries;
  std::string label;
  bool truncated = false;  // slot count is not a whole number of periods
  CMatrix net_frame;       // product of all pulses, latest on the left
};

DDKind parse_dd_kind(const std::string& name);

/// One period of pulses, each following a free-evolution interval. Level k of
/// the concatenated sequence is p_k = p_{k-1} X p_{k-1} Z p_{k-1} X p_{k-1} Z in
/// time order with p_0 free evolution; adjacent pulses are multiplied together.
std::vector<CMatrix> dd_period(DDKind kind, int level);

/// Cycles the period over n_slots slots.
PulseSequence dd_sequence(DDKind kind, int level, int n_slots);

}  // namespace ptmono
