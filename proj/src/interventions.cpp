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

#include "ptmono/interventions.hpp"

#include <algorithm>
#include <cmath>

#include "ptmono/errors.hpp"

namespace ptmono {

namespace {

std::vector<int> complement(int n, const std::vector<int>& taken) {
  std::vector<bool> used(n, false);
  for (int k : taken) used[k] = true;
  std::vector<int> rest;
  for (int k = 0; k < n; ++k)
    if (!used[k]) rest.push_back(k);
  return rest;
}

void require_sorted_slots(const std::vector<int>& keep, int n, const char* who) {
  for (std::size_t k = 0; k < keep.size(); ++k) {
    if (keep[k] < 0 || keep[k] >= n) throw InvalidInput(std::string(who) + ": slot index out of range");
    if (k > 0 && keep[k] <= keep[k - 1]) throw InvalidInput(std::string(who) + ": slot indices must be increasing");
  }
}

ProcessTensor normalized(CMatrix m, Dims legs, TimeGrid grid, const char* who) {
  const double tr = m.trace().real();
  if (!(tr > 1e-300) || !std::isfinite(tr)) throw NumericalFailure(std::string(who) + ": contraction has vanishing trace");
  m /= tr;
  return ProcessTensor(std::move(m), std::move(legs), std::move(grid));
}

// Channel E (x) F with legs (in_E in_F, out_E out_F).
ChannelChoi tensor_channels(const ChannelChoi& e, const ChannelChoi& f) {
  CMatrix k = kron(e.choi, f.choi);
  CMatrix p = permute_subsystems(k, {e.d_in, e.d_out, f.d_in, f.d_out}, {0, 2, 1, 3});
  return {std::move(p), e.d_in * f.d_in, e.d_out * f.d_out};
}

double unitarity_defect(const CMatrix& u) {
  if (u.rows() != u.cols()) return INFINITY;
  return max_abs_deviation(u.adjoint() * u, CMatrix::Identity(u.rows(), u.cols()));
}

}  // namespace

LinkResult link_product(const CMatrix& a, const Dims& a_dims, const CMatrix& b, const Dims& b_dims,
                        const std::vector<std::pair<int, int>>& shared) {
  require_square(a.rows(), a.cols(), "link_product");
  require_square(b.rows(), b.cols(), "link_product");
  require_dims(a.rows(), a_dims, "link_product");
  require_dims(b.rows(), b_dims, "link_product");

  const int na = static_cast<int>(a_dims.size());
  const int nb = static_cast<int>(b_dims.size());
  std::vector<int> a_shared, b_shared;
  std::vector<bool> seen_a(na, false), seen_b(nb, false);
  for (auto [x, y] : shared) {
    if (x < 0 || x >= na || y < 0 || y >= nb) throw InvalidInput("link_product: leg index out of range");
    if (seen_a[x] || seen_b[y]) throw InvalidInput("link_product: leg linked twice");
    if (a_dims[x] != b_dims[y]) throw InvalidInput("link_product: linked legs differ in dimension");
    seen_a[x] = seen_b[y] = true;
    a_shared.push_back(x);
    b_shared.push_back(y);
  }
  const std::vector<int> a_rest = complement(na, a_shared);
  const std::vector<int> b_rest = complement(nb, b_shared);

  const auto ar = subsystem_offsets(a_dims, a_rest);
  const auto ay = subsystem_offsets(a_dims, a_shared);
  const auto by = subsystem_offsets(b_dims, b_shared);
  const auto br = subsystem_offsets(b_dims, b_rest);
  const Eigen::Index ra = static_cast<Eigen::Index>(ar.size());
  const Eigen::Index rb = static_cast<Eigen::Index>(br.size());
  const Eigen::Index ny = static_cast<Eigen::Index>(ay.size());

  // Reshuffle into (ra ra') x (y y') and (y y') x (rb rb') so the contraction is one GEMM.
  CMatrix ahat(ra * ra, ny * ny);
  for (Eigen::Index r = 0; r < ra; ++r)
    for (Eigen::Index rp = 0; rp < ra; ++rp)
      for (Eigen::Index y = 0; y < ny; ++y)
        for (Eigen::Index yp = 0; yp < ny; ++yp) ahat(r * ra + rp, y * ny + yp) = a(ar[r] + ay[y], ar[rp] + ay[yp]);
  CMatrix bhat(ny * ny, rb * rb);
  for (Eigen::Index y = 0; y < ny; ++y)
    for (Eigen::Index yp = 0; yp < ny; ++yp)
      for (Eigen::Index r = 0; r < rb; ++r)
        for (Eigen::Index rp = 0; rp < rb; ++rp) bhat(y * ny + yp, r * rb + rp) = b(by[y] + br[r], by[yp] + br[rp]);
  const CMatrix p = ahat * bhat;

  LinkResult out;
  out.matrix.resize(ra * rb, ra * rb);
  for (Eigen::Index r = 0; r < ra; ++r)
    for (Eigen::Index rp = 0; rp < ra; ++rp)
      for (Eigen::Index s = 0; s < rb; ++s)
        for (Eigen::Index sp = 0; sp < rb; ++sp) out.matrix(r * rb + s, rp * rb + sp) = p(r * ra + rp, s * rb + sp);
  for (int k : a_rest) out.dims.push_back(a_dims[k]);
  for (int k : b_rest) out.dims.push_back(b_dims[k]);
  return out;
}

// ---------------------------------------------------------------------------

ControlComb::ControlComb(std::vector<SlotAction> slots, TimeGrid grid) : slots_(std::move(slots)), grid_(std::move(grid)) {
  if (static_cast<int>(slots_.size()) != grid_.n()) throw InvalidInput("ControlComb: need one action per slot");
  for (const auto& s : slots_) {
    if (const auto* u = std::get_if<UnitaryInsert>(&s)) {
      if (unitarity_defect(u->unitary) > 1e-10) throw InvalidInput("ControlComb: insert is not unitary");
    } else if (const auto* c = std::get_if<ChannelChoi>(&s)) {
      if (!is_cptp(*c, 1e-10, 1e-9)) throw InvalidInput("ControlComb: insert is not CPTP");
    }
  }
}

ControlComb ControlComb::coarse_graining(const TimeGrid& grid, int d, const std::vector<int>& keep) {
  require_sorted_slots(keep, grid.n(), "ControlComb");
  std::vector<SlotAction> slots(grid.n(), identity_channel(d));
  for (int k : keep) slots[k] = Open{};
  return ControlComb(std::move(slots), grid);
}

ControlComb ControlComb::from_pulses(const TimeGrid& grid, const std::vector<CMatrix>& pulses,
                                     const std::vector<int>& keep) {
  if (static_cast<int>(pulses.size()) != grid.n()) throw InvalidInput("ControlComb: need one pulse per slot");
  require_sorted_slots(keep, grid.n(), "ControlComb");
  std::vector<SlotAction> slots;
  for (const auto& p : pulses) slots.emplace_back(UnitaryInsert{p});
  for (int k : keep) slots[k] = Open{};
  return ControlComb(std::move(slots), grid);
}

std::vector<int> ControlComb::kept_indices() const {
  std::vector<int> k;
  for (int j = 0; j < static_cast<int>(slots_.size()); ++j)
    if (std::holds_alternative<Open>(slots_[j])) k.push_back(j);
  return k;
}

bool ControlComb::unitary_only() const {
  return std::none_of(slots_.begin(), slots_.end(),
                      [](const SlotAction& s) { return std::holds_alternative<ChannelChoi>(s); });
}

ChannelChoi as_channel(const SlotAction& action) {
  if (const auto* u = std::get_if<UnitaryInsert>(&action)) return unitary_channel(u->unitary);
  if (const auto* c = std::get_if<ChannelChoi>(&action)) return *c;
  throw InvalidInput("as_channel: open slot has no channel");
}

ProcessTensor apply_control_comb(const ProcessTensor& t, const ControlComb& comb) {
  if (!(t.grid() == comb.grid())) throw InvalidInput("apply_control_comb: comb grid does not match the process");
  CMatrix m = t.choi();
  Dims legs = t.legs();
  for (int j = t.slots() - 1; j >= 0; --j) {
    const SlotAction& action = comb.slots()[j];
    if (std::holds_alternative<Open>(action)) continue;
    const ChannelChoi c = as_channel(action);
    if (c.d_in != legs[2 * j + 1] || c.d_out != legs[2 * j + 2])
      throw InvalidInput("apply_control_comb: insert dimensions do not match the slot");
    LinkResult r = link_product(m, legs, c.choi, c.dims(), {{2 * j + 1, 0}, {2 * j + 2, 1}});
    m = std::move(r.matrix);
    legs = std::move(r.dims);
    m /= m.trace().real();
  }
  return normalized(std::move(m), std::move(legs), comb.kept_grid(), "apply_control_comb");
}

ProcessTensor coarse_grain(const ProcessTensor& t, const TimeGrid& keep) {
  return coarse_grain(t, t.grid().indices_of(keep));
}

ProcessTensor coarse_grain(const ProcessTensor& t, const std::vector<int>& keep) {
  const int n = t.slots();
  require_sorted_slots(keep, n, "coarse_grain");
  const std::vector<int> plugged = complement(n, keep);
  const int nlegs = static_cast<int>(t.legs().size());

  std::vector<int> plugged_legs;
  for (int j : plugged) {
    if (t.legs()[2 * j + 1] != t.legs()[2 * j + 2])
      throw InvalidInput("coarse_grain: identity plug needs equal slot dimensions");
    plugged_legs.push_back(2 * j + 1);
    plugged_legs.push_back(2 * j + 2);
  }
  std::vector<int> perm = complement(nlegs, plugged_legs);
  const std::vector<int> rest = perm;
  perm.insert(perm.end(), plugged_legs.begin(), plugged_legs.end());
  const CMatrix moved = permute_subsystems(t.choi(), t.legs(), perm);

  // Product of unnormalized |Phi_d> = sum_k |kk> over the plugged pairs.
  Eigen::VectorXd phi = Eigen::VectorXd::Ones(1);
  for (int j : plugged) {
    const int d = t.legs()[2 * j + 1];
    Eigen::VectorXd p = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d) * d);
    for (int k = 0; k < d; ++k) p(k * d + k) = 1.0;
    phi = kron(phi, p).eval();
  }
  Dims rest_dims;
  for (int k : rest) rest_dims.push_back(t.legs()[k]);
  const Eigen::Index r = dims_product(rest_dims);
  const Eigen::Index y = phi.size();

  // K = 1_R (x) phi; result = K^T T K.
  CMatrix tk(r * y, r);
  for (Eigen::Index c = 0; c < r; ++c) tk.col(c) = moved.middleCols(c * y, y) * phi.cast<cd>();
  CMatrix out(r, r);
  for (Eigen::Index row = 0; row < r; ++row) out.row(row) = phi.cast<cd>().transpose() * tk.middleRows(row * y, y);
  return normalized(std::move(out), std::move(rest_dims), t.grid().select(keep), "coarse_grain");
}

ProcessTensor dressed_process(const NoiseModel& model, const ControlComb& comb, const DenseLimits& limits) {
  if (!(model.grid() == comb.grid())) throw InvalidInput("dressed_process: comb grid does not match the model");
  if (!comb.unitary_only()) throw InvalidInput("dressed_process: only unitary inserts can be folded");
  std::vector<CMatrix> pulses;
  for (const auto& s : comb.slots()) {
    if (const auto* u = std::get_if<UnitaryInsert>(&s))
      pulses.push_back(u->unitary);
    else
      pulses.push_back(CMatrix::Identity(model.d_sys, model.d_sys));
  }
  const NoiseModel dressed = dress_model(model, comb.kept_indices(), pulses);
  ProcessTensor p = build_process_tensor(dressed, limits);
  return ProcessTensor(p.choi(), p.legs(), comb.kept_grid());
}

// ---------------------------------------------------------------------------

IqiSlot IqiSlot::identity(int d) {
  return {identity_channel(d), identity_channel(d), 1};
}

IqiSlot IqiSlot::unitaries(const CMatrix& before, const CMatrix& after) {
  if (unitarity_defect(before) > 1e-10 || unitarity_defect(after) > 1e-10)
    throw InvalidInput("IqiSlot: operations are not unitary");
  return {unitary_channel(before), unitary_channel(after), 1};
}

namespace {

void check_iqi_slot(const IqiSlot& s, int d_out, int d_in, int cap) {
  if (s.d_anc < 1) throw InvalidInput("IqiSlot: ancilla dimension must be positive");
  if (s.d_anc > cap) throw CapacityError("IqiSlot: ancilla dimension exceeds the cap");
  if (s.pre.d_in != d_out || s.pre.d_out != d_out * s.d_anc || s.post.d_in != d_in * s.d_anc ||
      s.post.d_out != d_in)
    throw InvalidInput("IqiSlot: instrument dimensions do not match the slot");
  if (!is_cptp(s.pre, 1e-9, 1e-9) || !is_cptp(s.post, 1e-9, 1e-9))
    throw InvalidInput("IqiSlot: instrument is not CPTP");
}

}  // namespace

ProcessTensor apply_iqi_superprocess(const ProcessTensor& t, const std::vector<IqiSlot>& slots, int ancilla_cap) {
  const int n = t.slots();
  if (static_cast<int>(slots.size()) != n) throw InvalidInput("apply_iqi_superprocess: need one instrument per slot");
  CMatrix m = t.choi();
  Dims legs = t.legs();
  for (int j = n - 1; j >= 0; --j) {
    const IqiSlot& s = slots[j];
    const int d_o = legs[2 * j + 1];
    const int d_i = legs[2 * j + 2];
    check_iqi_slot(s, d_o, d_i, ancilla_cap);
    // W legs: (pre in, pre sys out, post sys in, post out)
    LinkResult w = link_product(s.pre.choi, {d_o, d_o, s.d_anc}, s.post.choi, {d_i, s.d_anc, d_i}, {{2, 1}});
    LinkResult r = link_product(m, legs, w.matrix, w.dims, {{2 * j + 1, 0}, {2 * j + 2, 3}});
    // Remaining legs: old ones without the slot pair, then (new o_j, new i_{j+1}); move the pair back.
    const int total = static_cast<int>(r.dims.size());
    std::vector<int> perm;
    for (int k = 0; k < 2 * j + 1; ++k) perm.push_back(k);
    perm.push_back(total - 2);
    perm.push_back(total - 1);
    for (int k = 2 * j + 1; k < total - 2; ++k) perm.push_back(k);
    m = permute_subsystems(r.matrix, r.dims, perm);
    legs = permuted_dims(r.dims, perm);
    m /= m.trace().real();
  }
  return normalized(std::move(m), std::move(legs), t.grid(), "apply_iqi_superprocess");
}

ChannelChoi sandwich(const IqiSlot& slot, const ChannelChoi& inner) {
  const ChannelChoi middle = tensor_channels(inner, identity_channel(slot.d_anc));
  return compose(compose(slot.pre, middle), slot.post);
}

IqiSlot compose_slots(const IqiSlot& first, const IqiSlot& second, int ancilla_cap) {
  const int a = first.d_anc * second.d_anc;
  if (a > ancilla_cap) throw CapacityError("compose_slots: combined ancilla exceeds the cap");
  // Ancilla legs of the result are ordered (second's, first's).
  IqiSlot out;
  out.pre = compose(first.pre, tensor_channels(second.pre, identity_channel(first.d_anc)));
  out.post = compose(tensor_channels(second.post, identity_channel(first.d_anc)), first.post);
  out.d_anc = a;
  return out;
}

// ---------------------------------------------------------------------------

ProcessTensor sequential_compose(const ProcessTensor& first, const ProcessTensor& second) {
  if (first.legs().back() != second.legs().front())
    throw InvalidInput("sequential_compose: junction dimensions differ");
  std::vector<double> times = first.grid().times();
  const double junction = times.empty() ? 1.0 : times.back() + 1.0;
  times.push_back(junction);
  for (double s : second.grid().times()) times.push_back(junction + s);
  Dims legs = first.legs();
  legs.insert(legs.end(), second.legs().begin(), second.legs().end());
  return normalized(kron(first.choi(), second.choi()), std::move(legs), TimeGrid(std::move(times)),
                    "sequential_compose");
}

ProcessTensor parallel_compose(const ProcessTensor& t1, const ProcessTensor& t2) {
  if (!(t1.grid() == t2.grid())) throw InvalidInput("parallel_compose: processes need the same grid");
  const int c = static_cast<int>(t1.legs().size());
  Dims dims = t1.legs();
  dims.insert(dims.end(), t2.legs().begin(), t2.legs().end());
  std::vector<int> perm;
  Dims legs;
  for (int k = 0; k < c; ++k) {
    perm.push_back(k);
    perm.push_back(c + k);
    legs.push_back(t1.legs()[k] * t2.legs()[k]);
  }
  return ProcessTensor(permute_subsystems(kron(t1.choi(), t2.choi()), dims, perm), std::move(legs), t1.grid());
}

ProcessTensor free_process(const TimeGrid& grid, const std::vector<DensityMatrix>& states) {
  if (static_cast<int>(states.size()) != grid.n() + 1) throw InvalidInput("free_process: need n + 1 states");
  std::vector<CMatrix> parts;
  Dims legs;
  for (const auto& s : states) {
    parts.push_back(maximally_mixed(s.dim()));
    parts.push_back(s.matrix());
    legs.push_back(s.dim());
    legs.push_back(s.dim());
  }
  return ProcessTensor(kron(parts), std::move(legs), grid);
}

// ---------------------------------------------------------------------------

DDKind parse_dd_kind(const std::string& name) {
  if (name == "none") return DDKind::none;
  if (name == "xzxz") return DDKind::xzxz;
  if (name == "cdd") return DDKind::cdd;
  throw InvalidInput("unknown DD sequence '" + name + "'");
}

namespace {

// Time-ordered tokens: -1 free evolution, 0 X, 1 Z.
void cdd_tokens(int level, std::vector<int>& out) {
  if (level == 0) {
    out.push_back(-1);
    return;
  }
  for (int pulse : {0, 1, 0, 1}) {
    cdd_tokens(level - 1, out);
    out.push_back(pulse);
  }
}

}  // namespace

std::vector<CMatrix> dd_period(DDKind kind, int level) {
  if (kind == DDKind::none) return {pauli::identity()};
  if (kind == DDKind::xzxz) level = 1;
  if (level < 1) throw InvalidInput("dd_period: cdd level must be at least 1");
  if (level > 6) throw CapacityError("dd_period: concatenation level too deep");
  std::vector<int> tokens;
  cdd_tokens(level, tokens);
  std::vector<CMatrix> pulses;
  CMatrix pending = pauli::identity();
  for (std::size_t k = 1; k < tokens.size(); ++k) {
    if (tokens[k] < 0) {
      pulses.push_back(pending);
      pending = pauli::identity();
    } else {
      pending = (tokens[k] == 0 ? pauli::x() : pauli::z()) * pending;
    }
  }
  pulses.push_back(pending);
  return pulses;
}

PulseSequence dd_sequence(DDKind kind, int level, int n_slots) {
  if (n_slots < 0) throw InvalidInput("dd_sequence: negative slot count");
  const std::vector<CMatrix> period = dd_period(kind, level);
  PulseSequence seq;
  switch (kind) {
    case DDKind::none: seq.label = "none"; break;
    case DDKind::xzxz: seq.label = "xzxz"; break;
    case DDKind::cdd: seq.label = "cdd" + std::to_string(level); break;
  }
  seq.net_frame = pauli::identity();
  for (int j = 0; j < n_slots; ++j) {
    seq.unitaries.push_back(period[j % period.size()]);
    seq.net_frame = seq.unitaries.back() * seq.net_frame;
  }
  seq.truncated = n_slots % static_cast<int>(period.size()) != 0;
  return seq;
}

}  // namespace ptmono
