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

#include "ptmono/monotones.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "ptmono/entropy.hpp"
#include "ptmono/errors.hpp"
#include "ptmono/random.hpp"

namespace ptmono {

Quantifier parse_quantifier(const std::string& name) {
  if (name == "I") return Quantifier::I;
  if (name == "M") return Quantifier::M;
  if (name == "N") return Quantifier::N;
  throw InvalidInput("unknown quantifier '" + name + "' (expected I, M or N)");
}

std::string to_string(Quantifier q) {
  switch (q) {
    case Quantifier::I: return "I";
    case Quantifier::M: return "M";
    case Quantifier::N: return "N";
  }
  return "?";
}

double pick(const QuantifierTriple& t, Quantifier q) {
  switch (q) {
    case Quantifier::I: return t.total_I;
    case Quantifier::M: return t.markov_M;
    case Quantifier::N: return t.nonmarkov_N;
  }
  return 0.0;
}

namespace {

int uniform_slot_dim(const ProcessTensor& t, const char* who) {
  const int d = t.legs()[1];
  for (int j = 0; j < t.slots(); ++j)
    if (t.legs()[2 * j + 1] != d || t.legs()[2 * j + 2] != d)
      throw InvalidInput(std::string(who) + ": slots must share one dimension");
  return d;
}

std::vector<int> plugged_slots(int n, const std::vector<int>& keep) {
  for (std::size_t k = 0; k < keep.size(); ++k) {
    if (keep[k] < 0 || keep[k] >= n) throw InvalidInput("kept slot out of range");
    if (k > 0 && keep[k] <= keep[k - 1]) throw InvalidInput("kept slots must be increasing");
  }
  std::vector<int> out;
  for (int j = 0; j < n; ++j)
    if (!std::binary_search(keep.begin(), keep.end(), j)) out.push_back(j);
  return out;
}

// Shrinks a config so that it fits the budget left after fixed evaluations.
OptimizerConfig remaining_config(OptimizerConfig cfg, int used) {
  cfg.budget = std::max(1, cfg.budget - used);
  cfg.restarts = std::min(cfg.restarts, cfg.budget);
  return cfg;
}

// Shared driver: optimizes unitary inserts at `plugged` slots and lets fixed
// candidate combs compete.
EstimateResult optimize_combs(const TimeGrid& grid, int d, const std::vector<int>& keep,
                              const std::function<double(const ControlComb&)>& objective, const OptimizerConfig& cfg,
                              const std::vector<ControlComb>& candidates, std::optional<double> ceiling) {
  validate(cfg);
  const int n = grid.n();
  const std::vector<int> plugged = plugged_slots(n, keep);
  const int per = UnitaryParams::per_slot(d);
  const int dim = static_cast<int>(plugged.size()) * per;

  auto to_params = [&](const Eigen::VectorXd& x) {
    Eigen::VectorXd full = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n) * per);
    for (std::size_t k = 0; k < plugged.size(); ++k)
      full.segment(static_cast<Eigen::Index>(plugged[k]) * per, per) = x.segment(static_cast<Eigen::Index>(k) * per, per);
    return UnitaryParams(d, n, std::move(full));
  };

  std::vector<Eigen::VectorXd> starts;
  int fixed_evals = 0;
  int best_fixed = -1;
  double best_fixed_value = -std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    const ControlComb& cand = candidates[c];
    if (!(cand.grid() == grid)) throw InvalidInput("candidate comb grid does not match");
    if (cand.kept_indices() != keep) throw InvalidInput("candidate comb must be open exactly at the kept slots");
    if (cand.unitary_only()) {
      Eigen::VectorXd x(dim);
      for (std::size_t k = 0; k < plugged.size(); ++k)
        x.segment(static_cast<Eigen::Index>(k) * per, per) =
            params_from_unitary(std::get<UnitaryInsert>(cand.slots()[plugged[k]]).unitary);
      starts.push_back(std::move(x));
    } else {
      const double v = objective(cand);
      ++fixed_evals;
      if (std::isfinite(v) && v > best_fixed_value) {
        best_fixed_value = v;
        best_fixed = static_cast<int>(c);
      }
    }
  }

  const OptimizerConfig inner = remaining_config(cfg, fixed_evals);
  if (!starts.empty()) starts.insert(starts.begin(), Eigen::VectorXd::Zero(dim));
  const MaximizeResult m = maximize([&](const Eigen::VectorXd& x) { return objective(unitary_comb(grid, to_params(x), keep)); },
                                    dim, inner, starts, ceiling);

  EstimateResult out;
  out.seed = cfg.seed;
  out.trace = m.trace;
  out.evaluations_used = m.evaluations + fixed_evals;
  out.best_params = to_params(m.x);
  if (best_fixed >= 0 && best_fixed_value > m.value) {
    out.value = best_fixed_value;
    out.best_comb = candidates[best_fixed];
    out.candidate_index = best_fixed;
  } else {
    out.value = m.value;
    out.best_comb = unitary_comb(grid, out.best_params, keep);
  }
  return out;
}

}  // namespace

ControlComb unitary_comb(const TimeGrid& grid, const UnitaryParams& params, const std::vector<int>& keep) {
  if (params.slots() != grid.n()) throw InvalidInput("unitary_comb: parameter slots do not match the grid");
  return ControlComb::from_pulses(grid, params.unitaries(), keep);
}

double evaluate_comb(const ProcessTensor& t, const ControlComb& comb, Quantifier q) {
  return pick(quantify(apply_control_comb(t, comb)), q);
}

EstimateResult estimate_monotone(const ProcessTensor& t, const std::vector<int>& keep, Quantifier q,
                                 const OptimizerConfig& cfg, const std::vector<ControlComb>& candidates) {
  const int d = uniform_slot_dim(t, "estimate_monotone");
  std::optional<double> ceiling;
  if (keep.empty()) {
    // Channel: M = I = mutual information (at most 2 log2 d), N = 0.
    ceiling = q == Quantifier::N ? 0.0 : 2.0 * std::log2(static_cast<double>(std::min(t.legs().front(), t.legs().back())));
  }
  return optimize_combs(t.grid(), d, keep, [&](const ControlComb& c) { return evaluate_comb(t, c, q); }, cfg,
                        candidates, ceiling);
}

EstimateResult estimate_monotone(const ProcessTensor& t, const TimeGrid& keep, Quantifier q,
                                 const OptimizerConfig& cfg, const std::vector<ControlComb>& candidates) {
  return estimate_monotone(t, t.grid().indices_of(keep), q, cfg, candidates);
}

// ---------------------------------------------------------------------------

void check_block_schedule(const std::vector<int>& schedule, int n) {
  if (schedule.empty()) throw InvalidInput("block schedule is empty");
  for (std::size_t k = 0; k < schedule.size(); ++k) {
    const int b = schedule[k];
    if (b < 1 || n % b != 0) throw InvalidInput("block size " + std::to_string(b) + " does not divide n");
    if (k > 0 && (b >= schedule[k - 1] || schedule[k - 1] % b != 0))
      throw InvalidInput("block sizes must shrink and nest (each must divide the previous)");
  }
}

std::vector<int> default_block_schedule(int n) {
  if (n < 1) return {1};
  std::vector<int> s{n};
  while (s.back() > 1) {
    int b = s.back() - 1;
    while (s.back() % b != 0) --b;
    s.push_back(b);
  }
  return s;
}

double pulse_objective(const NoiseModel& model, const std::vector<CMatrix>& pulses) {
  return channel_mutual_information(simulate_channel(model, pulses));
}

namespace {

struct ModdOutcome {
  double value = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd x;  // per free slot, back to back
  std::vector<double> trace;
  int used = 0;
};

// Coarse-to-fine search over `n` free slots: at each level one shared unitary per
// block of consecutive free slots, starting from the incumbent.
ModdOutcome modd_core(int n, int d, std::vector<int> levels, const OptimizerConfig& cfg,
                      const std::vector<Eigen::VectorXd>& seeds, const std::function<double(const Eigen::VectorXd&)>& f,
                      std::optional<double> ceiling) {
  validate(cfg);
  const int per = UnitaryParams::per_slot(d);
  if (n > 0) {
    check_block_schedule(levels, n);
    if (levels.back() != 1) levels.push_back(1);
  } else {
    levels.clear();
  }

  ModdOutcome out;
  out.x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n) * per);
  auto reached = [&] { return ceiling && out.value >= *ceiling - 1e-12; };
  for (const auto& x : seeds) {
    const double v = f(x);
    ++out.used;
    if (std::isfinite(v) && v > out.value) {
      out.value = v;
      out.x = x;
    }
  }
  if (levels.empty()) {
    out.value = std::max(out.value, f(out.x));
    ++out.used;
  }

  const int stages = static_cast<int>(levels.size());
  for (int s = 0; s < stages && !reached(); ++s) {
    const int b = levels[s];
    const int blocks = n / b;
    const int dim = blocks * per;
    auto expand = [&](const Eigen::VectorXd& x) {
      Eigen::VectorXd slots(static_cast<Eigen::Index>(n) * per);
      for (int j = 0; j < n; ++j) slots.segment(static_cast<Eigen::Index>(j) * per, per) = x.segment((j / b) * per, per);
      return slots;
    };

    std::vector<Eigen::VectorXd> starts;
    if (s == 0) starts.push_back(Eigen::VectorXd::Zero(dim));
    if (std::isfinite(out.value)) {
      Eigen::VectorXd projected(dim);
      for (int k = 0; k < blocks; ++k)
        projected.segment(static_cast<Eigen::Index>(k) * per, per) = out.x.segment(static_cast<Eigen::Index>(k) * b * per, per);
      starts.push_back(std::move(projected));
    }

    OptimizerConfig stage = cfg;
    const int left = cfg.budget - out.used;
    stage.budget = std::max(1, s + 1 == stages ? left : left / (stages - s));
    stage.restarts = std::min(cfg.restarts, stage.budget);
    stage.seed = s == 0 ? cfg.seed : derive_seed(cfg.seed, static_cast<std::uint64_t>(s));

    const MaximizeResult m = maximize([&](const Eigen::VectorXd& x) { return f(expand(x)); }, dim, stage, starts, ceiling);
    out.used += m.evaluations;
    out.trace.insert(out.trace.end(), m.trace.begin(), m.trace.end());
    if (m.value > out.value) {
      out.value = m.value;
      out.x = expand(m.x);
    }
  }
  if (!std::isfinite(out.value)) throw OptimizerFailure("modd: no finite objective value");
  return out;
}

}  // namespace

EstimateResult modd_optimize(const NoiseModel& model, const std::vector<int>& block_schedule, const OptimizerConfig& cfg,
                             const std::vector<std::vector<CMatrix>>& seeds) {
  check_model(model);
  const int n = model.slots();
  const int d = model.d_sys;
  std::vector<Eigen::VectorXd> starts;
  for (const auto& seed : seeds) {
    if (static_cast<int>(seed.size()) != n) throw InvalidInput("modd_optimize: seed needs one pulse per slot");
    starts.push_back(UnitaryParams::from_unitaries(seed).values());
  }
  const ModdOutcome o = modd_core(
      n, d, block_schedule, cfg, starts,
      [&](const Eigen::VectorXd& x) { return pulse_objective(model, UnitaryParams(d, n, x).unitaries()); },
      2.0 * std::log2(static_cast<double>(d)));

  EstimateResult out;
  out.seed = cfg.seed;
  out.value = o.value;
  out.trace = o.trace;
  out.evaluations_used = o.used;
  out.best_params = UnitaryParams(d, n, o.x);
  out.best_comb = ControlComb::from_pulses(model.grid(), out.best_params.unitaries());
  return out;
}

EstimateResult modd_estimate(const NoiseModel& model, const std::vector<int>& keep, Quantifier q,
                             const std::vector<int>& block_schedule, const OptimizerConfig& cfg,
                             const std::vector<std::vector<CMatrix>>& seeds, const DenseLimits& limits) {
  check_model(model);
  const int n = model.slots();
  const int d = model.d_sys;
  const int per = UnitaryParams::per_slot(d);
  const std::vector<int> plugged = plugged_slots(n, keep);
  const int p = static_cast<int>(plugged.size());

  auto to_full = [&](const Eigen::VectorXd& x) {
    Eigen::VectorXd full = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n) * per);
    for (int k = 0; k < p; ++k)
      full.segment(static_cast<Eigen::Index>(plugged[k]) * per, per) = x.segment(static_cast<Eigen::Index>(k) * per, per);
    return UnitaryParams(d, n, std::move(full));
  };
  auto objective = [&](const Eigen::VectorXd& x) {
    return pick(quantify(build_process_tensor(dress_model(model, keep, to_full(x).unitaries()), limits)), q);
  };
  std::vector<Eigen::VectorXd> starts;
  for (const auto& seed : seeds) {
    if (static_cast<int>(seed.size()) != n) throw InvalidInput("modd_estimate: seed needs one pulse per slot");
    const Eigen::VectorXd all = UnitaryParams::from_unitaries(seed).values();
    Eigen::VectorXd x(static_cast<Eigen::Index>(p) * per);
    for (int k = 0; k < p; ++k)
      x.segment(static_cast<Eigen::Index>(k) * per, per) = all.segment(static_cast<Eigen::Index>(plugged[k]) * per, per);
    starts.push_back(std::move(x));
  }
  std::optional<double> ceiling;
  if (keep.empty()) ceiling = q == Quantifier::N ? 0.0 : 2.0 * std::log2(static_cast<double>(d));
  const ModdOutcome o = modd_core(p, d, block_schedule, cfg, starts, objective, ceiling);

  EstimateResult out;
  out.seed = cfg.seed;
  out.value = o.value;
  out.trace = o.trace;
  out.evaluations_used = o.used;
  out.best_params = to_full(o.x);
  out.best_comb = unitary_comb(model.grid(), out.best_params, keep);
  return out;
}

EstimateResult odd_optimize(const NoiseModel& model, const OptimizerConfig& cfg,
                            const std::vector<std::vector<CMatrix>>& seeds) {
  return modd_optimize(model, {1}, cfg, seeds);
}

// ---------------------------------------------------------------------------

double capped_relative_entropy(const CMatrix& a, const CMatrix& b, bool* capped) {
  const double v = relative_entropy(a, b);
  const bool clamp = !(v < kDivergenceCap);
  if (capped) *capped = clamp;
  return clamp ? kDivergenceCap : v;
}

EstimateResult reachable_divergence(const ProcessTensor& t, const ProcessTensor& r, const OptimizerConfig& cfg,
                                    const std::vector<ControlComb>& candidates) {
  if (!(t.grid() == r.grid()) || t.legs() != r.legs())
    throw InvalidInput("reachable_divergence: processes differ in grid or dimensions");
  const int d = uniform_slot_dim(t, "reachable_divergence");
  auto objective = [&](const ControlComb& c) {
    return capped_relative_entropy(apply_control_comb(t, c).choi(), apply_control_comb(r, c).choi());
  };
  EstimateResult out = optimize_combs(t.grid(), d, {}, objective, cfg, candidates, kDivergenceCap);
  out.capped = out.value >= kDivergenceCap;
  return out;
}

// ---------------------------------------------------------------------------

ControlComb embed_comb(const ControlComb& coarse, const TimeGrid& fine, int d) {
  const std::vector<int> at = fine.indices_of(coarse.grid());
  std::vector<SlotAction> slots(fine.n(), identity_channel(d));
  for (std::size_t k = 0; k < at.size(); ++k) slots[at[k]] = coarse.slots()[k];
  return ControlComb(std::move(slots), fine);
}

ControlComb product_comb(const ControlComb& a, const ControlComb& b) {
  if (!(a.grid() == b.grid())) throw InvalidInput("product_comb: grids differ");
  std::vector<SlotAction> slots;
  for (int j = 0; j < a.grid().n(); ++j) {
    const SlotAction& x = a.slots()[j];
    const SlotAction& y = b.slots()[j];
    const bool xo = std::holds_alternative<Open>(x), yo = std::holds_alternative<Open>(y);
    if (xo != yo) throw InvalidInput("product_comb: slot open in only one comb");
    if (xo) {
      slots.emplace_back(Open{});
    } else if (std::holds_alternative<UnitaryInsert>(x) && std::holds_alternative<UnitaryInsert>(y)) {
      slots.emplace_back(UnitaryInsert{kron(std::get<UnitaryInsert>(x).unitary, std::get<UnitaryInsert>(y).unitary)});
    } else {
      const ChannelChoi cx = as_channel(x), cy = as_channel(y);
      const CMatrix joint = permute_subsystems(kron(cx.choi, cy.choi), {cx.d_in, cx.d_out, cy.d_in, cy.d_out}, {0, 2, 1, 3});
      slots.emplace_back(ChannelChoi{joint, cx.d_in * cy.d_in, cx.d_out * cy.d_out});
    }
  }
  return ControlComb(std::move(slots), a.grid());
}

ControlComb induced_comb(const ControlComb& joint, int d_t, const std::vector<CMatrix>& free_outputs) {
  const int n = joint.grid().n();
  if (static_cast<int>(free_outputs.size()) != n) throw InvalidInput("induced_comb: need one free state per slot");
  std::vector<SlotAction> slots;
  for (int j = 0; j < n; ++j) {
    const SlotAction& s = joint.slots()[j];
    if (std::holds_alternative<Open>(s)) {
      slots.emplace_back(Open{});
      continue;
    }
    const ChannelChoi c = as_channel(s);
    const int d_f = static_cast<int>(free_outputs[j].rows());
    if (c.d_in != d_t * d_f || c.d_out != d_t * d_f) throw InvalidInput("induced_comb: dimension mismatch");
    CMatrix choi = CMatrix::Zero(d_t * d_t, d_t * d_t);
    for (int a = 0; a < d_t; ++a)
      for (int b = 0; b < d_t; ++b) {
        CMatrix e = CMatrix::Zero(d_t, d_t);
        e(a, b) = 1.0;
        const CMatrix out = apply_channel(c, kron(e, free_outputs[j]));
        choi.block(a * d_t, b * d_t, d_t, d_t) = partial_trace(out, {d_t, d_f}, {0}) / static_cast<double>(d_t);
      }
    slots.emplace_back(make_channel(hermitian_part(choi), d_t, d_t));
  }
  return ControlComb(std::move(slots), joint.grid());
}

// ---------------------------------------------------------------------------

QuantifierTriple delta_quantifiers(const ProcessTensor& t, const std::vector<int>& keep, const ControlComb& comb) {
  if (!(comb.grid() == t.grid())) throw InvalidInput("delta_quantifiers: comb grid does not match");
  if (comb.kept_indices() != keep) throw InvalidInput("delta_quantifiers: comb must be open exactly at the kept slots");
  return quantify(apply_control_comb(t, comb)) - quantify(coarse_grain(t, keep));
}

QuantifierTriple delta_quantifiers(const NoiseModel& model, const std::vector<int>& keep,
                                   const std::vector<CMatrix>& pulses, const DenseLimits& limits) {
  plugged_slots(model.slots(), keep);
  const std::vector<CMatrix> idle(model.slots(), CMatrix::Identity(model.d_sys, model.d_sys));
  const ProcessTensor with = build_process_tensor(dress_model(model, keep, pulses), limits);
  const ProcessTensor without = build_process_tensor(dress_model(model, keep, idle), limits);
  return quantify(with) - quantify(without);
}

// ---------------------------------------------------------------------------

namespace {

ChannelChoi random_channel(int d_in, int d_out, Rng& rng) {
  const int max_rank = std::max(1, d_in * d_out);
  int rank = std::uniform_int_distribution<int>(1, std::min(4, max_rank))(rng);
  while (d_out * rank < d_in) ++rank;
  return make_channel(random_channel_choi(d_in, d_out, rng, rank), d_in, d_out);
}

}  // namespace

SearchInstance sample_instance(const SearchConfig& cfg, int trial) {
  if (cfg.n < 1 || cfg.d_sys < 1 || cfg.d_env < 1) throw InvalidInput("search: bad dimensions");
  SearchInstance inst;
  inst.trial = trial;
  inst.trial_seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(trial));
  Rng rng(inst.trial_seed);
  const int ds = cfg.d_sys, de = cfg.d_env;

  // Half the models are classical reversible circuits on basis states, which
  // reach irreversible-looking dynamics that Haar draws almost never produce.
  std::bernoulli_distribution coin(0.5);
  const bool classical = coin(rng);
  std::vector<CMatrix> us;
  for (int k = 0; k <= cfg.n; ++k) us.push_back(classical ? random_permutation(ds * de, rng) : haar_unitary(ds * de, rng));
  CMatrix env;
  if (classical) {
    env = basis_state(de, std::uniform_int_distribution<int>(0, de - 1)(rng)).matrix();
  } else {
    const int env_rank = std::uniform_int_distribution<int>(1, de)(rng);
    env = random_density(de, rng, env_rank);
  }
  CMatrix sys0 = CMatrix::Zero(ds, ds);
  sys0(0, 0) = 1.0;
  inst.model = model_from_unitaries(ds, de, std::move(us), kron(sys0, env));

  for (int j = 0; j < cfg.n; ++j)
    if (coin(rng)) inst.keep.push_back(j);

  // Channels that reset to a basis state are the extreme non-unital case.
  auto reset = [&]() {
    return replacement_channel(ds, basis_state(ds, std::uniform_int_distribution<int>(0, ds - 1)(rng)).matrix());
  };
  std::uniform_int_distribution<int> kind(0, 3);
  std::uniform_int_distribution<int> anc(1, std::max(1, cfg.max_ancilla));
  for (int j = 0; j < cfg.n; ++j) {
    switch (kind(rng)) {
      case 0: inst.instruments.push_back(IqiSlot::identity(ds)); break;
      case 1: {
        const CMatrix before = haar_unitary(ds, rng);
        const CMatrix after = haar_unitary(ds, rng);
        inst.instruments.push_back(IqiSlot::unitaries(before, after));
        break;
      }
      case 2: inst.instruments.push_back({identity_channel(ds), reset(), 1}); break;
      default: {
        const int a = anc(rng);
        const ChannelChoi pre = random_channel(ds, ds * a, rng);
        const ChannelChoi post = random_channel(ds * a, ds, rng);
        inst.instruments.push_back({pre, post, a});
      }
    }
  }

  std::vector<SlotAction> inserts;
  for (int j = 0; j < cfg.n; ++j) {
    if (std::binary_search(inst.keep.begin(), inst.keep.end(), j)) {
      inserts.emplace_back(Open{});
      continue;
    }
    switch (kind(rng)) {
      case 0: inserts.emplace_back(identity_channel(ds)); break;
      case 1: inserts.emplace_back(UnitaryInsert{haar_unitary(ds, rng)}); break;
      case 2: inserts.emplace_back(reset()); break;
      default: inserts.emplace_back(random_channel(ds, ds, rng));
    }
  }
  inst.inserts = ControlComb(std::move(inserts), inst.model.grid());
  return inst;
}

SearchViolation evaluate_instance(const SearchInstance& inst) {
  const ProcessTensor t = build_process_tensor(inst.model);
  int cap = 1;
  for (const auto& s : inst.instruments) cap = std::max(cap, s.d_anc);
  const ProcessTensor transformed = apply_control_comb(apply_iqi_superprocess(t, inst.instruments, cap), inst.inserts);
  return {inst, quantify(t), quantify(transformed)};
}

CounterexampleReport search_I_nonmonotonicity(const SearchConfig& cfg) {
  if (cfg.trials < 0) throw InvalidInput("search: negative trial count");
  if (cfg.trials > 0 && cfg.n < 2) throw InvalidInput("search: need n >= 2");
  CounterexampleReport report;
  for (int k = 0; k < cfg.trials; ++k) {
    SearchViolation v = evaluate_instance(sample_instance(cfg, k));
    ++report.trials_run;
    const QuantifierTriple d = v.delta();
    report.violations_M += d.markov_M > cfg.threshold;
    report.violations_N += d.nonmarkov_N > cfg.threshold;
    if (d.total_I > cfg.threshold) {
      ++report.violations_I;
      if (!report.best || d.total_I > report.best->delta().total_I) report.best = std::move(v);
    }
  }
  return report;
}

}  // namespace ptmono
