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


#include "ptmono/experiment.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>
#include <thread>

#include "ptmono/errors.hpp"
#include "ptmono/random.hpp"

namespace ptmono {

namespace {

const Json* find_key(const Json& j, std::string_view key) {
  auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

template <typename T>
T get_as(const Json& j, const std::string& where) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(where, e.what());
  }
}

template <typename T>
T get_or(const Json& j, std::string_view key, const std::string& where, T fallback) {
  const Json* v = find_key(j, key);
  return v ? get_as<T>(*v, where + "." + std::string(key)) : fallback;
}

template <typename T>
T get_req(const Json& j, std::string_view key, const std::string& where) {
  const Json* v = find_key(j, key);
  if (!v) throw ConfigError(where + "." + std::string(key), "missing field");
  return get_as<T>(*v, where + "." + std::string(key));
}

const char* section_name(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::quantify: return "quantify";
    case ExperimentKind::optimize: return "optimize";
    case ExperimentKind::sweep_time: return "sweep_time";
    case ExperimentKind::delta_sweep: return "delta_sweep";
    case ExperimentKind::counterexample_search: return "counterexample_search";
    case ExperimentKind::divergence: return "divergence";
  }
  return "";
}

// Replaces {"file": p} by {"inline": <document>} so the effective config is self-contained.
ModelSource parse_model_source(Json& j, const Json* grid, const std::string& where, const std::string& base_dir) {
  if (!j.is_object()) throw ConfigError(where, "expected an object");
  ModelSource src;
  if (j.contains("file")) {
    check_fields(j, {"file"}, where);
    auto path = std::filesystem::path(get_as<std::string>(j["file"], where + ".file"));
    if (path.is_relative()) path = std::filesystem::path(base_dir) / path;
    Json loaded = load_config_file(path.string());
    j = Json{{"inline", std::move(loaded)}};
  }
  if (j.contains("inline")) {
    check_fields(j, {"inline"}, where);
    src.model = model_from_json(j["inline"], where + ".inline");
    if (grid) {
      check_fields(*grid, {"n"}, "grid");
      const int n = get_req<int>(*grid, "n", "grid");
      if (n != src.model->slots())
        throw ConfigError("grid.n", "model has " + std::to_string(src.model->slots()) + " slots");
    }
    return src;
  }
  check_fields(j, {"builtin", "params", "env_state", "layout", "d_sys", "d_env", "seed"}, where);
  ModelSpec spec;
  spec.name = get_req<std::string>(j, "builtin", where);
  if (const Json* p = find_key(j, "params")) {
    if (!p->is_object()) throw ConfigError(where + ".params", "expected an object");
    for (auto it = p->begin(); it != p->end(); ++it)
      spec.params[it.key()] = get_as<double>(it.value(), where + ".params." + it.key());
  }
  if (j.contains("env_state")) spec.env_state = get_as<std::string>(j["env_state"], where + ".env_state");
  if (j.contains("layout")) spec.layout = get_as<std::string>(j["layout"], where + ".layout");
  spec.d_sys = get_or<int>(j, "d_sys", where, 2);
  if (j.contains("d_env")) spec.d_env = get_as<int>(j["d_env"], where + ".d_env");
  spec.seed = get_or<std::uint64_t>(j, "seed", where, 0);
  const Json empty = Json::object();
  const Json& g = grid ? *grid : empty;
  check_fields(g, {"n", "tau", "durations"}, "grid");
  spec.n_slots = get_or<int>(g, "n", "grid", kDeskMaxSlots);
  spec.tau = get_or<double>(g, "tau", "grid", 0.5);
  if (g.contains("durations")) spec.durations = get_as<std::vector<double>>(g["durations"], "grid.durations");
  if (spec.n_slots < 1) throw ConfigError("grid.n", "need at least one slot");
  try {
    builtin_model(spec);
  } catch (const InvalidInput& e) {
    throw ConfigError(where, e.what());
  }
  src.builtin = std::move(spec);
  return src;
}

OptimizerConfig parse_optimizer(const Json* j) {
  OptimizerConfig c;
  if (!j) return c;
  const std::string w = "optimizer";
  check_fields(*j, {"method", "budget", "restarts", "initial_step", "shrink", "tolerance", "start_spread"}, w);
  if (j->contains("method")) {
    try {
      c.method = parse_optimizer_method(get_as<std::string>((*j)["method"], w + ".method"));
    } catch (const InvalidInput& e) {
      throw ConfigError(w + ".method", e.what());
    }
  }
  c.budget = get_or<int>(*j, "budget", w, c.budget);
  c.restarts = get_or<int>(*j, "restarts", w, c.restarts);
  c.initial_step = get_or<double>(*j, "initial_step", w, c.initial_step);
  c.shrink = get_or<double>(*j, "shrink", w, c.shrink);
  c.tolerance = get_or<double>(*j, "tolerance", w, c.tolerance);
  c.start_spread = get_or<double>(*j, "start_spread", w, c.start_spread);
  validate(c);
  return c;
}

std::optional<std::vector<int>> optional_ints(const Json& j, std::string_view key, const std::string& where) {
  if (!j.contains(key)) return std::nullopt;
  return get_as<std::vector<int>>(j[std::string(key)], where + "." + std::string(key));
}

void parse_times(const Json& j, const std::string& where, SweepSection& s) {
  if (!j.contains("times")) return;
  s.times = get_as<std::vector<double>>(j["times"], where + ".times");
  if (s.times.empty()) throw ConfigError(where + ".times", "need at least one time");
  for (double t : s.times)
    if (!(t > 0) || !std::isfinite(t)) throw ConfigError(where + ".times", "times must be positive and finite");
}

void for_each_point(int count, int threads, const std::function<void(int)>& fn) {
  if (threads <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> pool;
  for (int w = 0; w < std::min(threads, count); ++w)
    pool.emplace_back([&] {
      for (int i; (i = next++) < count;) {
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::string format_flag(bool b) { return b ? "1" : "0"; }

std::vector<CMatrix> identity_pulses(int n, int d) { return std::vector<CMatrix>(n, CMatrix::Identity(d, d)); }

std::vector<int> schedule_for(const std::optional<std::vector<int>>& given, int plugged) {
  if (given) return *given;
  return plugged > 0 ? default_block_schedule(plugged) : std::vector<int>{1};
}

void check_additivity(const QuantifierTriple& t, const std::string& what) {
  if (t.additivity_defect() >= 1e-8) throw NumericalFailure(what + ": I != M + N beyond 1e-8");
}

Json triple_json(const QuantifierTriple& t) { return triple_to_json(t); }

// ---------------------------------------------------------------------------

ExperimentOutput run_quantify(const ExperimentConfig& cfg) {
  const ProcessTensor t = build_process_tensor(resolve_model(cfg.model));
  const QuantifierReport r = quantify_detailed(t);
  const CombReport c = validate_comb(t);
  ExperimentOutput out;
  out.table.columns = {"I", "M", "N", "S_T", "S_markov", "S_marginal", "comb_max_residual", "comb_min_eigenvalue",
                       "comb_trace_error", "comb_passed"};
  out.table.rows.push_back({format_double(r.triple.total_I), format_double(r.triple.markov_M),
                            format_double(r.triple.nonmarkov_N), format_double(r.entropy_T),
                            format_double(r.entropy_markov), format_double(r.entropy_marginal),
                            format_double(c.max_residual()), format_double(c.min_eigenvalue),
                            format_double(c.trace_error), format_flag(c.passed)});
  const auto& row = out.table.rows.back();
  const QuantifierTriple written{std::stod(row[0]), std::stod(row[1]), std::stod(row[2])};
  check_additivity(written, "quantify row");
  out.document = {{"quantifiers", triple_json(r.triple)},
                  {"entropies", {{"S_T", r.entropy_T}, {"S_markov", r.entropy_markov}, {"S_marginal", r.entropy_marginal}}},
                  {"comb",
                   {{"passed", c.passed},
                    {"level_residuals", c.level_residuals},
                    {"min_eigenvalue", c.min_eigenvalue},
                    {"trace_error", c.trace_error}}}};
  return out;
}

ExperimentOutput run_optimize(const ExperimentConfig& cfg) {
  const NoiseModel m = resolve_model(cfg.model);
  const OptimizeSection& o = cfg.optimize;
  OptimizerConfig oc = cfg.optimizer;
  oc.seed = cfg.seed;
  EstimateResult e;
  if (o.algorithm == "estimate") {
    e = estimate_monotone(build_process_tensor(m), o.keep, o.quantifier, oc);
  } else {
    const int plugged = m.slots() - static_cast<int>(o.keep.size());
    const std::vector<int> sched = o.algorithm == "odd" ? std::vector<int>{1} : schedule_for(o.schedule, plugged);
    if (o.keep.empty() && o.quantifier == Quantifier::I)
      e = modd_optimize(m, sched, oc);
    else
      e = modd_estimate(m, o.keep, o.quantifier, sched, oc);
  }
  ExperimentOutput out;
  out.table.columns = {"quantifier", "algorithm", "value", "evaluations", "capped", "candidate_index"};
  out.table.rows.push_back({to_string(o.quantifier), o.algorithm, format_double(e.value),
                            std::to_string(e.evaluations_used), format_flag(e.capped),
                            std::to_string(e.candidate_index)});
  out.document = {{"keep", o.keep}, {"estimate", estimate_to_json(e)}};
  return out;
}

ExperimentOutput run_sweep_time(const ExperimentConfig& cfg, const RunOptions& opts) {
  const NoiseModel base = resolve_model(cfg.model);
  const SweepSection& s = cfg.sweep;
  const int count = static_cast<int>(s.times.size());
  const std::string cdd_name = "cdd" + std::to_string(s.cdd_level);
  struct Point {
    double none = 0, xzxz = 0, cdd = 0;
    bool cdd_truncated = false;
    EstimateResult odd, modd;
  };
  std::vector<Point> points(count);
  for_each_point(count, opts.threads, [&](int i) {
    const NoiseModel m = at_total_time(base, s.times[i]);
    const int n = m.slots();
    Point& p = points[i];
    const auto xz = dd_sequence(DDKind::xzxz, 1, n);
    const auto cdd = dd_sequence(DDKind::cdd, s.cdd_level, n);
    p.none = pulse_objective(m, identity_pulses(n, m.d_sys));
    p.xzxz = pulse_objective(m, xz.unitaries);
    p.cdd = pulse_objective(m, cdd.unitaries);
    p.cdd_truncated = cdd.truncated;
    OptimizerConfig oc = cfg.optimizer;
    oc.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(i));
    p.odd = odd_optimize(m, oc, {xz.unitaries, cdd.unitaries});
    p.modd = modd_optimize(m, schedule_for(s.schedule, n), oc, {xz.unitaries, cdd.unitaries, p.odd.best_params.unitaries()});
  });
  ExperimentOutput out;
  out.table.columns = {"time", "strategy", "mutual_information", "evaluations"};
  Json pts = Json::array();
  for (int i = 0; i < count; ++i) {
    const Point& p = points[i];
    const std::string t = format_double(s.times[i]);
    out.table.rows.push_back({t, "none", format_double(p.none), "1"});
    out.table.rows.push_back({t, "xzxz", format_double(p.xzxz), "1"});
    out.table.rows.push_back({t, cdd_name, format_double(p.cdd), "1"});
    out.table.rows.push_back({t, "odd", format_double(p.odd.value), std::to_string(p.odd.evaluations_used)});
    out.table.rows.push_back({t, "modd", format_double(p.modd.value), std::to_string(p.modd.evaluations_used)});
    pts.push_back({{"time", s.times[i]},
                   {"none", p.none},
                   {"xzxz", p.xzxz},
                   {cdd_name, p.cdd},
                   {"cdd_truncated", p.cdd_truncated},
                   {"odd", estimate_to_json(p.odd)},
                   {"modd", estimate_to_json(p.modd)}});
  }
  out.document = {{"points", std::move(pts)}};
  return out;
}

ExperimentOutput run_delta_sweep(const ExperimentConfig& cfg, const RunOptions& opts) {
  const NoiseModel base = resolve_model(cfg.model);
  const SweepSection& s = cfg.sweep;
  const int n = base.slots();
  const std::vector<int> keep = s.keep ? *s.keep : default_keep(n, s.keep_count);
  const std::vector<int> sched = schedule_for(s.schedule, n - static_cast<int>(keep.size()));
  const int count = static_cast<int>(s.times.size());
  struct Point {
    QuantifierTriple dd, modd;
    EstimateResult est;
  };
  std::vector<Point> points(count);
  for_each_point(count, opts.threads, [&](int i) {
    const NoiseModel m = at_total_time(base, s.times[i]);
    const auto xz = dd_sequence(DDKind::xzxz, 1, n).unitaries;
    OptimizerConfig oc = cfg.optimizer;
    oc.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(i));
    Point& p = points[i];
    p.dd = delta_quantifiers(m, keep, xz);
    p.est = modd_estimate(m, keep, Quantifier::I, sched, oc, {xz});
    p.modd = delta_quantifiers(m, keep, p.est.best_params.unitaries());
    check_additivity(p.dd, "delta sweep (DD)");
    check_additivity(p.modd, "delta sweep (MODD)");
  });
  ExperimentOutput out;
  out.table.columns = {"time", "dI_DD", "dM_DD", "dN_DD", "dI_MODD", "dM_MODD", "dN_MODD"};
  Json pts = Json::array();
  for (int i = 0; i < count; ++i) {
    const Point& p = points[i];
    out.table.rows.push_back({format_double(s.times[i]), format_double(p.dd.total_I), format_double(p.dd.markov_M),
                              format_double(p.dd.nonmarkov_N), format_double(p.modd.total_I),
                              format_double(p.modd.markov_M), format_double(p.modd.nonmarkov_N)});
    pts.push_back({{"time", s.times[i]},
                   {"delta_DD", triple_json(p.dd)},
                   {"delta_MODD", triple_json(p.modd)},
                   {"modd", estimate_to_json(p.est)}});
  }
  out.document = {{"keep", keep}, {"schedule", sched}, {"points", std::move(pts)}};
  return out;
}

Json search_to_json(const SearchConfig& s) {
  return {{"d_sys", s.d_sys}, {"d_env", s.d_env},         {"n", s.n},
          {"trials", s.trials}, {"threshold", s.threshold}, {"max_ancilla", s.max_ancilla}};
}

SearchConfig search_from_json(const Json& j, const std::string& where) {
  check_fields(j, {"d_sys", "d_env", "n", "trials", "threshold", "max_ancilla"}, where);
  SearchConfig s;
  s.d_sys = get_or<int>(j, "d_sys", where, s.d_sys);
  s.d_env = get_or<int>(j, "d_env", where, 4);
  s.n = get_or<int>(j, "n", where, s.n);
  s.trials = get_or<int>(j, "trials", where, s.trials);
  s.threshold = get_or<double>(j, "threshold", where, s.threshold);
  s.max_ancilla = get_or<int>(j, "max_ancilla", where, s.max_ancilla);
  if (s.trials < 0) throw ConfigError(where + ".trials", "must be non-negative");
  if (s.d_sys < 1 || s.d_env < 1) throw ConfigError(where, "dimensions must be positive");
  if (s.trials > 0 && s.n < 2) throw ConfigError(where + ".n", "need n >= 2");
  if (s.max_ancilla < 1 || s.max_ancilla > kDefaultAncillaCap)
    throw ConfigError(where + ".max_ancilla", "must lie in [1, " + std::to_string(kDefaultAncillaCap) + "]");
  return s;
}

// Trials run on the worker pool; the aggregate matches search_I_nonmonotonicity exactly.
ExperimentOutput run_counterexample(const ExperimentConfig& cfg, const RunOptions& opts) {
  SearchConfig sc = cfg.search;
  sc.seed = cfg.seed;
  std::vector<QuantifierTriple> deltas(sc.trials);
  const int chunk = 64;
  const int chunks = (sc.trials + chunk - 1) / chunk;
  for_each_point(chunks, opts.threads, [&](int c) {
    for (int k = c * chunk; k < std::min(sc.trials, (c + 1) * chunk); ++k)
      deltas[k] = evaluate_instance(sample_instance(sc, k)).delta();
  });
  CounterexampleReport r;
  int best = -1;
  for (int k = 0; k < sc.trials; ++k) {
    ++r.trials_run;
    const QuantifierTriple& d = deltas[k];
    r.violations_M += d.markov_M > sc.threshold;
    r.violations_N += d.nonmarkov_N > sc.threshold;
    if (d.total_I > sc.threshold) {
      ++r.violations_I;
      if (best < 0 || d.total_I > deltas[best].total_I) best = k;
    }
  }
  if (best >= 0) r.best = evaluate_instance(sample_instance(sc, best));

  ExperimentOutput out;
  out.not_found = !r.found();
  out.table.columns = {"trials", "violations_I", "violations_M", "violations_N", "found",
                       "best_dI", "best_dM", "best_dN", "trial", "trial_seed"};
  std::vector<std::string> row{std::to_string(r.trials_run), std::to_string(r.violations_I),
                               std::to_string(r.violations_M), std::to_string(r.violations_N), format_flag(r.found())};
  Json doc = {{"trials_run", r.trials_run},
              {"violations_I", r.violations_I},
              {"violations_M", r.violations_M},
              {"violations_N", r.violations_N},
              {"found", r.found()}};
  if (r.best) {
    const QuantifierTriple d = r.best->delta();
    for (double v : {d.total_I, d.markov_M, d.nonmarkov_N}) row.push_back(format_double(v));
    row.push_back(std::to_string(r.best->instance.trial));
    row.push_back(std::to_string(r.best->instance.trial_seed));
    doc["best"] = {{"before", triple_json(r.best->before)},
                   {"after", triple_json(r.best->after)},
                   {"delta", triple_json(d)},
                   {"instance", instance_to_json(r.best->instance)}};
    doc["recipe"] = {{"search", search_to_json(sc)}, {"seed", sc.seed}, {"trial", r.best->instance.trial}};
  } else {
    for (int k = 0; k < 5; ++k) row.push_back("");
  }
  out.table.rows.push_back(std::move(row));
  out.document = std::move(doc);
  return out;
}

ExperimentOutput run_divergence(const ExperimentConfig& cfg) {
  const ProcessTensor t = build_process_tensor(resolve_model(cfg.model));
  const ProcessTensor r = build_process_tensor(resolve_model(cfg.reference));
  OptimizerConfig oc = cfg.optimizer;
  oc.seed = cfg.seed;
  const EstimateResult e = reachable_divergence(t, r, oc);
  ExperimentOutput out;
  out.table.columns = {"divergence", "capped", "evaluations"};
  out.table.rows.push_back({format_double(e.value), format_flag(e.capped), std::to_string(e.evaluations_used)});
  out.document = {{"estimate", estimate_to_json(e)}};
  return out;
}

}  // namespace

ExperimentKind parse_experiment_kind(const std::string& name) {
  std::string k = name;
  for (char& c : k)
    if (c == '-') c = '_';
  if (k == "quantify") return ExperimentKind::quantify;
  if (k == "optimize") return ExperimentKind::optimize;
  if (k == "sweep_time") return ExperimentKind::sweep_time;
  if (k == "delta_sweep") return ExperimentKind::delta_sweep;
  if (k == "counterexample_search" || k == "counterexample") return ExperimentKind::counterexample_search;
  if (k == "divergence") return ExperimentKind::divergence;
  throw ConfigError("kind", "unknown experiment kind '" + name + "'");
}

std::string to_string(ExperimentKind k) { return section_name(k); }

Json parse_config_text(const std::string& text) {
  try {
    return Json::parse(text, nullptr, true, true);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config", e.what());
  }
}

Json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot read file");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config_text(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path, e.what());
  }
}

std::string config_hash(const Json& doc) {
  return hex64(fnv1a64(nlohmann::json::parse(doc.dump()).dump()));
}

std::vector<int> default_keep(int n, int m) {
  if (m < 0 || m > n) throw InvalidInput("default_keep: need 0 <= m <= n");
  std::vector<int> keep;
  for (int k = 1; k <= m; ++k) {
    const int label = static_cast<int>(std::lround(static_cast<double>(k) * (n + 1) / (m + 1)));
    keep.push_back(std::clamp(label, 1, n) - 1);
  }
  return keep;
}

NoiseModel at_total_time(const NoiseModel& m, double total) {
  if (!m.hamiltonian) throw InvalidInput("at_total_time: model has no Hamiltonian");
  if (!(total > 0)) throw InvalidInput("at_total_time: total time must be positive");
  double sum = 0;
  for (double t : m.durations) sum += t;
  std::vector<double> durations = m.durations;
  for (double& t : durations) t *= total / sum;
  NoiseModel out = model_from_hamiltonian(m.d_sys, m.d_env, *m.hamiltonian, std::move(durations), m.initial_se);
  out.seed = m.seed;
  out.label = m.label;
  return out;
}

NoiseModel resolve_model(const ModelSource& src) {
  if (src.model) return *src.model;
  if (src.builtin) return builtin_model(*src.builtin);
  throw ConfigError("model", "missing model");
}

ExperimentConfig make_experiment_config(Json doc, const RunOptions& opts, const std::string& base_dir) {
  if (!doc.is_object()) throw ConfigError("config", "expected an object");
  ExperimentConfig cfg;
  check_schema_version(doc, "config");
  cfg.kind = parse_experiment_kind(get_req<std::string>(doc, "kind", "config"));
  const std::string section = section_name(cfg.kind);
  const bool needs_model = cfg.kind != ExperimentKind::counterexample_search;
  const bool has_section = cfg.kind != ExperimentKind::quantify;
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    const std::string& k = it.key();
    const bool ok = k == "schema_version" || k == "kind" || k == "seed" || k == "output" || k == "optimizer" ||
                    (needs_model && (k == "model" || k == "grid")) || (has_section && k == section);
    if (!ok) throw ConfigError(k, "unknown field for kind " + section);
  }
  if (opts.seed) doc["seed"] = *opts.seed;
  cfg.seed = get_or<std::uint64_t>(doc, "seed", "config", 0);
  cfg.output = get_or<std::string>(doc, "output", "config", "");
  cfg.optimizer = parse_optimizer(find_key(doc, "optimizer"));

  if (opts.paper_scale && needs_model) {
    if (doc.contains("model") && doc["model"].is_object() && doc["model"].contains("builtin")) {
      if (!doc.contains("grid")) doc["grid"] = Json::object();
      doc["grid"]["n"] = kPaperSlots;
      if (doc["grid"].contains("durations")) doc["grid"].erase("durations");
    }
    if (doc.contains(section) && doc[section].is_object()) doc[section].erase("schedule");
    if (cfg.kind == ExperimentKind::delta_sweep) {
      if (!doc.contains(section)) doc[section] = Json::object();
      doc[section].erase("keep");
      doc[section]["keep_count"] = kPaperKept;
    }
    if (opts.log)
      *opts.log << "warning: --paper-scale: " << kPaperSlots << " slots"
                << (cfg.kind == ExperimentKind::delta_sweep ? ", 3 kept" : "")
                << "; runtimes grow to minutes per point\n";
  }

  if (needs_model) {
    if (!doc.contains("model")) throw ConfigError("model", "missing field");
    const Json* grid = find_key(doc, "grid");
    cfg.model = parse_model_source(doc["model"], grid, "model", base_dir);
    const NoiseModel m = resolve_model(cfg.model);
    if (m.slots() > kDeskMaxSlots && !opts.paper_scale)
      throw ConfigError(cfg.model.builtin ? "grid.n" : "model",
                        std::to_string(m.slots()) + " slots exceeds the desk limit " + std::to_string(kDeskMaxSlots) +
                            "; pass --paper-scale");
    const bool sweep = cfg.kind == ExperimentKind::sweep_time || cfg.kind == ExperimentKind::delta_sweep;
    if (sweep && !m.hamiltonian) throw ConfigError("model", "time sweeps need a Hamiltonian model");
  }

  const Json empty = Json::object();
  const Json& sec = doc.contains(section) ? doc[section] : empty;
  switch (cfg.kind) {
    case ExperimentKind::quantify:
      break;
    case ExperimentKind::optimize: {
      check_fields(sec, {"quantifier", "keep", "algorithm", "schedule"}, section);
      OptimizeSection& o = cfg.optimize;
      try {
        o.quantifier = parse_quantifier(get_or<std::string>(sec, "quantifier", section, "I"));
      } catch (const InvalidInput& e) {
        throw ConfigError(section + ".quantifier", e.what());
      }
      o.keep = get_or<std::vector<int>>(sec, "keep", section, {});
      o.algorithm = get_or<std::string>(sec, "algorithm", section, "modd");
      if (o.algorithm != "modd" && o.algorithm != "odd" && o.algorithm != "estimate")
        throw ConfigError(section + ".algorithm", "expected modd, odd or estimate");
      o.schedule = optional_ints(sec, "schedule", section);
      break;
    }
    case ExperimentKind::sweep_time: {
      check_fields(sec, {"times", "cdd_level", "schedule"}, section);
      parse_times(sec, section, cfg.sweep);
      cfg.sweep.cdd_level = get_or<int>(sec, "cdd_level", section, 2);
      if (cfg.sweep.cdd_level < 1) throw ConfigError(section + ".cdd_level", "must be at least 1");
      cfg.sweep.schedule = optional_ints(sec, "schedule", section);
      break;
    }
    case ExperimentKind::delta_sweep: {
      check_fields(sec, {"times", "keep_count", "keep", "schedule"}, section);
      parse_times(sec, section, cfg.sweep);
      cfg.sweep.keep_count = get_or<int>(sec, "keep_count", section, 2);
      cfg.sweep.keep = optional_ints(sec, "keep", section);
      if (cfg.sweep.keep && sec.contains("keep_count"))
        throw ConfigError(section + ".keep", "give keep or keep_count, not both");
      const int n = resolve_model(cfg.model).slots();
      if (!cfg.sweep.keep && (cfg.sweep.keep_count < 0 || cfg.sweep.keep_count > n))
        throw ConfigError(section + ".keep_count", "must lie in [0, n]");
      cfg.sweep.schedule = optional_ints(sec, "schedule", section);
      break;
    }
    case ExperimentKind::counterexample_search:
      cfg.search = search_from_json(sec, section);
      break;
    case ExperimentKind::divergence: {
      check_fields(sec, {"reference"}, section);
      if (!doc.contains(section) || !doc[section].contains("reference"))
        throw ConfigError(section + ".reference", "missing field");
      cfg.reference = parse_model_source(doc[section]["reference"], find_key(doc, "grid"), section + ".reference", base_dir);
      break;
    }
  }
  cfg.document = std::move(doc);
  cfg.config_hash = config_hash(cfg.document);
  return cfg;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string Table::render(const std::string& hash) const {
  std::string s = "# config-hash: " + hash + "\n";
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t k = 0; k < cells.size(); ++k) s += (k ? "," : "") + cells[k];
    s += "\n";
  };
  line(columns);
  for (const auto& r : rows) line(r);
  return s;
}

ExperimentOutput run_experiment(const ExperimentConfig& cfg, const RunOptions& opts) {
  ExperimentOutput out;
  switch (cfg.kind) {
    case ExperimentKind::quantify: out = run_quantify(cfg); break;
    case ExperimentKind::optimize: out = run_optimize(cfg); break;
    case ExperimentKind::sweep_time: out = run_sweep_time(cfg, opts); break;
    case ExperimentKind::delta_sweep: out = run_delta_sweep(cfg, opts); break;
    case ExperimentKind::counterexample_search: out = run_counterexample(cfg, opts); break;
    case ExperimentKind::divergence: out = run_divergence(cfg); break;
  }
  Json result = std::move(out.document);
  out.document = {{"schema_version", kSchemaVersion},
                  {"kind", to_string(cfg.kind)},
                  {"config_hash", cfg.config_hash},
                  {"seed", cfg.seed},
                  {"config", cfg.document},
                  {"result", std::move(result)}};
  return out;
}

void write_outputs(const ExperimentOutput& out, const std::string& hash, const std::string& prefix) {
  const auto parent = std::filesystem::path(prefix).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  auto write = [](const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("output", "cannot write " + path);
    f << text;
  };
  write(prefix + ".csv", out.table.render(hash));
  write(prefix + ".json", out.document.dump(2) + "\n");
}

SearchViolation replay_counterexample(const Json& document) {
  const std::string where = "report.result.recipe";
  const Json* result = find_key(document, "result");
  if (!result || !result->contains("recipe")) throw ConfigError(where, "report has no reproduction recipe");
  const Json& recipe = (*result)["recipe"];
  check_fields(recipe, {"search", "seed", "trial"}, where);
  SearchConfig sc = search_from_json(recipe["search"], where + ".search");
  sc.seed = get_req<std::uint64_t>(recipe, "seed", where);
  return evaluate_instance(sample_instance(sc, get_req<int>(recipe, "trial", where)));
}

}  // namespace ptmono
