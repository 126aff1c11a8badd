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


#include "ptmono/serialize.hpp"

#include <cstdio>

#include "ptmono/errors.hpp"

namespace ptmono {

namespace {

const Json& field(const Json& j, std::string_view key, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ConfigError(where + "." + std::string(key), "missing field");
  return *it;
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
T get(const Json& j, std::string_view key, const std::string& where) {
  return get_as<T>(field(j, key, where), where + "." + std::string(key));
}

}  // namespace

void check_fields(const Json& j, std::initializer_list<std::string_view> allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (auto a : allowed) ok = ok || it.key() == a;
    if (!ok) throw ConfigError(where + "." + it.key(), "unknown field");
  }
}

void check_schema_version(const Json& j, const std::string& where) {
  const int v = get<int>(j, "schema_version", where);
  if (v != kSchemaVersion)
    throw ConfigError(where + ".schema_version", "unsupported version " + std::to_string(v));
}

Json matrix_to_json(const CMatrix& m) {
  Json data = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back({m(r, c).real(), m(r, c).imag()});
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

CMatrix matrix_from_json(const Json& j, const std::string& where) {
  check_fields(j, {"rows", "cols", "data"}, where);
  const auto rows = get<Eigen::Index>(j, "rows", where);
  const auto cols = get<Eigen::Index>(j, "cols", where);
  const Json& data = field(j, "data", where);
  if (rows < 0 || cols < 0 || !data.is_array() || static_cast<Eigen::Index>(data.size()) != rows * cols)
    throw ConfigError(where + ".data", "expected rows * cols [re, im] pairs");
  CMatrix m(rows, cols);
  for (Eigen::Index k = 0; k < rows * cols; ++k) {
    const Json& p = data[static_cast<std::size_t>(k)];
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
      throw ConfigError(where + ".data[" + std::to_string(k) + "]", "expected [re, im]");
    m(k / cols, k % cols) = cd(p[0].get<double>(), p[1].get<double>());
  }
  return m;
}

Json grid_to_json(const TimeGrid& g) { return g.times(); }

TimeGrid grid_from_json(const Json& j, const std::string& where) {
  try {
    return TimeGrid(get_as<std::vector<double>>(j, where));
  } catch (const InvalidInput& e) {
    throw ConfigError(where, e.what());
  }
}

Json channel_to_json(const ChannelChoi& c) {
  return {{"d_in", c.d_in}, {"d_out", c.d_out}, {"choi", matrix_to_json(c.choi)}};
}

ChannelChoi channel_from_json(const Json& j, const std::string& where) {
  check_fields(j, {"d_in", "d_out", "choi"}, where);
  try {
    return make_channel(matrix_from_json(field(j, "choi", where), where + ".choi"), get<int>(j, "d_in", where),
                        get<int>(j, "d_out", where));
  } catch (const InvalidInput& e) {
    throw ConfigError(where, e.what());
  }
}

Json model_to_json(const NoiseModel& m) {
  Json j{{"schema_version", kSchemaVersion}, {"label", m.label},   {"d_sys", m.d_sys},
         {"d_env", m.d_env},                 {"seed", m.seed},     {"initial_se", matrix_to_json(m.initial_se)}};
  if (m.hamiltonian) {
    j["hamiltonian"] = matrix_to_json(*m.hamiltonian);
    j["durations"] = m.durations;
  } else {
    Json props = Json::array();
    for (const auto& u : m.propagators) props.push_back(matrix_to_json(u));
    j["propagators"] = std::move(props);
  }
  return j;
}

NoiseModel model_from_json(const Json& j, const std::string& where) {
  check_fields(j, {"schema_version", "label", "d_sys", "d_env", "seed", "initial_se", "hamiltonian", "durations",
                   "propagators"},
               where);
  check_schema_version(j, where);
  const int d_sys = get<int>(j, "d_sys", where);
  const int d_env = get<int>(j, "d_env", where);
  const CMatrix se = matrix_from_json(field(j, "initial_se", where), where + ".initial_se");
  const bool has_h = j.contains("hamiltonian");
  if (has_h == j.contains("propagators"))
    throw ConfigError(where, "give exactly one of hamiltonian (with durations) or propagators");
  NoiseModel m;
  try {
    if (has_h) {
      m = model_from_hamiltonian(d_sys, d_env, matrix_from_json(j["hamiltonian"], where + ".hamiltonian"),
                                 get<std::vector<double>>(j, "durations", where), se);
    } else {
      if (j.contains("durations")) throw ConfigError(where + ".durations", "only used with a hamiltonian");
      const Json& props = field(j, "propagators", where);
      if (!props.is_array()) throw ConfigError(where + ".propagators", "expected a list");
      std::vector<CMatrix> us;
      for (std::size_t k = 0; k < props.size(); ++k)
        us.push_back(matrix_from_json(props[k], where + ".propagators[" + std::to_string(k) + "]"));
      m = model_from_unitaries(d_sys, d_env, std::move(us), se);
    }
  } catch (const InvalidInput& e) {
    throw ConfigError(where, e.what());
  }
  if (j.contains("label")) m.label = get<std::string>(j, "label", where);
  if (j.contains("seed")) m.seed = get<std::uint64_t>(j, "seed", where);
  return m;
}

Json comb_to_json(const ControlComb& c) {
  Json slots = Json::array();
  for (const auto& s : c.slots()) {
    if (std::holds_alternative<Open>(s))
      slots.push_back("open");
    else if (const auto* u = std::get_if<UnitaryInsert>(&s))
      slots.push_back({{"unitary", matrix_to_json(u->unitary)}});
    else
      slots.push_back({{"channel", channel_to_json(std::get<ChannelChoi>(s))}});
  }
  return {{"schema_version", kSchemaVersion}, {"grid", grid_to_json(c.grid())}, {"slots", std::move(slots)}};
}

ControlComb comb_from_json(const Json& j, const std::string& where) {
  check_fields(j, {"schema_version", "grid", "slots"}, where);
  check_schema_version(j, where);
  const TimeGrid grid = grid_from_json(field(j, "grid", where), where + ".grid");
  const Json& slots = field(j, "slots", where);
  if (!slots.is_array()) throw ConfigError(where + ".slots", "expected a list");
  std::vector<SlotAction> actions;
  for (std::size_t k = 0; k < slots.size(); ++k) {
    const std::string at = where + ".slots[" + std::to_string(k) + "]";
    const Json& s = slots[k];
    if (s.is_string() && s.get<std::string>() == "open") {
      actions.emplace_back(Open{});
    } else if (s.is_object() && s.size() == 1 && s.contains("unitary")) {
      actions.emplace_back(UnitaryInsert{matrix_from_json(s["unitary"], at + ".unitary")});
    } else if (s.is_object() && s.size() == 1 && s.contains("channel")) {
      actions.emplace_back(channel_from_json(s["channel"], at + ".channel"));
    } else {
      throw ConfigError(at, "expected \"open\", {\"unitary\": ...} or {\"channel\": ...}");
    }
  }
  try {
    return ControlComb(std::move(actions), grid);
  } catch (const InvalidInput& e) {
    throw ConfigError(where, e.what());
  }
}

Json estimate_to_json(const EstimateResult& r) {
  const UnitaryParams& p = r.best_params;
  std::vector<double> values(p.values().data(), p.values().data() + p.values().size());
  return {{"schema_version", kSchemaVersion},
          {"value", r.value},
          {"capped", r.capped},
          {"seed", r.seed},
          {"evaluations_used", r.evaluations_used},
          {"candidate_index", r.candidate_index},
          {"trace", r.trace},
          {"params", {{"d", p.d()}, {"slots", p.slots()}, {"values", std::move(values)}}},
          {"comb", comb_to_json(r.best_comb)}};
}

EstimateResult estimate_from_json(const Json& j, const std::string& where) {
  check_fields(j, {"schema_version", "value", "capped", "seed", "evaluations_used", "candidate_index", "trace", "params",
                   "comb"},
               where);
  check_schema_version(j, where);
  EstimateResult r;
  r.value = get<double>(j, "value", where);
  r.capped = get<bool>(j, "capped", where);
  r.seed = get<std::uint64_t>(j, "seed", where);
  r.evaluations_used = get<int>(j, "evaluations_used", where);
  r.candidate_index = get<int>(j, "candidate_index", where);
  r.trace = get<std::vector<double>>(j, "trace", where);
  const Json& p = field(j, "params", where);
  check_fields(p, {"d", "slots", "values"}, where + ".params");
  const auto values = get<std::vector<double>>(p, "values", where + ".params");
  try {
    r.best_params = UnitaryParams(get<int>(p, "d", where + ".params"), get<int>(p, "slots", where + ".params"),
                                  Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size())));
  } catch (const InvalidInput& e) {
    throw ConfigError(where + ".params", e.what());
  }
  r.best_comb = comb_from_json(field(j, "comb", where), where + ".comb");
  return r;
}

Json triple_to_json(const QuantifierTriple& t) {
  return {{"I", t.total_I}, {"M", t.markov_M}, {"N", t.nonmarkov_N}};
}

Json instance_to_json(const SearchInstance& s) {
  Json instruments = Json::array();
  for (const auto& slot : s.instruments)
    instruments.push_back({{"d_anc", slot.d_anc}, {"pre", channel_to_json(slot.pre)}, {"post", channel_to_json(slot.post)}});
  return {{"schema_version", kSchemaVersion},
          {"trial", s.trial},
          {"trial_seed", s.trial_seed},
          {"keep", s.keep},
          {"model", model_to_json(s.model)},
          {"instruments", std::move(instruments)},
          {"inserts", comb_to_json(s.inserts)}};
}

SearchInstance instance_from_json(const Json& j, const std::string& where) {
  check_fields(j, {"schema_version", "trial", "trial_seed", "keep", "model", "instruments", "inserts"}, where);
  check_schema_version(j, where);
  SearchInstance s;
  s.trial = get<int>(j, "trial", where);
  s.trial_seed = get<std::uint64_t>(j, "trial_seed", where);
  s.keep = get<std::vector<int>>(j, "keep", where);
  s.model = model_from_json(field(j, "model", where), where + ".model");
  const Json& ins = field(j, "instruments", where);
  if (!ins.is_array()) throw ConfigError(where + ".instruments", "expected a list");
  for (std::size_t k = 0; k < ins.size(); ++k) {
    const std::string at = where + ".instruments[" + std::to_string(k) + "]";
    check_fields(ins[k], {"d_anc", "pre", "post"}, at);
    s.instruments.push_back({channel_from_json(field(ins[k], "pre", at), at + ".pre"),
                             channel_from_json(field(ins[k], "post", at), at + ".post"), get<int>(ins[k], "d_anc", at)});
  }
  s.inserts = comb_from_json(field(j, "inserts", where), where + ".inserts");
  return s;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace ptmono
