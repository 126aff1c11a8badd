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


#include <cmath>
#include <sstream>

#include "doctest.h"
#include "ptmono/errors.hpp"
#include "ptmono/experiment.hpp"

using namespace ptmono;

namespace {

ExperimentConfig config(const std::string& text, RunOptions opts = {}) {
  return make_experiment_config(parse_config_text(text), opts);
}

std::string field_of(const std::string& text, RunOptions opts = {}) {
  try {
    config(text, opts);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "<no error>";
}

double cell(const ExperimentOutput& out, int row, const std::string& column) {
  const auto& cols = out.table.columns;
  const auto at = std::find(cols.begin(), cols.end(), column) - cols.begin();
  return std::stod(out.table.rows.at(row).at(at));
}

const char* kZeroCoupling = R"({
  "schema_version": 1, "kind": "quantify",
  "model": {"builtin": "static_dephasing", "params": {"g": 0}},
  "grid": {"n": 1}
})";

}  // namespace

TEST_CASE("default kept slots") {
  CHECK(default_keep(6, 2) == std::vector<int>{1, 4});
  CHECK(default_keep(15, 3) == std::vector<int>{3, 7, 11});
  CHECK(default_keep(6, 0).empty());
  CHECK_THROWS_AS(default_keep(2, 3), InvalidInput);
}

TEST_CASE("rescaling to a total time keeps the duration proportions") {
  const NoiseModel m = builtin_model({.name = "static_dephasing", .n_slots = 4, .tau = 1.0});
  const NoiseModel t = at_total_time(m, 10.0);
  double sum = 0;
  for (double d : t.durations) sum += d;
  CHECK(sum == doctest::Approx(10.0));
  CHECK(t.durations.front() / t.durations[1] == doctest::Approx(0.5));
  CHECK_THROWS_AS(at_total_time(model_from_unitaries(2, 2, m.propagators), 1.0), InvalidInput);
}

TEST_CASE("config text allows comments and reports syntax errors by line") {
  CHECK_NOTHROW(parse_config_text("// note\n{\"a\": 1}"));
  try {
    parse_config_text("{\n\"a\": 1\n\"b\": 2}");
    FAIL("expected an error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("schema violations name the field") {
  CHECK(field_of(R"({"schema_version": 1, "kind": "quantify", "model": {"builtin": "static_dephasing"},
                     "grid": {"n": 2, "tua": 0.5}})") == "grid.tua");
  CHECK(field_of(R"({"schema_version": 2, "kind": "quantify"})") == "config.schema_version");
  CHECK(field_of(R"({"schema_version": 1, "kind": "quantify", "model": {"builtin": "static_dephasing"},
                     "optimize": {}})") == "optimize");
  CHECK(field_of(R"({"schema_version": 1, "kind": "optimize", "model": {"builtin": "static_dephasing"},
                     "optimizer": {"budget": 1, "restarts": 4}})") == "optimizer.budget");
  CHECK(field_of(R"({"schema_version": 1, "kind": "sweep_time", "model": {"builtin": "static_dephasing"},
                     "sweep_time": {"times": [1, -2]}})") == "sweep_time.times");
  CHECK(field_of(R"({"schema_version": 1, "kind": "quantify", "model": {"builtin": "no_such_model"}})") == "model");
  CHECK(field_of(R"({"schema_version": 1, "kind": "walk"})") == "kind");
}

TEST_CASE("desk slot limit and paper scale") {
  const std::string big = R"({"schema_version": 1, "kind": "quantify", "model": {"builtin": "static_dephasing"},
                              "grid": {"n": 9}})";
  CHECK(field_of(big) == "grid.n");
  std::ostringstream log;
  RunOptions opts;
  opts.paper_scale = true;
  opts.log = &log;
  const ExperimentConfig c = config(R"({"schema_version": 1, "kind": "delta_sweep",
      "model": {"builtin": "static_dephasing"}, "grid": {"n": 6}, "delta_sweep": {"keep": [1, 4]}})", opts);
  CHECK(resolve_model(c.model).slots() == kPaperSlots);
  CHECK(c.sweep.keep_count == kPaperKept);
  CHECK_FALSE(c.sweep.keep.has_value());
  CHECK(log.str().find("warning") != std::string::npos);
}

TEST_CASE("config hash ignores key order and follows overrides") {
  const ExperimentConfig a = config(R"({"schema_version": 1, "kind": "quantify", "seed": 3,
                                        "model": {"builtin": "static_dephasing"}})");
  const ExperimentConfig b = config(R"({"model": {"builtin": "static_dephasing"}, "seed": 3,
                                        "kind": "quantify", "schema_version": 1})");
  CHECK(a.config_hash == b.config_hash);
  RunOptions o;
  o.seed = 4;
  const ExperimentConfig c = config(R"({"schema_version": 1, "kind": "quantify", "seed": 3,
                                        "model": {"builtin": "static_dephasing"}})", o);
  CHECK(c.seed == 4);
  CHECK(c.config_hash != a.config_hash);
}

TEST_CASE("quantify: zero coupling gives I = M = 4 and N = 0") {
  const ExperimentOutput out = run_experiment(config(kZeroCoupling), {});
  CHECK(cell(out, 0, "I") == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(cell(out, 0, "M") == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(std::abs(cell(out, 0, "N")) < 1e-9);
  CHECK(cell(out, 0, "comb_passed") == 1);
}

TEST_CASE("quantify: emitted row obeys I = M + N") {
  const ExperimentOutput out = run_experiment(config(R"({"schema_version": 1, "kind": "quantify",
      "model": {"builtin": "static_dephasing", "params": {"env_field": 0.5}}, "grid": {"n": 2, "tau": 0.7}})"), {});
  CHECK(std::abs(cell(out, 0, "I") - cell(out, 0, "M") - cell(out, 0, "N")) < 1e-8);
  CHECK(out.document["result"]["quantifiers"]["I"].get<double>() == cell(out, 0, "I"));
}

TEST_CASE("rendered tables carry the hash line and the header") {
  Table t{{"a", "b"}, {{"1", "2"}}};
  CHECK(t.render("00ff") == "# config-hash: 00ff\na,b\n1,2\n");
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(-INFINITY) == "-inf");
}

TEST_CASE("sweep over time: zero coupling gives two bits for every strategy") {
  const ExperimentOutput out = run_experiment(config(R"({"schema_version": 1, "kind": "sweep_time",
      "model": {"builtin": "static_dephasing", "params": {"g": 0}}, "grid": {"n": 4},
      "optimizer": {"budget": 40, "restarts": 1}, "sweep_time": {"times": [1, 5]}})"), {});
  REQUIRE(out.table.rows.size() == 10);
  for (int r = 0; r < 10; ++r) CHECK(cell(out, r, "mutual_information") == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(out.table.rows[4][1] == "modd");
}

TEST_CASE("delta sweep rows obey additivity per strategy") {
  const ExperimentOutput out = run_experiment(config(R"({"schema_version": 1, "kind": "delta_sweep",
      "model": {"builtin": "static_dephasing", "params": {"env_field": 0.5}}, "grid": {"n": 4},
      "optimizer": {"budget": 80, "restarts": 2}, "delta_sweep": {"times": [2, 6], "keep_count": 1}})"), {});
  REQUIRE(out.table.rows.size() == 2);
  for (int r = 0; r < 2; ++r) {
    CHECK(std::abs(cell(out, r, "dI_DD") - cell(out, r, "dM_DD") - cell(out, r, "dN_DD")) < 1e-8);
    CHECK(std::abs(cell(out, r, "dI_MODD") - cell(out, r, "dM_MODD") - cell(out, r, "dN_MODD")) < 1e-8);
    CHECK(cell(out, r, "dI_MODD") >= cell(out, r, "dI_DD") - 1e-12);
  }
}

TEST_CASE("counterexample: zero trials is not found") {
  const ExperimentOutput out = run_experiment(config(R"({"schema_version": 1, "kind": "counterexample_search",
      "counterexample_search": {"trials": 0}})"), {});
  CHECK(out.not_found);
  CHECK_FALSE(out.document["result"].contains("recipe"));
}

TEST_CASE("counterexample: a found violation replays bit-exactly") {
  const ExperimentOutput out = run_experiment(config(R"({"schema_version": 1, "kind": "counterexample_search",
      "seed": 7, "counterexample_search": {"d_env": 4, "trials": 800}})"), {});
  REQUIRE_FALSE(out.not_found);
  const Json doc = Json::parse(out.document.dump());
  const SearchViolation v = replay_counterexample(doc);
  CHECK(v.delta().total_I == doc["result"]["best"]["delta"]["I"].get<double>());
  CHECK(v.delta().total_I > 1e-3);
  const SearchInstance s = instance_from_json(doc["result"]["best"]["instance"]);
  CHECK(evaluate_instance(s).delta().total_I == v.delta().total_I);
}

TEST_CASE("outputs do not depend on the thread count") {
  const std::string text = R"({"schema_version": 1, "kind": "sweep_time", "seed": 5,
      "model": {"builtin": "static_dephasing", "params": {"env_field": 0.5}}, "grid": {"n": 3},
      "optimizer": {"budget": 60, "restarts": 2}, "sweep_time": {"times": [1, 2, 3]}})";
  const ExperimentConfig c = config(text);
  RunOptions many;
  many.threads = 3;
  const ExperimentOutput a = run_experiment(c, {});
  const ExperimentOutput b = run_experiment(c, many);
  CHECK(a.table.render(c.config_hash) == b.table.render(c.config_hash));
  CHECK(a.document.dump() == b.document.dump());
}

TEST_CASE("divergence needs a reference model") {
  CHECK(field_of(R"({"schema_version": 1, "kind": "divergence", "model": {"builtin": "static_dephasing"},
                     "grid": {"n": 1}})") == "divergence.reference");
  const ExperimentOutput out = run_experiment(config(R"({"schema_version": 1, "kind": "divergence",
      "model": {"builtin": "static_dephasing"}, "grid": {"n": 1}, "optimizer": {"budget": 30, "restarts": 1},
      "divergence": {"reference": {"builtin": "static_dephasing"}}})"), {});
  CHECK(std::abs(cell(out, 0, "divergence")) < 1e-9);
}
