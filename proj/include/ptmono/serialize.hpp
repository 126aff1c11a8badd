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


// JSON documents for models, combs, estimates and search instances. Complex
// matrices are {"rows", "cols", "data"} with data a row-major list of
// [re, im] pairs, in the Kronecker order of the object's legs.

#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>

#include "json.hpp"
#include "ptmono/monotones.hpp"

namespace ptmono {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Throws ConfigError naming `where`.key for any key not in `allowed`.
void check_fields(const Json& j, std::initializer_list<std::string_view> allowed, const std::string& where);
/// Throws ConfigError unless `where` carries schema_version == kSchemaVersion.
void check_schema_version(const Json& j, const std::string& where);

Json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const Json& j, const std::string& where);

Json grid_to_json(const TimeGrid& g);
TimeGrid grid_from_json(const Json& j, const std::string& where);

Json channel_to_json(const ChannelChoi& c);
ChannelChoi channel_from_json(const Json& j, const std::string& where);

Json model_to_json(const NoiseModel& m);
NoiseModel model_from_json(const Json& j, const std::string& where = "model");

/// Slots are "open", {"unitary": M} or {"channel": C}.
Json comb_to_json(const ControlComb& c);
ControlComb comb_from_json(const Json& j, const std::string& where = "comb");

Json estimate_to_json(const EstimateResult& r);
EstimateResult estimate_from_json(const Json& j, const std::string& where = "estimate");

Json triple_to_json(const QuantifierTriple& t);

Json instance_to_json(const SearchInstance& s);
SearchInstance instance_from_json(const Json& j, const std::string& where = "instance");

std::uint64_t fnv1a64(std::string_view bytes);
/// 16 lowercase hex digits.
std::string hex64(std::uint64_t v);

}  // namespace ptmono
