// Copyright 2026 The Sealed State Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "sealed/adversary.hpp"
#include "sealed/oaep.hpp"
#include "sealed/protocols.hpp"
#include "sealed/qstate.hpp"

namespace sealed {

using Json = nlohmann::json;

inline constexpr double kLoadNormTolerance = 1e-6;

/// {"amps": [[b, c, re, im], ...]}
Json to_json(const SparseState &s);
/// Accepts a squared norm within kLoadNormTolerance of 1 and renormalizes
/// when it is off by more than kNormTolerance; rejects anything else.
SparseState state_from_json(const Json &j);

/// {"members": [{"weight": q, "state": {...}}, ...]}. A bare state object is
/// read as a weight-1 ensemble.
Json to_json(const Ensemble &e);
Ensemble ensemble_from_json(const Json &j);

/// {protocol, params, reference, partition, decode, pre_unitary,
/// completeness_error}
Json to_json(const SealedInstance &inst);
SealedInstance instance_from_json(const Json &j);

/// {strategy, p, p_bound, s, bound, margin, outcome_table}
Json to_json(const CheatReport &report);

/// {k, k0, n, g_key, h_key, f_key}
Json to_json(const OaepContext &ctx);
OaepContext oaep_context_from_json(const Json &j, bool with_human);
/// Context matching an OAEP instance's recorded parameters and key ids.
OaepContext oaep_context_for(const SealedInstance &inst, bool with_human);

Json read_json_file(const std::filesystem::path &path);
void write_text_file(const std::filesystem::path &path, const std::string &text);

}  // namespace sealed
