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

// Belinda's sealed states, her verification measurement, and Charlie's
// honest unsealing measurement for each protocol.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sealed/qstate.hpp"

namespace sealed {

class OaepContext;

enum class Protocol { naive, garbage, multipicture, oaep };

std::string to_string(Protocol protocol);
Protocol protocol_from_string(const std::string &name);

struct Message {
    std::string text;

    Label label() const { return Label(text); }
    auto operator<=>(const Message &) const = default;
};

/// Charlie's honest measurement: pre_unitary on C, then the projective
/// partition. `decode` maps each outcome to the message it reveals, or to
/// nullopt for outcomes that reveal nothing (garbage, or tokens only a human
/// can read).
struct UnsealSpec {
    LocalUnitary pre_unitary;
    ProjPartition partition;
    std::map<Label, std::optional<Message>> decode;
};

struct NaiveParams {
    Message message;
    Label garbage;
};

struct GarbageParams {
    Message message;
    std::vector<Label> garbage_set;
};

struct MultipictureParams {
    std::vector<Message> pictures;
};

/// Bit lengths obey n = k - k0.
struct OaepParams {
    int k = 24;
    int k0 = 8;
    int n = 16;

    bool operator==(const OaepParams &) const = default;
};

/// Key identifiers for G, H and the CAPTCHA permutation f.
struct OaepKeyIds {
    std::string g_key = "sealed-state/G/v1";
    std::string h_key = "sealed-state/H/v1";
    std::string f_key = "sealed-state/f/v1";

    bool operator==(const OaepKeyIds &) const = default;
};

struct OaepSealParams {
    OaepParams params;
    OaepKeyIds keys;
    std::uint64_t y = 0;
};

using ProtocolParams = std::variant<NaiveParams, GarbageParams, MultipictureParams, OaepSealParams>;

struct SealedInstance {
    Protocol protocol;
    ProtocolParams params;
    SparseState reference;
    UnsealSpec unseal;
    double completeness_error = 0.0;

    /// Messages Charlie could legitimately recover.
    std::vector<Message> messages() const;
    /// C labels of the reference state plus any extra labels in the unseal
    /// unitary's basis (caller-supplied ancillas).
    std::set<Label> active_c_labels() const;
};

SealedInstance seal_naive(const Message &m, const Label &garbage);
SealedInstance seal_garbage(const Message &m, const std::vector<Label> &garbage_set);
SealedInstance seal_multipicture(const std::vector<Message> &pictures);

/// B label used for picture i (1-based) of a multipicture instance.
Label picture_index_label(std::size_t i);

struct UnsealResult {
    std::optional<Message> message;  // nullopt: garbage outcome
    bool success = false;
    Label outcome;
};

/// Runs the instance's unseal spec once. OAEP instances need a context with
/// human access and are delegated to unseal_oaep; passing none raises
/// oracle_unavailable.
UnsealResult honest_unseal(const SealedInstance &inst, std::uint64_t rng_seed, OaepContext *oaep = nullptr);

/// Exact probability that honest_unseal succeeds (no human needed: the
/// decode table, or 1 for OAEP where the human always succeeds).
double honest_success_probability(const SealedInstance &inst);

struct Verdict {
    bool believe = false;
    double accept_probability = 0.0;
};

Verdict verify_return(const SealedInstance &inst, const Ensemble &returned, std::uint64_t rng_seed);

}  // namespace sealed
