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

#include "sealed/protocols.hpp"

#include <cmath>
#include <set>

#include "sealed/error.hpp"
#include "sealed/oaep.hpp"

namespace sealed {

std::string to_string(Protocol protocol) {
    switch (protocol) {
    case Protocol::naive: return "naive";
    case Protocol::garbage: return "garbage";
    case Protocol::multipicture: return "multipicture";
    case Protocol::oaep: return "oaep";
    }
    return "unknown";
}

Protocol protocol_from_string(const std::string &name) {
    for (Protocol p : {Protocol::naive, Protocol::garbage, Protocol::multipicture, Protocol::oaep})
        if (to_string(p) == name) return p;
    throw Error(ErrorCode::parse_error, "unknown protocol '" + name + "'");
}

std::vector<Message> SealedInstance::messages() const {
    std::vector<Message> out;
    for (const auto &[outcome, decoded] : unseal.decode)
        if (decoded) out.push_back(*decoded);
    return out;
}

std::set<Label> SealedInstance::active_c_labels() const {
    auto labels = reference.c_labels();
    labels.insert(unseal.pre_unitary.basis().begin(), unseal.pre_unitary.basis().end());
    return labels;
}

namespace {

void require_message(const Message &m) {
    if (m.text.empty()) throw Error(ErrorCode::empty_message, "message text is empty");
}

// Identity unitary + one outcome per C label; decode says which labels are
// messages.
UnsealSpec basis_unseal(const SparseState &reference, const std::map<Label, std::optional<Message>> &decode) {
    const auto labels = reference.c_labels();
    return UnsealSpec{LocalUnitary::identity({labels.begin(), labels.end()}), ProjPartition::finest(labels), decode};
}

}  // namespace

SealedInstance seal_naive(const Message &m, const Label &garbage) {
    require_message(m);
    if (garbage == m.label()) throw Error(ErrorCode::label_collision, "garbage label equals the message label");
    const double amp = 1.0 / std::sqrt(2.0);
    auto reference = SparseState::from_amplitudes({{{garbage, garbage}, amp}, {{m.label(), m.label()}, amp}});
    auto unseal = basis_unseal(reference, {{garbage, std::nullopt}, {m.label(), m}});
    return SealedInstance{Protocol::naive, NaiveParams{m, garbage}, std::move(reference), std::move(unseal)};
}

SealedInstance seal_garbage(const Message &m, const std::vector<Label> &garbage_set) {
    require_message(m);
    if (garbage_set.empty()) throw Error(ErrorCode::empty_garbage_set, "garbage set is empty");
    const std::set<Label> distinct(garbage_set.begin(), garbage_set.end());
    if (distinct.size() != garbage_set.size() || distinct.contains(m.label()))
        throw Error(ErrorCode::label_collision, "garbage labels must be distinct and differ from the message");

    const double half = 1.0 / std::sqrt(2.0);
    const double garbage_amp = half / std::sqrt(static_cast<double>(garbage_set.size()));
    SparseState::AmplitudeMap amps{{{m.label(), m.label()}, half}};
    std::map<Label, std::optional<Message>> decode{{m.label(), m}};
    for (const auto &g : garbage_set) {
        amps.emplace(LabelPair{g, g}, garbage_amp);
        decode.emplace(g, std::nullopt);
    }
    auto reference = SparseState::from_amplitudes(std::move(amps));
    auto unseal = basis_unseal(reference, decode);
    return SealedInstance{Protocol::garbage, GarbageParams{m, garbage_set}, std::move(reference), std::move(unseal)};
}

Label picture_index_label(std::size_t i) { return Label(std::to_string(i)); }

SealedInstance seal_multipicture(const std::vector<Message> &pictures) {
    if (pictures.size() < 2) throw Error(ErrorCode::too_few_pictures, "need at least two pictures");
    std::set<Message> distinct;
    for (const auto &p : pictures) {
        require_message(p);
        if (!distinct.insert(p).second) throw Error(ErrorCode::duplicate_picture, "picture '" + p.text + "' repeated");
    }

    const double amp = 1.0 / std::sqrt(static_cast<double>(pictures.size()));
    SparseState::AmplitudeMap amps;
    std::map<Label, std::optional<Message>> decode;
    for (std::size_t i = 0; i < pictures.size(); ++i) {
        amps.emplace(LabelPair{picture_index_label(i + 1), pictures[i].label()}, amp);
        decode.emplace(pictures[i].label(), pictures[i]);
    }
    auto reference = SparseState::from_amplitudes(std::move(amps));
    auto unseal = basis_unseal(reference, decode);
    return SealedInstance{Protocol::multipicture, MultipictureParams{pictures}, std::move(reference),
                          std::move(unseal)};
}

UnsealResult honest_unseal(const SealedInstance &inst, std::uint64_t rng_seed, OaepContext *oaep) {
    if (inst.protocol == Protocol::oaep) {
        if (oaep == nullptr) throw Error(ErrorCode::oracle_unavailable, "OAEP unsealing needs a human oracle");
        const auto recovered = unseal_oaep(inst, *oaep, rng_seed);
        const auto &params = std::get<OaepSealParams>(inst.params);
        return UnsealResult{Message{to_hex(recovered.y, params.params.n)}, true, recovered.measured_b};
    }

    const auto rotated = apply_unitary_c(inst.reference, inst.unseal.pre_unitary);
    const auto measured = measure_partition(rotated, inst.unseal.partition, rng_seed);
    const auto it = inst.unseal.decode.find(measured.outcome);
    std::optional<Message> message = it == inst.unseal.decode.end() ? std::nullopt : it->second;
    const bool success = message.has_value();
    return UnsealResult{std::move(message), success, measured.outcome};
}

double honest_success_probability(const SealedInstance &inst) {
    if (inst.protocol == Protocol::oaep) return 1.0;
    const auto rotated = apply_unitary_c(inst.reference, inst.unseal.pre_unitary);
    double p = 0.0;
    for (const auto &[outcome, branch] : measurement_branches(rotated, inst.unseal.partition)) {
        const auto it = inst.unseal.decode.find(outcome);
        if (it != inst.unseal.decode.end() && it->second) p += branch.probability;
    }
    return p;
}

Verdict verify_return(const SealedInstance &inst, const Ensemble &returned, std::uint64_t rng_seed) {
    const double accept = project_accept_probability(inst.reference, returned);
    return Verdict{seeded_uniform(rng_seed) < accept, accept};
}

}  // namespace sealed
