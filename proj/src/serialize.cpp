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

#include "sealed/serialize.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "sealed/error.hpp"

namespace sealed {

namespace {

template <typename F>
auto guarded(const char *what, F &&parse) {
    try {
        return parse();
    } catch (const nlohmann::json::exception &e) {
        throw Error(ErrorCode::parse_error, std::string(what) + ": " + e.what());
    }
}

std::uint64_t parse_hex_field(const Json &j) {
    const auto text = j.get<std::string>();
    std::size_t used = 0;
    const auto value = std::stoull(text, &used, 16);
    if (used != text.size()) throw Error(ErrorCode::parse_error, "bad hex '" + text + "'");
    return value;
}

}  // namespace

Json to_json(const SparseState &s) {
    Json amps = Json::array();
    for (const auto &[key, amp] : s.amplitudes())
        amps.push_back(Json::array({key.first.str(), key.second.str(), amp.real(), amp.imag()}));
    return Json{{"amps", std::move(amps)}};
}

SparseState state_from_json(const Json &j) {
    auto amps = guarded("state", [&] {
        SparseState::AmplitudeMap out;
        for (const auto &entry : j.at("amps")) {
            if (entry.size() != 4) throw Error(ErrorCode::parse_error, "amplitude entries have four fields");
            LabelPair key{Label(entry[0].get<std::string>()), Label(entry[1].get<std::string>())};
            out[key] += Complex(entry[2].get<double>(), entry[3].get<double>());
        }
        return out;
    });
    double norm = 0.0;
    for (const auto &[key, amp] : amps) norm += std::norm(amp);
    if (std::abs(norm - 1.0) > kLoadNormTolerance)
        throw Error(ErrorCode::invalid_state, "loaded state has squared norm " + std::to_string(norm));
    if (std::abs(norm - 1.0) > kNormTolerance) return SparseState::normalized(std::move(amps));
    return SparseState::from_amplitudes(std::move(amps));
}

Json to_json(const Ensemble &e) {
    Json members = Json::array();
    for (const auto &m : e.members()) members.push_back(Json{{"weight", m.weight}, {"state", to_json(m.state)}});
    return Json{{"members", std::move(members)}};
}

Ensemble ensemble_from_json(const Json &j) {
    if (j.contains("amps")) return Ensemble::pure(state_from_json(j));
    return guarded("ensemble", [&] {
        std::vector<Ensemble::Member> members;
        for (const auto &m : j.at("members")) members.push_back({m.at("weight").get<double>(), state_from_json(m.at("state"))});
        return Ensemble(std::move(members));
    });
}

namespace {

Json params_to_json(const ProtocolParams &params) {
    return std::visit(
        [](const auto &p) -> Json {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, NaiveParams>) {
                return {{"message", p.message.text}, {"garbage", p.garbage.str()}};
            } else if constexpr (std::is_same_v<T, GarbageParams>) {
                Json set = Json::array();
                for (const auto &g : p.garbage_set) set.push_back(g.str());
                return {{"message", p.message.text}, {"garbage_set", std::move(set)}};
            } else if constexpr (std::is_same_v<T, MultipictureParams>) {
                Json pictures = Json::array();
                for (const auto &m : p.pictures) pictures.push_back(m.text);
                return {{"pictures", std::move(pictures)}};
            } else {
                return {{"k", p.params.k},         {"k0", p.params.k0},       {"n", p.params.n},
                        {"y", to_hex(p.y, p.params.n)}, {"g_key", p.keys.g_key}, {"h_key", p.keys.h_key},
                        {"f_key", p.keys.f_key}};
            }
        },
        params);
}

ProtocolParams params_from_json(Protocol protocol, const Json &j) {
    switch (protocol) {
    case Protocol::naive:
        return NaiveParams{Message{j.at("message").get<std::string>()}, Label(j.at("garbage").get<std::string>())};
    case Protocol::garbage: {
        GarbageParams p{Message{j.at("message").get<std::string>()}, {}};
        for (const auto &g : j.at("garbage_set")) p.garbage_set.emplace_back(g.get<std::string>());
        return p;
    }
    case Protocol::multipicture: {
        MultipictureParams p;
        for (const auto &m : j.at("pictures")) p.pictures.push_back(Message{m.get<std::string>()});
        return p;
    }
    case Protocol::oaep: {
        OaepSealParams p;
        p.params = OaepParams{j.at("k").get<int>(), j.at("k0").get<int>(), j.at("n").get<int>()};
        p.keys = OaepKeyIds{j.at("g_key").get<std::string>(), j.at("h_key").get<std::string>(),
                            j.at("f_key").get<std::string>()};
        p.y = parse_hex_field(j.at("y"));
        return p;
    }
    }
    throw Error(ErrorCode::parse_error, "unknown protocol");
}

Json unitary_to_json(const LocalUnitary &u) {
    Json basis = Json::array();
    for (const auto &label : u.basis()) basis.push_back(label.str());
    if (u.is_identity()) return Json{{"basis", std::move(basis)}, {"identity", true}};
    const ComplexMatrix &m = u.matrix();
    Json matrix = Json::array();
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) matrix.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
    return Json{{"basis", std::move(basis)}, {"matrix", std::move(matrix)}};
}

LocalUnitary unitary_from_json(const Json &j) {
    std::vector<Label> basis;
    for (const auto &label : j.at("basis")) basis.emplace_back(label.get<std::string>());
    if (j.value("identity", false)) return LocalUnitary::identity(std::move(basis));
    const auto &entries = j.at("matrix");
    if (entries.size() != basis.size() * basis.size())
        throw Error(ErrorCode::length_mismatch, "unitary matrix size does not match its basis");
    ComplexMatrix m(basis.size(), basis.size());
    for (std::size_t i = 0; i < entries.size(); ++i)
        m(i / basis.size(), i % basis.size()) = Complex(entries[i].at(0).get<double>(), entries[i].at(1).get<double>());
    return LocalUnitary(std::move(basis), std::move(m));
}

}  // namespace

Json to_json(const SealedInstance &inst) {
    Json partition = Json::array();
    for (const auto &[label, outcome] : inst.unseal.partition.outcome_of())
        partition.push_back(Json::array({label.str(), outcome.str()}));
    Json decode = Json::array();
    for (const auto &[outcome, message] : inst.unseal.decode)
        decode.push_back(Json::array({outcome.str(), message ? Json(message->text) : Json(nullptr)}));
    return Json{{"protocol", to_string(inst.protocol)},
                {"params", params_to_json(inst.params)},
                {"reference", to_json(inst.reference)},
                {"pre_unitary", unitary_to_json(inst.unseal.pre_unitary)},
                {"partition", std::move(partition)},
                {"decode", std::move(decode)},
                {"completeness_error", inst.completeness_error}};
}

SealedInstance instance_from_json(const Json &j) {
    return guarded("instance", [&] {
        const Protocol protocol = protocol_from_string(j.at("protocol").get<std::string>());
        std::map<Label, Label> outcome_of;
        for (const auto &entry : j.at("partition"))
            outcome_of.emplace(Label(entry.at(0).get<std::string>()), Label(entry.at(1).get<std::string>()));
        std::map<Label, std::optional<Message>> decode;
        for (const auto &entry : j.at("decode")) {
            std::optional<Message> message;
            if (!entry.at(1).is_null()) message = Message{entry.at(1).get<std::string>()};
            decode.emplace(Label(entry.at(0).get<std::string>()), std::move(message));
        }
        return SealedInstance{protocol,
                              params_from_json(protocol, j.at("params")),
                              state_from_json(j.at("reference")),
                              UnsealSpec{unitary_from_json(j.at("pre_unitary")), ProjPartition(std::move(outcome_of)),
                                         std::move(decode)},
                              j.value("completeness_error", 0.0)};
    });
}

Json to_json(const CheatReport &report) {
    Json table = Json::array();
    for (const auto &row : report.outcome_table)
        table.push_back(Json{{"outcome", row.outcome.str()}, {"q", row.probability}, {"acceptance", row.acceptance}});
    return Json{{"strategy", report.strategy}, {"p", report.p},           {"p_bound", report.p_bound},
                {"s", report.s},               {"bound", report.bound},   {"margin", report.margin()},
                {"outcome_table", std::move(table)}};
}

Json to_json(const OaepContext &ctx) {
    const auto &p = ctx.params();
    return Json{{"k", p.k},
                {"k0", p.k0},
                {"n", p.n},
                {"g_key", ctx.keys().g_key},
                {"h_key", ctx.keys().h_key},
                {"f_key", ctx.keys().f_key}};
}

OaepContext oaep_context_from_json(const Json &j, bool with_human) {
    return guarded("oaep context", [&] {
        OaepKeyIds keys;
        keys.g_key = j.value("g_key", keys.g_key);
        keys.h_key = j.value("h_key", keys.h_key);
        keys.f_key = j.value("f_key", keys.f_key);
        return OaepContext(OaepParams{j.at("k").get<int>(), j.at("k0").get<int>(), j.at("n").get<int>()},
                           std::move(keys), with_human);
    });
}

OaepContext oaep_context_for(const SealedInstance &inst, bool with_human) {
    if (inst.protocol != Protocol::oaep) throw Error(ErrorCode::config_invalid, "not an OAEP instance");
    const auto &p = std::get<OaepSealParams>(inst.params);
    return OaepContext(p.params, p.keys, with_human);
}

Json read_json_file(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::io_error, "cannot open " + path.string());
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception &e) {
        throw Error(ErrorCode::parse_error, path.string() + ": " + e.what());
    }
}

void write_text_file(const std::filesystem::path &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::io_error, "cannot write " + path.string());
    out << text;
    if (!out) throw Error(ErrorCode::io_error, "write failed for " + path.string());
}

}  // namespace sealed
