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

// sealctl: seal, unseal, attack and verify sealed states, and run the
// experiment tables.

#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sealed/adversary.hpp"
#include "sealed/error.hpp"
#include "sealed/harness.hpp"
#include "sealed/oaep.hpp"
#include "sealed/serialize.hpp"

namespace {

constexpr int kExitInvariantViolation = 2;
constexpr int kExitError = 1;

using namespace sealed;

std::vector<std::string> split_list(const std::string &text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

struct GlobalOptions {
    std::optional<std::uint64_t> seed;
    std::string config;
    std::string out;
    std::string format = "csv";
    bool format_given = false;
};

std::uint64_t seed_or_default(const GlobalOptions &g) { return g.seed.value_or(ExperimentConfig{}.seed); }

void emit_json(const Json &j, const GlobalOptions &g) { emit_report(j.dump(2) + "\n", g.out); }

struct SealOptions {
    std::string protocol = "naive";
    std::string message = "M";
    std::string garbage = "0";
    std::string garbage_set;
    std::string pictures;
    std::string y = "0";
    int k = 24;
    int k0 = 8;
};

int run_seal(const SealOptions &o, const GlobalOptions &g) {
    const Protocol protocol = protocol_from_string(o.protocol);
    std::optional<SealedInstance> inst;
    switch (protocol) {
    case Protocol::naive: inst = seal_naive(Message{o.message}, Label(o.garbage)); break;
    case Protocol::garbage: {
        std::vector<Label> set;
        for (const auto &g_label : split_list(o.garbage_set)) set.emplace_back(g_label);
        inst = seal_garbage(Message{o.message}, set);
        break;
    }
    case Protocol::multipicture: {
        std::vector<Message> pics;
        for (const auto &p : split_list(o.pictures)) pics.push_back(Message{p});
        inst = seal_multipicture(pics);
        break;
    }
    case Protocol::oaep: {
        const auto ctx = OaepContext::reference({o.k, o.k0, o.k - o.k0}, false);
        inst = seal_oaep(std::stoull(o.y, nullptr, 16), ctx);
        break;
    }
    }
    emit_json(to_json(*inst), g);
    return 0;
}

int run_unseal(const std::string &instance_path, const GlobalOptions &g) {
    const auto inst = instance_from_json(read_json_file(instance_path));
    std::optional<OaepContext> ctx;
    if (inst.protocol == Protocol::oaep) ctx.emplace(oaep_context_for(inst, true));
    const auto result = honest_unseal(inst, seed_or_default(g), ctx ? &*ctx : nullptr);
    Json out{{"success", result.success},
             {"outcome", result.outcome.str()},
             {"message", result.message ? Json(result.message->text) : Json(nullptr)},
             {"success_probability", honest_success_probability(inst)}};
    if (ctx) out["human_queries"] = ctx->human().query_count();
    emit_json(out, g);
    return 0;
}

struct CheatOptions {
    std::string instance;
    std::string attack = "basis";
    std::string predicate;
    int trials = 100;
    int shots = 0;
};

Strategy strategy_for(const SealedInstance &inst, const std::string &attack) {
    if (attack == "generic") return Strategy{"generic", inst.unseal.pre_unitary, inst.unseal.partition, true};
    const auto active = inst.active_c_labels();
    return Strategy{"basis", LocalUnitary::identity({active.begin(), active.end()}), ProjPartition::finest(active),
                    true};
}

int run_cheat(const CheatOptions &o, const GlobalOptions &g) {
    const auto inst = instance_from_json(read_json_file(o.instance));
    std::vector<CheatReport> reports;
    if (o.attack == "basis") {
        reports.push_back(basis_cheat(inst));
    } else if (o.attack == "generic") {
        reports.push_back(generic_cheat(inst));
    } else if (o.attack == "predicate") {
        Predicate pred;
        for (const auto &entry : split_list(o.predicate)) {
            const auto eq = entry.rfind('=');
            if (eq == std::string::npos) throw Error(ErrorCode::config_invalid, "predicate entries are label=0|1");
            pred.emplace(Label(entry.substr(0, eq)), std::stoi(entry.substr(eq + 1)));
        }
        reports.push_back(predicate_cheat(inst, pred));
    } else if (o.attack == "sweep") {
        reports = random_strategy_sweep(inst, o.trials, seed_or_default(g));
    } else {
        throw Error(ErrorCode::config_invalid, "unknown attack '" + o.attack + "'");
    }

    bool violated = false;
    Json out = Json::array();
    for (const auto &report : reports) {
        Json j = to_json(report);
        if (report.margin() < -kMarginTolerance) violated = true;
        out.push_back(std::move(j));
    }
    Json result = reports.size() == 1 ? out[0] : out;
    if (o.shots > 0 && o.attack != "sweep" && o.attack != "predicate")
        result["empirical_s"] = empirical_detection(inst, strategy_for(inst, o.attack), o.shots, seed_or_default(g));
    emit_json(result, g);
    return violated ? kExitInvariantViolation : 0;
}

int run_verify(const std::string &instance_path, const std::string &returned_path, const GlobalOptions &g) {
    const auto inst = instance_from_json(read_json_file(instance_path));
    const Ensemble returned =
        returned_path.empty() ? Ensemble::pure(inst.reference) : ensemble_from_json(read_json_file(returned_path));
    const auto verdict = verify_return(inst, returned, seed_or_default(g));
    emit_json(Json{{"believe", verdict.believe}, {"accept_probability", verdict.accept_probability}}, g);
    return 0;
}

int run_experiment(const std::string &name, const GlobalOptions &g) {
    ExperimentConfig cfg;
    if (!g.config.empty()) cfg = load_config(g.config);
    cfg.experiment = name;
    if (g.seed) cfg.seed = *g.seed;
    if (!g.out.empty()) cfg.out = g.out;
    if (g.format_given) cfg.format = report_format_from_string(g.format);

    if (name == "bound-sweep") {
        const auto rows = run_bound_sweep(cfg);
        emit_report(rows, cfg.format, cfg.out);
        const auto bad = invariant_violations(rows);
        for (const auto &row : bad)
            std::cerr << "invariant violated: " << row.protocol << " " << row.attack << " margin "
                      << format_double(row.margin) << "\n";
        return bad.empty() ? 0 : kExitInvariantViolation;
    }
    if (name == "multi-scaling") {
        const auto rows = run_multipicture_scaling(cfg.scaling_sizes, cfg.seed);
        emit_report(rows, cfg.format, cfg.out);
        for (std::size_t i = 1; i < rows.size(); ++i)
            if (rows[i].n > rows[i - 1].n && !(rows[i].detection > rows[i - 1].detection))
                return kExitInvariantViolation;
        return 0;
    }
    if (name == "oaep-negligibility") {
        const auto rows = run_oaep_negligibility(cfg.oaep_k0_values, cfg.oaep_r_sizes, cfg.oaep_n, cfg.seed);
        emit_report(rows, cfg.format, cfg.out);
        return 0;
    }
    throw Error(ErrorCode::config_invalid, "unknown experiment '" + name + "'");
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Simulate sealed-state protocols and their attacks exactly"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions global;
    std::uint64_t seed_value = 0;
    auto *seed_opt = app.add_option("--seed", seed_value, "RNG seed (u64)");
    app.add_option("--config", global.config, "key = value experiment config file");
    app.add_option("--out", global.out, "output path (default stdout)");
    auto *format_opt = app.add_option("--format", global.format, "report format")->check(CLI::IsMember({"csv", "json"}));

    SealOptions seal;
    auto *seal_cmd = app.add_subcommand("seal", "Build a sealed instance and print it as JSON");
    seal_cmd->add_option("--protocol", seal.protocol)->check(CLI::IsMember({"naive", "garbage", "multipicture", "oaep"}));
    seal_cmd->add_option("--message", seal.message, "message text (naive, garbage)");
    seal_cmd->add_option("--garbage", seal.garbage, "garbage label (naive)");
    seal_cmd->add_option("--garbage-set", seal.garbage_set, "comma-separated garbage labels");
    seal_cmd->add_option("--pictures", seal.pictures, "comma-separated picture names");
    seal_cmd->add_option("--y", seal.y, "message as hex (oaep)");
    seal_cmd->add_option("--k", seal.k, "f input bits (oaep)");
    seal_cmd->add_option("--k0", seal.k0, "randomness bits (oaep)");

    std::string instance_path;
    auto *unseal_cmd = app.add_subcommand("unseal", "Honestly unseal an instance");
    unseal_cmd->add_option("--instance", instance_path)->required();

    CheatOptions cheat;
    auto *cheat_cmd = app.add_subcommand("cheat", "Run a cheating strategy and report p, s and the bound");
    cheat_cmd->add_option("--instance", cheat.instance)->required();
    cheat_cmd->add_option("--attack", cheat.attack)->check(CLI::IsMember({"basis", "generic", "predicate", "sweep"}));
    cheat_cmd->add_option("--predicate", cheat.predicate, "label=0|1,... (predicate attack)");
    cheat_cmd->add_option("--trials", cheat.trials, "random strategies (sweep attack)");
    cheat_cmd->add_option("--shots", cheat.shots, "Monte Carlo cross-check shots");

    std::string verify_instance;
    std::string returned_path;
    auto *verify_cmd = app.add_subcommand("verify", "Belinda's test on a returned state");
    verify_cmd->add_option("--instance", verify_instance)->required();
    verify_cmd->add_option("--returned", returned_path, "returned ensemble/state JSON (default: untouched)");

    std::string experiment;
    auto *experiment_cmd = app.add_subcommand("experiment", "Run an experiment table");
    experiment_cmd->add_option("name", experiment)
        ->required()
        ->check(CLI::IsMember({"bound-sweep", "multi-scaling", "oaep-negligibility"}));

    CLI11_PARSE(app, argc, argv);
    if (*seed_opt) global.seed = seed_value;
    global.format_given = format_opt->count() > 0;

    try {
        if (*seal_cmd) return run_seal(seal, global);
        if (*unseal_cmd) return run_unseal(instance_path, global);
        if (*cheat_cmd) return run_cheat(cheat, global);
        if (*verify_cmd) return run_verify(verify_instance, returned_path, global);
        if (*experiment_cmd) return run_experiment(experiment, global);
    } catch (const Error &e) {
        std::cerr << "sealctl: " << e.what() << "\n";
        return kExitError;
    } catch (const std::exception &e) {
        std::cerr << "sealctl: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
