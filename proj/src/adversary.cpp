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

#include "sealed/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>

#include "sealed/error.hpp"

namespace sealed {

double soundness_bound(double completeness_error, double p) {
    return completeness_error + p * std::sqrt(std::max(0.0, 1.0 - p)) + (1.0 - p);
}

namespace {

std::optional<Message> message_of_label(const SealedInstance &inst, const Label &c) {
    if (!inst.unseal.partition.covers(c)) return std::nullopt;
    const auto it = inst.unseal.decode.find(inst.unseal.partition.outcome(c));
    return it == inst.unseal.decode.end() ? std::nullopt : it->second;
}

// The message an outcome class reveals, if all of its active labels agree.
std::optional<Message> revealed_message(const SealedInstance &inst, const std::set<Label> &active,
                                        const std::vector<Label> &members) {
    std::optional<Message> revealed;
    bool any = false;
    for (const auto &label : members) {
        if (!active.contains(label)) continue;
        const auto message = message_of_label(inst, label);
        if (!message || (any && revealed != message)) return std::nullopt;
        revealed = message;
        any = true;
    }
    return revealed;
}

bool single_message(const SealedInstance &inst) {
    return inst.protocol == Protocol::naive || inst.protocol == Protocol::garbage;
}

LocalUnitary identity_on(const std::set<Label> &labels) { return LocalUnitary::identity({labels.begin(), labels.end()}); }

void check_sweep_dimension(const SealedInstance &inst) {
    const std::size_t dim = inst.reference.b_labels().size() * inst.active_c_labels().size();
    if (dim > kMaxJointDimension)
        throw Error(ErrorCode::dimension_too_large,
                    "sweep joint dimension " + std::to_string(dim) + " exceeds " + std::to_string(kMaxJointDimension));
}

}  // namespace

CheatReport run_strategy(const SealedInstance &inst, const Strategy &strategy) {
    const SparseState &psi = inst.reference;
    const auto active = inst.active_c_labels();
    const auto rotated = apply_unitary_c(psi, strategy.unitary);
    const auto undo = strategy.uncompute ? std::optional<LocalUnitary>(strategy.unitary.adjoint()) : std::nullopt;

    std::map<Label, std::vector<Label>> classes;
    for (const auto &[label, outcome] : strategy.partition.outcome_of()) classes[outcome].push_back(label);

    CheatReport report;
    report.strategy = strategy.name;
    std::vector<Ensemble::Member> members;
    double accept = 0.0;
    double max_q = 0.0;
    for (auto &[outcome, branch] : measurement_branches(rotated, strategy.partition)) {
        SparseState phi = undo ? apply_unitary_c(branch.state, *undo) : std::move(branch.state);
        const double acceptance = std::norm(inner_product(psi, phi));
        report.outcome_table.push_back({outcome, branch.probability, acceptance});
        accept += branch.probability * acceptance;
        max_q = std::max(max_q, branch.probability);
        if (revealed_message(inst, active, classes.at(outcome))) report.p += branch.probability;
        members.push_back({branch.probability, std::move(phi)});
    }
    report.returned = Ensemble(std::move(members));
    report.p = std::min(report.p, 1.0);
    report.p_bound = std::clamp(single_message(inst) ? report.p : max_q, 0.0, 1.0);
    report.s = std::clamp(1.0 - accept, 0.0, 1.0);
    report.bound = soundness_bound(inst.completeness_error, report.p_bound);
    return report;
}

CheatReport generic_cheat(const SealedInstance &inst) {
    return run_strategy(inst, Strategy{"generic", inst.unseal.pre_unitary, inst.unseal.partition, true});
}

CheatReport basis_cheat(const SealedInstance &inst) {
    const auto active = inst.active_c_labels();
    return run_strategy(inst, Strategy{"basis", identity_on(active), ProjPartition::finest(active), true});
}

CheatReport predicate_cheat(const SealedInstance &inst, const Predicate &g) {
    const auto active = inst.active_c_labels();
    std::map<Label, Label> outcome_of;
    for (const auto &label : active) {
        const auto it = g.find(label);
        if (it == g.end()) throw Error(ErrorCode::partial_predicate, "predicate undefined on '" + label.str() + "'");
        if (it->second != 0 && it->second != 1)
            throw Error(ErrorCode::partial_predicate, "predicate value on '" + label.str() + "' is not 0 or 1");
        outcome_of.emplace(label, Label(it->second ? "g=1" : "g=0"));
    }
    return run_strategy(inst, Strategy{"predicate", identity_on(active), ProjPartition(std::move(outcome_of)), false});
}

PostCollapseResponse optimal_post_collapse_response(const SealedInstance &inst, const Label &collapsed_b) {
    SparseState::AmplitudeMap branch;
    for (const auto &[key, amp] : inst.reference.amplitudes())
        if (key.first == collapsed_b) branch.emplace(key, amp);
    if (branch.empty()) throw Error(ErrorCode::invalid_index, "no branch with B label '" + collapsed_b.str() + "'");
    double weight = 0.0;
    for (const auto &[key, amp] : branch) weight += std::norm(amp);
    return PostCollapseResponse{weight, SparseState::normalized(std::move(branch))};
}

Strategy random_strategy(const SealedInstance &inst, std::uint64_t seed, int trial) {
    const auto active = inst.active_c_labels();
    if (trial == 0) return Strategy{"random:0", identity_on(active), ProjPartition::finest(active), true};

    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(trial));
    const std::vector<Label> basis(active.begin(), active.end());
    const std::size_t dim = basis.size();
    const std::size_t outcome_count = std::uniform_int_distribution<std::size_t>(1, dim)(rng);
    std::uniform_int_distribution<std::size_t> pick(0, outcome_count - 1);
    std::map<Label, Label> outcome_of;
    for (const auto &label : basis) outcome_of.emplace(label, Label("o" + std::to_string(pick(rng))));
    const std::uint64_t unitary_seed = rng();
    return Strategy{"random:" + std::to_string(trial), LocalUnitary(basis, random_unitary(dim, unitary_seed)),
                    ProjPartition(std::move(outcome_of)), true};
}

std::vector<CheatReport> random_strategy_sweep_serial(const SealedInstance &inst, int trials, std::uint64_t rng_seed) {
    if (trials < 1) throw Error(ErrorCode::config_invalid, "a sweep needs at least one trial");
    check_sweep_dimension(inst);
    std::vector<CheatReport> reports;
    reports.reserve(static_cast<std::size_t>(trials));
    for (int t = 0; t < trials; ++t) reports.push_back(run_strategy(inst, random_strategy(inst, rng_seed, t)));
    return reports;
}

std::vector<CheatReport> random_strategy_sweep(const SealedInstance &inst, int trials, std::uint64_t rng_seed) {
    if (trials < 1) throw Error(ErrorCode::config_invalid, "a sweep needs at least one trial");
    check_sweep_dimension(inst);
    std::vector<CheatReport> reports(static_cast<std::size_t>(trials));
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
    for (int t = 0; t < trials; ++t) {
        try {
            reports[static_cast<std::size_t>(t)] = run_strategy(inst, random_strategy(inst, rng_seed, t));
        } catch (...) {
#pragma omp critical(sealed_sweep_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return reports;
}

ProofChain proof_chain(const SealedInstance &inst, const CheatReport &report) {
    ProofChain chain{};
    chain.acceptance_gap = 1.0 - project_accept_probability(inst.reference, report.returned);
    chain.trace_distance = trace_distance_pure_vs_ensemble(inst.reference, report.returned);
    chain.convex_sum = 0.0;
    for (const auto &member : report.returned.members())
        chain.convex_sum += member.weight * trace_distance_pure(inst.reference, member.state);
    chain.closed_form = soundness_bound(0.0, report.p_bound);
    return chain;
}

double empirical_detection(const SealedInstance &inst, const Strategy &strategy, int shots, std::uint64_t rng_seed) {
    if (shots < 1) throw Error(ErrorCode::config_invalid, "need at least one shot");
    const auto rotated = apply_unitary_c(inst.reference, strategy.unitary);
    const auto undo = strategy.unitary.adjoint();
    int detected = 0;
    for (int shot = 0; shot < shots; ++shot) {
        const std::uint64_t base = rng_seed + 2 * static_cast<std::uint64_t>(shot);
        auto measured = measure_partition(rotated, strategy.partition, base);
        const SparseState phi = strategy.uncompute ? apply_unitary_c(measured.post, undo) : std::move(measured.post);
        const double accept = std::norm(inner_product(inst.reference, phi));
        if (!(seeded_uniform(base + 1) < accept)) ++detected;
    }
    return static_cast<double>(detected) / shots;
}

}  // namespace sealed
