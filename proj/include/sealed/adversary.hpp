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

// Charlie's cheating strategies. Every strategy is (unitary on C, projective
// partition of C, optional un-computation), evaluated exactly: each outcome's
// probability q_i, post-state phi_i and Belinda's acceptance |<psi|phi_i>|^2.

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sealed/protocols.hpp"
#include "sealed/qstate.hpp"

namespace sealed {

struct OutcomeRow {
    Label outcome;
    double probability;  // q_i
    double acceptance;   // |<psi|phi_i>|^2
};

struct CheatReport {
    std::string strategy;
    double p = 0.0;        // probability of recovering an intact message
    double p_bound = 0.0;  // outcome probability the theorem bound is evaluated at
    double s = 0.0;        // detection probability, 1 - acceptance
    double bound = 0.0;    // eps_c + p_bound sqrt(1 - p_bound) + (1 - p_bound)
    std::vector<OutcomeRow> outcome_table;
    Ensemble returned;

    double margin() const { return bound - s; }
};

/// eps_c + p sqrt(1 - p) + (1 - p).
double soundness_bound(double completeness_error, double p);

struct Strategy {
    std::string name;
    LocalUnitary unitary;
    ProjPartition partition;
    bool uncompute = true;  // apply the adjoint of `unitary` after measuring
};

/// Exact evaluation of an arbitrary strategy. An outcome counts toward p when
/// every active C label in its class decodes to one and the same message
/// under the instance's honest unseal spec (for the built-in protocols: the
/// class is a single message label).
CheatReport run_strategy(const SealedInstance &inst, const Strategy &strategy);

/// The theorem's attack: run the honest unseal measurement, then undo its
/// unitary.
CheatReport generic_cheat(const SealedInstance &inst);

/// Identity unitary, one outcome per active C label.
CheatReport basis_cheat(const SealedInstance &inst);

/// Classical function g: C label -> {0, 1}.
using Predicate = std::map<Label, int>;

/// Measures only the value of g. Throws partial_predicate if g misses an
/// active C label.
CheatReport predicate_cheat(const SealedInstance &inst, const Predicate &g);

struct PostCollapseResponse {
    double best_accept;
    SparseState best_state;
};

/// Once B has collapsed to `collapsed_b`, the best Charlie can return is the
/// matching branch; its acceptance is the branch's squared norm.
/// Throws invalid_index if `collapsed_b` is not in the reference's support.
PostCollapseResponse optimal_post_collapse_response(const SealedInstance &inst, const Label &collapsed_b);

/// Strategy for sweep trial `trial`: trial 0 is the computational-basis
/// strategy; later trials draw a random unitary and random partition from
/// seed + trial.
Strategy random_strategy(const SealedInstance &inst, std::uint64_t seed, int trial);

/// Serial reference sweep.
std::vector<CheatReport> random_strategy_sweep_serial(const SealedInstance &inst, int trials, std::uint64_t rng_seed);

/// OpenMP sweep; identical output to the serial reference.
std::vector<CheatReport> random_strategy_sweep(const SealedInstance &inst, int trials, std::uint64_t rng_seed);

/// The inequalities 1 - accept <= D(psi, sigma) <= sum_i q_i D(psi, phi_i)
/// <= p_bound sqrt(1 - p_bound) + (1 - p_bound), evaluated numerically.
struct ProofChain {
    double acceptance_gap;
    double trace_distance;
    double convex_sum;
    double closed_form;

    bool holds(double tolerance) const {
        return acceptance_gap <= trace_distance + tolerance && trace_distance <= convex_sum + tolerance &&
               convex_sum <= closed_form + tolerance;
    }
};

/// Throws dimension_too_large past the eigensolver cap.
ProofChain proof_chain(const SealedInstance &inst, const CheatReport &report);

/// Monte Carlo replay of a strategy: sample Charlie's outcome, then
/// Belinda's verdict, `shots` times. Cross-check only.
double empirical_detection(const SealedInstance &inst, const Strategy &strategy, int shots, std::uint64_t rng_seed);

}  // namespace sealed
