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

#include "sealed/qstate.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "sealed/error.hpp"

namespace sealed {
namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

Label L(const char *s) { return Label(s); }

SparseState naive_state() {
    return SparseState::from_amplitudes({{{L("0"), L("0")}, kInvSqrt2}, {{L("M"), L("M")}, kInvSqrt2}});
}

SparseState random_state(std::size_t b_dim, std::size_t c_dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    SparseState::AmplitudeMap amps;
    for (std::size_t b = 0; b < b_dim; ++b)
        for (std::size_t c = 0; c < c_dim; ++c)
            amps[{Label("b" + std::to_string(b)), Label("c" + std::to_string(c))}] = Complex(gauss(rng), gauss(rng));
    return SparseState::normalized(std::move(amps));
}

std::vector<Label> c_basis(std::size_t c_dim) {
    std::vector<Label> out;
    for (std::size_t c = 0; c < c_dim; ++c) out.emplace_back("c" + std::to_string(c));
    return out;
}

Ensemble random_ensemble(std::size_t members, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.1, 1.0);
    std::vector<double> w(members);
    double total = 0;
    for (auto &x : w) total += (x = unit(rng));
    std::vector<Ensemble::Member> out;
    for (std::size_t i = 0; i < members; ++i) out.push_back({w[i] / total, random_state(2, 3, seed * 31 + i)});
    double sum = 0;
    for (auto &m : out) sum += m.weight;
    out.back().weight += 1.0 - sum;
    return Ensemble(std::move(out));
}

TEST(SparseState, RejectsUnnormalizedAndPrunes) {
    EXPECT_THROW(SparseState::from_amplitudes({{{L("a"), L("a")}, 0.5}}), Error);
    const auto s = SparseState::from_amplitudes({{{L("a"), L("a")}, 1.0}, {{L("b"), L("b")}, 1e-17}});
    EXPECT_EQ(s.size(), 1u);
    EXPECT_THROW(SparseState::normalized({}), Error);
}

TEST(InnerProduct, Examples) {
    const auto psi = naive_state();
    EXPECT_NEAR(std::abs(inner_product(psi, psi)), 1.0, 1e-15);
    EXPECT_EQ(inner_product(SparseState::basis(L("x"), L("x")), SparseState::basis(L("y"), L("y"))), Complex{});
    EXPECT_NEAR(inner_product(psi, SparseState::basis(L("M"), L("M"))).real(), 0.70710678118654752, 1e-15);
}

TEST(InnerProduct, ConjugatesFirstArgument) {
    const auto a = SparseState::from_amplitudes({{{L("b"), L("c")}, Complex(0, 1)}});
    const auto b = SparseState::basis(L("b"), L("c"));
    EXPECT_EQ(inner_product(a, b), Complex(0, -1));
    EXPECT_EQ(inner_product(b, a), Complex(0, 1));
}

TEST(TraceDistancePure, Examples) {
    const auto psi = naive_state();
    EXPECT_EQ(trace_distance_pure(psi, psi), 0.0);
    EXPECT_EQ(trace_distance_pure(SparseState::basis(L("x"), L("x")), SparseState::basis(L("y"), L("y"))), 1.0);
    EXPECT_NEAR(trace_distance_pure(psi, SparseState::basis(L("M"), L("M"))), std::sqrt(0.5), 1e-15);
}

TEST(TraceDistanceEnsemble, Examples) {
    const auto x = SparseState::basis(L("x"), L("x"));
    const auto y = SparseState::basis(L("y"), L("y"));
    EXPECT_NEAR(trace_distance_pure_vs_ensemble(x, Ensemble::pure(x)), 0.0, 1e-15);
    // 2x2 difference diag(1/2, -1/2): eigenvalues +-1/2, trace distance 1/2.
    EXPECT_NEAR(trace_distance_pure_vs_ensemble(x, Ensemble({{0.5, x}, {0.5, y}})), 0.5, 1e-15);
}

TEST(TraceDistanceEnsemble, DimensionCap) {
    SparseState::AmplitudeMap amps;
    for (int i = 0; i < 513; ++i) amps[{Label(std::to_string(i)), L("c")}] = 1.0;
    const auto big = SparseState::normalized(std::move(amps));
    try {
        trace_distance_pure_vs_ensemble(big, Ensemble::pure(big));
        FAIL() << "expected DimensionTooLarge";
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::dimension_too_large);
    }
}

TEST(TraceDistanceEnsemble, PureRoutesAgree) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto a = random_state(3, 4, seed);
        const auto b = random_state(3, 4, seed + 1000);
        EXPECT_NEAR(trace_distance_pure(a, b), trace_distance_pure_vs_ensemble(a, Ensemble::pure(b)), 1e-8);
    }
}

TEST(TraceDistanceEnsemble, BoundsAcceptanceGapAndIsConvex) {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const auto psi = random_state(2, 3, seed + 500);
        const auto sigma = random_ensemble(1 + seed % 4, seed);
        const double d = trace_distance_pure_vs_ensemble(psi, sigma);
        EXPECT_LE(1.0 - project_accept_probability(psi, sigma), d + 1e-8);
        double convex = 0;
        for (const auto &m : sigma.members()) convex += m.weight * trace_distance_pure(psi, m.state);
        EXPECT_LE(d, convex + 1e-8);
    }
}

TEST(TraceDistancePure, StableForNearlyParallelStates) {
    const auto a = random_state(4, 4, 3);
    SparseState::AmplitudeMap tweaked = a.amplitudes();
    tweaked.begin()->second *= 1.0 + 1e-15;
    const auto b = SparseState::normalized(std::move(tweaked));
    EXPECT_LT(trace_distance_pure(a, b), 1e-12);
}

TEST(ApplyUnitary, IdentityAndPermutation) {
    const auto psi = naive_state();
    EXPECT_EQ(apply_unitary_c(psi, LocalUnitary::identity({L("0"), L("M")})), psi);

    const auto garbage = SparseState::from_amplitudes(
        {{{L("g1"), L("g1")}, 0.5}, {{L("g2"), L("g2")}, 0.5}, {{L("M"), L("M")}, kInvSqrt2}});
    ComplexMatrix swap(2, 2);
    swap(0, 1) = 1.0;
    swap(1, 0) = 1.0;
    const auto swapped = apply_unitary_c(garbage, LocalUnitary({L("g1"), L("g2")}, swap));
    EXPECT_EQ(swapped.amplitude(L("g1"), L("g2")), Complex(0.5));
    EXPECT_EQ(swapped.amplitude(L("g2"), L("g1")), Complex(0.5));
    EXPECT_EQ(swapped.amplitude(L("M"), L("M")), Complex(kInvSqrt2));
    EXPECT_NEAR(swapped.norm_squared(), 1.0, 1e-15);
}

TEST(ApplyUnitary, HadamardOnSingleTerm) {
    ComplexMatrix h(2, 2);
    h(0, 0) = h(0, 1) = h(1, 0) = kInvSqrt2;
    h(1, 1) = -kInvSqrt2;
    const auto out = apply_unitary_c(SparseState::basis(L("b"), L("u")), LocalUnitary({L("u"), L("v")}, h));
    ASSERT_EQ(out.size(), 2u);
    EXPECT_NEAR(out.amplitude(L("b"), L("u")).real(), kInvSqrt2, 1e-15);
    EXPECT_NEAR(out.amplitude(L("b"), L("v")).real(), kInvSqrt2, 1e-15);
}

TEST(ApplyUnitary, StrictCoverageRejectsForeignLabels) {
    try {
        apply_unitary_c(naive_state(), LocalUnitary::identity({L("0")}), Coverage::strict);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::unknown_label);
    }
    EXPECT_NO_THROW(apply_unitary_c(naive_state(), LocalUnitary::identity({L("0")})));
}

TEST(ApplyUnitary, RejectsNonUnitary) {
    ComplexMatrix m = ComplexMatrix::identity(2);
    m(0, 1) = 0.5;
    EXPECT_THROW(LocalUnitary({L("a"), L("b")}, m), Error);
}

TEST(ApplyUnitary, PreservesNormAndBMarginalsUnderRandomUnitaries) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto psi = random_state(3, 5, seed);
        const auto u = LocalUnitary(c_basis(5), random_unitary(5, seed + 77));
        EXPECT_LT(u.matrix().unitarity_defect(), 1e-12);
        const auto out = apply_unitary_c(psi, u);
        EXPECT_NEAR(out.norm_squared(), 1.0, 1e-9);
        // sum_c |amp(b, c)|^2 is invariant under a unitary on C.
        for (const auto &b : psi.b_labels()) {
            double before = 0, after = 0;
            for (const auto &[key, amp] : psi.amplitudes())
                if (key.first == b) before += std::norm(amp);
            for (const auto &[key, amp] : out.amplitudes())
                if (key.first == b) after += std::norm(amp);
            EXPECT_NEAR(before, after, 1e-12);
        }
        EXPECT_LT(apply_unitary_c(out, u.adjoint()).max_amplitude_difference(psi), 1e-12);
    }
}

TEST(MeasurePartition, SingleOutcomeLeavesStateAlone) {
    const auto psi = naive_state();
    const auto result = measure_partition(psi, ProjPartition({{L("0"), L("all")}, {L("M"), L("all")}}), 5);
    EXPECT_EQ(result.outcome, L("all"));
    EXPECT_DOUBLE_EQ(result.distribution.at(L("all")), 1.0);
    EXPECT_LT(result.post.max_amplitude_difference(psi), 1e-15);
}

TEST(MeasurePartition, NaiveBasisMeasurementIsFiftyFifty) {
    const auto result = measure_partition(naive_state(), ProjPartition::finest({L("0"), L("M")}), 1);
    EXPECT_NEAR(result.distribution.at(L("0")), 0.5, 1e-15);
    EXPECT_NEAR(result.distribution.at(L("M")), 0.5, 1e-15);
    EXPECT_EQ(result.post.size(), 1u);
}

TEST(MeasurePartition, MultipictureBranches) {
    SparseState::AmplitudeMap amps;
    for (int i = 1; i <= 4; ++i) amps[{Label(std::to_string(i)), Label("m" + std::to_string(i))}] = 0.5;
    const auto psi = SparseState::from_amplitudes(std::move(amps));
    const auto branches = measurement_branches(psi, ProjPartition::finest(psi.c_labels()));
    ASSERT_EQ(branches.size(), 4u);
    for (int i = 1; i <= 4; ++i) {
        const auto &branch = branches.at(Label("m" + std::to_string(i)));
        EXPECT_NEAR(branch.probability, 0.25, 1e-15);
        EXPECT_EQ(branch.state, SparseState::basis(Label(std::to_string(i)), Label("m" + std::to_string(i))));
    }
}

TEST(MeasurePartition, ReproducibleAndUncovered) {
    const auto psi = random_state(2, 6, 9);
    const auto part = ProjPartition::finest(psi.c_labels());
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto a = measure_partition(psi, part, seed);
        const auto b = measure_partition(psi, part, seed);
        EXPECT_EQ(a.outcome, b.outcome);
        EXPECT_EQ(a.post, b.post);
        double total = 0;
        for (const auto &[o, q] : a.distribution) total += q;
        EXPECT_NEAR(total, 1.0, 1e-9);
        EXPECT_NEAR(a.post.norm_squared(), 1.0, 1e-9);
    }
    try {
        measure_partition(psi, ProjPartition::finest({L("c0")}), 0);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::uncovered_label);
    }
}

TEST(MeasurePartition, SamplingFrequenciesMatchDistribution) {
    const auto psi = random_state(1, 3, 4);
    const auto part = ProjPartition::finest(psi.c_labels());
    std::map<Label, int> counts;
    const int shots = 20000;
    for (int i = 0; i < shots; ++i) ++counts[measure_partition(psi, part, static_cast<std::uint64_t>(i)).outcome];
    for (const auto &[outcome, q] : measurement_branches(psi, part)) {
        const double sigma = std::sqrt(q.probability * (1 - q.probability) / shots);
        EXPECT_NEAR(counts[outcome] / double(shots), q.probability, 4 * sigma);
    }
}

TEST(ProjectAccept, Examples) {
    const auto psi = naive_state();
    EXPECT_NEAR(project_accept_probability(psi, Ensemble::pure(psi)), 1.0, 1e-15);
    const Ensemble cheated({{0.5, SparseState::basis(L("0"), L("0"))}, {0.5, SparseState::basis(L("M"), L("M"))}});
    EXPECT_NEAR(project_accept_probability(psi, cheated), 0.5, 1e-15);
}

TEST(Ensemble, RejectsBadWeights) {
    const auto s = naive_state();
    EXPECT_THROW(Ensemble({{0.7, s}, {0.7, s}}), Error);
    EXPECT_THROW(Ensemble({{-0.5, s}, {1.5, s}}), Error);
}

TEST(RandomUnitary, DeterministicFromSeed) {
    EXPECT_EQ(random_unitary(4, 42), random_unitary(4, 42));
    EXPECT_NE(random_unitary(4, 42), random_unitary(4, 43));
    EXPECT_LT(random_unitary(16, 1).unitarity_defect(), 1e-12);
}

}  // namespace
}  // namespace sealed
