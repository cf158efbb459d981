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

#include <algorithm>
#include <cmath>
#include <random>

#include "sealed/error.hpp"

namespace sealed {

namespace {

void prune(SparseState::AmplitudeMap &amps) {
    std::erase_if(amps, [](const auto &entry) { return std::abs(entry.second) < kPruneThreshold; });
}

double squared_norm(const SparseState::AmplitudeMap &amps) {
    double total = 0.0;
    for (const auto &[key, amp] : amps) total += std::norm(amp);
    return total;
}

}  // namespace

SparseState SparseState::from_amplitudes(AmplitudeMap amps, double tolerance) {
    prune(amps);
    const double norm = squared_norm(amps);
    if (std::abs(norm - 1.0) > tolerance)
        throw Error(ErrorCode::invalid_state, "squared norm " + std::to_string(norm) + " is not 1");
    return SparseState(std::move(amps));
}

SparseState SparseState::normalized(AmplitudeMap amps) {
    prune(amps);
    const double norm = squared_norm(amps);
    if (norm <= 0.0) throw Error(ErrorCode::invalid_state, "cannot normalize a zero vector");
    const double scale = 1.0 / std::sqrt(norm);
    for (auto &[key, amp] : amps) amp *= scale;
    prune(amps);
    return SparseState(std::move(amps));
}

SparseState SparseState::basis(const Label &b, const Label &c) {
    return SparseState(AmplitudeMap{{{b, c}, Complex(1.0)}});
}

Complex SparseState::amplitude(const Label &b, const Label &c) const {
    const auto it = amps_.find({b, c});
    return it == amps_.end() ? Complex{} : it->second;
}

std::set<Label> SparseState::b_labels() const {
    std::set<Label> out;
    for (const auto &[key, amp] : amps_) out.insert(key.first);
    return out;
}

std::set<Label> SparseState::c_labels() const {
    std::set<Label> out;
    for (const auto &[key, amp] : amps_) out.insert(key.second);
    return out;
}

double SparseState::norm_squared() const { return squared_norm(amps_); }

double SparseState::max_amplitude_difference(const SparseState &other) const {
    double worst = 0.0;
    for (const auto &[key, amp] : amps_)
        worst = std::max(worst, std::abs(amp - other.amplitude(key.first, key.second)));
    for (const auto &[key, amp] : other.amps_)
        worst = std::max(worst, std::abs(amp - amplitude(key.first, key.second)));
    return worst;
}

Ensemble::Ensemble(std::vector<Member> members) : members_(std::move(members)) {
    double total = 0.0;
    for (const auto &m : members_) {
        if (m.weight < 0.0) throw Error(ErrorCode::invalid_state, "negative ensemble weight");
        total += m.weight;
    }
    if (std::abs(total - 1.0) > kNormTolerance)
        throw Error(ErrorCode::invalid_state, "ensemble weights sum to " + std::to_string(total));
}

Ensemble Ensemble::pure(SparseState state) { return Ensemble({{1.0, std::move(state)}}); }

LocalUnitary::LocalUnitary(std::vector<Label> basis, ComplexMatrix matrix)
    : basis_(std::move(basis)), matrix_(std::move(matrix)) {
    if (matrix_.rows() != basis_.size() || matrix_.cols() != basis_.size())
        throw Error(ErrorCode::length_mismatch, "unitary matrix does not match its basis");
    if (std::set<Label>(basis_.begin(), basis_.end()).size() != basis_.size())
        throw Error(ErrorCode::label_collision, "repeated label in unitary basis");
    if (matrix_.unitarity_defect() > kNormTolerance)
        throw Error(ErrorCode::not_unitary, "matrix is not unitary");
}

LocalUnitary LocalUnitary::identity(std::vector<Label> basis) {
    if (std::set<Label>(basis.begin(), basis.end()).size() != basis.size())
        throw Error(ErrorCode::label_collision, "repeated label in unitary basis");
    LocalUnitary u;
    u.basis_ = std::move(basis);
    u.identity_ = std::make_shared<LazyIdentity>();
    return u;
}

const ComplexMatrix &LocalUnitary::matrix() const {
    if (!identity_) return matrix_;
    std::call_once(identity_->built, [this] { identity_->matrix = ComplexMatrix::identity(basis_.size()); });
    return identity_->matrix;
}

LocalUnitary LocalUnitary::adjoint() const {
    if (identity_) return *this;
    return LocalUnitary(basis_, matrix_.adjoint());
}

bool LocalUnitary::is_identity() const {
    return identity_ != nullptr || matrix_ == ComplexMatrix::identity(basis_.size());
}

ProjPartition ProjPartition::finest(const std::set<Label> &labels) {
    std::map<Label, Label> outcome_of;
    for (const auto &label : labels) outcome_of.emplace(label, label);
    return ProjPartition(std::move(outcome_of));
}

const Label &ProjPartition::outcome(const Label &c) const {
    const auto it = outcome_of_.find(c);
    if (it == outcome_of_.end()) throw Error(ErrorCode::uncovered_label, "label '" + c.str() + "' has no outcome");
    return it->second;
}

std::set<Label> ProjPartition::outcomes() const {
    std::set<Label> out;
    for (const auto &[label, outcome] : outcome_of_) out.insert(outcome);
    return out;
}

std::vector<Label> ProjPartition::members(const Label &outcome) const {
    std::vector<Label> out;
    for (const auto &[label, o] : outcome_of_)
        if (o == outcome) out.push_back(label);
    return out;
}

Complex inner_product(const SparseState &a, const SparseState &b) {
    const auto &small = a.size() <= b.size() ? a : b;
    const auto &large = a.size() <= b.size() ? b : a;
    Complex total{};
    for (const auto &[key, amp] : small.amplitudes()) {
        const Complex other = large.amplitude(key.first, key.second);
        if (other == Complex{}) continue;
        total += &small == &a ? std::conj(amp) * other : std::conj(other) * amp;
    }
    return total;
}

namespace {

// Below this, 1 - |<a|b>|^2 is dominated by cancellation and is recomputed
// from the Lagrange identity
//   |a|^2 |b|^2 - |<a|b>|^2 = sum_{i<j} |a_i b_j - a_j b_i|^2,
// whose terms carry no cancellation.
constexpr double kNearlyParallel = 1e-6;

double orthogonal_mass(const SparseState &a, const SparseState &b) {
    std::set<LabelPair> keys;
    for (const auto &[key, amp] : a.amplitudes()) keys.insert(key);
    for (const auto &[key, amp] : b.amplitudes()) keys.insert(key);
    std::vector<Complex> va;
    std::vector<Complex> vb;
    va.reserve(keys.size());
    vb.reserve(keys.size());
    for (const auto &key : keys) {
        va.push_back(a.amplitude(key.first, key.second));
        vb.push_back(b.amplitude(key.first, key.second));
    }
    double total = 0.0;
    for (std::size_t i = 0; i < va.size(); ++i)
        for (std::size_t j = i + 1; j < va.size(); ++j) total += std::norm(va[i] * vb[j] - va[j] * vb[i]);
    return total / (a.norm_squared() * b.norm_squared());
}

}  // namespace

double trace_distance_pure(const SparseState &a, const SparseState &b) {
    double gap = 1.0 - std::norm(inner_product(a, b));
    if (gap < kNearlyParallel) gap = orthogonal_mass(a, b);
    return std::sqrt(std::clamp(gap, 0.0, 1.0));
}

std::vector<LabelPair> joint_basis(const SparseState &psi, const Ensemble &sigma) {
    std::set<LabelPair> keys;
    for (const auto &[key, amp] : psi.amplitudes()) keys.insert(key);
    for (const auto &member : sigma.members())
        for (const auto &[key, amp] : member.state.amplitudes()) keys.insert(key);
    return {keys.begin(), keys.end()};
}

namespace {

std::vector<Complex> dense_vector(const SparseState &s, const std::vector<LabelPair> &basis) {
    std::vector<Complex> out(basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i) out[i] = s.amplitude(basis[i].first, basis[i].second);
    return out;
}

void add_outer(ComplexMatrix &m, const std::vector<Complex> &v, double weight) {
    for (std::size_t r = 0; r < v.size(); ++r) {
        if (v[r] == Complex{}) continue;
        for (std::size_t c = 0; c < v.size(); ++c) m(r, c) += weight * v[r] * std::conj(v[c]);
    }
}

}  // namespace

ComplexMatrix density_difference(const SparseState &psi, const Ensemble &sigma, const std::vector<LabelPair> &basis) {
    ComplexMatrix m(basis.size(), basis.size());
    add_outer(m, dense_vector(psi, basis), 1.0);
    for (const auto &member : sigma.members()) add_outer(m, dense_vector(member.state, basis), -member.weight);
    return m;
}

double trace_distance_pure_vs_ensemble(const SparseState &psi, const Ensemble &sigma) {
    const auto basis = joint_basis(psi, sigma);
    if (basis.size() > kMaxJointDimension)
        throw Error(ErrorCode::dimension_too_large,
                    "joint basis has " + std::to_string(basis.size()) + " states (cap " +
                        std::to_string(kMaxJointDimension) + ")");
    return std::clamp(0.5 * hermitian_trace_norm(density_difference(psi, sigma, basis)), 0.0, 1.0);
}

SparseState apply_unitary_c(const SparseState &s, const LocalUnitary &u, Coverage coverage) {
    if (u.is_identity() && coverage == Coverage::identity_extension) return s;

    std::map<Label, std::size_t> index;
    for (std::size_t i = 0; i < u.basis().size(); ++i) index.emplace(u.basis()[i], i);

    if (u.is_identity()) {
        for (const auto &[key, amp] : s.amplitudes())
            if (!index.contains(key.second))
                throw Error(ErrorCode::unknown_label, "label '" + key.second.str() + "' outside unitary basis");
        return s;
    }

    SparseState::AmplitudeMap out;
    const ComplexMatrix &m = u.matrix();
    for (const auto &[key, amp] : s.amplitudes()) {
        const auto it = index.find(key.second);
        if (it == index.end()) {
            if (coverage == Coverage::strict)
                throw Error(ErrorCode::unknown_label, "label '" + key.second.str() + "' outside unitary basis");
            out[key] += amp;
            continue;
        }
        const std::size_t col = it->second;
        for (std::size_t row = 0; row < u.basis().size(); ++row) {
            const Complex entry = m(row, col);
            if (entry != Complex{}) out[{key.first, u.basis()[row]}] += entry * amp;
        }
    }
    return SparseState::from_amplitudes(std::move(out));
}

std::map<Label, Branch> measurement_branches(const SparseState &s, const ProjPartition &p) {
    std::map<Label, SparseState::AmplitudeMap> projected;
    for (const auto &[key, amp] : s.amplitudes()) projected[p.outcome(key.second)].emplace(key, amp);

    std::map<Label, Branch> out;
    for (auto &[outcome, amps] : projected) {
        double q = 0.0;
        for (const auto &[key, amp] : amps) q += std::norm(amp);
        if (q <= 0.0) continue;
        out.emplace(outcome, Branch{q, SparseState::normalized(std::move(amps))});
    }
    return out;
}

double seeded_uniform(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

MeasurementResult measure_partition(const SparseState &s, const ProjPartition &p, std::uint64_t rng_seed) {
    auto branches = measurement_branches(s, p);
    if (branches.empty()) throw Error(ErrorCode::invalid_state, "cannot measure an empty state");

    MeasurementResult result;
    for (const auto &[outcome, branch] : branches) result.distribution.emplace(outcome, branch.probability);

    const double draw = seeded_uniform(rng_seed);
    double cumulative = 0.0;
    auto chosen = std::prev(branches.end());
    for (auto it = branches.begin(); it != branches.end(); ++it) {
        cumulative += it->second.probability;
        if (draw < cumulative) {
            chosen = it;
            break;
        }
    }
    result.outcome = chosen->first;
    result.post = std::move(chosen->second.state);
    return result;
}

double project_accept_probability(const SparseState &reference, const Ensemble &returned) {
    double total = 0.0;
    for (const auto &member : returned.members())
        total += member.weight * std::norm(inner_product(reference, member.state));
    return std::clamp(total, 0.0, 1.0);
}

ComplexMatrix random_unitary(std::size_t dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<std::vector<Complex>> columns(dim, std::vector<Complex>(dim));
    for (auto &col : columns)
        for (auto &entry : col) {
            const double re = gauss(rng);
            const double im = gauss(rng);
            entry = Complex(re, im);
        }

    // Modified Gram-Schmidt, twice for numerical orthogonality.
    for (std::size_t j = 0; j < dim; ++j) {
        for (int pass = 0; pass < 2; ++pass)
            for (std::size_t i = 0; i < j; ++i) {
                Complex proj{};
                for (std::size_t r = 0; r < dim; ++r) proj += std::conj(columns[i][r]) * columns[j][r];
                for (std::size_t r = 0; r < dim; ++r) columns[j][r] -= proj * columns[i][r];
            }
        double norm = 0.0;
        for (const auto &entry : columns[j]) norm += std::norm(entry);
        norm = std::sqrt(norm);
        for (auto &entry : columns[j]) entry /= norm;
    }

    ComplexMatrix u(dim, dim);
    for (std::size_t j = 0; j < dim; ++j)
        for (std::size_t r = 0; r < dim; ++r) u(r, j) = columns[j][r];
    return u;
}

}  // namespace sealed
