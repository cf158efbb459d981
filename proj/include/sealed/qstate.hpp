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

// Exact sparse bipartite pure states over opaque basis labels, the local
// operations Charlie can perform on register C, and the trace-distance
// machinery Belinda's acceptance is bounded by.

#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "sealed/hermitian.hpp"

namespace sealed {

inline constexpr double kNormTolerance = 1e-9;
inline constexpr double kPruneThreshold = 1e-15;
inline constexpr std::size_t kMaxJointDimension = 512;

/// Basis-state name for one register. Distinct tokens are orthogonal.
class Label {
  public:
    Label() = default;
    explicit Label(std::string token) : token_(std::move(token)) {}

    const std::string &str() const { return token_; }

    auto operator<=>(const Label &) const = default;

  private:
    std::string token_;
};

/// (B label, C label).
using LabelPair = std::pair<Label, Label>;

/// Unit-norm pure state on registers B and C. Amplitudes below
/// kPruneThreshold are never stored.
class SparseState {
  public:
    using AmplitudeMap = std::map<LabelPair, Complex>;

    SparseState() = default;

    /// Takes amplitudes as given; throws invalid_state unless the squared
    /// norm is 1 within `tolerance`.
    static SparseState from_amplitudes(AmplitudeMap amps, double tolerance = kNormTolerance);

    /// Rescales to unit norm; throws invalid_state on a zero vector.
    static SparseState normalized(AmplitudeMap amps);

    static SparseState basis(const Label &b, const Label &c);

    const AmplitudeMap &amplitudes() const { return amps_; }
    Complex amplitude(const Label &b, const Label &c) const;
    std::size_t size() const { return amps_.size(); }
    bool empty() const { return amps_.empty(); }

    std::set<Label> b_labels() const;
    std::set<Label> c_labels() const;
    double norm_squared() const;

    /// Max entrywise |a - b| over the union of supports.
    double max_amplitude_difference(const SparseState &other) const;

    bool operator==(const SparseState &) const = default;

  private:
    explicit SparseState(AmplitudeMap amps) : amps_(std::move(amps)) {}

    AmplitudeMap amps_;
};

/// Weighted list of pure states: sigma = sum_i q_i |phi_i><phi_i|.
class Ensemble {
  public:
    struct Member {
        double weight;
        SparseState state;
    };

    Ensemble() = default;
    /// Throws invalid_state if any weight is negative or the weights do not
    /// sum to 1 within kNormTolerance.
    explicit Ensemble(std::vector<Member> members);

    static Ensemble pure(SparseState state);

    const std::vector<Member> &members() const { return members_; }
    std::size_t size() const { return members_.size(); }

  private:
    std::vector<Member> members_;
};

/// Unitary acting on register C restricted to `basis`; identity on every
/// other C label.
class LocalUnitary {
  public:
    LocalUnitary() = default;
    /// Throws not_unitary if matrix^dagger matrix deviates from the identity
    /// by more than kNormTolerance entrywise, length_mismatch on shape errors
    /// and label_collision on repeated basis labels.
    LocalUnitary(std::vector<Label> basis, ComplexMatrix matrix);

    /// Matrix is only built if someone asks for it.
    static LocalUnitary identity(std::vector<Label> basis);

    const std::vector<Label> &basis() const { return basis_; }
    const ComplexMatrix &matrix() const;
    LocalUnitary adjoint() const;
    bool is_identity() const;

  private:
    struct LazyIdentity {
        std::once_flag built;
        ComplexMatrix matrix;
    };

    std::vector<Label> basis_;
    ComplexMatrix matrix_;
    std::shared_ptr<LazyIdentity> identity_;  // set for identity()
};

/// Assignment of C labels to outcome labels; each class is one projector.
class ProjPartition {
  public:
    ProjPartition() = default;
    explicit ProjPartition(std::map<Label, Label> outcome_of) : outcome_of_(std::move(outcome_of)) {}

    /// One outcome per label, named after the label.
    static ProjPartition finest(const std::set<Label> &labels);

    const std::map<Label, Label> &outcome_of() const { return outcome_of_; }
    bool covers(const Label &c) const { return outcome_of_.contains(c); }
    const Label &outcome(const Label &c) const;
    std::set<Label> outcomes() const;
    /// Labels mapped to `outcome`.
    std::vector<Label> members(const Label &outcome) const;

  private:
    std::map<Label, Label> outcome_of_;
};

enum class Coverage {
    identity_extension,  // C labels outside the unitary's basis are left alone
    strict,              // such labels raise unknown_label
};

Complex inner_product(const SparseState &a, const SparseState &b);

/// sqrt(1 - |<a|b>|^2), clamped into [0, 1].
double trace_distance_pure(const SparseState &a, const SparseState &b);

/// Labels spanned by psi and every ensemble member, sorted.
std::vector<LabelPair> joint_basis(const SparseState &psi, const Ensemble &sigma);

/// |psi><psi| - sigma on `basis`.
ComplexMatrix density_difference(const SparseState &psi, const Ensemble &sigma,
                                 const std::vector<LabelPair> &basis);

/// Half the trace norm of |psi><psi| - sigma, via the Hermitian eigensolver.
/// Throws dimension_too_large if the joint basis exceeds kMaxJointDimension.
double trace_distance_pure_vs_ensemble(const SparseState &psi, const Ensemble &sigma);

SparseState apply_unitary_c(const SparseState &s, const LocalUnitary &u,
                            Coverage coverage = Coverage::identity_extension);

/// One outcome of a projective measurement on C: probability and the
/// renormalized post-measurement state.
struct Branch {
    double probability;
    SparseState state;
};

/// Exact outcome distribution and post-states; outcomes with zero
/// probability are omitted. Throws uncovered_label.
std::map<Label, Branch> measurement_branches(const SparseState &s, const ProjPartition &p);

struct MeasurementResult {
    Label outcome;
    SparseState post;
    std::map<Label, double> distribution;
};

/// Samples one outcome with an mt19937_64 seeded by `rng_seed`.
MeasurementResult measure_partition(const SparseState &s, const ProjPartition &p, std::uint64_t rng_seed);

/// Belinda's exact acceptance probability for the rank-1 projector onto
/// `reference`: sum_i q_i |<reference|phi_i>|^2.
double project_accept_probability(const SparseState &reference, const Ensemble &returned);

/// Draws a sample in [0, 1) from a generator seeded with `seed`; the one
/// sampling primitive shared by every seeded decision in the library.
double seeded_uniform(std::uint64_t seed);

/// Haar-adequate random unitary: Gram-Schmidt on a complex Gaussian matrix.
ComplexMatrix random_unitary(std::size_t dim, std::uint64_t seed);

}  // namespace sealed
