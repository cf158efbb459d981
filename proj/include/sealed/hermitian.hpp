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

#include <complex>
#include <cstddef>
#include <vector>

namespace sealed {

using Complex = std::complex<double>;

/// Dense row-major complex matrix. Only what the simulator needs: element
/// access, products, adjoint.
class ComplexMatrix {
  public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    static ComplexMatrix identity(std::size_t dim);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Complex &operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Complex &operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    ComplexMatrix adjoint() const;
    ComplexMatrix operator*(const ComplexMatrix &rhs) const;

    /// Largest entrywise deviation of this^dagger * this from the identity.
    double unitarity_defect() const;

    bool operator==(const ComplexMatrix &) const = default;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> data_;
};

inline constexpr double kJacobiOffDiagonalTolerance = 1e-12;
inline constexpr int kJacobiMaxSweeps = 100;

/// Eigenvalues of a Hermitian matrix by cyclic complex Jacobi rotations,
/// sorted ascending. Iterates until every off-diagonal magnitude is below
/// kJacobiOffDiagonalTolerance. Only the upper triangle's Hermitian
/// counterpart is assumed; the input must be square.
std::vector<double> hermitian_eigenvalues(ComplexMatrix a);

/// Sum of |eigenvalue| over a Hermitian matrix.
double hermitian_trace_norm(const ComplexMatrix &a);

}  // namespace sealed
