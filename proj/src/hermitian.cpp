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

#include "sealed/hermitian.hpp"

#include <algorithm>
#include <cmath>

namespace sealed {

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
    ComplexMatrix m(dim, dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
    return out;
}

ComplexMatrix ComplexMatrix::operator*(const ComplexMatrix &rhs) const {
    ComplexMatrix out(rows_, rhs.cols_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t k = 0; k < cols_; ++k) {
            const Complex a = (*this)(r, k);
            if (a == Complex{}) continue;
            for (std::size_t c = 0; c < rhs.cols_; ++c) out(r, c) += a * rhs(k, c);
        }
    return out;
}

double ComplexMatrix::unitarity_defect() const {
    const ComplexMatrix product = adjoint() * *this;
    double worst = 0.0;
    for (std::size_t r = 0; r < product.rows(); ++r)
        for (std::size_t c = 0; c < product.cols(); ++c)
            worst = std::max(worst, std::abs(product(r, c) - Complex(r == c ? 1.0 : 0.0)));
    return worst;
}

namespace {

double max_off_diagonal(const ComplexMatrix &a) {
    double worst = 0.0;
    for (std::size_t p = 0; p < a.rows(); ++p)
        for (std::size_t q = p + 1; q < a.cols(); ++q) worst = std::max(worst, std::abs(a(p, q)));
    return worst;
}

// Zeroes a(p, q) with G = diag(1, e^{-i phi}) * [[c, -s], [s, c]] acting on
// the (p, q) plane: A <- G^dagger A G.
void rotate(ComplexMatrix &a, std::size_t p, std::size_t q) {
    const Complex apq = a(p, q);
    const double magnitude = std::abs(apq);
    if (magnitude == 0.0) return;
    const Complex phase = apq / magnitude;
    const double theta = 0.5 * std::atan2(2.0 * magnitude, a(p, p).real() - a(q, q).real());
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const Complex g_pp = c;
    const Complex g_pq = -s;
    const Complex g_qp = std::conj(phase) * s;
    const Complex g_qq = std::conj(phase) * c;

    const std::size_t n = a.rows();
    for (std::size_t k = 0; k < n; ++k) {
        const Complex akp = a(k, p);
        const Complex akq = a(k, q);
        a(k, p) = akp * g_pp + akq * g_qp;
        a(k, q) = akp * g_pq + akq * g_qq;
    }
    for (std::size_t k = 0; k < n; ++k) {
        const Complex apk = a(p, k);
        const Complex aqk = a(q, k);
        a(p, k) = std::conj(g_pp) * apk + std::conj(g_qp) * aqk;
        a(q, k) = std::conj(g_pq) * apk + std::conj(g_qq) * aqk;
    }
    a(p, q) = 0.0;
    a(q, p) = 0.0;
    a(p, p) = a(p, p).real();
    a(q, q) = a(q, q).real();
}

}  // namespace

std::vector<double> hermitian_eigenvalues(ComplexMatrix a) {
    const std::size_t n = a.rows();
    for (int sweep = 0; sweep < kJacobiMaxSweeps; ++sweep) {
        if (max_off_diagonal(a) < kJacobiOffDiagonalTolerance) break;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q)
                if (std::abs(a(p, q)) >= 0.01 * kJacobiOffDiagonalTolerance) rotate(a, p, q);
    }
    std::vector<double> eigenvalues(n);
    for (std::size_t i = 0; i < n; ++i) eigenvalues[i] = a(i, i).real();
    std::sort(eigenvalues.begin(), eigenvalues.end());
    return eigenvalues;
}

double hermitian_trace_norm(const ComplexMatrix &a) {
    double total = 0.0;
    for (double lambda : hermitian_eigenvalues(a)) total += std::abs(lambda);
    return total;
}

}  // namespace sealed
