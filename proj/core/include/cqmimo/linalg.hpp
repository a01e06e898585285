// SPDX-License-Identifier: Apache-2.0
//
// cqmimo: precoding and power allocation for multi-user MIMO with few-bit DACs
// Copyright (C) 2026 the cqmimo authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef CQMIMO_LINALG_HPP
#define CQMIMO_LINALG_HPP

#include <vector>

#include "cqmimo/matrix.hpp"

namespace cqmimo {

/// Thin SVD A = U diag(S) V^H with U (m x k), V (n x k), k = min(m, n).
/// S is sorted non-increasing; column signs are fixed (see svd()).
struct SvdResult {
    ComplexMatrix u;
    std::vector<double> s;
    ComplexMatrix v;
};

/// Hermitian eigendecomposition A = V diag(w) V^H, eigenvalues descending.
struct EighResult {
    std::vector<double> w;
    ComplexMatrix v;
};

/// Singular value decomposition of a dense complex matrix.
///
/// Deterministic for identical input: on top of the backend decomposition a
/// fixed phase convention is applied, making the first component of each
/// column of V with modulus above 1e-12 real and non-negative (the matching
/// column of U is rotated by the same phase, so A == U diag(S) V^H is
/// preserved). Throws ConvergenceFailure if the backend iteration fails,
/// InvalidDimensions on an empty matrix.
SvdResult svd(const ComplexMatrix& a);

/// log2 det(A) of a Hermitian positive definite matrix, computed from a
/// Cholesky factorization; the determinant itself is never materialized.
/// Hermitian symmetry is checked to 1e-10 (relative to the largest entry);
/// a non-positive pivot raises NotPositiveDefinite.
double logdet_psd(const ComplexMatrix& a);

/// Solves A X = B for Hermitian positive definite A via Cholesky.
ComplexMatrix solve_psd(const ComplexMatrix& a, const ComplexMatrix& b);

/// Hermitian eigendecomposition with the same deterministic phase fix as
/// svd() applied to the eigenvector columns.
EighResult eigh(const ComplexMatrix& a);

/// Given v1 (n x k) with orthonormal columns, returns an n x (n - k) matrix
/// whose columns complete v1 to an orthonormal basis of C^n. k = 0 yields
/// the identity basis.
ComplexMatrix orthonormal_complement(const ComplexMatrix& v1, std::size_t full_dim);

/// Count of singular values above max(m, n) * eps * s_max, the usual
/// numerical rank rule.
std::size_t numerical_rank(const std::vector<double>& singular_values, std::size_t rows,
                           std::size_t cols);

}  // namespace cqmimo

#endif  // CQMIMO_LINALG_HPP
