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

#include "cqmimo/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

// Fortran LAPACK entry points (column-major). Trailing size_t arguments are
// the hidden character-length parameters of the gfortran ABI.
extern "C" {
void zgesvd_(const char* jobu, const char* jobvt, const int* m, const int* n,
             std::complex<double>* a, const int* lda, double* s, std::complex<double>* u,
             const int* ldu, std::complex<double>* vt, const int* ldvt,
             std::complex<double>* work, const int* lwork, double* rwork, int* info,
             std::size_t jobu_len, std::size_t jobvt_len);
void zpotrf_(const char* uplo, const int* n, std::complex<double>* a, const int* lda, int* info,
             std::size_t uplo_len);
void zpotrs_(const char* uplo, const int* n, const int* nrhs, const std::complex<double>* a,
             const int* lda, std::complex<double>* b, const int* ldb, int* info,
             std::size_t uplo_len);
void zheev_(const char* jobz, const char* uplo, const int* n, std::complex<double>* a,
            const int* lda, double* w, std::complex<double>* work, const int* lwork,
            double* rwork, int* info, std::size_t jobz_len, std::size_t uplo_len);
void zgeqrf_(const int* m, const int* n, std::complex<double>* a, const int* lda,
             std::complex<double>* tau, std::complex<double>* work, const int* lwork, int* info);
void zungqr_(const int* m, const int* n, const int* k, std::complex<double>* a, const int* lda,
             const std::complex<double>* tau, std::complex<double>* work, const int* lwork,
             int* info);
}

namespace cqmimo {

namespace {

constexpr double kPhaseTol = 1e-12;

std::vector<cx> to_col_major(const ComplexMatrix& a) {
    std::vector<cx> out(a.rows() * a.cols());
    for (std::size_t j = 0; j < a.cols(); ++j)
        for (std::size_t i = 0; i < a.rows(); ++i) out[j * a.rows() + i] = a(i, j);
    return out;
}

ComplexMatrix from_col_major(std::size_t rows, std::size_t cols, const std::vector<cx>& buf,
                             std::size_t ld) {
    ComplexMatrix out(rows, cols);
    for (std::size_t j = 0; j < cols; ++j)
        for (std::size_t i = 0; i < rows; ++i) out(i, j) = buf[j * ld + i];
    return out;
}

// Rotates column col of both matrices so its first entry with modulus above
// kPhaseTol becomes real non-negative. Keeps u * diag(s) * v^H unchanged.
void fix_column_phase(ComplexMatrix& v, ComplexMatrix* u, std::size_t col) {
    std::size_t pivot = v.rows();
    for (std::size_t i = 0; i < v.rows(); ++i) {
        if (std::abs(v(i, col)) > kPhaseTol) {
            pivot = i;
            break;
        }
    }
    if (pivot == v.rows()) return;
    const cx p = v(pivot, col);
    const cx rot = std::conj(p) / std::abs(p);
    for (std::size_t i = 0; i < v.rows(); ++i) v(i, col) *= rot;
    v(pivot, col) = cx(std::abs(v(pivot, col)), 0.0);
    if (u != nullptr) {
        for (std::size_t i = 0; i < u->rows(); ++i) (*u)(i, col) *= rot;
    }
}

void check_hermitian(const ComplexMatrix& a, const char* op) {
    if (a.rows() != a.cols()) {
        throw InvalidDimensions(std::string(op) + ": matrix not square");
    }
    const double tol = 1e-10 * std::max(1.0, max_abs(a));
    if (hermitian_deviation(a) > tol) {
        throw NotPositiveDefinite(std::string(op) + ": matrix not Hermitian within tolerance");
    }
}

// Cholesky factor of a, column-major, lower triangle.
std::vector<cx> cholesky_col_major(const ComplexMatrix& a, const char* op) {
    check_hermitian(a, op);
    const int n = static_cast<int>(a.rows());
    std::vector<cx> buf = to_col_major(a);
    int info = 0;
    zpotrf_("L", &n, buf.data(), &n, &info, 1);
    if (info > 0) {
        throw NotPositiveDefinite(std::string(op) + ": non-positive pivot at index " +
                                  std::to_string(info));
    }
    if (info < 0) {
        throw Error(std::string(op) + ": invalid argument to zpotrf");
    }
    return buf;
}

}  // namespace

SvdResult svd(const ComplexMatrix& a) {
    if (a.rows() == 0 || a.cols() == 0) {
        throw InvalidDimensions("svd: empty matrix");
    }
    const int m = static_cast<int>(a.rows());
    const int n = static_cast<int>(a.cols());
    const int k = std::min(m, n);

    std::vector<cx> a_cm = to_col_major(a);
    std::vector<double> s(static_cast<std::size_t>(k));
    std::vector<cx> u_cm(static_cast<std::size_t>(m) * k);
    std::vector<cx> vt_cm(static_cast<std::size_t>(k) * n);
    std::vector<double> rwork(static_cast<std::size_t>(5) * k);

    int info = 0;
    int lwork = -1;
    cx work_query;
    zgesvd_("S", "S", &m, &n, a_cm.data(), &m, s.data(), u_cm.data(), &m, vt_cm.data(), &k,
            &work_query, &lwork, rwork.data(), &info, 1, 1);
    lwork = static_cast<int>(work_query.real());
    std::vector<cx> work(static_cast<std::size_t>(std::max(lwork, 1)));
    zgesvd_("S", "S", &m, &n, a_cm.data(), &m, s.data(), u_cm.data(), &m, vt_cm.data(), &k,
            work.data(), &lwork, rwork.data(), &info, 1, 1);
    if (info > 0) {
        throw ConvergenceFailure("svd: " + std::to_string(info) +
                                 " superdiagonals did not converge");
    }
    if (info < 0) {
        throw Error("svd: invalid argument to zgesvd");
    }

    SvdResult out;
    out.u = from_col_major(a.rows(), static_cast<std::size_t>(k), u_cm, a.rows());
    out.s = std::move(s);
    out.v = ComplexMatrix(a.cols(), static_cast<std::size_t>(k));
    for (std::size_t j = 0; j < a.cols(); ++j)
        for (std::size_t i = 0; i < static_cast<std::size_t>(k); ++i)
            out.v(j, i) = std::conj(vt_cm[j * k + i]);
    for (std::size_t c = 0; c < static_cast<std::size_t>(k); ++c)
        fix_column_phase(out.v, &out.u, c);
    return out;
}

double logdet_psd(const ComplexMatrix& a) {
    std::vector<cx> chol = cholesky_col_major(a, "logdet_psd");
    const std::size_t n = a.rows();
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += std::log2(chol[i * n + i].real());
    return 2.0 * acc;
}

ComplexMatrix solve_psd(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows()) {
        throw InvalidDimensions("solve_psd: incompatible shapes");
    }
    std::vector<cx> chol = cholesky_col_major(a, "solve_psd");
    const int n = static_cast<int>(a.rows());
    const int nrhs = static_cast<int>(b.cols());
    std::vector<cx> b_cm = to_col_major(b);
    int info = 0;
    zpotrs_("L", &n, &nrhs, chol.data(), &n, b_cm.data(), &n, &info, 1);
    if (info != 0) {
        throw Error("solve_psd: zpotrs failed");
    }
    return from_col_major(b.rows(), b.cols(), b_cm, b.rows());
}

EighResult eigh(const ComplexMatrix& a) {
    check_hermitian(a, "eigh");
    const int n = static_cast<int>(a.rows());
    if (n == 0) throw InvalidDimensions("eigh: empty matrix");

    std::vector<cx> a_cm = to_col_major(a);
    std::vector<double> w(static_cast<std::size_t>(n));
    std::vector<double> rwork(static_cast<std::size_t>(std::max(1, 3 * n - 2)));
    int info = 0;
    int lwork = -1;
    cx work_query;
    zheev_("V", "L", &n, a_cm.data(), &n, w.data(), &work_query, &lwork, rwork.data(), &info, 1,
           1);
    lwork = static_cast<int>(work_query.real());
    std::vector<cx> work(static_cast<std::size_t>(std::max(lwork, 1)));
    zheev_("V", "L", &n, a_cm.data(), &n, w.data(), work.data(), &lwork, rwork.data(), &info, 1,
           1);
    if (info > 0) throw ConvergenceFailure("eigh: zheev did not converge");
    if (info < 0) throw Error("eigh: invalid argument to zheev");

    // zheev returns ascending eigenvalues; flip to descending.
    EighResult out;
    out.w.resize(static_cast<std::size_t>(n));
    out.v = ComplexMatrix(a.rows(), a.rows());
    for (std::size_t j = 0; j < a.rows(); ++j) {
        const std::size_t src = a.rows() - 1 - j;
        out.w[j] = w[src];
        for (std::size_t i = 0; i < a.rows(); ++i) out.v(i, j) = a_cm[src * a.rows() + i];
    }
    for (std::size_t c = 0; c < a.rows(); ++c) fix_column_phase(out.v, nullptr, c);
    return out;
}

ComplexMatrix orthonormal_complement(const ComplexMatrix& v1, std::size_t full_dim) {
    const std::size_t k = v1.empty() ? 0 : v1.cols();
    if (k > 0 && v1.rows() != full_dim) {
        throw InvalidDimensions("orthonormal_complement: basis has wrong row count");
    }
    if (k > full_dim) {
        throw InvalidDimensions("orthonormal_complement: more columns than dimensions");
    }
    if (k == 0) return ComplexMatrix::identity(full_dim);
    if (k == full_dim) return {full_dim, 0};

    const int m = static_cast<int>(full_dim);
    const int kk = static_cast<int>(k);
    std::vector<cx> buf(full_dim * full_dim, cx(0.0, 0.0));
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t i = 0; i < full_dim; ++i) buf[j * full_dim + i] = v1(i, j);

    std::vector<cx> tau(k);
    int info = 0;
    int lwork = -1;
    cx work_query;
    zgeqrf_(&m, &kk, buf.data(), &m, tau.data(), &work_query, &lwork, &info);
    lwork = static_cast<int>(work_query.real());
    std::vector<cx> work(static_cast<std::size_t>(std::max(lwork, 1)));
    zgeqrf_(&m, &kk, buf.data(), &m, tau.data(), work.data(), &lwork, &info);
    if (info != 0) throw Error("orthonormal_complement: zgeqrf failed");

    lwork = -1;
    zungqr_(&m, &m, &kk, buf.data(), &m, tau.data(), &work_query, &lwork, &info);
    lwork = static_cast<int>(work_query.real());
    work.resize(static_cast<std::size_t>(std::max(lwork, 1)));
    zungqr_(&m, &m, &kk, buf.data(), &m, tau.data(), work.data(), &lwork, &info);
    if (info != 0) throw Error("orthonormal_complement: zungqr failed");

    ComplexMatrix out(full_dim, full_dim - k);
    for (std::size_t j = k; j < full_dim; ++j)
        for (std::size_t i = 0; i < full_dim; ++i) out(i, j - k) = buf[j * full_dim + i];
    for (std::size_t c = 0; c < out.cols(); ++c) fix_column_phase(out, nullptr, c);
    return out;
}

std::size_t numerical_rank(const std::vector<double>& singular_values, std::size_t rows,
                           std::size_t cols) {
    if (singular_values.empty()) return 0;
    const double tol = static_cast<double>(std::max(rows, cols)) *
                       std::numeric_limits<double>::epsilon() * singular_values.front();
    std::size_t r = 0;
    for (double s : singular_values) {
        if (s > tol) ++r;
    }
    return r;
}

}  // namespace cqmimo
