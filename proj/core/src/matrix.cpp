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

#include "cqmimo/matrix.hpp"

#include <cmath>
#include <string>

namespace cqmimo {

namespace {

void check_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw InvalidDimensions(std::string(op) + ": shape mismatch " +
                                std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                                " vs " + std::to_string(b.rows()) + "x" +
                                std::to_string(b.cols()));
    }
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, cx(0.0, 0.0)) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_) {
        throw InvalidDimensions("ComplexMatrix: entry count " + std::to_string(data_.size()) +
                                " does not match " + std::to_string(rows_) + "x" +
                                std::to_string(cols_));
    }
    if (!all_finite()) {
        throw InvalidDimensions("ComplexMatrix: non-finite entry on construction");
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = cx(1.0, 0.0);
    return m;
}

ComplexMatrix ComplexMatrix::row_block(std::size_t first, std::size_t count) const {
    if (first + count > rows_) throw IndexOutOfRange("row_block: rows out of range");
    ComplexMatrix out(count, cols_);
    for (std::size_t i = 0; i < count; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out(i, j) = (*this)(first + i, j);
    return out;
}

ComplexMatrix ComplexMatrix::col_block(std::size_t first, std::size_t count) const {
    if (first + count > cols_) throw IndexOutOfRange("col_block: cols out of range");
    ComplexMatrix out(rows_, count);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < count; ++j) out(i, j) = (*this)(i, first + j);
    return out;
}

bool ComplexMatrix::all_finite() const {
    for (const cx& v : data_) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    }
    return true;
}

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
    check_same_shape(a, b, "operator+");
    ComplexMatrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.size(); ++i) out.data()[i] = a.data()[i] + b.data()[i];
    return out;
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
    check_same_shape(a, b, "operator-");
    ComplexMatrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.size(); ++i) out.data()[i] = a.data()[i] - b.data()[i];
    return out;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) {
        throw InvalidDimensions("operator*: inner dimensions " + std::to_string(a.cols()) +
                                " vs " + std::to_string(b.rows()));
    }
    ComplexMatrix out(a.rows(), b.cols());
    // (i,k,j) loop order keeps the inner walk contiguous in both b and out.
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const cx aik = a(i, k);
            if (aik == cx(0.0, 0.0)) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
        }
    }
    return out;
}

ComplexMatrix operator*(cx scale, const ComplexMatrix& a) {
    ComplexMatrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.size(); ++i) out.data()[i] = scale * a.data()[i];
    return out;
}

ComplexMatrix operator*(double scale, const ComplexMatrix& a) {
    return cx(scale, 0.0) * a;
}

ComplexMatrix conj_transpose(const ComplexMatrix& a) {
    ComplexMatrix out(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = std::conj(a(i, j));
    return out;
}

ComplexMatrix gram_right(const ComplexMatrix& a) {
    ComplexMatrix out(a.rows(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            cx acc(0.0, 0.0);
            for (std::size_t k = 0; k < a.cols(); ++k) acc += a(i, k) * std::conj(a(j, k));
            out(i, j) = acc;
            out(j, i) = std::conj(acc);
        }
        out(i, i) = cx(out(i, i).real(), 0.0);
    }
    return out;
}

ComplexMatrix gram_left(const ComplexMatrix& a) {
    ComplexMatrix out(a.cols(), a.cols());
    for (std::size_t i = 0; i < a.cols(); ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            cx acc(0.0, 0.0);
            for (std::size_t k = 0; k < a.rows(); ++k) acc += std::conj(a(k, i)) * a(k, j);
            out(i, j) = acc;
            out(j, i) = std::conj(acc);
        }
        out(i, i) = cx(out(i, i).real(), 0.0);
    }
    return out;
}

cx trace(const ComplexMatrix& a) {
    if (a.rows() != a.cols()) throw InvalidDimensions("trace: matrix not square");
    cx acc(0.0, 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) acc += a(i, i);
    return acc;
}

double frobenius_norm(const ComplexMatrix& a) {
    double acc = 0.0;
    for (const cx& v : a.data()) acc += std::norm(v);
    return std::sqrt(acc);
}

double max_abs(const ComplexMatrix& a) {
    double m = 0.0;
    for (const cx& v : a.data()) m = std::max(m, std::abs(v));
    return m;
}

double hermitian_deviation(const ComplexMatrix& a) {
    if (a.rows() != a.cols()) throw InvalidDimensions("hermitian_deviation: matrix not square");
    double m = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j <= i; ++j)
            m = std::max(m, std::abs(a(i, j) - std::conj(a(j, i))));
    return m;
}

ComplexMatrix hstack(const std::vector<ComplexMatrix>& blocks) {
    if (blocks.empty()) return {};
    std::size_t rows = blocks.front().rows();
    std::size_t cols = 0;
    for (const auto& b : blocks) {
        if (b.rows() != rows) throw InvalidDimensions("hstack: row count mismatch");
        cols += b.cols();
    }
    ComplexMatrix out(rows, cols);
    std::size_t off = 0;
    for (const auto& b : blocks) {
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < b.cols(); ++j) out(i, off + j) = b(i, j);
        off += b.cols();
    }
    return out;
}

ComplexMatrix vstack(const std::vector<ComplexMatrix>& blocks) {
    if (blocks.empty()) return {};
    std::size_t cols = blocks.front().cols();
    std::size_t rows = 0;
    for (const auto& b : blocks) {
        if (b.cols() != cols) throw InvalidDimensions("vstack: column count mismatch");
        rows += b.rows();
    }
    ComplexMatrix out(rows, cols);
    std::size_t off = 0;
    for (const auto& b : blocks) {
        for (std::size_t i = 0; i < b.rows(); ++i)
            for (std::size_t j = 0; j < cols; ++j) out(off + i, j) = b(i, j);
        off += b.rows();
    }
    return out;
}

}  // namespace cqmimo
