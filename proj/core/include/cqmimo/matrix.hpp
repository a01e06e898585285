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

#ifndef CQMIMO_MATRIX_HPP
#define CQMIMO_MATRIX_HPP

#include <complex>
#include <cstddef>
#include <vector>

#include "cqmimo/errors.hpp"

namespace cqmimo {

using cx = std::complex<double>;

/// Dense complex matrix, row-major storage. Entries are checked to be finite
/// on construction; every other module carries its numeric payloads in this
/// type (channels, precoders, covariances).
class ComplexMatrix {
  public:
    ComplexMatrix() = default;

    /// Zero-initialized rows x cols matrix.
    ComplexMatrix(std::size_t rows, std::size_t cols);

    /// Takes ownership of row-major entries; throws InvalidDimensions if the
    /// entry count does not match or any entry is NaN/Inf.
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cx> entries);

    static ComplexMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    cx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const cx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::vector<cx>& data() { return data_; }
    const std::vector<cx>& data() const { return data_; }

    /// Rows [first, first+count) as a new matrix.
    ComplexMatrix row_block(std::size_t first, std::size_t count) const;

    /// Columns [first, first+count) as a new matrix.
    ComplexMatrix col_block(std::size_t first, std::size_t count) const;

    bool all_finite() const;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cx> data_;
};

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(cx scale, const ComplexMatrix& a);
ComplexMatrix operator*(double scale, const ComplexMatrix& a);

/// A^H.
ComplexMatrix conj_transpose(const ComplexMatrix& a);

/// A * A^H (Hermitian by construction, explicitly symmetrized).
ComplexMatrix gram_right(const ComplexMatrix& a);

/// A^H * A (Hermitian by construction, explicitly symmetrized).
ComplexMatrix gram_left(const ComplexMatrix& a);

cx trace(const ComplexMatrix& a);
double frobenius_norm(const ComplexMatrix& a);
double max_abs(const ComplexMatrix& a);

/// max_ij |A_ij - conj(A_ji)|.
double hermitian_deviation(const ComplexMatrix& a);

/// Stacks blocks left to right; all blocks must share the row count.
ComplexMatrix hstack(const std::vector<ComplexMatrix>& blocks);

/// Stacks blocks top to bottom; all blocks must share the column count.
ComplexMatrix vstack(const std::vector<ComplexMatrix>& blocks);

}  // namespace cqmimo

#endif  // CQMIMO_MATRIX_HPP
