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

#ifndef CQMIMO_CHANNEL_HPP
#define CQMIMO_CHANNEL_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "cqmimo/matrix.hpp"

namespace cqmimo {

/// Stacked multi-user downlink channel. Rows are receive antennas grouped
/// per user: user j owns rows [offset_j, offset_j + partition[j]).
struct ChannelSet {
    ComplexMatrix h;                     // nu x nb
    std::vector<std::size_t> partition;  // receive antennas per user, each >= 1
    std::size_t nb = 0;                  // transmit antennas
    std::uint64_t seed = 0;              // stream key the matrix was drawn from

    std::size_t n_users() const { return partition.size(); }
    std::size_t nu() const;

    /// Row offset of user j (1-based, matching the public user indexing).
    std::size_t user_row_offset(std::size_t j) const;

    /// Channel block H_j of user j (1-based).
    ComplexMatrix user_block(std::size_t j) const;
};

/// Imperfect-CSI model: transmit-side correlation coefficient r (complex,
/// |r| < 1) and additive estimation-error variance sigma_e2.
struct CsiModel {
    cx r = cx(0.0, 0.0);
    double sigma_e2 = 0.0;
};

/// Draws an nu x nb channel with i.i.d. CN(0, 1) entries (real and imaginary
/// parts each of variance 1/2), deterministically from the seed. Requires
/// nb >= sum(partition); throws InvalidDimensions otherwise.
ChannelSet generate_iid(std::size_t nb, const std::vector<std::size_t>& partition,
                        std::uint64_t seed);

/// Applies the imperfect-knowledge model Hhat = H * Rt^(1/2) + E, where Rt is
/// the nb x nb transmit correlation matrix with Rt_ij = r^(j-i) for i <= j
/// and conjugate-Toeplitz below the diagonal, Rt^(1/2) is its Hermitian PSD
/// square root, and E has i.i.d. CN(0, sigma_e2) entries drawn from the seed.
/// Eigenvalues of Rt below -1e-12 raise NotPositiveSemidefinite; values in
/// [-1e-12, 0] are clamped to zero.
ChannelSet apply_csi_model(const ChannelSet& ch, const CsiModel& model, std::uint64_t seed);

/// Rows of every user except j (1-based), original order preserved. K = 1
/// yields an empty 0 x nb matrix.
ComplexMatrix exclude_user(const ChannelSet& ch, std::size_t j);

/// Transmit correlation matrix of the CSI model, exposed for tests.
ComplexMatrix transmit_correlation(std::size_t nb, cx r);

// Plain-text matrix exchange format: header line "rows cols", then one
// "re im" pair per entry, row-major. Used by the CLI channel dump/load flags.
void save_matrix_text(const ComplexMatrix& m, const std::string& path);
ComplexMatrix load_matrix_text(const std::string& path);

}  // namespace cqmimo

#endif  // CQMIMO_CHANNEL_HPP
