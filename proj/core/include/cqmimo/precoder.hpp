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

#ifndef CQMIMO_PRECODER_HPP
#define CQMIMO_PRECODER_HPP

#include <string>
#include <vector>

#include "cqmimo/channel.hpp"
#include "cqmimo/matrix.hpp"

namespace cqmimo {

enum class PrecoderKind { zf, mmse, bd, rbd };

std::string to_string(PrecoderKind kind);
PrecoderKind precoder_kind_from_string(const std::string& name);

/// Two-stage factors of one user's precoder P_j = pc * pd.
///
/// For the block-diagonalizing precoders, pc spans directions that null (or
/// nearly null, in the regularized variant) every other user's channel, the
/// effective channel H_j * pc = U diag(phi) W^H is diagonalized by its SVD,
/// w1 holds the leading columns of W, and pd = w1 * diag(sqrt(omega)) loads
/// per-stream powers onto the parallel subchannels. The linear baselines
/// (ZF, MMSE) only populate pc with their column slice; phi and omega stay
/// empty since they expose no power-loading diagonal.
struct UserFactors {
    ComplexMatrix pc;
    ComplexMatrix pd;
    std::vector<double> phi;    // effective-channel singular values, descending
    ComplexMatrix w1;           // leading right singular block of the effective channel
    std::vector<double> omega;  // per-stream powers, same length as phi
};

/// Assembled transmit precoder [P_1 ... P_K], normalized so that
/// trace(P R_s P^H) equals p_total with R_s = I.
struct Precoder {
    ComplexMatrix p_matrix;
    std::vector<UserFactors> per_user;
    PrecoderKind kind = PrecoderKind::bd;
    double p_total = 0.0;
};

/// Block-diagonalization precoder. For each user, pc is an orthonormal basis
/// of the null space of the other users' stacked channel, and the effective
/// channel is SVD-decomposed for power loading, initialized with the total
/// power split equally over all streams. Requires a nonempty null space for
/// every user (RankDeficiency otherwise).
Precoder build_bd(const ChannelSet& ch, double p_total);

/// Regularized variant: pc = Wbar (PhibarT Phibar + chi I)^(-1/2) with
/// chi = nu * n0 / p_total, trading interference suppression against noise.
/// Rank-deficient channels are allowed. n0 = 0 degenerates to the hard
/// null-space projection of build_bd.
Precoder build_rbd(const ChannelSet& ch, double p_total, double n0);

/// Zero-forcing baseline P = H^H (H H^H)^(-1), normalized.
Precoder build_zf(const ChannelSet& ch, double p_total);

/// MMSE baseline P = H^H (H H^H + (nu n0 / p_total) I)^(-1), normalized.
Precoder build_mmse(const ChannelSet& ch, double p_total, double n0);

/// Rebuilds the second-stage factors with the given per-user power loadings
/// and reassembles P without renormalizing; the loading itself must satisfy
/// the power budget (sum over all streams <= p_total). Only meaningful for
/// BD/RBD precoders. Throws NegativePower / BudgetExceeded / DimensionMismatch.
Precoder set_power_loading(const Precoder& pre, const std::vector<std::vector<double>>& omegas);

/// Squared effective-channel singular values pooled across users in user
/// order; the layout power allocation expects.
std::vector<double> pooled_phi2(const Precoder& pre);

/// Splits a pooled per-stream vector back into per-user chunks matching the
/// precoder's phi lengths.
std::vector<std::vector<double>> split_by_user(const Precoder& pre,
                                               const std::vector<double>& pooled);

}  // namespace cqmimo

#endif  // CQMIMO_PRECODER_HPP
