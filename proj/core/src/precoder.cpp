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

#include "cqmimo/precoder.hpp"

#include <cmath>
#include <string>

#include "cqmimo/linalg.hpp"

namespace cqmimo {

std::string to_string(PrecoderKind kind) {
    switch (kind) {
        case PrecoderKind::zf: return "ZF";
        case PrecoderKind::mmse: return "MMSE";
        case PrecoderKind::bd: return "BD";
        case PrecoderKind::rbd: return "RBD";
    }
    return "?";
}

PrecoderKind precoder_kind_from_string(const std::string& name) {
    if (name == "ZF" || name == "zf") return PrecoderKind::zf;
    if (name == "MMSE" || name == "mmse") return PrecoderKind::mmse;
    if (name == "BD" || name == "bd") return PrecoderKind::bd;
    if (name == "RBD" || name == "rbd") return PrecoderKind::rbd;
    throw DimensionMismatch("unknown precoder kind: " + name);
}

namespace {

void check_power(double p_total) {
    if (p_total <= 0.0) throw DimensionMismatch("precoder: p_total must be > 0");
}

ComplexMatrix second_stage(const UserFactors& f) {
    ComplexMatrix pd(f.w1.rows(), f.w1.cols());
    for (std::size_t j = 0; j < f.w1.cols(); ++j) {
        const double root = std::sqrt(f.omega[j]);
        for (std::size_t i = 0; i < f.w1.rows(); ++i) pd(i, j) = root * f.w1(i, j);
    }
    return pd;
}

// Assembles P = [pc_1 pd_1 ... pc_K pd_K]; when normalize is set, rescales so
// trace(P P^H) = p_total and folds the scale into pc and phi so the stored
// factors stay consistent with the assembled matrix.
Precoder assemble(std::vector<UserFactors> factors, PrecoderKind kind, double p_total,
                  bool normalize) {
    std::vector<ComplexMatrix> blocks;
    blocks.reserve(factors.size());
    for (auto& f : factors) {
        f.pd = second_stage(f);
        blocks.push_back(f.pc * f.pd);
    }
    ComplexMatrix p = hstack(blocks);
    if (normalize) {
        const double tr = frobenius_norm(p);
        if (tr <= 0.0) throw RankDeficiency("precoder assembly has zero power");
        const double scale = std::sqrt(p_total) / tr;
        if (std::abs(scale - 1.0) > 1e-12) {
            p = scale * p;
            for (auto& f : factors) {
                f.pc = scale * f.pc;
                for (double& v : f.phi) v *= scale;
            }
        }
    }
    return Precoder{std::move(p), std::move(factors), kind, p_total};
}

// Shared second stage of BD/RBD: SVD of the effective channel H_j * pc.
void load_effective_channel(const ComplexMatrix& hj, UserFactors& f) {
    const ComplexMatrix he = hj * f.pc;
    SvdResult sv = svd(he);
    const std::size_t lam = numerical_rank(sv.s, he.rows(), he.cols());
    if (lam == 0) throw RankDeficiency("effective channel has rank 0");
    f.phi.assign(sv.s.begin(), sv.s.begin() + static_cast<std::ptrdiff_t>(lam));
    f.w1 = sv.v.col_block(0, lam);
}

void init_equal_power(std::vector<UserFactors>& factors, double p_total) {
    std::size_t streams = 0;
    for (const auto& f : factors) streams += f.phi.size();
    const double w = p_total / static_cast<double>(streams);
    for (auto& f : factors) f.omega.assign(f.phi.size(), w);
}

// Right singular basis of the rows of hbar, split into row-space columns and
// an orthonormal completion of the null space.
struct RowSpaceSplit {
    ComplexMatrix row_basis;   // nb x rank
    ComplexMatrix null_basis;  // nb x (nb - rank)
    std::vector<double> sv;    // singular values including below-rank ones
};

RowSpaceSplit split_row_space(const ComplexMatrix& hbar, std::size_t nb) {
    RowSpaceSplit out;
    if (hbar.rows() == 0) {
        out.row_basis = ComplexMatrix(nb, 0);
        out.null_basis = ComplexMatrix::identity(nb);
        return out;
    }
    SvdResult sv = svd(hbar);
    const std::size_t rank = numerical_rank(sv.s, hbar.rows(), hbar.cols());
    out.row_basis = sv.v.col_block(0, rank);
    out.null_basis = orthonormal_complement(out.row_basis, nb);
    out.sv = std::move(sv.s);
    return out;
}

Precoder build_linear(const ChannelSet& ch, double p_total, double regularizer,
                      PrecoderKind kind) {
    check_power(p_total);
    const std::size_t nu = ch.nu();
    ComplexMatrix g = gram_right(ch.h);
    for (std::size_t i = 0; i < nu; ++i) g(i, i) += regularizer;

    ComplexMatrix y;
    try {
        y = solve_psd(g, ch.h);  // y = (H H^H + reg I)^(-1) H
    } catch (const NotPositiveDefinite&) {
        throw RankDeficiency("linear precoder: channel Gram matrix is singular");
    }
    ComplexMatrix p = conj_transpose(y);
    const double scale = std::sqrt(p_total) / frobenius_norm(p);
    p = scale * p;

    std::vector<UserFactors> factors(ch.n_users());
    std::size_t off = 0;
    for (std::size_t j = 0; j < ch.n_users(); ++j) {
        const std::size_t nj = ch.partition[j];
        factors[j].pc = p.col_block(off, nj);
        factors[j].pd = ComplexMatrix::identity(nj);
        off += nj;
    }
    return Precoder{std::move(p), std::move(factors), kind, p_total};
}

}  // namespace

Precoder build_bd(const ChannelSet& ch, double p_total) {
    check_power(p_total);
    std::vector<UserFactors> factors(ch.n_users());
    for (std::size_t j = 1; j <= ch.n_users(); ++j) {
        const ComplexMatrix hbar = exclude_user(ch, j);
        RowSpaceSplit split = split_row_space(hbar, ch.nb);
        if (split.null_basis.cols() == 0) {
            throw RankDeficiency("build_bd: user " + std::to_string(j) +
                                 " has no interference-free subspace");
        }
        UserFactors& f = factors[j - 1];
        f.pc = std::move(split.null_basis);
        load_effective_channel(ch.user_block(j), f);
    }
    init_equal_power(factors, p_total);
    return assemble(std::move(factors), PrecoderKind::bd, p_total, true);
}

Precoder build_rbd(const ChannelSet& ch, double p_total, double n0) {
    check_power(p_total);
    if (n0 < 0.0) throw DimensionMismatch("build_rbd: n0 must be >= 0");
    const double chi = static_cast<double>(ch.nu()) * n0 / p_total;

    std::vector<UserFactors> factors(ch.n_users());
    for (std::size_t j = 1; j <= ch.n_users(); ++j) {
        const ComplexMatrix hbar = exclude_user(ch, j);
        RowSpaceSplit split = split_row_space(hbar, ch.nb);
        UserFactors& f = factors[j - 1];
        if (chi == 0.0) {
            // chi -> 0 limit: the inverse square root weights concentrate on
            // the null directions, which is the hard projection of build_bd.
            if (split.null_basis.cols() == 0) {
                throw RankDeficiency("build_rbd: chi = 0 with empty null space");
            }
            f.pc = std::move(split.null_basis);
        } else {
            ComplexMatrix wbar = hstack({split.row_basis, split.null_basis});
            ComplexMatrix pc(ch.nb, ch.nb);
            for (std::size_t c = 0; c < ch.nb; ++c) {
                const double d2 = c < split.row_basis.cols() ? split.sv[c] * split.sv[c] : 0.0;
                const double w = 1.0 / std::sqrt(d2 + chi);
                for (std::size_t r = 0; r < ch.nb; ++r) pc(r, c) = w * wbar(r, c);
            }
            f.pc = std::move(pc);
        }
        load_effective_channel(ch.user_block(j), f);
    }
    init_equal_power(factors, p_total);
    return assemble(std::move(factors), PrecoderKind::rbd, p_total, true);
}

Precoder build_zf(const ChannelSet& ch, double p_total) {
    return build_linear(ch, p_total, 0.0, PrecoderKind::zf);
}

Precoder build_mmse(const ChannelSet& ch, double p_total, double n0) {
    if (n0 < 0.0) throw DimensionMismatch("build_mmse: n0 must be >= 0");
    const double reg = static_cast<double>(ch.nu()) * n0 / p_total;
    return build_linear(ch, p_total, reg, PrecoderKind::mmse);
}

Precoder set_power_loading(const Precoder& pre, const std::vector<std::vector<double>>& omegas) {
    if (pre.kind != PrecoderKind::bd && pre.kind != PrecoderKind::rbd) {
        throw DimensionMismatch("set_power_loading: precoder exposes no loading diagonal");
    }
    if (omegas.size() != pre.per_user.size()) {
        throw DimensionMismatch("set_power_loading: one loading vector per user required");
    }
    double total = 0.0;
    for (std::size_t j = 0; j < omegas.size(); ++j) {
        if (omegas[j].size() != pre.per_user[j].phi.size()) {
            throw DimensionMismatch("set_power_loading: loading length mismatch for user " +
                                    std::to_string(j + 1));
        }
        for (double w : omegas[j]) {
            if (w < 0.0) throw NegativePower("set_power_loading: negative stream power");
            total += w;
        }
    }
    if (total > pre.p_total + 1e-9) {
        throw BudgetExceeded("set_power_loading: total " + std::to_string(total) +
                             " exceeds budget " + std::to_string(pre.p_total));
    }
    std::vector<UserFactors> factors = pre.per_user;
    for (std::size_t j = 0; j < factors.size(); ++j) factors[j].omega = omegas[j];
    return assemble(std::move(factors), pre.kind, pre.p_total, false);
}

std::vector<double> pooled_phi2(const Precoder& pre) {
    std::vector<double> out;
    for (const auto& f : pre.per_user)
        for (double v : f.phi) out.push_back(v * v);
    return out;
}

std::vector<std::vector<double>> split_by_user(const Precoder& pre,
                                               const std::vector<double>& pooled) {
    std::vector<std::vector<double>> out(pre.per_user.size());
    std::size_t off = 0;
    for (std::size_t j = 0; j < pre.per_user.size(); ++j) {
        const std::size_t n = pre.per_user[j].phi.size();
        if (off + n > pooled.size()) {
            throw DimensionMismatch("split_by_user: pooled vector too short");
        }
        out[j].assign(pooled.begin() + static_cast<std::ptrdiff_t>(off),
                      pooled.begin() + static_cast<std::ptrdiff_t>(off + n));
        off += n;
    }
    if (off != pooled.size()) throw DimensionMismatch("split_by_user: pooled vector too long");
    return out;
}

}  // namespace cqmimo
