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

#include "cqmimo/channel.hpp"

#include <cmath>
#include <fstream>
#include <numeric>

#include "cqmimo/linalg.hpp"
#include "cqmimo/rng.hpp"

namespace cqmimo {

std::size_t ChannelSet::nu() const {
    return std::accumulate(partition.begin(), partition.end(), std::size_t{0});
}

std::size_t ChannelSet::user_row_offset(std::size_t j) const {
    if (j < 1 || j > partition.size()) {
        throw IndexOutOfRange("user index " + std::to_string(j) + " out of 1.." +
                              std::to_string(partition.size()));
    }
    std::size_t off = 0;
    for (std::size_t k = 0; k + 1 < j; ++k) off += partition[k];
    return off;
}

ComplexMatrix ChannelSet::user_block(std::size_t j) const {
    return h.row_block(user_row_offset(j), partition[j - 1]);
}

ChannelSet generate_iid(std::size_t nb, const std::vector<std::size_t>& partition,
                        std::uint64_t seed) {
    std::size_t nu = 0;
    for (std::size_t n : partition) {
        if (n < 1) throw InvalidDimensions("generate_iid: partition entries must be >= 1");
        nu += n;
    }
    if (partition.empty()) throw InvalidDimensions("generate_iid: empty partition");
    if (nb < nu) {
        throw InvalidDimensions("generate_iid: nb=" + std::to_string(nb) +
                                " < total receive antennas " + std::to_string(nu));
    }
    Rng rng(seed, {stream::kChannel});
    ComplexMatrix h(nu, nb);
    for (std::size_t i = 0; i < nu; ++i)
        for (std::size_t j = 0; j < nb; ++j) h(i, j) = rng.complex_normal();
    return ChannelSet{std::move(h), partition, nb, seed};
}

ComplexMatrix transmit_correlation(std::size_t nb, cx r) {
    ComplexMatrix rt(nb, nb);
    for (std::size_t i = 0; i < nb; ++i) {
        rt(i, i) = cx(1.0, 0.0);
        for (std::size_t j = i + 1; j < nb; ++j) {
            const cx v = std::pow(r, static_cast<double>(j - i));
            rt(i, j) = v;
            rt(j, i) = std::conj(v);
        }
    }
    return rt;
}

ChannelSet apply_csi_model(const ChannelSet& ch, const CsiModel& model, std::uint64_t seed) {
    if (std::abs(model.r) >= 1.0) {
        throw DomainError("apply_csi_model: |r| must be < 1");
    }
    if (model.sigma_e2 < 0.0) {
        throw DomainError("apply_csi_model: sigma_e2 must be >= 0");
    }

    ComplexMatrix hhat;
    if (model.r == cx(0.0, 0.0)) {
        hhat = ch.h;  // Rt = I, keep H bit-exact
    } else {
        const ComplexMatrix rt = transmit_correlation(ch.nb, model.r);
        EighResult eg = eigh(rt);
        for (double& w : eg.w) {
            if (w < -1e-12) {
                throw NotPositiveSemidefinite("apply_csi_model: correlation matrix eigenvalue " +
                                              std::to_string(w));
            }
            w = std::sqrt(std::max(w, 0.0));
        }
        ComplexMatrix scaled = eg.v;
        for (std::size_t j = 0; j < scaled.cols(); ++j)
            for (std::size_t i = 0; i < scaled.rows(); ++i) scaled(i, j) *= eg.w[j];
        hhat = ch.h * (scaled * conj_transpose(eg.v));
    }

    if (model.sigma_e2 > 0.0) {
        Rng rng(seed, {stream::kCsiError});
        const double sd = std::sqrt(model.sigma_e2);
        for (cx& v : hhat.data()) v += sd * rng.complex_normal();
    }
    return ChannelSet{std::move(hhat), ch.partition, ch.nb, ch.seed};
}

ComplexMatrix exclude_user(const ChannelSet& ch, std::size_t j) {
    const std::size_t off = ch.user_row_offset(j);  // validates j
    const std::size_t nj = ch.partition[j - 1];
    const std::size_t nu = ch.nu();
    ComplexMatrix out(nu - nj, ch.nb);
    std::size_t dst = 0;
    for (std::size_t i = 0; i < nu; ++i) {
        if (i >= off && i < off + nj) continue;
        for (std::size_t c = 0; c < ch.nb; ++c) out(dst, c) = ch.h(i, c);
        ++dst;
    }
    return out;
}

void save_matrix_text(const ComplexMatrix& m, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw Error("save_matrix_text: cannot open " + path);
    f.precision(17);
    f << m.rows() << " " << m.cols() << "\n";
    for (const cx& v : m.data()) f << v.real() << " " << v.imag() << "\n";
    if (!f) throw Error("save_matrix_text: write failed for " + path);
}

ComplexMatrix load_matrix_text(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error("load_matrix_text: cannot open " + path);
    std::size_t rows = 0, cols = 0;
    if (!(f >> rows >> cols)) throw Error("load_matrix_text: bad header in " + path);
    std::vector<cx> entries;
    entries.reserve(rows * cols);
    for (std::size_t i = 0; i < rows * cols; ++i) {
        double re = 0.0, im = 0.0;
        if (!(f >> re >> im)) throw Error("load_matrix_text: truncated data in " + path);
        entries.emplace_back(re, im);
    }
    return ComplexMatrix(rows, cols, std::move(entries));
}

}  // namespace cqmimo
