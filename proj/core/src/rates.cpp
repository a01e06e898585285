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

#include "cqmimo/rates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cqmimo/linalg.hpp"

namespace cqmimo {

namespace {

void validate(const RateInputs& in) {
    if (in.h.cols() != in.p.rows()) {
        throw InvalidDimensions("rate: channel/precoder shape mismatch");
    }
    if (in.h.rows() == 0) throw InvalidDimensions("rate: empty channel");
    if (!(in.delta > 0.0 && in.delta <= 1.0)) throw DomainError("rate: delta outside (0,1]");
    if (!(in.snr > 0.0)) throw DomainError("rate: snr must be > 0");
    if (in.nu < 1) throw DomainError("rate: nu must be >= 1");
}

void symmetrize(ComplexMatrix& a) {
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            const cx m = 0.5 * (a(i, j) + std::conj(a(j, i)));
            a(i, j) = m;
            a(j, i) = std::conj(m);
        }
        a(i, i) = cx(a(i, i).real(), 0.0);
    }
}

}  // namespace

double exact_cqa_rate(const RateInputs& in) {
    validate(in);
    const ComplexMatrix hp = in.h * in.p;
    const ComplexMatrix m = gram_right(hp);
    const std::size_t n = m.rows();
    const double c = in.snr / static_cast<double>(in.nu);
    const double d2 = in.delta * in.delta;

    ComplexMatrix denom = (1.0 - d2) * c * m + ComplexMatrix::identity(n);
    ComplexMatrix k = solve_psd(denom, m);
    symmetrize(k);  // M and the denominator commute, so M denom^-1 is Hermitian

    ComplexMatrix arg = d2 * c * k + ComplexMatrix::identity(n);
    symmetrize(arg);
    return std::max(logdet_psd(arg), 0.0);
}

double approx_cqa_rate(const RateInputs& in) {
    validate(in);
    const ComplexMatrix hp = in.h * in.p;
    const ComplexMatrix m = gram_right(hp);
    const std::size_t n = m.rows();
    const double n0 = static_cast<double>(in.nu) / in.snr;
    const double d2 = in.delta * in.delta;

    ComplexMatrix arg =
        ComplexMatrix::identity(n) + (d2 / n0) * m - (d2 * (1.0 - d2) / (n0 * n0)) * (m * m);
    symmetrize(arg);
    try {
        return logdet_psd(arg);
    } catch (const NotPositiveDefinite&) {
        throw ApproximationInvalid("approx_cqa_rate: truncated series lost positive definiteness");
    }
}

double fr_bd_rate(const std::vector<double>& phi, const std::vector<double>& omega, double n0) {
    if (phi.size() != omega.size()) throw InvalidDimensions("fr_bd_rate: length mismatch");
    if (!(n0 > 0.0)) throw DomainError("fr_bd_rate: n0 must be > 0");
    double acc = 0.0;
    for (std::size_t i = 0; i < phi.size(); ++i) {
        if (phi[i] < 0.0 || omega[i] < 0.0) throw DomainError("fr_bd_rate: negative entry");
        acc += std::log2(1.0 + phi[i] * phi[i] * omega[i] / n0);
    }
    return acc;
}

EpsilonReport epsilon_report(std::size_t nu, double snr_linear, double delta) {
    if (nu < 1) throw DomainError("epsilon_report: nu must be >= 1");
    if (!(snr_linear > 0.0)) throw DomainError("epsilon_report: snr must be > 0");
    if (!(delta > 0.0 && delta <= 1.0)) throw DomainError("epsilon_report: delta outside (0,1]");

    EpsilonReport out;
    if (delta == 1.0) {
        out.epsilon = 0.0;
        out.snr_max_db = std::numeric_limits<double>::infinity();
        out.within_accurate_region = true;
        return out;
    }
    const double one_minus_d2 = 1.0 - delta * delta;
    out.epsilon = snr_linear * one_minus_d2 / static_cast<double>(nu);
    out.snr_max_db = 10.0 * std::log10(0.01 * static_cast<double>(nu) / one_minus_d2);
    out.within_accurate_region = out.epsilon <= 0.01;
    return out;
}

}  // namespace cqmimo
