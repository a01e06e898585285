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

#ifndef CQMIMO_RATES_HPP
#define CQMIMO_RATES_HPP

#include <vector>

#include "cqmimo/matrix.hpp"

namespace cqmimo {

/// Operands of a sum-rate evaluation: the channel the rate is measured
/// against (the true one, even when the precoder was built from a corrupted
/// estimate), the assembled precoder, the quantizer's Bussgang gain, the
/// linear SNR and the total receive antenna count (noise scale N0 = nu/snr).
struct RateInputs {
    ComplexMatrix h;
    ComplexMatrix p;
    double delta = 1.0;
    double snr = 1.0;
    std::size_t nu = 0;
};

/// Validity report of the truncated-series rate approximation.
struct EpsilonReport {
    double epsilon = 0.0;
    double snr_max_db = 0.0;
    bool within_accurate_region = false;
};

/// Quantization-aware sum rate
///   C = log2 det[ I + delta^2 (snr/nu) M ((1-delta^2)(snr/nu) M + I)^(-1) ]
/// with M = (HP)(HP)^H. delta = 1 collapses to the unquantized MIMO rate.
/// Always finite and non-negative on valid inputs.
double exact_cqa_rate(const RateInputs& in);

/// Second-order truncation of the exact rate,
///   C ~ log2 det[ I + (delta^2/N0) M - (delta^2 (1-delta^2)/N0^2) M^2 ],
/// accurate while epsilon = snr (1-delta^2) / nu stays small. Throws
/// ApproximationInvalid when the determinant argument loses positive
/// definiteness instead of returning a complex logarithm.
double approx_cqa_rate(const RateInputs& in);

/// Per-stream unquantized rate sum_m log2(1 + phi_m^2 omega_m / n0) of a
/// block-diagonalized link with effective singular values phi and stream
/// powers omega.
double fr_bd_rate(const std::vector<double>& phi, const std::vector<double>& omega, double n0);

/// epsilon = snr (1 - delta^2) / nu and the highest SNR keeping it at or
/// below 0.01: snr_max_db = 10 log10(0.01 nu / (1 - delta^2)). delta = 1
/// reports a +infinity sentinel; delta outside (0, 1] raises DomainError.
EpsilonReport epsilon_report(std::size_t nu, double snr_linear, double delta);

}  // namespace cqmimo

#endif  // CQMIMO_RATES_HPP
