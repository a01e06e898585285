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

#ifndef CQMIMO_QUANTIZER_HPP
#define CQMIMO_QUANTIZER_HPP

#include <cstdint>
#include <vector>

#include "cqmimo/matrix.hpp"

namespace cqmimo {

/// Uniform mid-rise DAC model for one transmit chain population.
///
/// b bits per real dimension give J = 2^b output levels at odd multiples of
/// gamma/2, saturating at +-gamma(J-1)/2. The output is rescaled by alpha so
/// the quantized transmit vector keeps the configured average power, and
/// delta is the Bussgang linearization gain of the rescaled quantizer:
/// Q(x) ~ delta * x + f with f uncorrelated with x for Gaussian input.
///
/// delta = 1 (with b = 0) is the full-resolution sentinel: quantize() is then
/// the identity and every downstream formula collapses to the unquantized
/// case.
struct QuantizerSpec {
    unsigned b = 0;          // bits per real dimension; 0 marks full resolution
    unsigned j_levels = 0;   // J = 2^b
    double gamma = 1.0;      // step size, amplitude units
    double alpha = 1.0;      // output power normalization
    double delta = 1.0;      // Bussgang gain, in (0, 1]
    std::size_t nb = 0;      // transmit antennas the spec was built for
    double p_total = 0.0;    // total transmit power the spec was built for

    bool full_resolution() const { return b == 0; }

    static QuantizerSpec make_full_resolution(std::size_t nb, double p_total) {
        return QuantizerSpec{0, 0, 1.0, 1.0, 1.0, nb, p_total};
    }
};

/// Empirical check of the Bussgang decomposition for a concrete precoder.
struct BussgangStats {
    double cross_corr_norm = 0.0;  // || mean(f s^H) ||_F
    double rff_error = 0.0;        // see verify_bussgang()
    std::size_t samples = 0;
};

/// Builds the b-bit quantizer for nb transmit antennas at total power
/// p_total. The per-antenna input variance is taken as p_total / nb (half
/// per real dimension), and the step gamma is chosen to maximize the
/// Bussgang gain delta, searched over gamma in [1e-3, 4] times the
/// per-antenna standard deviation. Requires 2 <= b <= 12; throws
/// SearchFailure if the bracket collapses onto an endpoint.
QuantizerSpec build_quantizer(unsigned b, std::size_t nb, double p_total);

/// Bussgang gain of the b-bit quantizer as a function of the step size in
/// units of the per-real-dimension standard deviation. Exposed for the step
/// search and for tests.
double bussgang_gain(unsigned b, double step_over_sigma);

/// Applies the quantizer to each entry of x, independently on the real and
/// imaginary parts, and scales the result by alpha. The mid-rise staircase
/// has no zero level; an exact 0 maps to the positive half step +gamma/2.
/// A full-resolution spec returns x unchanged. Total on finite inputs.
std::vector<cx> quantize(const std::vector<cx>& x, const QuantizerSpec& spec);

/// Draws s ~ CN(0, I), forms the distortion f = Q(Ps) - delta * P s and
/// estimates two Bussgang figures of merit:
///   cross_corr_norm  = || (1/N) sum f s^H ||_F          (should vanish)
///   rff_error        = || (1/N) sum f f^H - (1 - delta^2) P P^H ||_F
///                      normalized by || P P^H ||_F, i.e. the error of the
///                      modeled distortion covariance relative to the
///                      precoded-signal covariance scale.
/// A full-resolution spec gives f == 0 and zero statistics.
BussgangStats verify_bussgang(const QuantizerSpec& spec, const ComplexMatrix& precoder,
                              std::size_t n_samples, std::uint64_t seed);

}  // namespace cqmimo

#endif  // CQMIMO_QUANTIZER_HPP
