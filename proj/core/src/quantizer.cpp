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

#include "cqmimo/quantizer.hpp"

#include <cmath>
#include <string>

#include "cqmimo/rng.hpp"

namespace cqmimo {

namespace {

constexpr double kPi = 3.14159265358979323846;

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Gaussian-window sum over the interior decision thresholds, u = gamma/sigma:
//   S(u) = sum_{l=1}^{J-1} exp(-u^2 (l - J/2)^2 / 2)
double threshold_sum(unsigned j, double u) {
    double acc = 0.0;
    for (unsigned l = 1; l < j; ++l) {
        const double t = static_cast<double>(l) - 0.5 * static_cast<double>(j);
        acc += std::exp(-0.5 * u * u * t * t);
    }
    return acc;
}

// Second moment of the unit-step staircase output for N(0, 1/u^2)-scaled
// input, in units of gamma^2:
//   B(u) = ((J-1)/2)^2 - 2 sum_{l=1}^{J-1} (l - J/2) Phi(u (l - J/2))
double output_power_factor(unsigned j, double u) {
    const double half = 0.5 * static_cast<double>(j - 1);
    double acc = 0.0;
    for (unsigned l = 1; l < j; ++l) {
        const double t = static_cast<double>(l) - 0.5 * static_cast<double>(j);
        acc += t * std_normal_cdf(u * t);
    }
    return half * half - 2.0 * acc;
}

double gain_of(unsigned j, double u) {
    return threshold_sum(j, u) / std::sqrt(2.0 * kPi * output_power_factor(j, u));
}

double saturate_level(double t, double gamma, unsigned j) {
    const double top = 0.5 * gamma * static_cast<double>(j - 1);
    const double level = gamma * (std::floor(t / gamma) + 0.5);
    return std::min(std::max(level, -top), top);
}

}  // namespace

double bussgang_gain(unsigned b, double step_over_sigma) {
    if (b < 1 || b > 16) throw DomainError("bussgang_gain: bits out of range");
    return gain_of(1u << b, step_over_sigma);
}

QuantizerSpec build_quantizer(unsigned b, std::size_t nb, double p_total) {
    if (b < 2 || b > 12) {
        throw DomainError("build_quantizer: bits must be in 2..12, got " + std::to_string(b));
    }
    if (nb < 1) throw DomainError("build_quantizer: nb must be >= 1");
    if (p_total <= 0.0) throw DomainError("build_quantizer: p_total must be > 0");

    const unsigned j = 1u << b;
    const double sigma_re = std::sqrt(p_total / (2.0 * static_cast<double>(nb)));
    const double sigma_ant = std::sqrt(p_total / static_cast<double>(nb));

    // Step bracket in units of the per-real-dimension standard deviation.
    const double u_lo = 1e-3 * sigma_ant / sigma_re;
    const double u_hi = 4.0 * sigma_ant / sigma_re;

    // Coarse scan to bracket the maximizer, then golden-section refinement.
    const int scan = 256;
    double best_u = u_lo;
    double best_g = -1.0;
    for (int i = 0; i <= scan; ++i) {
        const double u = u_lo + (u_hi - u_lo) * static_cast<double>(i) / scan;
        const double g = gain_of(j, u);
        if (g > best_g) {
            best_g = g;
            best_u = u;
        }
    }
    if (best_u <= u_lo || best_u >= u_hi) {
        throw SearchFailure("build_quantizer: gain maximum at bracket edge for b=" +
                            std::to_string(b));
    }

    const double step = (u_hi - u_lo) / scan;
    double lo = best_u - step;
    double hi = best_u + step;
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - invphi * (hi - lo);
    double x2 = lo + invphi * (hi - lo);
    double f1 = gain_of(j, x1);
    double f2 = gain_of(j, x2);
    for (int it = 0; it < 200 && (hi - lo) > 1e-13 * best_u; ++it) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + invphi * (hi - lo);
            f2 = gain_of(j, x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - invphi * (hi - lo);
            f1 = gain_of(j, x1);
        }
    }
    const double u_opt = 0.5 * (lo + hi);
    const double delta = gain_of(j, u_opt);
    if (!(delta > 0.0 && delta < 1.0)) {
        throw SearchFailure("build_quantizer: optimized gain out of (0,1)");
    }

    QuantizerSpec spec;
    spec.b = b;
    spec.j_levels = j;
    spec.gamma = u_opt * sigma_re;
    spec.alpha = 1.0 / (u_opt * std::sqrt(output_power_factor(j, u_opt)));
    spec.delta = delta;
    spec.nb = nb;
    spec.p_total = p_total;
    return spec;
}

std::vector<cx> quantize(const std::vector<cx>& x, const QuantizerSpec& spec) {
    if (spec.full_resolution()) return x;
    std::vector<cx> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        out[i] = spec.alpha * cx(saturate_level(x[i].real(), spec.gamma, spec.j_levels),
                                 saturate_level(x[i].imag(), spec.gamma, spec.j_levels));
    }
    return out;
}

BussgangStats verify_bussgang(const QuantizerSpec& spec, const ComplexMatrix& precoder,
                              std::size_t n_samples, std::uint64_t seed) {
    const std::size_t nb = precoder.rows();
    const std::size_t nu = precoder.cols();
    BussgangStats stats;
    stats.samples = n_samples;
    if (spec.full_resolution() || n_samples == 0) return stats;

    Rng rng(seed, {stream::kSymbols});
    std::vector<cx> s(nu), x(nb), f(nb);
    ComplexMatrix cross(nb, nu);
    ComplexMatrix cff(nb, nb);

    for (std::size_t n = 0; n < n_samples; ++n) {
        for (std::size_t k = 0; k < nu; ++k) s[k] = rng.complex_normal();
        for (std::size_t i = 0; i < nb; ++i) {
            cx acc(0.0, 0.0);
            for (std::size_t k = 0; k < nu; ++k) acc += precoder(i, k) * s[k];
            x[i] = acc;
        }
        const std::vector<cx> xq = quantize(x, spec);
        for (std::size_t i = 0; i < nb; ++i) f[i] = xq[i] - spec.delta * x[i];

        for (std::size_t i = 0; i < nb; ++i) {
            const cx fi = f[i];
            for (std::size_t k = 0; k < nu; ++k) cross(i, k) += fi * std::conj(s[k]);
            for (std::size_t k = 0; k <= i; ++k) cff(i, k) += fi * std::conj(f[k]);
        }
    }

    const double inv_n = 1.0 / static_cast<double>(n_samples);
    for (std::size_t i = 0; i < nb; ++i)
        for (std::size_t k = i + 1; k < nb; ++k) cff(i, k) = std::conj(cff(k, i));

    const ComplexMatrix pph = gram_right(precoder);
    double err = 0.0;
    for (std::size_t i = 0; i < nb; ++i) {
        for (std::size_t k = 0; k < nb; ++k) {
            const cx d = inv_n * cff(i, k) - (1.0 - spec.delta * spec.delta) * pph(i, k);
            err += std::norm(d);
        }
    }

    stats.cross_corr_norm = inv_n * frobenius_norm(cross);
    stats.rff_error = std::sqrt(err) / frobenius_norm(pph);
    return stats;
}

}  // namespace cqmimo
