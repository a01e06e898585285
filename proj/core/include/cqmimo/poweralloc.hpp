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

#ifndef CQMIMO_POWERALLOC_HPP
#define CQMIMO_POWERALLOC_HPP

#include <cstddef>
#include <vector>

namespace cqmimo {

/// Per-stream power allocation instance. phi2 holds the squared effective
/// singular values of all streams pooled across users; nu is the total
/// receive antenna count that sets the noise scale N0 = nu / snr; delta is
/// the Bussgang gain of the active quantizer (1 for full resolution).
struct AllocationProblem {
    std::vector<double> phi2;
    std::size_t nu = 0;
    double snr = 1.0;  // linear
    double delta = 1.0;
    double p_total = 0.0;
};

/// Result of an allocation. omega is aligned with the problem's phi2 order;
/// rejected streams hold exactly 0. mu is the final water level produced by
/// the last active-set iteration, before the exact-budget rescale.
struct Allocation {
    std::vector<double> omega;
    double mu = 0.0;
    std::size_t active = 0;
    bool fallback_used = false;
};

/// Which form of the closed-form water level the distortion-aware allocator
/// uses once streams have been rejected:
///  - active_set: every occurrence of the stream count is the current active
///    count, the quadratic re-derived over the surviving streams. This is
///    the default; it reduces exactly to classical waterfilling as delta -> 1
///    in every rejection round.
///  - as_printed: the inner discriminant coefficient keeps the full stream
///    count while the outer factor tracks the active count. Kept selectable
///    for sensitivity analysis; with rejections it under-estimates the water
///    level and cascades into spurious rejections.
enum class MuForm { active_set, as_printed };

/// One active-set round, recorded when a trace sink is passed to maas().
struct MaasIteration {
    std::size_t active = 0;
    double mu = 0.0;
    double min_omega = 0.0;
    bool rejected = false;
};

/// Distortion-dependent constants of the closed-form allocation:
///   C1 = (delta - sqrt(4 - 3 delta^2)) / (2 delta (1 - delta^2))
///   C2 = delta (1 - delta^2) / sqrt(4 - 3 delta^2)
/// At delta = 1 the analytic limits C1 = -1, C2 = 0 are returned, which
/// collapse the allocator onto the classical water level. DomainError
/// outside (0, 1].
double c1(double delta);
double c2(double delta);

/// Classical waterfilling: omega_m = max(mu - N0 / phi2_m, 0) with
/// N0 = nu / snr and the budget met exactly. Iterates weakest-stream
/// rejection until all active powers are non-negative.
Allocation waterfill(const AllocationProblem& problem);

/// Distortion-aware active-set allocation. Streams are sorted by phi2
/// descending; each round computes the closed-form water level mu over the
/// active set, evaluates
///   omega_m = C1 * (n/snr) / phi2_m + mu - mu^2 * C2 * (snr/n) * phi2_m
/// with n the active count, rejects the weakest stream with negative power,
/// and repeats until all active powers are non-negative. Active powers are
/// finally rescaled so they sum to p_total exactly. A negative discriminant
/// in the water-level formula (the closed form losing validity at high SNR)
/// falls back to classical waterfilling with fallback_used set. Throws
/// NoFeasibleAllocation if every stream is rejected.
Allocation maas(const AllocationProblem& problem, MuForm form = MuForm::active_set,
                std::vector<MaasIteration>* trace = nullptr);

/// Closed-form water level over the strongest nu - p + 1 streams, exactly in
/// its published mixed form (the inner discriminant coefficient uses nu, the
/// outer factor the active count). phi2_active must hold the active streams;
/// throws NegativeDiscriminant when the square root argument goes negative.
double mu_opt(const std::vector<double>& phi2_active, std::size_t p, std::size_t nu, double snr,
              double delta);

/// Truncated-series sum-rate objective the allocator maximizes,
///   sum_m log2(1 + delta^2 phi2 w / N0 - delta^2 (1 - delta^2) phi2^2 w^2 / N0^2),
/// used to score allocations against each other. Returns -infinity when any
/// determinant term is non-positive (outside the validity region).
double allocation_objective(const AllocationProblem& problem, const std::vector<double>& omega);

}  // namespace cqmimo

#endif  // CQMIMO_POWERALLOC_HPP
