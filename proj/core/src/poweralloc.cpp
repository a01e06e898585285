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

#include "cqmimo/poweralloc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "cqmimo/errors.hpp"

namespace cqmimo {

namespace {

void validate(const AllocationProblem& p) {
    if (p.phi2.empty()) throw EmptyProblem("allocation: no streams");
    for (double v : p.phi2) {
        if (!(v > 0.0)) throw DomainError("allocation: phi2 entries must be > 0");
    }
    if (!(p.p_total > 0.0)) throw DomainError("allocation: p_total must be > 0");
    if (!(p.snr > 0.0)) throw DomainError("allocation: snr must be > 0");
    if (!(p.delta > 0.0 && p.delta <= 1.0)) throw DomainError("allocation: delta outside (0,1]");
    if (p.nu < 1) throw DomainError("allocation: nu must be >= 1");
}

// Indices of phi2 sorted by gain descending; ties keep input order.
std::vector<std::size_t> descending_order(const std::vector<double>& phi2) {
    std::vector<std::size_t> idx(phi2.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return phi2[a] > phi2[b]; });
    return idx;
}

double water_level(const std::vector<double>& phi2_active, std::size_t n_inner, double snr,
                   double c1v, double c2v, bool* negative_disc) {
    const double n = static_cast<double>(phi2_active.size());
    double sum_phi2 = 0.0;
    double sum_inv = 0.0;
    for (double v : phi2_active) {
        sum_phi2 += v;
        sum_inv += 1.0 / v;
    }
    const double inner = static_cast<double>(n_inner);
    const double x = (4.0 * c2v / (inner * inner)) * sum_phi2 * (-snr + c1v * sum_inv);
    if (1.0 + x < 0.0) {
        if (negative_disc != nullptr) *negative_disc = true;
        return 0.0;
    }
    if (negative_disc != nullptr) *negative_disc = false;
    return (n * n) / (2.0 * c2v * snr * sum_phi2) * (1.0 - std::sqrt(1.0 + x));
}

}  // namespace

double c1(double delta) {
    if (!(delta > 0.0 && delta <= 1.0)) throw DomainError("c1: delta outside (0,1]");
    if (delta == 1.0) return -1.0;
    return (delta - std::sqrt(4.0 - 3.0 * delta * delta)) /
           (2.0 * delta * (1.0 - delta * delta));
}

double c2(double delta) {
    if (!(delta > 0.0 && delta <= 1.0)) throw DomainError("c2: delta outside (0,1]");
    if (delta == 1.0) return 0.0;
    return delta * (1.0 - delta * delta) / std::sqrt(4.0 - 3.0 * delta * delta);
}

Allocation waterfill(const AllocationProblem& problem) {
    validate(problem);
    const double n0 = static_cast<double>(problem.nu) / problem.snr;
    std::vector<std::size_t> order = descending_order(problem.phi2);

    std::size_t n = order.size();
    double mu = 0.0;
    while (n > 0) {
        double sum_inv = 0.0;
        for (std::size_t k = 0; k < n; ++k) sum_inv += 1.0 / problem.phi2[order[k]];
        mu = (problem.p_total + n0 * sum_inv) / static_cast<double>(n);
        if (mu - n0 / problem.phi2[order[n - 1]] >= 0.0) break;
        --n;  // weakest active stream would get negative power
    }
    if (n == 0) throw NoFeasibleAllocation("waterfill: all streams rejected");

    Allocation out;
    out.omega.assign(problem.phi2.size(), 0.0);
    out.mu = mu;
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t i = order[k];
        out.omega[i] = std::max(mu - n0 / problem.phi2[i], 0.0);
    }
    out.active = static_cast<std::size_t>(
        std::count_if(out.omega.begin(), out.omega.end(), [](double w) { return w > 0.0; }));
    return out;
}

Allocation maas(const AllocationProblem& problem, MuForm form,
                std::vector<MaasIteration>* trace) {
    validate(problem);
    if (problem.delta == 1.0) {
        return waterfill(problem);  // C1 = -1, C2 = 0: the classical water level
    }
    const double c1v = c1(problem.delta);
    const double c2v = c2(problem.delta);

    std::vector<std::size_t> active = descending_order(problem.phi2);
    std::vector<double> phi2_active;
    std::vector<double> w_active;

    double mu = 0.0;
    while (true) {
        if (active.empty()) throw NoFeasibleAllocation("maas: all streams rejected");
        const std::size_t n = active.size();
        phi2_active.resize(n);
        for (std::size_t k = 0; k < n; ++k) phi2_active[k] = problem.phi2[active[k]];

        const std::size_t n_inner = form == MuForm::as_printed ? problem.nu : n;
        bool bad_disc = false;
        mu = water_level(phi2_active, n_inner, problem.snr, c1v, c2v, &bad_disc);
        if (bad_disc) {
            Allocation wf = waterfill(problem);
            wf.fallback_used = true;
            return wf;
        }

        w_active.resize(n);
        std::size_t worst = n;  // weakest stream with negative power, if any
        for (std::size_t k = 0; k < n; ++k) {
            const double p2 = phi2_active[k];
            w_active[k] = c1v * (static_cast<double>(n) / problem.snr) / p2 + mu -
                          mu * mu * c2v * (problem.snr / static_cast<double>(n)) * p2;
            if (w_active[k] < 0.0) worst = k;  // descending order: last hit is weakest
        }
        if (trace != nullptr) {
            trace->push_back({n, mu, *std::min_element(w_active.begin(), w_active.end()),
                              worst != n});
        }
        if (worst == n) break;
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(worst));
    }

    double total = std::accumulate(w_active.begin(), w_active.end(), 0.0);
    if (!(total > 0.0)) throw NoFeasibleAllocation("maas: non-positive total power");
    const double scale = problem.p_total / total;

    Allocation out;
    out.omega.assign(problem.phi2.size(), 0.0);
    out.mu = mu;
    out.fallback_used = false;
    for (std::size_t k = 0; k < active.size(); ++k) out.omega[active[k]] = scale * w_active[k];
    out.active = static_cast<std::size_t>(
        std::count_if(out.omega.begin(), out.omega.end(), [](double w) { return w > 0.0; }));
    return out;
}

double mu_opt(const std::vector<double>& phi2_active, std::size_t p, std::size_t nu, double snr,
              double delta) {
    if (p < 1 || p > nu) throw DomainError("mu_opt: p outside 1..nu");
    const std::size_t n = nu - p + 1;
    if (phi2_active.size() != n) {
        throw DimensionMismatch("mu_opt: expected " + std::to_string(n) + " active streams, got " +
                                std::to_string(phi2_active.size()));
    }
    for (double v : phi2_active) {
        if (!(v > 0.0)) throw DomainError("mu_opt: phi2 entries must be > 0");
    }
    if (!(snr > 0.0)) throw DomainError("mu_opt: snr must be > 0");
    if (!(delta > 0.0 && delta <= 1.0)) throw DomainError("mu_opt: delta outside (0,1]");

    if (delta == 1.0) {
        // C2 -> 0 limit of the closed form.
        double sum_inv = 0.0;
        for (double v : phi2_active) sum_inv += 1.0 / v;
        const double ratio = static_cast<double>(n) / static_cast<double>(nu);
        return ratio * ratio * (1.0 + sum_inv / snr);
    }

    bool bad_disc = false;
    const double mu = water_level(phi2_active, nu, snr, c1(delta), c2(delta), &bad_disc);
    if (bad_disc) throw NegativeDiscriminant("mu_opt: discriminant < 0");
    return mu;
}

double allocation_objective(const AllocationProblem& problem, const std::vector<double>& omega) {
    validate(problem);
    if (omega.size() != problem.phi2.size()) {
        throw DimensionMismatch("allocation_objective: omega length mismatch");
    }
    const double n0 = static_cast<double>(problem.nu) / problem.snr;
    const double d2 = problem.delta * problem.delta;
    double acc = 0.0;
    for (std::size_t i = 0; i < omega.size(); ++i) {
        const double x = problem.phi2[i] * omega[i] / n0;
        const double term = 1.0 + d2 * x - d2 * (1.0 - d2) * x * x;
        if (!(term > 0.0)) return -std::numeric_limits<double>::infinity();
        acc += std::log2(term);
    }
    return acc;
}

}  // namespace cqmimo
