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

#include "cqmimo/costmodel.hpp"

#include <cmath>

#include "cqmimo/errors.hpp"

namespace cqmimo {

std::string to_string(CostKind kind) {
    switch (kind) {
        case CostKind::zf: return "ZF";
        case CostKind::mmse: return "MMSE";
        case CostKind::bd: return "BD";
        case CostKind::rbd: return "RBD";
        case CostKind::bussgang_zf: return "Bussgang-ZF";
        case CostKind::bussgang_mmse: return "Bussgang-MMSE";
        case CostKind::cqa_bd: return "CQA-BD";
        case CostKind::cqa_rbd: return "CQA-RBD";
    }
    return "?";
}

CostKind cost_kind_from_string(const std::string& name) {
    if (name == "ZF") return CostKind::zf;
    if (name == "MMSE") return CostKind::mmse;
    if (name == "BD") return CostKind::bd;
    if (name == "RBD") return CostKind::rbd;
    if (name == "Bussgang-ZF") return CostKind::bussgang_zf;
    if (name == "Bussgang-MMSE") return CostKind::bussgang_mmse;
    if (name == "CQA-BD") return CostKind::cqa_bd;
    if (name == "CQA-RBD") return CostKind::cqa_rbd;
    throw UnknownKind("unknown cost kind: " + name);
}

namespace {

double zf_flops(double nb, double nu) {
    return nb * nb * nb / 2.0 + nb * nb * (4.0 * nu - 1.5) - nb * nu;
}

double mmse_flops(double nb, double nu) {
    return nb * nb * nb / 2.0 + nb * nb * (4.0 * nu - 1.5) - nb * (nu - 2.0);
}

double bd_flops(double nb, double nu, double nj) {
    return nb * nb * (32.0 * nj + 8.0) + nb * (32.0 * nu * nu + 72.0 * nj * nj) +
           64.0 * nu * nu;
}

}  // namespace

double cdelta_flops(unsigned bits) {
    if (bits < 1 || bits > 14) throw DomainError("cdelta_flops: bits outside 1..14");
    const double terms = static_cast<double>((1u << bits) - 1);
    // 20 FLOPs per exp/Phi evaluation, 6 for the surrounding arithmetic of
    // each summand, two sums, 16 for the final assembly of the two scalars.
    return 2.0 * terms * (20.0 + 6.0) + 16.0;
}

double precoder_flops(CostKind kind, std::size_t nb, std::size_t nu, std::size_t nj,
                      unsigned bits) {
    if (!(nb >= nu && nu >= nj && nj >= 1)) {
        throw DomainError("precoder_flops: expected nb >= nu >= nj >= 1");
    }
    const double b = static_cast<double>(nb);
    const double u = static_cast<double>(nu);
    const double j = static_cast<double>(nj);
    switch (kind) {
        case CostKind::zf: return zf_flops(b, u);
        case CostKind::mmse: return mmse_flops(b, u);
        case CostKind::bd:
        case CostKind::rbd: return bd_flops(b, u, j);
        case CostKind::bussgang_zf: return zf_flops(b, u) + cdelta_flops(bits);
        case CostKind::bussgang_mmse: return mmse_flops(b, u) + cdelta_flops(bits);
        case CostKind::cqa_bd:
        case CostKind::cqa_rbd: return bd_flops(b, u, j) + cdelta_flops(bits);
    }
    throw UnknownKind("precoder_flops: unhandled kind");
}

double dac_power_mw(unsigned bits) {
    if (bits < 1 || bits > 14) throw DomainError("dac_power_mw: bits outside 1..14");
    return 85.0 * std::exp2(static_cast<double>(bits) - 5.0);
}

double adc_power_mw(unsigned bits) {
    if (bits < 1 || bits > 14) throw DomainError("adc_power_mw: bits outside 1..14");
    return 140.0 * std::exp2(static_cast<double>(bits) - 4.0);
}

CostReport cost_report(CostKind kind, std::size_t nb, std::size_t nu, std::size_t nj,
                       unsigned bits, bool two_dacs_per_antenna) {
    CostReport out;
    out.flops = precoder_flops(kind, nb, nu, nj, bits);
    out.pa_flops_order = nu;
    out.dac_power_mw = dac_power_mw(bits);
    out.two_dacs_per_antenna = two_dacs_per_antenna;
    const double converters = static_cast<double>(nb) * (two_dacs_per_antenna ? 2.0 : 1.0);
    out.total_dac_power_mw = converters * out.dac_power_mw;
    return out;
}

}  // namespace cqmimo
