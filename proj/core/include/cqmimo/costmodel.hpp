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

#ifndef CQMIMO_COSTMODEL_HPP
#define CQMIMO_COSTMODEL_HPP

#include <cstddef>
#include <string>

namespace cqmimo {

/// Precoder families of the analytical FLOP-count model. The quantization-
/// aware variants add the fixed Bussgang setup cost cdelta_flops() on top of
/// their unquantized counterparts.
enum class CostKind {
    zf,
    mmse,
    bd,
    rbd,
    bussgang_zf,
    bussgang_mmse,
    cqa_bd,
    cqa_rbd,
};

std::string to_string(CostKind kind);
CostKind cost_kind_from_string(const std::string& name);

/// Analytical construction-cost report for one configuration.
struct CostReport {
    double flops = 0.0;              // precoder construction
    std::size_t pa_flops_order = 0;  // power allocation is O(nu)
    double dac_power_mw = 0.0;       // per real converter
    double total_dac_power_mw = 0.0;
    bool two_dacs_per_antenna = true;  // I/Q convention used for the total
};

/// FLOP count of constructing one precoder, valid in the broadcast regime
/// nb >= nu >= nj >= 1:
///   ZF        nb^3/2 + nb^2 (4 nu - 3/2) - nb nu
///   MMSE      nb^3/2 + nb^2 (4 nu - 3/2) - nb (nu - 2)
///   BD, RBD   nb^2 (32 nj + 8) + nb (32 nu^2 + 72 nj^2) + 64 nu^2
/// Quantization-aware and Bussgang variants add cdelta_flops(bits).
/// Throws UnknownKind for an unrecognized family.
double precoder_flops(CostKind kind, std::size_t nb, std::size_t nu, std::size_t nj,
                      unsigned bits = 5);

/// Setup cost of the Bussgang scalars: two sweeps of J - 1 = 2^bits - 1
/// transcendental evaluations (counted at 20 FLOPs each) plus the
/// surrounding arithmetic. A documented convention, deliberately easy to
/// retune.
double cdelta_flops(unsigned bits);

/// Converter power models P(b) = c tau 2^b at tau = 1 GHz, calibrated to
/// 85 mW for the 5-bit DAC and 140 mW for the 4-bit ADC; doubling per added
/// bit. Valid for 1 <= b <= 14.
double dac_power_mw(unsigned bits);
double adc_power_mw(unsigned bits);

/// Combined report; total DAC power covers nb antennas with two real
/// converters each when two_dacs_per_antenna is set.
CostReport cost_report(CostKind kind, std::size_t nb, std::size_t nu, std::size_t nj,
                       unsigned bits, bool two_dacs_per_antenna = true);

}  // namespace cqmimo

#endif  // CQMIMO_COSTMODEL_HPP
