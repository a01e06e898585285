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

#ifndef CQMIMO_RNG_HPP
#define CQMIMO_RNG_HPP

#include <cmath>
#include <complex>
#include <cstdint>

namespace cqmimo {

/// Splittable deterministic random stream. A stream is keyed by a base seed
/// plus an arbitrary list of tags (trial index, draw purpose, ...), so
/// parallel Monte Carlo trials draw from independent, reproducible streams
/// no matter how work is scheduled. Gaussian variates come from an explicit
/// Box-Muller transform rather than std::normal_distribution, which is not
/// pinned down by the standard.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(mix(seed ^ kInit)) {}

    Rng(std::uint64_t seed, std::initializer_list<std::uint64_t> tags) : Rng(seed) {
        for (std::uint64_t t : tags) state_ = mix(state_ ^ mix(t + kTagSalt));
    }

    /// Derives an independent child stream; does not advance this stream.
    Rng child(std::uint64_t tag) const {
        Rng r(*this);
        r.state_ = mix(r.state_ ^ mix(tag + kTagSalt));
        return r;
    }

    /// Pure seed-derivation helper for keying sub-streams by index.
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t tag) {
        return mix(mix(seed ^ kInit) ^ mix(tag + kTagSalt));
    }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return finalize(state_);
    }

    /// Uniform on (0, 1]: never returns 0, safe under log().
    double uniform_pos() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Standard real normal N(0, 1).
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform_pos();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double th = 2.0 * kPi * u2;
        spare_ = r * std::sin(th);
        have_spare_ = true;
        return r * std::cos(th);
    }

    /// Circularly-symmetric complex normal CN(0, 1): real and imaginary
    /// parts independent N(0, 1/2).
    std::complex<double> complex_normal() {
        const double s = 1.0 / std::sqrt(2.0);
        const double re = normal();
        const double im = normal();
        return {s * re, s * im};
    }

  private:
    static constexpr std::uint64_t kInit = 0x6f4a90d5b3c8e21fULL;
    static constexpr std::uint64_t kTagSalt = 0x9b97f4a7c15ed3b1ULL;
    static constexpr double kPi = 3.14159265358979323846;

    static std::uint64_t finalize(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        return finalize(z);
    }

    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

/// Draw purposes used to key per-trial substreams in the simulation harness.
namespace stream {
inline constexpr std::uint64_t kChannel = 0x01;
inline constexpr std::uint64_t kCsiError = 0x02;
inline constexpr std::uint64_t kSymbols = 0x03;
}  // namespace stream

}  // namespace cqmimo

#endif  // CQMIMO_RNG_HPP
