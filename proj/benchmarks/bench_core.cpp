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

#include <benchmark/benchmark.h>

#include <cmath>

#include "cqmimo/channel.hpp"
#include "cqmimo/linalg.hpp"
#include "cqmimo/poweralloc.hpp"
#include "cqmimo/precoder.hpp"
#include "cqmimo/quantizer.hpp"
#include "cqmimo/rates.hpp"
#include "cqmimo/rng.hpp"

using namespace cqmimo;

namespace {

ComplexMatrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    Rng rng(seed);
    ComplexMatrix m(rows, cols);
    for (auto& v : m.data()) v = rng.complex_normal();
    return m;
}

void BM_Svd(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const ComplexMatrix a = random_matrix(n / 4, n, 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(svd(a));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Svd)->RangeMultiplier(2)->Range(16, 128)->Complexity();

void BM_BuildBd(benchmark::State& state) {
    const auto nb = static_cast<std::size_t>(state.range(0));
    const auto ch = generate_iid(nb, std::vector<std::size_t>(nb / 8, 2), 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_bd(ch, static_cast<double>(ch.nu())));
    }
}
BENCHMARK(BM_BuildBd)->RangeMultiplier(2)->Range(32, 128);

void BM_BuildRbd(benchmark::State& state) {
    const auto nb = static_cast<std::size_t>(state.range(0));
    const auto ch = generate_iid(nb, std::vector<std::size_t>(nb / 8, 2), 3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_rbd(ch, static_cast<double>(ch.nu()), 1.6));
    }
}
BENCHMARK(BM_BuildRbd)->RangeMultiplier(2)->Range(32, 128);

void BM_ExactRate(benchmark::State& state) {
    const auto ch = generate_iid(64, std::vector<std::size_t>(8, 2), 4);
    const Precoder bd = build_bd(ch, 16.0);
    const RateInputs in{ch.h, bd.p_matrix, 0.9983, 10.0, 16};
    for (auto _ : state) {
        benchmark::DoNotOptimize(exact_cqa_rate(in));
    }
}
BENCHMARK(BM_ExactRate);

void BM_Maas(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    Rng rng(5);
    AllocationProblem p;
    p.phi2.resize(n);
    for (double& v : p.phi2) v = std::exp(0.5 * rng.normal());
    p.nu = n;
    p.snr = 4.0;
    p.delta = 0.9942;
    p.p_total = static_cast<double>(n);
    for (auto _ : state) {
        benchmark::DoNotOptimize(maas(p));
    }
}
BENCHMARK(BM_Maas)->RangeMultiplier(4)->Range(16, 256);

void BM_Quantize(benchmark::State& state) {
    const QuantizerSpec q = build_quantizer(5, 64, 16.0);
    Rng rng(6);
    std::vector<cx> x(64);
    for (auto& v : x) v = 0.5 * rng.complex_normal();
    for (auto _ : state) {
        benchmark::DoNotOptimize(quantize(x, q));
    }
}
BENCHMARK(BM_Quantize);

}  // namespace

BENCHMARK_MAIN();
