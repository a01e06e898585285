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

#ifndef CQMIMO_HARNESS_HPP
#define CQMIMO_HARNESS_HPP

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "cqmimo/channel.hpp"
#include "cqmimo/precoder.hpp"

namespace cqmimo {

enum class PowerAllocKind { equal, wf, maas };

std::string to_string(PowerAllocKind kind);
PowerAllocKind power_alloc_from_string(const std::string& name);

/// Label of a bit depth in configs and CSV output; 0 is the full-resolution
/// sentinel and prints as "FR".
std::string bits_label(unsigned bits);

/// One Monte Carlo experiment: a (precoder x bits x SNR) grid evaluated over
/// independent channel draws. bits entries use 0 for full resolution.
struct ScenarioConfig {
    std::string scenario_id = "scenario";
    std::size_t nb = 64;
    std::size_t users = 8;
    std::size_t antennas_per_user = 2;
    std::vector<double> snr_db;
    std::vector<unsigned> bits;
    std::vector<PrecoderKind> precoders;
    PowerAllocKind power_alloc = PowerAllocKind::equal;
    std::size_t trials = 100;
    std::size_t channels_per_trial = 1;
    std::uint64_t seed = 1;
    std::optional<CsiModel> csi;

    std::size_t nu() const { return users * antennas_per_user; }
};

/// Aggregated statistics of one grid cell.
struct RateResult {
    std::string scenario_id;
    double snr_db = 0.0;
    PrecoderKind precoder = PrecoderKind::bd;
    unsigned bits = 0;
    PowerAllocKind power_alloc = PowerAllocKind::equal;
    std::size_t trials = 0;
    double mean_rate = 0.0;    // bits per channel use
    double stderr_rate = 0.0;  // standard error of the mean
    std::size_t failed_cells = 0;
};

/// Per-trial rates of one grid cell (NaN marks a failed trial), kept for
/// paired statistical comparisons across curves.
struct CellSamples {
    double snr_db = 0.0;
    PrecoderKind precoder = PrecoderKind::bd;
    unsigned bits = 0;
    PowerAllocKind power_alloc = PowerAllocKind::equal;
    std::vector<double> rates;
};

struct ScenarioRun {
    std::vector<RateResult> results;
    std::vector<CellSamples> samples;
};

/// Runs the scenario. Each trial draws one channel (and, when a CSI model is
/// configured, one corrupted copy that the precoders are built from while
/// rates are always evaluated against the true channel), then sweeps the
/// whole grid on it. Deterministic for a fixed seed regardless of thread
/// count: trial substreams are keyed by trial index and aggregation reduces
/// in trial order. Per-cell failures are recorded as failed-cell markers
/// instead of aborting the sweep.
///
/// fixed_channels, when given, replaces channel generation (one true channel
/// per trial); drawn_channels, when given, receives the per-trial true
/// channels actually used.
ScenarioRun run_scenario(const ScenarioConfig& cfg, unsigned n_threads = 1,
                         const std::vector<ComplexMatrix>* fixed_channels = nullptr,
                         std::vector<ComplexMatrix>* drawn_channels = nullptr);

/// A named mean-rate curve with its per-trial samples, the unit of the
/// ordering comparison.
struct LabeledCurve {
    std::string label;
    std::vector<double> snr_db;
    std::vector<std::vector<double>> per_trial;  // [snr index][trial]
};

LabeledCurve curve_from_samples(std::string label, const std::vector<CellSamples>& samples,
                                PrecoderKind precoder, unsigned bits, PowerAllocKind alloc);

/// Paired comparison of two adjacent curves at one SNR point.
struct HierarchyEntry {
    std::string upper;
    std::string lower;
    double snr_db = 0.0;
    double mean_diff = 0.0;    // mean of per-trial (upper - lower)
    double stderr_diff = 0.0;  // standard error of that mean
    double p_value = 1.0;      // one-sided H1: mean_diff > 0
    bool holds = false;        // mean_diff > 0 with p_value < alpha
};

struct HierarchyReport {
    std::vector<HierarchyEntry> entries;
    bool all_hold = false;
};

/// Checks the claimed ordering (strongest first) between each adjacent curve
/// pair at every SNR point, using paired per-channel differences and a
/// one-sided test at level alpha. Throws MissingCurve if a label is absent
/// or the SNR grids disagree.
HierarchyReport compare_hierarchy(const std::vector<LabeledCurve>& curves,
                                  const std::vector<std::string>& expected_order,
                                  double alpha = 0.05);

/// Largest horizontal (dB) advantage of `better` over `worse` at matched
/// mean rate, interpolating linearly between grid points; rate levels that
/// `worse` never reaches inside the grid are skipped. Returns -infinity when
/// no level is comparable.
double horizontal_gap_db(const LabeledCurve& better, const LabeledCurve& worse);

/// CSV emission, fixed schema: scenario_id, snr_db, precoder, bits,
/// power_alloc, trials, mean_rate_bpcu, stderr_bpcu, failed_cells. Header
/// row always written, numbers with 6 significant digits.
void write_csv(std::ostream& os, const std::vector<RateResult>& results);

/// Parses a JSON scenario document with snake_case keys mirroring
/// ScenarioConfig ("bits" entries are integers or "FR"; "csi" is optional
/// with keys "r" (number or [re, im]) and "sigma_e2"). Throws ConfigError
/// with a readable message on any violation.
ScenarioConfig parse_config_json(const std::string& text);

/// Fraction of (cell, trial) evaluations that failed, for the CLI exit code.
double failed_fraction(const ScenarioRun& run);

}  // namespace cqmimo

#endif  // CQMIMO_HARNESS_HPP
