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

#include "cqmimo/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <thread>

#include <json.hpp>

#include "cqmimo/poweralloc.hpp"
#include "cqmimo/quantizer.hpp"
#include "cqmimo/rates.hpp"
#include "cqmimo/rng.hpp"

namespace cqmimo {

std::string to_string(PowerAllocKind kind) {
    switch (kind) {
        case PowerAllocKind::equal: return "EQUAL";
        case PowerAllocKind::wf: return "WF";
        case PowerAllocKind::maas: return "MAAS";
    }
    return "?";
}

PowerAllocKind power_alloc_from_string(const std::string& name) {
    if (name == "EQUAL" || name == "equal") return PowerAllocKind::equal;
    if (name == "WF" || name == "wf") return PowerAllocKind::wf;
    if (name == "MAAS" || name == "maas") return PowerAllocKind::maas;
    throw ConfigError("unknown power allocation: " + name);
}

std::string bits_label(unsigned bits) {
    return bits == 0 ? std::string("FR") : std::to_string(bits);
}

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

void validate_config(const ScenarioConfig& cfg) {
    if (cfg.users < 1 || cfg.antennas_per_user < 1) {
        throw ConfigError("config: users and antennas_per_user must be >= 1");
    }
    if (cfg.nb < cfg.nu()) {
        throw ConfigError("config: nb must be >= users * antennas_per_user");
    }
    if (cfg.trials < 1) throw ConfigError("config: trials must be >= 1");
    if (cfg.channels_per_trial < 1) throw ConfigError("config: channels_per_trial must be >= 1");
    if (cfg.snr_db.empty()) throw ConfigError("config: snr_db must be nonempty");
    if (cfg.bits.empty()) throw ConfigError("config: bits must be nonempty");
    if (cfg.precoders.empty()) throw ConfigError("config: precoders must be nonempty");
    for (unsigned b : cfg.bits) {
        if (b != 0 && (b < 2 || b > 12)) {
            throw ConfigError("config: bits entries must be 2..12 or FR");
        }
    }
    if (cfg.csi && std::abs(cfg.csi->r) >= 1.0) {
        throw ConfigError("config: csi |r| must be < 1");
    }
    if (cfg.csi && cfg.csi->sigma_e2 < 0.0) {
        throw ConfigError("config: csi sigma_e2 must be >= 0");
    }
}

// One trial's rates over the whole grid, cells ordered precoder x bits x snr.
std::vector<double> run_trial(const ScenarioConfig& cfg, const ComplexMatrix& h_true,
                              const std::vector<QuantizerSpec>& specs, std::uint64_t trial_seed) {
    const std::size_t nu = cfg.nu();
    const double p_total = static_cast<double>(nu);  // P = trace(R_s) with R_s = I
    const std::vector<std::size_t> partition(cfg.users, cfg.antennas_per_user);

    ChannelSet ch_true{h_true, partition, cfg.nb, trial_seed};
    ChannelSet ch_precode =
        cfg.csi ? apply_csi_model(ch_true, *cfg.csi, trial_seed) : ch_true;

    std::vector<double> snr_lin(cfg.snr_db.size());
    for (std::size_t i = 0; i < cfg.snr_db.size(); ++i)
        snr_lin[i] = std::pow(10.0, cfg.snr_db[i] / 10.0);

    std::vector<double> out;
    out.reserve(cfg.precoders.size() * cfg.bits.size() * cfg.snr_db.size());

    for (PrecoderKind kind : cfg.precoders) {
        // SNR-independent precoders are built once per trial.
        std::optional<Precoder> base_fixed;
        std::vector<std::optional<Precoder>> base_per_snr(cfg.snr_db.size());
        try {
            if (kind == PrecoderKind::bd) base_fixed = build_bd(ch_precode, p_total);
            if (kind == PrecoderKind::zf) base_fixed = build_zf(ch_precode, p_total);
        } catch (const Error&) {
            // leave unset; cells below record the failure
        }

        for (std::size_t si = 0; si < cfg.snr_db.size(); ++si) {
            if (kind == PrecoderKind::mmse || kind == PrecoderKind::rbd) {
                const double n0 = static_cast<double>(nu) / snr_lin[si];
                try {
                    base_per_snr[si] = kind == PrecoderKind::mmse
                                           ? build_mmse(ch_precode, p_total, n0)
                                           : build_rbd(ch_precode, p_total, n0);
                } catch (const Error&) {
                }
            }
        }

        for (const QuantizerSpec& spec : specs) {
            for (std::size_t si = 0; si < cfg.snr_db.size(); ++si) {
                const std::optional<Precoder>& base =
                    (kind == PrecoderKind::bd || kind == PrecoderKind::zf) ? base_fixed
                                                                           : base_per_snr[si];
                if (!base) {
                    out.push_back(kNan);
                    continue;
                }
                try {
                    const Precoder* chosen = &*base;
                    Precoder loaded;
                    const bool has_loading =
                        kind == PrecoderKind::bd || kind == PrecoderKind::rbd;
                    if (has_loading && cfg.power_alloc != PowerAllocKind::equal) {
                        AllocationProblem prob;
                        prob.phi2 = pooled_phi2(*base);
                        prob.nu = nu;
                        prob.snr = snr_lin[si];
                        prob.delta = cfg.power_alloc == PowerAllocKind::maas ? spec.delta : 1.0;
                        prob.p_total = p_total;
                        const Allocation alloc = cfg.power_alloc == PowerAllocKind::maas
                                                     ? maas(prob)
                                                     : waterfill(prob);
                        loaded = set_power_loading(*base, split_by_user(*base, alloc.omega));
                        if (kind == PrecoderKind::rbd) {
                            // The regularized first stage is not orthonormal, so
                            // reloading the diagonal drifts off the power budget;
                            // rescale to keep the constraint physical (exact
                            // no-op for BD).
                            const double tr = frobenius_norm(loaded.p_matrix);
                            if (tr > 0.0) {
                                loaded.p_matrix =
                                    (std::sqrt(p_total) / tr) * loaded.p_matrix;
                            }
                        }
                        chosen = &loaded;
                    }
                    RateInputs in;
                    in.h = ch_true.h;
                    in.p = chosen->p_matrix;
                    in.delta = spec.delta;
                    in.snr = snr_lin[si];
                    in.nu = nu;
                    out.push_back(exact_cqa_rate(in));
                } catch (const Error&) {
                    out.push_back(kNan);
                }
            }
        }
    }
    return out;
}

}  // namespace

ScenarioRun run_scenario(const ScenarioConfig& cfg, unsigned n_threads,
                         const std::vector<ComplexMatrix>* fixed_channels,
                         std::vector<ComplexMatrix>* drawn_channels) {
    validate_config(cfg);
    const std::size_t nu = cfg.nu();
    const double p_total = static_cast<double>(nu);
    const std::vector<std::size_t> partition(cfg.users, cfg.antennas_per_user);

    if (fixed_channels != nullptr) {
        if (fixed_channels->size() < cfg.trials) {
            throw ConfigError("run_scenario: fewer fixed channels than trials");
        }
        for (const auto& h : *fixed_channels) {
            if (h.rows() != nu || h.cols() != cfg.nb) {
                throw ConfigError("run_scenario: fixed channel shape mismatch");
            }
        }
    }

    std::vector<QuantizerSpec> specs;
    specs.reserve(cfg.bits.size());
    for (unsigned b : cfg.bits) {
        specs.push_back(b == 0 ? QuantizerSpec::make_full_resolution(cfg.nb, p_total)
                               : build_quantizer(b, cfg.nb, p_total));
    }

    // Channels are drawn up front (cheap next to the per-trial linear
    // algebra) so dumping and fixed-channel replay share one code path.
    std::vector<ComplexMatrix> channels(cfg.trials);
    for (std::size_t t = 0; t < cfg.trials; ++t) {
        const std::uint64_t trial_seed = Rng::derive(cfg.seed, t);
        channels[t] = fixed_channels != nullptr
                          ? (*fixed_channels)[t]
                          : generate_iid(cfg.nb, partition, trial_seed).h;
    }
    if (drawn_channels != nullptr) *drawn_channels = channels;

    const std::size_t n_cells = cfg.precoders.size() * cfg.bits.size() * cfg.snr_db.size();
    std::vector<std::vector<double>> per_trial(cfg.trials);

    const unsigned workers = std::max(1u, n_threads);
    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        while (true) {
            const std::size_t t = next.fetch_add(1);
            if (t >= cfg.trials) break;
            per_trial[t] = run_trial(cfg, channels[t], specs, Rng::derive(cfg.seed, t));
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }

    // Ordered reduction: cell statistics accumulate in trial order, so the
    // output is bitwise independent of the thread count.
    ScenarioRun run;
    run.results.reserve(n_cells);
    run.samples.reserve(n_cells);
    std::size_t cell = 0;
    for (PrecoderKind kind : cfg.precoders) {
        for (unsigned bits : cfg.bits) {
            for (double snr_db : cfg.snr_db) {
                CellSamples cs;
                cs.snr_db = snr_db;
                cs.precoder = kind;
                cs.bits = bits;
                cs.power_alloc = cfg.power_alloc;
                cs.rates.resize(cfg.trials);
                double sum = 0.0;
                std::size_t n_ok = 0;
                for (std::size_t t = 0; t < cfg.trials; ++t) {
                    const double r = per_trial[t][cell];
                    cs.rates[t] = r;
                    if (std::isfinite(r)) {
                        sum += r;
                        ++n_ok;
                    }
                }
                RateResult rr;
                rr.scenario_id = cfg.scenario_id;
                rr.snr_db = snr_db;
                rr.precoder = kind;
                rr.bits = bits;
                rr.power_alloc = cfg.power_alloc;
                rr.trials = cfg.trials;
                rr.failed_cells = cfg.trials - n_ok;
                if (n_ok > 0) {
                    rr.mean_rate = sum / static_cast<double>(n_ok);
                    double ss = 0.0;
                    for (double r : cs.rates) {
                        if (std::isfinite(r)) ss += (r - rr.mean_rate) * (r - rr.mean_rate);
                    }
                    rr.stderr_rate = n_ok > 1 ? std::sqrt(ss / static_cast<double>(n_ok - 1) /
                                                          static_cast<double>(n_ok))
                                              : 0.0;
                } else {
                    rr.mean_rate = kNan;
                    rr.stderr_rate = kNan;
                }
                run.results.push_back(std::move(rr));
                run.samples.push_back(std::move(cs));
                ++cell;
            }
        }
    }
    return run;
}

LabeledCurve curve_from_samples(std::string label, const std::vector<CellSamples>& samples,
                                PrecoderKind precoder, unsigned bits, PowerAllocKind alloc) {
    LabeledCurve curve;
    curve.label = std::move(label);
    for (const CellSamples& cs : samples) {
        if (cs.precoder == precoder && cs.bits == bits && cs.power_alloc == alloc) {
            curve.snr_db.push_back(cs.snr_db);
            curve.per_trial.push_back(cs.rates);
        }
    }
    if (curve.snr_db.empty()) {
        throw MissingCurve("no samples for " + to_string(precoder) + "-" + bits_label(bits) +
                           "-" + to_string(alloc));
    }
    return curve;
}

namespace {

double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

const LabeledCurve& find_curve(const std::vector<LabeledCurve>& curves,
                               const std::string& label) {
    for (const LabeledCurve& c : curves) {
        if (c.label == label) return c;
    }
    throw MissingCurve("curve not found: " + label);
}

std::vector<double> mean_curve(const LabeledCurve& c) {
    std::vector<double> out(c.snr_db.size(), kNan);
    for (std::size_t i = 0; i < c.snr_db.size(); ++i) {
        double sum = 0.0;
        std::size_t n = 0;
        for (double r : c.per_trial[i]) {
            if (std::isfinite(r)) {
                sum += r;
                ++n;
            }
        }
        if (n > 0) out[i] = sum / static_cast<double>(n);
    }
    return out;
}

}  // namespace

HierarchyReport compare_hierarchy(const std::vector<LabeledCurve>& curves,
                                  const std::vector<std::string>& expected_order, double alpha) {
    if (expected_order.size() < 2) throw MissingCurve("compare_hierarchy: need >= 2 curves");
    HierarchyReport report;
    report.all_hold = true;

    for (std::size_t k = 0; k + 1 < expected_order.size(); ++k) {
        const LabeledCurve& upper = find_curve(curves, expected_order[k]);
        const LabeledCurve& lower = find_curve(curves, expected_order[k + 1]);
        if (upper.snr_db != lower.snr_db) {
            throw MissingCurve("compare_hierarchy: SNR grids differ between " + upper.label +
                               " and " + lower.label);
        }
        for (std::size_t si = 0; si < upper.snr_db.size(); ++si) {
            const auto& a = upper.per_trial[si];
            const auto& b = lower.per_trial[si];
            const std::size_t n = std::min(a.size(), b.size());
            double sum = 0.0;
            std::size_t m = 0;
            for (std::size_t t = 0; t < n; ++t) {
                if (std::isfinite(a[t]) && std::isfinite(b[t])) {
                    sum += a[t] - b[t];
                    ++m;
                }
            }
            HierarchyEntry e;
            e.upper = upper.label;
            e.lower = lower.label;
            e.snr_db = upper.snr_db[si];
            if (m == 0) {
                e.mean_diff = kNan;
                e.p_value = 1.0;
                e.holds = false;
            } else {
                e.mean_diff = sum / static_cast<double>(m);
                double ss = 0.0;
                for (std::size_t t = 0; t < n; ++t) {
                    if (std::isfinite(a[t]) && std::isfinite(b[t])) {
                        const double d = a[t] - b[t] - e.mean_diff;
                        ss += d * d;
                    }
                }
                e.stderr_diff = m > 1 ? std::sqrt(ss / static_cast<double>(m - 1) /
                                                  static_cast<double>(m))
                                      : 0.0;
                if (e.stderr_diff == 0.0) {
                    e.p_value = e.mean_diff > 0.0 ? 0.0 : (e.mean_diff == 0.0 ? 0.5 : 1.0);
                } else {
                    e.p_value = normal_sf(e.mean_diff / e.stderr_diff);
                }
                e.holds = e.mean_diff > 0.0 && e.p_value < alpha;
            }
            report.all_hold = report.all_hold && e.holds;
            report.entries.push_back(e);
        }
    }
    return report;
}

double horizontal_gap_db(const LabeledCurve& better, const LabeledCurve& worse) {
    const std::vector<double> mb = mean_curve(better);
    const std::vector<double> mw = mean_curve(worse);
    double best = -std::numeric_limits<double>::infinity();

    for (std::size_t i = 0; i < mb.size(); ++i) {
        const double level = mb[i];
        if (!std::isfinite(level)) continue;
        // First worse-curve crossing of this rate level, scanning upward.
        for (std::size_t j = 0; j + 1 < mw.size(); ++j) {
            if (!std::isfinite(mw[j]) || !std::isfinite(mw[j + 1])) continue;
            if ((mw[j] <= level && mw[j + 1] >= level) && mw[j + 1] > mw[j]) {
                const double f = (level - mw[j]) / (mw[j + 1] - mw[j]);
                const double snr_w = worse.snr_db[j] + f * (worse.snr_db[j + 1] - worse.snr_db[j]);
                best = std::max(best, snr_w - better.snr_db[i]);
                break;
            }
        }
    }
    return best;
}

void write_csv(std::ostream& os, const std::vector<RateResult>& results) {
    os << "scenario_id,snr_db,precoder,bits,power_alloc,trials,mean_rate_bpcu,stderr_bpcu,"
          "failed_cells\n";
    char buf[64];
    for (const RateResult& r : results) {
        os << r.scenario_id << ',';
        std::snprintf(buf, sizeof(buf), "%.6g", r.snr_db);
        os << buf << ',' << to_string(r.precoder) << ',' << bits_label(r.bits) << ','
           << to_string(r.power_alloc) << ',' << r.trials << ',';
        std::snprintf(buf, sizeof(buf), "%.6g", r.mean_rate);
        os << buf << ',';
        std::snprintf(buf, sizeof(buf), "%.6g", r.stderr_rate);
        os << buf << ',' << r.failed_cells << '\n';
    }
}

ScenarioConfig parse_config_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }

    ScenarioConfig cfg;
    try {
        if (j.contains("scenario_id")) cfg.scenario_id = j.at("scenario_id").get<std::string>();
        cfg.nb = j.at("nb").get<std::size_t>();
        cfg.users = j.at("users").get<std::size_t>();
        cfg.antennas_per_user = j.at("antennas_per_user").get<std::size_t>();
        cfg.snr_db = j.at("snr_db").get<std::vector<double>>();

        cfg.bits.clear();
        for (const auto& b : j.at("bits")) {
            if (b.is_string()) {
                const std::string s = b.get<std::string>();
                if (s != "FR" && s != "fr") {
                    throw ConfigError("config: bits entry must be an integer or \"FR\"");
                }
                cfg.bits.push_back(0);
            } else {
                cfg.bits.push_back(b.get<unsigned>());
            }
        }

        cfg.precoders.clear();
        for (const auto& p : j.at("precoders")) {
            cfg.precoders.push_back(precoder_kind_from_string(p.get<std::string>()));
        }
        if (j.contains("power_alloc")) {
            cfg.power_alloc = power_alloc_from_string(j.at("power_alloc").get<std::string>());
        }
        if (j.contains("trials")) cfg.trials = j.at("trials").get<std::size_t>();
        if (j.contains("channels_per_trial")) {
            cfg.channels_per_trial = j.at("channels_per_trial").get<std::size_t>();
        }
        if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("csi") && !j.at("csi").is_null()) {
            const auto& c = j.at("csi");
            CsiModel model;
            const auto& r = c.at("r");
            if (r.is_array()) {
                model.r = cx(r.at(0).get<double>(), r.at(1).get<double>());
            } else {
                model.r = cx(r.get<double>(), 0.0);
            }
            model.sigma_e2 = c.at("sigma_e2").get<double>();
            cfg.csi = model;
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }

    validate_config(cfg);
    return cfg;
}

double failed_fraction(const ScenarioRun& run) {
    std::size_t total = 0;
    std::size_t failed = 0;
    for (const RateResult& r : run.results) {
        total += r.trials;
        failed += r.failed_cells;
    }
    return total == 0 ? 0.0 : static_cast<double>(failed) / static_cast<double>(total);
}

}  // namespace cqmimo
