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

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "cqmimo/channel.hpp"
#include "cqmimo/costmodel.hpp"
#include "cqmimo/harness.hpp"
#include "cqmimo/poweralloc.hpp"
#include "cqmimo/quantizer.hpp"
#include "cqmimo/rates.hpp"
#include "cqmimo/rng.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

// Accepts "2..6", "2,3,4" or a single value.
std::vector<unsigned> parse_bits_range(const std::string& text) {
    std::vector<unsigned> out;
    const auto dots = text.find("..");
    if (dots != std::string::npos) {
        const unsigned lo = static_cast<unsigned>(std::stoul(text.substr(0, dots)));
        const unsigned hi = static_cast<unsigned>(std::stoul(text.substr(dots + 2)));
        for (unsigned b = lo; b <= hi; ++b) out.push_back(b);
        return out;
    }
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(static_cast<unsigned>(std::stoul(tok)));
    return out;
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    return out;
}

int cmd_delta_table(const std::string& bits_text, std::size_t nb, std::size_t nu) {
    const std::vector<unsigned> bits = parse_bits_range(bits_text);
    const double p_total = static_cast<double>(nu);
    std::printf("%4s %12s %12s %10s %14s\n", "bits", "gamma", "alpha", "delta", "snr_max_db");
    for (unsigned b : bits) {
        const cqmimo::QuantizerSpec q = cqmimo::build_quantizer(b, nb, p_total);
        // The threshold is steep in the gain near 1, so it is derived from
        // the gain exactly as displayed; every printed digit is then
        // self-consistent.
        const double delta_4dp = std::round(q.delta * 1e4) / 1e4;
        const cqmimo::EpsilonReport rep = cqmimo::epsilon_report(nu, 1.0, delta_4dp);
        std::printf("%4u %12.6f %12.6f %10.4f %14.4f\n", b, q.gamma, q.alpha, delta_4dp,
                    rep.snr_max_db);
    }
    return kExitOk;
}

int cmd_alloc(const std::string& phi2_text, unsigned bits, double delta_opt, double snr_db,
              std::size_t nu_opt, double p_total_opt, bool printed_mu) {
    cqmimo::AllocationProblem prob;
    prob.phi2 = parse_double_list(phi2_text);
    prob.nu = nu_opt > 0 ? nu_opt : prob.phi2.size();
    prob.snr = std::pow(10.0, snr_db / 10.0);
    prob.p_total = p_total_opt > 0 ? p_total_opt : static_cast<double>(prob.nu);
    if (delta_opt > 0.0) {
        prob.delta = delta_opt;
    } else if (bits > 0) {
        prob.delta = cqmimo::build_quantizer(bits, 64, static_cast<double>(prob.nu)).delta;
    } else {
        prob.delta = 1.0;
    }

    std::printf("streams=%zu nu=%zu snr=%.4f dB delta=%.6f p_total=%.4f\n", prob.phi2.size(),
                prob.nu, snr_db, prob.delta, prob.p_total);

    std::vector<cqmimo::MaasIteration> trace;
    const cqmimo::Allocation alloc = cqmimo::maas(
        prob, printed_mu ? cqmimo::MuForm::as_printed : cqmimo::MuForm::active_set, &trace);

    std::printf("iteration trace:\n");
    for (std::size_t i = 0; i < trace.size(); ++i) {
        std::printf("  [%2zu] active=%3zu mu=%.8f min_omega=%+.6e %s\n", i + 1, trace[i].active,
                    trace[i].mu, trace[i].min_omega,
                    trace[i].rejected ? "-> reject weakest" : "-> done");
    }
    if (alloc.fallback_used) {
        std::printf("closed form lost validity (negative discriminant): fell back to "
                    "classical waterfilling\n");
    }
    std::printf("mu_opt = %.10f, active = %zu\n", alloc.mu, alloc.active);
    double total = 0.0;
    for (std::size_t m = 0; m < alloc.omega.size(); ++m) {
        std::printf("  omega[%2zu] = %.10f (phi2 = %.6f)\n", m, alloc.omega[m], prob.phi2[m]);
        total += alloc.omega[m];
    }
    std::printf("sum(omega) = %.10f\n", total);
    return kExitOk;
}

int cmd_cost(std::size_t nb, std::size_t nu, std::size_t nj, unsigned bits,
             const std::string& out_csv) {
    using cqmimo::CostKind;
    const CostKind kinds[] = {CostKind::zf,          CostKind::mmse,
                              CostKind::bd,          CostKind::rbd,
                              CostKind::bussgang_zf, CostKind::bussgang_mmse,
                              CostKind::cqa_bd,      CostKind::cqa_rbd};

    std::printf("precoder construction cost, nb=%zu nu=%zu nj=%zu (Bussgang terms at %u bits)\n",
                nb, nu, nj, bits);
    std::printf("%-14s %16s %18s\n", "precoder", "flops", "pa_flops");
    for (CostKind k : kinds) {
        const cqmimo::CostReport r = cqmimo::cost_report(k, nb, nu, nj, bits);
        std::printf("%-14s %16.0f %12s(%zu)\n", cqmimo::to_string(k).c_str(), r.flops, "O",
                    r.pa_flops_order);
    }

    std::printf("\nconverter power, 1 GHz sampling (mW per real converter; total for %zu "
                "antennas, two DACs each)\n",
                nb);
    std::printf("%4s %12s %12s %16s\n", "bits", "dac_mw", "adc_mw", "total_dac_mw");
    for (unsigned b = 2; b <= 12; ++b) {
        const double dac = cqmimo::dac_power_mw(b);
        std::printf("%4u %12.2f %12.2f %16.1f\n", b, dac, cqmimo::adc_power_mw(b),
                    2.0 * static_cast<double>(nb) * dac);
    }

    if (!out_csv.empty()) {
        std::ofstream f(out_csv);
        if (!f) {
            std::cerr << "cost: cannot open " << out_csv << "\n";
            return kExitConfig;
        }
        f << "kind,nb,nu,nj,bits,flops\n";
        for (CostKind k : kinds) {
            f << cqmimo::to_string(k) << ',' << nb << ',' << nu << ',' << nj << ',' << bits << ','
              << cqmimo::precoder_flops(k, nb, nu, nj, bits) << "\n";
        }
        f << "converter,bits,power_mw\n";
        for (unsigned b = 2; b <= 12; ++b) {
            f << "DAC," << b << ',' << cqmimo::dac_power_mw(b) << "\n";
            f << "ADC," << b << ',' << cqmimo::adc_power_mw(b) << "\n";
        }
    }
    return kExitOk;
}

int cmd_verify_bussgang(unsigned bits, std::size_t nb, std::size_t nu, std::size_t samples,
                        std::uint64_t seed) {
    const double p_total = static_cast<double>(nu);
    const cqmimo::QuantizerSpec spec = cqmimo::build_quantizer(bits, nb, p_total);

    // Random normalized precoder as the test subject.
    cqmimo::Rng rng(seed, {0x9e});
    cqmimo::ComplexMatrix p(nb, nu);
    for (auto& v : p.data()) v = rng.complex_normal();
    const double scale = std::sqrt(p_total) / cqmimo::frobenius_norm(p);
    p = scale * p;

    const cqmimo::BussgangStats stats = cqmimo::verify_bussgang(spec, p, samples, seed);
    const double ref = spec.delta * cqmimo::frobenius_norm(p);
    std::printf("bits=%u delta=%.6f samples=%zu\n", bits, spec.delta, stats.samples);
    std::printf("cross_corr_norm = %.6e (%.3f%% of ||delta P||)\n", stats.cross_corr_norm,
                100.0 * stats.cross_corr_norm / ref);
    std::printf("rff_error       = %.6e\n", stats.rff_error);
    return kExitOk;
}

int cmd_simulate(const std::string& config_path, const std::string& out_csv,
                 std::optional<std::uint64_t> seed_override, unsigned threads,
                 const std::string& dump_dir, const std::string& load_dir) {
    std::ifstream cf(config_path);
    if (!cf) {
        std::cerr << "simulate: cannot open config " << config_path << "\n";
        return kExitConfig;
    }
    std::stringstream buffer;
    buffer << cf.rdbuf();

    cqmimo::ScenarioConfig cfg;
    try {
        cfg = cqmimo::parse_config_json(buffer.str());
    } catch (const cqmimo::Error& e) {
        std::cerr << "simulate: " << e.what() << "\n";
        return kExitConfig;
    }
    if (seed_override) cfg.seed = *seed_override;

    std::vector<cqmimo::ComplexMatrix> loaded;
    const std::vector<cqmimo::ComplexMatrix>* fixed = nullptr;
    if (!load_dir.empty()) {
        try {
            for (std::size_t t = 0; t < cfg.trials; ++t) {
                loaded.push_back(cqmimo::load_matrix_text(load_dir + "/trial_" +
                                                          std::to_string(t) + ".txt"));
            }
        } catch (const cqmimo::Error& e) {
            std::cerr << "simulate: " << e.what() << "\n";
            return kExitConfig;
        }
        fixed = &loaded;
    }

    std::vector<cqmimo::ComplexMatrix> drawn;
    cqmimo::ScenarioRun run;
    try {
        run = cqmimo::run_scenario(cfg, threads, fixed, dump_dir.empty() ? nullptr : &drawn);
    } catch (const cqmimo::ConfigError& e) {
        std::cerr << "simulate: " << e.what() << "\n";
        return kExitConfig;
    }

    if (!dump_dir.empty()) {
        std::filesystem::create_directories(dump_dir);
        for (std::size_t t = 0; t < drawn.size(); ++t) {
            cqmimo::save_matrix_text(drawn[t], dump_dir + "/trial_" + std::to_string(t) + ".txt");
        }
    }

    if (out_csv.empty()) {
        cqmimo::write_csv(std::cout, run.results);
    } else {
        std::ofstream f(out_csv);
        if (!f) {
            std::cerr << "simulate: cannot open " << out_csv << "\n";
            return kExitConfig;
        }
        cqmimo::write_csv(f, run.results);
    }

    if (cqmimo::failed_fraction(run) > 0.10) {
        std::cerr << "simulate: numerical failure in more than 10% of cells\n";
        return kExitNumerical;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multi-user MIMO precoding and power allocation with few-bit DACs"};
    app.require_subcommand(1);

    std::uint64_t seed = 1;
    bool seed_given = false;
    unsigned threads = 2;
    std::string out;
    app.add_flag_callback("--version", [] { std::puts("cqmimo 0.1.0"); std::exit(0); });
    auto* seed_opt = app.add_option("--seed", seed, "Base RNG seed (overrides config)");
    app.add_option("--threads", threads, "Worker threads for Monte Carlo trials");
    app.add_option("--out", out, "Output CSV path (default: stdout)");

    auto* sim = app.add_subcommand("simulate", "Run a Monte Carlo scenario from a JSON config");
    std::string config_path, dump_dir, load_dir;
    sim->add_option("--config", config_path, "Scenario JSON document")->required();
    sim->add_option("--dump-channels", dump_dir, "Write per-trial channels to this directory");
    sim->add_option("--load-channels", load_dir, "Read per-trial channels from this directory");

    auto* dt = app.add_subcommand("delta-table", "Bussgang gain table per bit depth");
    std::string bits_text = "2..6";
    std::size_t dt_nb = 64, dt_nu = 16;
    dt->add_option("--bits", bits_text, "Bit depths, e.g. 2..6 or 2,4,6");
    dt->add_option("--nb", dt_nb, "Transmit antennas");
    dt->add_option("--nu", dt_nu, "Total receive antennas");

    auto* al = app.add_subcommand("alloc", "Distortion-aware power allocation for given gains");
    std::string phi2_text;
    unsigned al_bits = 0;
    double al_delta = 0.0, al_snr_db = 10.0, al_ptotal = 0.0;
    std::size_t al_nu = 0;
    bool printed_mu = false;
    al->add_option("--phi2", phi2_text, "Comma-separated squared singular values")->required();
    al->add_option("--bits", al_bits, "Quantizer bit depth (sets delta)");
    al->add_option("--delta", al_delta, "Bussgang gain directly (overrides --bits)");
    al->add_option("--snr-db", al_snr_db, "Operating SNR in dB")->required();
    al->add_option("--nu", al_nu, "Receive antenna count (default: stream count)");
    al->add_option("--p-total", al_ptotal, "Power budget (default: nu)");
    al->add_flag("--printed-mu", printed_mu,
                 "Use the mixed-coefficient water level for sensitivity checks");

    auto* co = app.add_subcommand("cost", "Analytical FLOP counts and converter power");
    std::size_t co_nb = 64, co_nu = 16, co_nj = 2;
    unsigned co_bits = 5;
    co->add_option("--nb", co_nb, "Transmit antennas");
    co->add_option("--nu", co_nu, "Total receive antennas");
    co->add_option("--nj", co_nj, "Antennas per user");
    co->add_option("--bits", co_bits, "Bit depth for the Bussgang setup cost");

    auto* vb = app.add_subcommand("verify-bussgang", "Monte Carlo check of the linearization");
    unsigned vb_bits = 5;
    std::size_t vb_nb = 64, vb_nu = 16, vb_samples = 100000;
    vb->add_option("--bits", vb_bits, "Quantizer bit depth");
    vb->add_option("--nb", vb_nb, "Transmit antennas");
    vb->add_option("--nu", vb_nu, "Symbol streams");
    vb->add_option("--samples", vb_samples, "Monte Carlo sample count");

    // Global flags (--seed/--threads/--out) are accepted after a subcommand
    // name as well.
    for (CLI::App* sub : {sim, dt, al, co, vb}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }
    seed_given = seed_opt->count() > 0;

    try {
        if (sim->parsed()) {
            return cmd_simulate(config_path, out,
                                seed_given ? std::optional<std::uint64_t>(seed) : std::nullopt,
                                threads, dump_dir, load_dir);
        }
        if (dt->parsed()) return cmd_delta_table(bits_text, dt_nb, dt_nu);
        if (al->parsed()) {
            return cmd_alloc(phi2_text, al_bits, al_delta, al_snr_db, al_nu, al_ptotal,
                             printed_mu);
        }
        if (co->parsed()) return cmd_cost(co_nb, co_nu, co_nj, co_bits, out);
        if (vb->parsed()) return cmd_verify_bussgang(vb_bits, vb_nb, vb_nu, vb_samples, seed);
    } catch (const cqmimo::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitOk;
}
