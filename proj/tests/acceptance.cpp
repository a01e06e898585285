// Acceptance suite: one pass/fail line per criterion, with the measured
// values behind each verdict. Returns the number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <string>
#include <vector>

#include "cqmimo/channel.hpp"
#include "cqmimo/costmodel.hpp"
#include "cqmimo/harness.hpp"
#include "cqmimo/linalg.hpp"
#include "cqmimo/poweralloc.hpp"
#include "cqmimo/precoder.hpp"
#include "cqmimo/quantizer.hpp"
#include "cqmimo/rates.hpp"
#include "cqmimo/rng.hpp"

using namespace cqmimo;

namespace {

constexpr double kDeltaTable[] = {0.9387, 0.9811, 0.9942, 0.9983, 0.9995};
constexpr std::uint64_t kSeed = 20260808;

struct Outcome {
    bool pass = true;
    std::string detail;
};

double now_seconds() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

std::string fmt(const char* format, ...) {
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof(buf), format, args);
    va_end(args);
    return buf;
}

// ---------- criterion 1: published gain and validity-threshold table ----------

Outcome criterion1() {
    Outcome out;
    double max_delta_err = 0.0;
    for (unsigned b = 2; b <= 6; ++b) {
        const QuantizerSpec q = build_quantizer(b, 64, 16.0);
        max_delta_err = std::max(max_delta_err, std::abs(q.delta - kDeltaTable[b - 2]));
    }
    // SNR thresholds from the published gains; the 6-bit pair follows the
    // defining formula (the printed source transposes two digits in one cell
    // and truncates the other, breaking the fixed 3.0103 dB column gap).
    const double want16[] = {1.2915, 6.3075, 11.4092, 16.7301, 22.0423};
    const double want32[] = {4.3018, 9.3178, 14.4195, 19.7404, 25.0526};
    double max_cell_err = 0.0;
    for (int i = 0; i < 5; ++i) {
        max_cell_err = std::max(
            max_cell_err, std::abs(epsilon_report(16, 1.0, kDeltaTable[i]).snr_max_db - want16[i]));
        max_cell_err = std::max(
            max_cell_err, std::abs(epsilon_report(32, 1.0, kDeltaTable[i]).snr_max_db - want32[i]));
    }
    out.pass = max_delta_err <= 1e-3 && max_cell_err <= 5e-5;
    out.detail = fmt("max |delta - table| = %.2e (tol 1e-3), max |snr_max - table| = %.2e dB "
                     "(tol 5e-5, 6-bit cells per the defining formula)",
                     max_delta_err, max_cell_err);
    return out;
}

// ---------- criterion 2: interference nulling over 200 channels ----------

Outcome criterion2() {
    Outcome out;
    double worst = 0.0;
    for (int t = 0; t < 200; ++t) {
        const auto ch = generate_iid(64, std::vector<std::size_t>(8, 2), kSeed + 100 + t);
        const Precoder bd = build_bd(ch, 16.0);
        for (std::size_t j = 1; j <= 8; ++j) {
            const ComplexMatrix hbar = exclude_user(ch, j);
            worst = std::max(worst, frobenius_norm(hbar * bd.per_user[j - 1].pc) /
                                        frobenius_norm(hbar));
        }
    }
    out.pass = worst <= 1e-10;
    out.detail = fmt("max leakage ||Hbar_j Pc_j|| / ||Hbar_j|| = %.2e over 200 channels "
                     "(tol 1e-10)",
                     worst);
    return out;
}

// ---------- criterion 3: full-resolution limit of the allocator ----------

Outcome criterion3() {
    Outcome out;
    Rng rng(kSeed + 3);
    double worst = 0.0;
    int with_rejections = 0;
    for (int t = 0; t < 100; ++t) {
        AllocationProblem p;
        const std::size_t n = 4 + static_cast<std::size_t>(rng.next_u64() % 13);
        p.phi2.resize(n);
        for (double& v : p.phi2) v = std::exp(1.5 * rng.normal());
        p.nu = n;
        p.snr = std::pow(10.0, (-10.0 + 25.0 * rng.uniform()) / 10.0);
        p.delta = 0.999999;
        p.p_total = static_cast<double>(n);

        const Allocation m = maas(p);
        const Allocation w = waterfill(p);
        if (w.active < n) ++with_rejections;
        for (std::size_t i = 0; i < n; ++i) {
            worst = std::max(worst, std::abs(m.omega[i] - w.omega[i]) / p.p_total);
        }
    }
    out.pass = worst <= 1e-4;
    out.detail = fmt("max per-stream |maas - waterfill| / p_total = %.2e over 100 problems, "
                     "%d with stream rejections (tol 1e-4)",
                     worst, with_rejections);
    return out;
}

// ---------- criterion 4: closeness to the simplex optimum ----------

Outcome criterion4() {
    Outcome out;
    Rng rng(kSeed + 4);
    const double delta = build_quantizer(4, 64, 4.0).delta;
    const double snr_max_db = epsilon_report(4, 1.0, delta).snr_max_db;
    double worst_gap = 0.0;
    for (int t = 0; t < 50; ++t) {
        AllocationProblem p;
        p.phi2.resize(4);
        for (double& v : p.phi2) v = std::exp(0.8 * rng.normal());
        p.nu = 4;
        p.snr = std::pow(10.0, (-5.0 + (snr_max_db - 1.0 + 5.0) * rng.uniform()) / 10.0);
        p.delta = delta;
        p.p_total = 4.0;

        Allocation a = maas(p);
        const double ours = allocation_objective(p, a.omega);

        double best = ours;
        std::vector<double> w(4);
        for (int s = 0; s < 100000; ++s) {
            double sum = 0.0;
            for (double& v : w) {
                v = -std::log(rng.uniform_pos());
                sum += v;
            }
            for (double& v : w) v *= p.p_total / sum;
            best = std::max(best, allocation_objective(p, w));
        }
        worst_gap = std::max(worst_gap, (best - ours) / std::abs(best));
    }
    out.pass = worst_gap <= 0.01;
    out.detail = fmt("worst objective shortfall vs 1e5-point simplex search = %.3f%% over 50 "
                     "4-stream problems (tol 1%%)",
                     100.0 * worst_gap);
    return out;
}

// ---------- criterion 5: truncated-series accuracy inside the region ----------

Outcome criterion5() {
    Outcome out;
    bool ok = true;
    std::string parts;
    for (unsigned b : {3u, 4u, 5u}) {
        const QuantizerSpec q = build_quantizer(b, 64, 16.0);
        const double snr_db = epsilon_report(16, 1.0, q.delta).snr_max_db - 3.0;
        const double snr = std::pow(10.0, snr_db / 10.0);
        std::vector<double> errs;
        for (int t = 0; t < 100; ++t) {
            const auto ch = generate_iid(64, std::vector<std::size_t>(8, 2), kSeed + 500 + t);
            const Precoder bd = build_bd(ch, 16.0);
            const RateInputs in{ch.h, bd.p_matrix, q.delta, snr, 16};
            const double exact = exact_cqa_rate(in);
            errs.push_back(std::abs(approx_cqa_rate(in) - exact) / exact);
        }
        std::sort(errs.begin(), errs.end());
        const double median = 0.5 * (errs[49] + errs[50]);
        ok = ok && median <= 0.05;
        parts += fmt("b=%u: median %.2f%%  ", b, 100.0 * median);
    }
    out.pass = ok;
    out.detail = parts + "(tol 5% at snr_max - 3 dB, 100 channels each)";
    return out;
}

// ---------- criteria 6 and 7 share the same Monte Carlo runs ----------

struct HierarchyData {
    std::vector<LabeledCurve> curves;
    std::vector<double> grid;
};

HierarchyData run_hierarchy_scenarios() {
    HierarchyData data;
    ScenarioConfig base;
    base.scenario_id = "hierarchy";
    base.nb = 64;
    base.users = 8;
    base.antennas_per_user = 2;
    for (double s = -10.0; s <= 15.01; s += 2.5) base.snr_db.push_back(s);
    base.trials = 100;
    base.seed = kSeed;
    data.grid = base.snr_db;

    ScenarioConfig eq = base;
    eq.bits = {5, 0};
    eq.precoders = {PrecoderKind::bd, PrecoderKind::zf};
    eq.power_alloc = PowerAllocKind::equal;
    const ScenarioRun r_eq = run_scenario(eq, 2);

    ScenarioConfig wf = base;
    wf.bits = {0};
    wf.precoders = {PrecoderKind::bd};
    wf.power_alloc = PowerAllocKind::wf;
    const ScenarioRun r_wf = run_scenario(wf, 2);

    ScenarioConfig ma = base;
    ma.bits = {5};
    ma.precoders = {PrecoderKind::bd};
    ma.power_alloc = PowerAllocKind::maas;
    const ScenarioRun r_ma = run_scenario(ma, 2);

    data.curves.push_back(curve_from_samples("BD-FR-WF", r_wf.samples, PrecoderKind::bd, 0,
                                             PowerAllocKind::wf));
    data.curves.push_back(curve_from_samples("CQA-BD-MAAS-5b", r_ma.samples, PrecoderKind::bd, 5,
                                             PowerAllocKind::maas));
    data.curves.push_back(curve_from_samples("BD-FR", r_eq.samples, PrecoderKind::bd, 0,
                                             PowerAllocKind::equal));
    data.curves.push_back(curve_from_samples("ZF-FR", r_eq.samples, PrecoderKind::zf, 0,
                                             PowerAllocKind::equal));
    data.curves.push_back(curve_from_samples("CQA-BD-5b", r_eq.samples, PrecoderKind::bd, 5,
                                             PowerAllocKind::equal));
    data.curves.push_back(curve_from_samples("Bussgang-ZF-5b", r_eq.samples, PrecoderKind::zf, 5,
                                             PowerAllocKind::equal));
    return data;
}

double curve_mean(const LabeledCurve& c, std::size_t si) {
    double sum = 0.0;
    std::size_t n = 0;
    for (double v : c.per_trial[si]) {
        if (std::isfinite(v)) {
            sum += v;
            ++n;
        }
    }
    return n > 0 ? sum / static_cast<double>(n) : 0.0;
}

void print_curve_table(const HierarchyData& data) {
    std::printf("    %8s", "snr_db");
    for (const LabeledCurve& c : data.curves) std::printf(" %15s", c.label.c_str());
    std::printf("\n");
    for (std::size_t si = 0; si < data.grid.size(); ++si) {
        std::printf("    %8.1f", data.grid[si]);
        for (const LabeledCurve& c : data.curves) std::printf(" %15.3f", curve_mean(c, si));
        std::printf("\n");
    }
}

Outcome criterion6(const HierarchyData& data) {
    Outcome out;
    const std::vector<std::string> order = {"BD-FR-WF", "CQA-BD-MAAS-5b", "BD-FR",
                                            "ZF-FR",    "CQA-BD-5b",      "Bussgang-ZF-5b"};
    const HierarchyReport rep = compare_hierarchy(data.curves, order, 0.05);

    std::size_t violations = 0;
    for (const HierarchyEntry& e : rep.entries) {
        if (!e.holds) {
            ++violations;
            std::printf("    ordering violated: %s >= %s at %.1f dB (mean diff %+.4f, p=%.3g)\n",
                        e.upper.c_str(), e.lower.c_str(), e.snr_db, e.mean_diff, e.p_value);
        }
    }

    const double gap = horizontal_gap_db(*std::find_if(data.curves.begin(), data.curves.end(),
                                                       [](const LabeledCurve& c) {
                                                           return c.label == "CQA-BD-5b";
                                                       }),
                                         *std::find_if(data.curves.begin(), data.curves.end(),
                                                       [](const LabeledCurve& c) {
                                                           return c.label == "Bussgang-ZF-5b";
                                                       }));

    out.pass = rep.all_hold && gap >= 2.0;
    out.detail = fmt("%zu/%zu ordered pairs hold at p<0.05; CQA-BD over Bussgang-ZF horizontal "
                     "gap %.2f dB (need >= 2)",
                     rep.entries.size() - violations, rep.entries.size(), gap);
    return out;
}

Outcome criterion7(const HierarchyData& data) {
    Outcome out;
    const LabeledCurve* maas_curve = nullptr;
    const LabeledCurve* equal_curve = nullptr;
    for (const LabeledCurve& c : data.curves) {
        if (c.label == "CQA-BD-MAAS-5b") maas_curve = &c;
        if (c.label == "CQA-BD-5b") equal_curve = &c;
    }
    const double snr_max_db = epsilon_report(16, 1.0, build_quantizer(5, 64, 16.0).delta).snr_max_db;

    bool dominates = true;
    double best_gain = -1.0;
    double best_snr = 0.0;
    std::string viols;
    for (std::size_t si = 0; si < data.grid.size(); ++si) {
        if (data.grid[si] > snr_max_db) continue;
        const double m = curve_mean(*maas_curve, si);
        const double e = curve_mean(*equal_curve, si);
        if (m <= e) {
            dominates = false;
            viols += fmt(" %.1fdB(%+.4f)", data.grid[si], m - e);
        }
        const double gain = (m - e) / e;
        if (gain > best_gain) {
            best_gain = gain;
            best_snr = data.grid[si];
        }
    }

    out.pass = dominates;
    out.detail = fmt("MAAS vs equal power at 5 bits: peak gain %.2f%% at %.1f dB "
                     "(15%% target%s)%s%s",
                     100.0 * best_gain, best_snr,
                     best_gain >= 0.15 ? ", met" : ", not met: reporting achieved maximum",
                     dominates ? "; dominates at every grid point <= snr_max"
                               : "; dominated at:",
                     viols.c_str());
    return out;
}

// ---------- criterion 8: robustness of the regularized variant ----------

Outcome criterion8() {
    Outcome out;
    ScenarioConfig cfg;
    cfg.scenario_id = "robustness";
    cfg.nb = 64;
    cfg.users = 8;
    cfg.antennas_per_user = 2;
    for (double s = -10.0; s <= 15.01; s += 2.5) cfg.snr_db.push_back(s);
    cfg.bits = {2, 3};
    cfg.precoders = {PrecoderKind::bd, PrecoderKind::rbd};
    cfg.power_alloc = PowerAllocKind::equal;
    cfg.trials = 100;
    cfg.seed = kSeed + 8;
    cfg.csi = CsiModel{cx(0.91, 0.0), 0.16};
    const ScenarioRun run = run_scenario(cfg, 2);

    bool dominates = true;
    double peak = -1.0;
    double peak_snr = 0.0;
    unsigned peak_bits = 0;
    std::string viols;
    for (unsigned b : {2u, 3u}) {
        const LabeledCurve bd = curve_from_samples("BD", run.samples, PrecoderKind::bd, b,
                                                   PowerAllocKind::equal);
        const LabeledCurve rbd = curve_from_samples("RBD", run.samples, PrecoderKind::rbd, b,
                                                    PowerAllocKind::equal);
        for (std::size_t si = 0; si < cfg.snr_db.size(); ++si) {
            const double mb = curve_mean(bd, si);
            const double mr = curve_mean(rbd, si);
            if (mr < mb) {
                dominates = false;
                viols += fmt(" b=%u@%.1fdB(%+.4f)", b, cfg.snr_db[si], mr - mb);
            }
            const double adv = (mr - mb) / mb;
            if (adv > peak) {
                peak = adv;
                peak_snr = cfg.snr_db[si];
                peak_bits = b;
            }
        }
    }
    out.pass = dominates && peak >= 0.20;
    out.detail = fmt("CQA-RBD vs CQA-BD under |r|=0.91, sigma_e2=0.16: peak advantage %.1f%% "
                     "(b=%u, %.1f dB; need >= 20%%)%s%s",
                     100.0 * peak, peak_bits, peak_snr,
                     dominates ? ", RBD >= BD everywhere" : ", violations:", viols.c_str());
    return out;
}

// ---------- criterion 9: linearization verified empirically ----------

Outcome criterion9() {
    Outcome out;
    const std::size_t nb = 64, nu = 16;
    const double p_total = 16.0;
    const QuantizerSpec q = build_quantizer(5, nb, p_total);

    Rng rng(kSeed + 9);
    ComplexMatrix p(nb, nu);
    for (auto& v : p.data()) v = rng.complex_normal();
    p = (std::sqrt(p_total) / frobenius_norm(p)) * p;

    const BussgangStats st = verify_bussgang(q, p, 100000, kSeed + 19);
    const double cross_rel = st.cross_corr_norm / (q.delta * frobenius_norm(p));
    out.pass = cross_rel <= 0.02 && st.rff_error <= 0.10;
    out.detail = fmt("cross-correlation %.3f%% of ||delta P|| (tol 2%%), distortion covariance "
                     "error %.3f%% (tol 10%%) at 1e5 samples",
                     100.0 * cross_rel, 100.0 * st.rff_error);
    return out;
}

// ---------- criterion 10: analytical cost anchors ----------

Outcome criterion10() {
    Outcome out;
    const bool anchors = dac_power_mw(5) == 85.0 && adc_power_mw(4) == 140.0;
    const double saving = 1.0 - dac_power_mw(6) / dac_power_mw(12);
    const bool spot = precoder_flops(CostKind::zf, 64, 32, 2) == 647168.0 &&
                      precoder_flops(CostKind::bd, 64, 16, 2) == 854016.0;
    out.pass = anchors && saving >= 0.984 && spot;
    out.detail = fmt("DAC(5)=%.1f mW, ADC(4)=%.1f mW, 12->6 bit saving %.2f%%, "
                     "ZF(64,32)=%.0f, BD(64,16,2)=%.0f FLOPs",
                     dac_power_mw(5), adc_power_mw(4), 100.0 * saving,
                     precoder_flops(CostKind::zf, 64, 32, 2),
                     precoder_flops(CostKind::bd, 64, 16, 2));
    return out;
}

}  // namespace

int main() {
    struct Row {
        int id;
        std::string name;
        Outcome outcome;
        double seconds;
    };
    std::vector<Row> rows;

    auto run = [&](int id, const std::string& name, auto&& fn) {
        const double t0 = now_seconds();
        Outcome o = fn();
        rows.push_back({id, name, std::move(o), now_seconds() - t0});
    };

    run(1, "gain and validity-threshold table", criterion1);
    run(2, "interference nulling", criterion2);
    run(3, "allocator full-resolution limit", criterion3);
    run(4, "allocator near-optimality", criterion4);
    run(5, "truncated-rate accuracy", criterion5);

    const double t_h0 = now_seconds();
    const HierarchyData hier = run_hierarchy_scenarios();
    std::printf("  hierarchy scenario (Nb=64, Nu=8x2, b=5, 100 trials) took %.1f s\n",
                now_seconds() - t_h0);
    print_curve_table(hier);

    run(6, "curve-family ordering", [&] { return criterion6(hier); });
    run(7, "power-allocation gain", [&] { return criterion7(hier); });
    run(8, "imperfect-CSI robustness", criterion8);
    run(9, "linearization verification", criterion9);
    run(10, "cost-model anchors", criterion10);

    std::printf("\n");
    int failures = 0;
    for (const Row& r : rows) {
        failures += r.outcome.pass ? 0 : 1;
        std::printf("[%s] criterion %2d (%s): %s  [%.1f s]\n",
                    r.outcome.pass ? "PASS" : "FAIL", r.id, r.name.c_str(),
                    r.outcome.detail.c_str(), r.seconds);
    }
    std::printf("\n%d/%zu criteria passed\n", static_cast<int>(rows.size()) - failures,
                rows.size());
    return failures;
}
