#include <doctest.h>

#include <cmath>
#include <sstream>

#include "cqmimo/harness.hpp"
#include "cqmimo/rng.hpp"

using namespace cqmimo;

namespace {

ScenarioConfig tiny_config() {
    ScenarioConfig cfg;
    cfg.scenario_id = "tiny";
    cfg.nb = 8;
    cfg.users = 2;
    cfg.antennas_per_user = 2;
    cfg.snr_db = {0.0, 10.0};
    cfg.bits = {3, 0};
    cfg.precoders = {PrecoderKind::bd, PrecoderKind::zf};
    cfg.power_alloc = PowerAllocKind::equal;
    cfg.trials = 8;
    cfg.seed = 5;
    return cfg;
}

std::string csv_of(const ScenarioRun& run) {
    std::ostringstream os;
    write_csv(os, run.results);
    return os.str();
}

}  // namespace

TEST_CASE("scenario output is deterministic across runs and thread counts") {
    const ScenarioConfig cfg = tiny_config();
    const std::string a = csv_of(run_scenario(cfg, 1));
    const std::string b = csv_of(run_scenario(cfg, 1));
    const std::string c = csv_of(run_scenario(cfg, 2));
    const std::string d = csv_of(run_scenario(cfg, 7));
    CHECK(a == b);
    CHECK(a == c);
    CHECK(a == d);
}

TEST_CASE("single-trial single-point run is reproducible bitwise") {
    ScenarioConfig cfg = tiny_config();
    cfg.trials = 1;
    cfg.snr_db = {5.0};
    cfg.bits = {4};
    cfg.precoders = {PrecoderKind::bd};
    CHECK(csv_of(run_scenario(cfg, 1)) == csv_of(run_scenario(cfg, 3)));
}

TEST_CASE("csv schema is stable") {
    ScenarioConfig cfg = tiny_config();
    cfg.trials = 2;
    const std::string csv = csv_of(run_scenario(cfg, 1));
    CHECK(csv.rfind("scenario_id,snr_db,precoder,bits,power_alloc,trials,mean_rate_bpcu,"
                    "stderr_bpcu,failed_cells\n",
                    0) == 0);
    CHECK(csv.find("tiny,0,BD,3,EQUAL,2,") != std::string::npos);
    CHECK(csv.find(",FR,") != std::string::npos);
    // header + 2 precoders x 2 bits x 2 snrs
    std::size_t lines = 0;
    for (char ch : csv) lines += ch == '\n' ? 1 : 0;
    CHECK(lines == 9);
}

TEST_CASE("no failed cells on a healthy configuration") {
    ScenarioConfig cfg = tiny_config();
    cfg.power_alloc = PowerAllocKind::maas;
    cfg.precoders = {PrecoderKind::bd, PrecoderKind::rbd};
    const ScenarioRun run = run_scenario(cfg, 2);
    for (const RateResult& r : run.results) CHECK(r.failed_cells == 0);
    CHECK(failed_fraction(run) == 0.0);
}

TEST_CASE("standard error shrinks like one over root trials") {
    ScenarioConfig cfg = tiny_config();
    cfg.precoders = {PrecoderKind::zf};
    cfg.bits = {3};
    cfg.snr_db = {5.0};
    cfg.trials = 100;
    const double se100 = run_scenario(cfg, 2).results[0].stderr_rate;
    cfg.trials = 400;
    const double se400 = run_scenario(cfg, 2).results[0].stderr_rate;
    CHECK(se100 / se400 > 1.5);
    CHECK(se100 / se400 < 2.7);
}

TEST_CASE("imperfect channel knowledge degrades the measured rates") {
    ScenarioConfig cfg = tiny_config();
    cfg.nb = 32;
    cfg.users = 4;
    cfg.snr_db = {10.0};
    cfg.bits = {0};
    cfg.precoders = {PrecoderKind::bd};
    cfg.trials = 20;
    const double perfect = run_scenario(cfg, 2).results[0].mean_rate;
    cfg.csi = CsiModel{cx(0.72, 0.0), 0.16};
    const double corrupted = run_scenario(cfg, 2).results[0].mean_rate;
    CHECK(corrupted < perfect);
}

TEST_CASE("fixed channels replay the drawn ones exactly") {
    ScenarioConfig cfg = tiny_config();
    std::vector<ComplexMatrix> drawn;
    const ScenarioRun first = run_scenario(cfg, 1, nullptr, &drawn);
    REQUIRE(drawn.size() == cfg.trials);
    const ScenarioRun replay = run_scenario(cfg, 2, &drawn, nullptr);
    CHECK(csv_of(first) == csv_of(replay));
}

TEST_CASE("power loading changes only the loaded curves") {
    ScenarioConfig cfg = tiny_config();
    cfg.snr_db = {0.0};
    cfg.bits = {0};
    cfg.precoders = {PrecoderKind::bd, PrecoderKind::zf};
    cfg.trials = 12;

    cfg.power_alloc = PowerAllocKind::equal;
    const ScenarioRun eq = run_scenario(cfg, 1);
    cfg.power_alloc = PowerAllocKind::wf;
    const ScenarioRun wf = run_scenario(cfg, 1);

    // BD gains from waterfilling at 0 dB; ZF has no loading diagonal and is
    // untouched by the power_alloc setting.
    CHECK(wf.results[0].mean_rate >= eq.results[0].mean_rate);
    CHECK(wf.results[1].mean_rate == doctest::Approx(eq.results[1].mean_rate).epsilon(1e-12));
}

TEST_CASE("maas at 12 bits collapses onto waterfilling") {
    ScenarioConfig cfg = tiny_config();
    cfg.nb = 32;
    cfg.users = 4;
    cfg.snr_db = {-5.0, 5.0};
    cfg.bits = {12};
    cfg.precoders = {PrecoderKind::bd};
    cfg.trials = 10;

    cfg.power_alloc = PowerAllocKind::maas;
    const ScenarioRun ma = run_scenario(cfg, 1);
    cfg.power_alloc = PowerAllocKind::wf;
    const ScenarioRun wf = run_scenario(cfg, 1);
    for (std::size_t i = 0; i < ma.results.size(); ++i) {
        CHECK(std::abs(ma.results[i].mean_rate - wf.results[i].mean_rate) <=
              0.01 * wf.results[i].mean_rate);
    }
}

TEST_CASE("unbuildable cells are marked failed instead of aborting the sweep") {
    ScenarioConfig cfg = tiny_config();
    cfg.precoders = {PrecoderKind::zf};
    cfg.bits = {3};
    cfg.snr_db = {0.0};
    cfg.trials = 4;
    // An all-zero channel defeats the zero-forcing inverse on every trial.
    const std::vector<ComplexMatrix> dead(cfg.trials, ComplexMatrix(4, 8));
    const ScenarioRun run = run_scenario(cfg, 1, &dead, nullptr);
    CHECK(run.results[0].failed_cells == cfg.trials);
    CHECK(std::isnan(run.results[0].mean_rate));
    CHECK(failed_fraction(run) == 1.0);
}

TEST_CASE("config validation") {
    ScenarioConfig cfg = tiny_config();
    cfg.nb = 2;
    CHECK_THROWS_AS(run_scenario(cfg, 1), ConfigError);
    cfg = tiny_config();
    cfg.trials = 0;
    CHECK_THROWS_AS(run_scenario(cfg, 1), ConfigError);
    cfg = tiny_config();
    cfg.bits = {1};
    CHECK_THROWS_AS(run_scenario(cfg, 1), ConfigError);
    cfg = tiny_config();
    cfg.snr_db.clear();
    CHECK_THROWS_AS(run_scenario(cfg, 1), ConfigError);
}

TEST_CASE("json config parsing") {
    const std::string doc = R"({
        "scenario_id": "demo",
        "nb": 64, "users": 8, "antennas_per_user": 2,
        "snr_db": [-10, 0, 10],
        "bits": [5, "FR"],
        "precoders": ["BD", "ZF"],
        "power_alloc": "MAAS",
        "trials": 50,
        "channels_per_trial": 1,
        "seed": 9,
        "csi": {"r": [0.65, 0.1], "sigma_e2": 0.16}
    })";
    const ScenarioConfig cfg = parse_config_json(doc);
    CHECK(cfg.scenario_id == "demo");
    CHECK(cfg.nb == 64);
    CHECK(cfg.nu() == 16);
    CHECK(cfg.bits == std::vector<unsigned>{5, 0});
    CHECK(cfg.precoders.size() == 2);
    CHECK(cfg.power_alloc == PowerAllocKind::maas);
    CHECK(cfg.seed == 9);
    REQUIRE(cfg.csi.has_value());
    CHECK(cfg.csi->r == cx(0.65, 0.1));
    CHECK(cfg.csi->sigma_e2 == doctest::Approx(0.16));

    CHECK_THROWS_AS(parse_config_json("not json"), ConfigError);
    CHECK_THROWS_AS(parse_config_json(R"({"nb": 4})"), ConfigError);
    CHECK_THROWS_AS(parse_config_json(R"({
        "nb": 8, "users": 2, "antennas_per_user": 2,
        "snr_db": [0], "bits": ["XX"], "precoders": ["BD"]
    })"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config_json(R"({
        "nb": 8, "users": 2, "antennas_per_user": 2,
        "snr_db": [0], "bits": [3], "precoders": ["QR"]
    })"),
                    ConfigError);
}

TEST_CASE("curve extraction and ordering comparison") {
    ScenarioConfig cfg = tiny_config();
    cfg.snr_db = {0.0, 10.0};
    cfg.bits = {0};
    cfg.precoders = {PrecoderKind::bd, PrecoderKind::zf};
    cfg.trials = 40;
    const ScenarioRun run = run_scenario(cfg, 2);

    const LabeledCurve bd =
        curve_from_samples("BD-FR", run.samples, PrecoderKind::bd, 0, PowerAllocKind::equal);
    const LabeledCurve zf =
        curve_from_samples("ZF-FR", run.samples, PrecoderKind::zf, 0, PowerAllocKind::equal);
    CHECK(bd.snr_db == std::vector<double>{0.0, 10.0});

    const HierarchyReport rep = compare_hierarchy({bd, zf}, {"BD-FR", "ZF-FR"});
    CHECK(rep.entries.size() == 2);
    for (const HierarchyEntry& e : rep.entries) {
        CHECK(e.mean_diff > 0.0);
        CHECK(e.p_value < 0.05);
        CHECK(e.holds);
    }
    CHECK(rep.all_hold);

    SUBCASE("identical curves tie with p = 0.5") {
        LabeledCurve copy = bd;
        copy.label = "BD-COPY";
        const HierarchyReport tie = compare_hierarchy({bd, copy}, {"BD-FR", "BD-COPY"});
        for (const HierarchyEntry& e : tie.entries) {
            CHECK(e.mean_diff == 0.0);
            CHECK(e.p_value == doctest::Approx(0.5));
            CHECK(!e.holds);
        }
    }

    SUBCASE("missing labels are reported") {
        CHECK_THROWS_AS(compare_hierarchy({bd, zf}, {"BD-FR", "nope"}), MissingCurve);
        CHECK_THROWS_AS(curve_from_samples("x", run.samples, PrecoderKind::rbd, 0,
                                           PowerAllocKind::equal),
                        MissingCurve);
    }
}

TEST_CASE("horizontal gap on synthetically shifted curves") {
    // worse(snr) = better(snr - 2 dB) exactly, on a 1 dB grid.
    LabeledCurve better, worse;
    better.label = "a";
    worse.label = "b";
    for (int i = 0; i <= 20; ++i) {
        const double snr = static_cast<double>(i);
        better.snr_db.push_back(snr);
        worse.snr_db.push_back(snr);
        better.per_trial.push_back({std::log2(1.0 + std::pow(10.0, snr / 10.0))});
        worse.per_trial.push_back({std::log2(1.0 + std::pow(10.0, (snr - 2.0) / 10.0))});
    }
    const double gap = horizontal_gap_db(better, worse);
    CHECK(gap == doctest::Approx(2.0).epsilon(0.02));
}
