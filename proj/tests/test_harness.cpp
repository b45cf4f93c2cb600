#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "otfs/harness.hpp"
#include "otfs/turbo.hpp"
#include "otfs/rng.hpp"

#include <cmath>
#include <cstdio>

using namespace otfs;

TEST_CASE("config parsing accepts the documented keys and rejects the rest") {
    const std::string good = R"({
        "N": 8, "M": 16, "l_max": 3, "delta_f_hz": 15000.0,
        "channel": "eva", "max_doppler_hz": 1200.0,
        "qam_order": 16, "algorithm": "mrc_dt",
        "omega": [1.0, 1.25], "initializer": "tf_mmse", "decision": "hard",
        "max_iterations": 20, "tolerance": 0.0,
        "snr_db": [10, 12.5, "inf"],
        "min_frames": 50, "max_frame_errors": 10,
        "mode": "uncoded-ber", "seed": 99
    })";
    const SweepConfig cfg = parse_config(good);
    CHECK(cfg.dims.N == 8);
    CHECK(cfg.dims.M == 16);
    CHECK(cfg.qam_order == 16);
    CHECK(cfg.omegas.size() == 2);
    CHECK(cfg.snr_db.size() == 3);
    CHECK(std::isinf(cfg.snr_db[2]));
    CHECK(cfg.seed == 99);

    CHECK_THROWS_WITH_AS(parse_config(R"({"N": 8, "M": 16, "l_max": 3, "typo_key": 1})"),
                         doctest::Contains("typo_key"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config(R"({"algorithm": "bogus"})"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config(R"({"mode": "bogus"})"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config(R"({"N": 8, "M": 16, "l_max": 3, "omega": [2.5]})"),
                    std::invalid_argument);
    CHECK_THROWS_AS(load_config("no_such_config.json"), std::runtime_error);
}

TEST_CASE("wilson interval basics") {
    double lo = -1, hi = -1;
    wilson_interval(0, 0, lo, hi);
    CHECK(lo == 0.0);
    CHECK(hi == 1.0);
    wilson_interval(0, 100, lo, hi);
    CHECK(lo == 0.0);
    CHECK(hi > 0.0);
    CHECK(hi < 0.05);
    wilson_interval(100, 100, lo, hi);
    CHECK(hi == 1.0);
    CHECK(lo > 0.95);
    wilson_interval(50, 100, lo, hi);
    CHECK(lo < 0.5);
    CHECK(hi > 0.5);
    CHECK(hi - lo < 0.2);
}

TEST_CASE("empty sweep emits a header-only CSV") {
    SweepResult result;
    const std::string csv = emit_plot_data(result);
    CHECK(csv == "snr_db,ber,fer,ber_ci_lo,ber_ci_hi,mean_iters,ops_per_frame,omega\n");
    CHECK(parse_plot_data(csv).empty());
}

TEST_CASE("CSV round trip preserves the numeric fields") {
    SweepConfig cfg;
    cfg.dims = FrameDims{16, 8, 3, 15e3};
    cfg.qam_order = 4;
    cfg.snr_db = {8.0, 11.0, 14.0};
    cfg.min_frames = 6;
    cfg.max_iterations = 10;
    cfg.seed = 5;
    const SweepResult result = run_sweep(cfg);
    REQUIRE(result.points.size() == 3);
    // Monotone SNR column in emission order.
    CHECK(result.points[0].snr_db < result.points[1].snr_db);
    CHECK(result.points[1].snr_db < result.points[2].snr_db);

    const auto parsed = parse_plot_data(emit_plot_data(result));
    REQUIRE(parsed.size() == result.points.size());
    for (std::size_t i = 0; i < parsed.size(); ++i) {
        CHECK(parsed[i].snr_db == result.points[i].snr_db);
        CHECK(parsed[i].ber == doctest::Approx(result.points[i].ber).epsilon(1e-10));
        CHECK(parsed[i].fer == doctest::Approx(result.points[i].fer).epsilon(1e-10));
        CHECK(parsed[i].ber_ci_lo == doctest::Approx(result.points[i].ber_ci_lo).epsilon(1e-10));
        CHECK(parsed[i].ber_ci_hi == doctest::Approx(result.points[i].ber_ci_hi).epsilon(1e-10));
        CHECK(parsed[i].omega == result.points[i].omega);
    }
}

TEST_CASE("identical config and seed give byte-identical CSV") {
    SweepConfig cfg;
    cfg.dims = FrameDims{16, 8, 3, 15e3};
    cfg.snr_db = {9.0, 13.0};
    cfg.min_frames = 5;
    cfg.max_iterations = 8;
    cfg.seed = 12345;
    const std::string a = emit_plot_data(run_sweep(cfg));
    const std::string b = emit_plot_data(run_sweep(cfg));
    CHECK(a == b);
    CHECK(a.size() > 60);

    cfg.seed = 54321;
    const std::string c = emit_plot_data(run_sweep(cfg));
    CHECK(a != c);
}

TEST_CASE("infinite SNR yields zero errors for every detector") {
    for (Algorithm alg : {Algorithm::mrc_dt, Algorithm::mrc_dd}) {
        SweepConfig cfg;
        cfg.dims = FrameDims{16, 8, 3, 15e3};
        cfg.algorithm = alg;
        cfg.snr_db = {std::numeric_limits<double>::infinity()};
        cfg.min_frames = 4;
        cfg.max_iterations = 50;
        cfg.seed = 777;
        const SweepResult result = run_sweep(cfg);
        REQUIRE(result.points.size() == 1);
        CHECK(result.points[0].ber == 0.0);
        CHECK(result.points[0].fer == 0.0);
    }
}

TEST_CASE("sweep with an explicit PathSet file uses that channel") {
    const FrameDims dims{16, 8, 3, 15e3};
    const PathSet ps = random_channel(dims, 3, 1.0, 31);
    const std::string file = "harness_channel_test.json";
    save_path_set(ps, file);

    SweepConfig cfg;
    cfg.dims = dims;
    cfg.channel = file;
    cfg.snr_db = {std::numeric_limits<double>::infinity()};
    cfg.min_frames = 2;
    cfg.max_iterations = 50;
    const SweepResult result = run_sweep(cfg);
    CHECK(result.points[0].ber == 0.0);
    std::remove(file.c_str());

    // Mismatched dims in the file are rejected.
    SweepConfig bad = cfg;
    bad.dims = FrameDims{32, 8, 3, 15e3};
    save_path_set(ps, file);
    CHECK_THROWS_AS(run_sweep(bad), std::invalid_argument);
    std::remove(file.c_str());
}

TEST_CASE("audit modes populate their reports through run_sweep") {
    SweepConfig cfg;
    cfg.dims = FrameDims{12, 4, 3, 15e3};
    cfg.mode = SweepMode::equivalence_audit;
    cfg.audit_channels = 3;
    cfg.audit_iterations = 6;
    const SweepResult eq = run_sweep(cfg);
    REQUIRE(eq.equivalence.has_value());
    CHECK(eq.equivalence->max_deviation < 1e-8);
    CHECK(eq.points.empty());

    cfg.mode = SweepMode::radius_audit;
    cfg.omegas = {1.0, 1.5};
    cfg.audit_channels = 3;
    const SweepResult ra = run_sweep(cfg);
    REQUIRE(ra.radius.has_value());
    CHECK(ra.radius->max_radius_per_omega.size() == 2);
    for (double rho : ra.radius->max_radius_per_omega) CHECK(rho < 1.0);
    CHECK(ra.radius->max_omega1_vs_gs < 1e-12);
}

TEST_CASE("turbo sweep loads its code from an alist file when configured") {
    const std::string file = "harness_code_test.alist";
    LdpcCode::make_default(512).to_alist(file);

    SweepConfig cfg;
    cfg.dims = FrameDims{64, 16, 7, 15e3};
    cfg.mode = SweepMode::turbo_fer;
    cfg.ldpc_alist = file;
    cfg.snr_db = {std::numeric_limits<double>::infinity()};
    cfg.min_frames = 2;
    cfg.max_iterations = 4;
    cfg.initializer = Initializer::tf_mmse;
    const auto res = run_sweep(cfg);
    CHECK(res.points[0].fer == 0.0);
    std::remove(file.c_str());

    cfg.ldpc_alist = "missing_code.alist";
    CHECK_THROWS_AS(run_sweep(cfg), std::runtime_error);
}

TEST_CASE("BER is statistically non-increasing in SNR") {
    SweepConfig cfg;
    cfg.dims = FrameDims{16, 8, 3, 15e3};
    cfg.qam_order = 4;
    cfg.max_doppler_hz = 1200.0;
    cfg.snr_db = {6.0, 10.0, 14.0};
    cfg.min_frames = 1000;
    cfg.max_frame_errors = 1 << 30;
    cfg.max_iterations = 30;
    cfg.seed = 99;
    const auto res = run_sweep(cfg);
    REQUIRE(res.points.size() == 3);
    for (std::size_t i = 1; i < res.points.size(); ++i) {
        // Non-increasing up to confidence-interval overlap.
        CHECK(res.points[i].ber_ci_lo <= res.points[i - 1].ber_ci_hi);
        CHECK(res.points[i].ber < res.points[i - 1].ber);
    }
}

TEST_CASE("derived seeds are stable and sensitive to every tag") {
    CHECK(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
    CHECK(derive_seed(1, 2, 3) != derive_seed(1, 2, 4));
    CHECK(derive_seed(1, 2, 3) != derive_seed(1, 3, 3));
    CHECK(derive_seed(1, 2, 3) != derive_seed(2, 2, 3));
}

TEST_CASE("random_channel validates its arguments") {
    const FrameDims dims{16, 8, 3, 15e3};
    CHECK_THROWS_AS(random_channel(dims, 0, 1.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(random_channel(dims, 5, 1.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(random_channel(dims, 2, 4.0, 1), std::invalid_argument);
    const PathSet ps = random_channel(dims, 4, 1.0, 1);
    CHECK(ps.paths.size() == 4);
    CHECK(ps.total_power() == doctest::Approx(1.0).epsilon(1e-12));
}
