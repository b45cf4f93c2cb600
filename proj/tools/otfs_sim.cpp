// Command line front end: Monte-Carlo BER/FER sweeps, the cross-domain
// equivalence and spectral-radius audits, operation-count reports and
// channel generation. All runs are reproducible from (config, seed).

#include "otfs/harness.hpp"
#include "otfs/ofdm.hpp"
#include "otfs/transforms.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>

using namespace otfs;

namespace {

void apply_overrides(SweepConfig& cfg, const std::optional<std::uint64_t>& seed,
                     const std::optional<long>& frames) {
    if (seed) cfg.seed = *seed;
    if (frames) cfg.min_frames = *frames;
}

int cmd_sweep(const std::string& config_path, const std::optional<std::uint64_t>& seed,
              const std::optional<long>& frames, const std::string& out_path) {
    SweepConfig cfg = load_config(config_path);
    apply_overrides(cfg, seed, frames);
    const SweepResult result = run_sweep(cfg);

    if (result.equivalence) {
        const auto& eq = *result.equivalence;
        std::cout << "equivalence-audit: channels=" << eq.channels << " iterations=" << eq.iterations
                  << " max_deviation=" << eq.max_deviation << "\n";
    }
    if (result.radius) {
        const auto& ra = *result.radius;
        std::cout << "radius-audit: channels=" << ra.channels << " max_gs=" << ra.max_gs_radius
                  << " max_jacobi=" << ra.max_jacobi_radius
                  << " jacobi_unstable_seen=" << (ra.jacobi_unstable_seen ? "yes" : "no") << "\n";
        for (std::size_t w = 0; w < ra.omegas.size(); ++w)
            std::cout << "  omega=" << ra.omegas[w] << " max_rho=" << ra.max_radius_per_omega[w]
                      << "\n";
    }
    for (const auto& pt : result.points)
        std::cout << "snr=" << pt.snr_db << " dB omega=" << pt.omega << " frames=" << pt.frames
                  << " ber=" << pt.ber << " fer=" << pt.fer << " mean_iters=" << pt.mean_iterations
                  << "\n";

    if (!out_path.empty()) {
        write_csv(result, out_path);
        std::cout << "wrote " << out_path << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ZP-OTFS iterative MRC rake link simulator"};
    app.require_subcommand(1);

    std::string config_path, out_path;
    std::optional<std::uint64_t> seed;
    std::optional<long> frames;

    auto add_common = [&](CLI::App* sub, bool need_config) {
        auto* opt = sub->add_option("--config", config_path, "JSON sweep config");
        if (need_config) opt->required();
        sub->add_option("--seed", seed, "master seed override");
        sub->add_option("--out", out_path, "output CSV path");
        sub->add_option("--frames", frames, "frame-budget override per SNR point");
    };

    auto* sweep = app.add_subcommand("sweep", "run a Monte-Carlo BER/FER sweep");
    add_common(sweep, true);

    // Audit subcommands accept either a config or direct dimension flags.
    int N = 8, M = 16, l_max = 3, channels = 20, iterations = 15;
    double delta_f = 15e3, max_doppler = 0.0;
    std::vector<double> omegas;

    auto* eq = app.add_subcommand("audit-equivalence",
                                  "cross-detector state equivalence on random channels");
    add_common(eq, false);
    eq->add_option("--N", N);
    eq->add_option("--M", M);
    eq->add_option("--l-max", l_max);
    eq->add_option("--channels", channels);
    eq->add_option("--iterations", iterations);

    auto* ra = app.add_subcommand("audit-radius", "spectral radii of the iteration matrices");
    add_common(ra, false);
    ra->add_option("--N", N);
    ra->add_option("--M", M);
    ra->add_option("--l-max", l_max);
    ra->add_option("--channels", channels);
    ra->add_option("--omega", omegas, "relaxation parameters to audit");
    ra->add_option("--max-doppler", max_doppler, "EVA draw Doppler spread in Hz");

    auto* ops = app.add_subcommand("count-ops", "closed-form multiply counts per iteration");
    ops->add_option("--N", N);
    ops->add_option("--M", M);
    ops->add_option("--l-max", l_max);
    int num_taps = 3;
    ops->add_option("--taps", num_taps, "number of channel delay taps L");
    bool linear = false;
    ops->add_flag("--linear", linear, "no per-iteration slicing transforms");

    auto* gen = app.add_subcommand("gen-channel", "draw an EVA-scaled PathSet and save it as JSON");
    add_common(gen, false);
    gen->add_option("--N", N);
    gen->add_option("--M", M);
    gen->add_option("--l-max", l_max);
    gen->add_option("--delta-f", delta_f, "subcarrier spacing in Hz");
    gen->add_option("--max-doppler", max_doppler, "maximum Doppler shift in Hz");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sweep->parsed()) return cmd_sweep(config_path, seed, frames, out_path);

        if (eq->parsed()) {
            SweepConfig cfg;
            if (!config_path.empty()) cfg = load_config(config_path);
            else {
                cfg.dims = FrameDims{M, N, l_max, delta_f};
                cfg.audit_channels = channels;
                cfg.audit_iterations = iterations;
            }
            cfg.mode = SweepMode::equivalence_audit;
            apply_overrides(cfg, seed, std::nullopt);
            const auto rep = run_equivalence_audit(cfg.dims, cfg.audit_channels,
                                                   cfg.audit_iterations, cfg.seed);
            std::cout << "equivalence-audit: channels=" << rep.channels
                      << " iterations=" << rep.iterations << " max_deviation=" << rep.max_deviation
                      << "\n";
            return rep.max_deviation < 1e-8 ? 0 : 2;
        }

        if (ra->parsed()) {
            SweepConfig cfg;
            if (!config_path.empty()) cfg = load_config(config_path);
            else {
                cfg.dims = FrameDims{M, N, l_max, delta_f};
                cfg.audit_channels = channels;
            }
            if (!omegas.empty()) cfg.omegas = omegas;
            else if (config_path.empty()) cfg.omegas = {1.0, 1.25, 1.5, 1.9};
            apply_overrides(cfg, seed, std::nullopt);
            const auto rep = run_radius_audit(cfg.dims, cfg.audit_channels, cfg.omegas, cfg.seed,
                                              max_doppler);
            std::cout << "radius-audit: channels=" << rep.channels << " max_gs=" << rep.max_gs_radius
                      << " max_jacobi=" << rep.max_jacobi_radius
                      << " jacobi_unstable_seen=" << (rep.jacobi_unstable_seen ? "yes" : "no")
                      << " omega1_vs_gs=" << rep.max_omega1_vs_gs << "\n";
            bool all_lt_1 = true;
            for (std::size_t w = 0; w < rep.omegas.size(); ++w) {
                std::cout << "  omega=" << rep.omegas[w] << " max_rho=" << rep.max_radius_per_omega[w]
                          << "\n";
                all_lt_1 = all_lt_1 && rep.max_radius_per_omega[w] < 1.0;
            }
            return all_lt_1 ? 0 : 2;
        }

        if (ops->parsed()) {
            FrameDims dims{M, N, l_max, delta_f};
            DetectorConfig dcfg;
            dcfg.decision = linear ? Decision::linear : Decision::hard;
            const OpPrediction p = count_ops(dcfg, dims, num_taps);
            std::cout << "core=" << p.core << " transforms=" << p.transforms << " total=" << p.total
                      << "\n";
            return 0;
        }

        if (gen->parsed()) {
            FrameDims dims{M, N, l_max, delta_f};
            const PathSet ps = eva_paths(dims, max_doppler, seed.value_or(1));
            const std::string path = out_path.empty() ? "channel.json" : out_path;
            save_path_set(ps, path);
            std::cout << "wrote " << path << " (" << ps.paths.size() << " paths)\n";
            return 0;
        }
    } catch (const std::exception& e) {
        nlohmann::json err{{"error", e.what()}};
        std::cerr << err.dump() << "\n";
        return 1;
    }
    return 0;
}
