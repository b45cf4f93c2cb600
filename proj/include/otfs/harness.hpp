#pragma once

#include "otfs/detect.hpp"
#include "otfs/turbo.hpp"
#include "otfs/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace otfs {

enum class SweepMode { uncoded_ber, turbo_fer, ofdm_baseline, equivalence_audit, radius_audit };

// Monte-Carlo sweep description. Loaded from a flat JSON document; unknown
// keys are rejected with their path. Every run is reproducible from
// (config, seed): per-frame channel / payload / noise / interleaver streams
// are derived with derive_seed(master, point index, frame index, purpose).
struct SweepConfig {
    FrameDims dims{64, 16, 7, 15e3};
    std::string channel = "eva";    // "eva" or a PathSet JSON file path
    double max_doppler_hz = 1875.0; // kappa_max = 2 at the default dims
    int qam_order = 4;
    Algorithm algorithm = Algorithm::mrc_dt;
    std::vector<double> omegas{1.0};
    Initializer initializer = Initializer::tf_mmse;
    Decision decision = Decision::hard;
    int max_iterations = 15;
    double tolerance = 0.0;
    std::vector<double> snr_db{15.0};
    long min_frames = 200;          // frame budget per SNR point
    long max_frame_errors = 100;    // early stop once reached
    SweepMode mode = SweepMode::uncoded_ber;
    std::uint64_t seed = 1;
    std::string ldpc_alist;         // empty: built-in default code
    int ldpc_n = 512;
    int ldpc_iterations = 30;

    // Audit-mode knobs.
    int audit_channels = 20;
    int audit_iterations = 15;

    void validate() const;
};

SweepConfig parse_config(const std::string& json_text);
SweepConfig load_config(const std::string& path);

struct SnrPoint {
    double snr_db = 0.0;
    double omega = 1.0;
    long frames = 0;
    long long bit_errors = 0;
    long long total_bits = 0;
    long frame_errors = 0;
    double ber = 0.0, fer = 0.0;
    double ber_ci_lo = 0.0, ber_ci_hi = 0.0;
    double mean_iterations = 0.0;
    long max_iterations_seen = 0;
    double ops_per_frame = 0.0;
};

struct EquivalenceReport {
    int channels = 0;
    int iterations = 0;
    double max_deviation = 0.0;
};

struct RadiusReport {
    int channels = 0;
    std::vector<double> omegas;
    std::vector<double> max_radius_per_omega;  // over channels and blocks
    double max_gs_radius = 0.0;
    double max_jacobi_radius = 0.0;
    bool jacobi_unstable_seen = false;  // some block had rho(T_J) >= 1
    double max_omega1_vs_gs = 0.0;      // entrywise |T_{w=1} - T_GS|
};

struct SweepResult {
    SweepConfig config;
    std::vector<SnrPoint> points;
    // Populated by the audit modes; the point list stays empty there.
    std::optional<EquivalenceReport> equivalence;
    std::optional<RadiusReport> radius;
};

SweepResult run_sweep(const SweepConfig& cfg);

// CSV with the stable column set
//   snr_db,ber,fer,ber_ci_lo,ber_ci_hi,mean_iters,ops_per_frame,omega
// one row per (SNR, omega) point; header only when there are no points.
std::string emit_plot_data(const SweepResult& result);
void write_csv(const SweepResult& result, const std::string& path);
std::vector<SnrPoint> parse_plot_data(const std::string& csv_text);

// Wilson 95% score interval for k successes in n trials.
void wilson_interval(long long k, long long n, double& lo, double& hi);

// Cross-detector equivalence audit: random channels, linear mode, a fixed
// iteration count, max elementwise deviation between the mrc_dd / mrc_dt /
// gs_time per-iteration states.
EquivalenceReport run_equivalence_audit(const FrameDims& dims, int channels, int iterations,
                                        std::uint64_t seed);

// Spectral-radius audit over random channels: per-omega maxima of
// rho(T_omega) across all blocks, plus the Jacobi maxima (reported, never
// asserted) and the omega=1 identity deviation |T_1 - T_GS|.
RadiusReport run_radius_audit(const FrameDims& dims, int channels, const std::vector<double>& omegas,
                              std::uint64_t seed, double max_doppler_hz = 0.0);

// Seeded random channel used by audits and tests: paths on distinct delay
// taps with near-equal powers and uniform Doppler, normalized to unit power.
PathSet random_channel(const FrameDims& dims, int num_paths, double max_kappa, std::uint64_t seed);

std::string sweep_mode_name(SweepMode mode);
std::string algorithm_name(Algorithm a);

}  // namespace otfs
