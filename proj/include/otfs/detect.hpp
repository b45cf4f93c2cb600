#pragma once

#include "otfs/channel.hpp"
#include "otfs/grid.hpp"
#include "otfs/linsys.hpp"
#include "otfs/types.hpp"

#include <optional>
#include <vector>

namespace otfs {

enum class Algorithm { mrc_dd, mrc_dt, gs_time, jacobi };
enum class Initializer { zero, tf_mmse };
enum class Decision { hard, linear };

// Elements of d_m (or R diagonals) below this skip their update for the
// iteration instead of being regularized; skips are flagged in the output.
inline constexpr double kDivisionGuard = 1e-12;

struct DetectorConfig {
    Algorithm algorithm = Algorithm::mrc_dt;
    int max_iterations = 15;
    double omega = 1.0;            // SOR relaxation; 1.0 is plain GS
    Initializer initializer = Initializer::zero;
    Decision decision = Decision::hard;
    double tolerance = 0.0;        // relative residual exit, 0 disables
    double noise_variance = 0.0;   // sigma_w^2 for the tf_mmse initializer
    bool stop_on_residual_increase = true;  // Algorithm 2's exit rule
    bool record_state_history = false;      // keep per-iteration x~ states

    void validate() const;
};

// Multiply counts. Per-iteration numbers follow the paper's accounting:
// each Hadamard product or division is N multiplies per row and tap, each
// length-N transform is N log2 N. core stays constant across iterations.
struct OpCounts {
    long long core_per_iteration = 0;
    long long transform_per_iteration = 0;
    long long init = 0;

    long long total_per_iteration() const { return core_per_iteration + transform_per_iteration; }
};

struct DetectorOutput {
    CMat x_hat;                           // M x N hard symbols (guard rows zero)
    CMat soft;                            // M' x N pre-slicing estimates c_m
    int iterations_used = 0;
    std::vector<double> residual_history; // initial residual + one per iteration
    OpCounts ops;
    long long guard_skips = 0;            // elements skipped by the division guard
    CMat rnpi_dt;                         // final delay-time residual (M x N)
    std::vector<CMat> state_history;      // per-iteration x~ (when recorded)
};

// Single-tap time-frequency MMSE initial estimate. Uses the ideal-pulse
// channel response H_tf(p,n) = sqrt(M) * sum_{l in L} F_M(p,l) nu_t(l,l)(n),
// equalizes per bin and maps back to the delay-time grid; guard rows are
// zeroed. Returns the M x N delay-time estimate.
CMat tf_mmse_init(const CVec& r, const DopplerSpreadSet& spread, double noise_variance);

// Algorithm 1: MRC with decision feedback in the delay-Doppler domain,
// operating on the dense circulant blocks K_{m,l}. Readable reference; per
// iteration it agrees with detect_mrc_dt to rounding.
DetectorOutput detect_mrc_dd(const CMat& Y, const DopplerSpreadSet& spread,
                             const DetectorConfig& cfg, const QamConstellation& c,
                             const std::optional<CMat>& initial_state_dt = std::nullopt);

// Algorithm 2: reduced-complexity MRC in the delay-time domain with
// in-place RNPI updates; the fast path. Yt is the M x N delay-time grid.
DetectorOutput detect_mrc_dt(const CMat& Yt, const DopplerSpreadSet& spread,
                             const DetectorConfig& cfg, const QamConstellation& c,
                             const std::optional<CMat>& initial_state_dt = std::nullopt);

// Algorithm 3: the same iteration as N parallel Gauss-Seidel (SOR) solves
// of the per-block normal equations; only the M' data rows of each block
// are swept (guard rows are known zeros). No per-iteration slicing.
DetectorOutput detect_gs_time(const CVec& r, const IterationMatrices& iter,
                              const DetectorConfig& cfg, const QamConstellation& c,
                              const std::optional<CMat>& initial_state_dt = std::nullopt);

// Parallel-update (Jacobi) counterpart of detect_gs_time; converges only
// when the channel happens to allow it.
DetectorOutput detect_jacobi(const CVec& r, const IterationMatrices& iter,
                             const DetectorConfig& cfg, const QamConstellation& c,
                             const std::optional<CMat>& initial_state_dt = std::nullopt);

// Closed-form per-iteration multiply counts for Algorithm 2; the core term
// N M' (2L+1) must match the instrumented counter exactly.
struct OpPrediction {
    long long core = 0;        // N M' (2L + 1)
    long long transforms = 0;  // 2 N M' log2 N in hard-decision mode
    long long total = 0;
};
OpPrediction count_ops(const DetectorConfig& cfg, const FrameDims& dims, int num_taps);

}  // namespace otfs
