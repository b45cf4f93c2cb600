#pragma once

#include "otfs/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace otfs {

// One propagation path: complex gain, normalized delay shift and normalized
// Doppler shift (fractions of the grid resolutions T/M and delta_f/N).
struct Path {
    Complex gain;
    double delay = 0.0;    // ell_i, in delay-resolution units
    double doppler = 0.0;  // kappa_i, in Doppler-resolution units
};

struct PathSet {
    FrameDims dims;
    std::vector<Path> paths;

    double total_power() const;
    // Rescales the realized gains so sum |h_i|^2 == 1 exactly.
    void normalize_power();
    void validate() const;  // delays within [0, l_max], |kappa| < N/2
};

// EVA power-delay profile scaled onto the grid. Excess delay taps
// {0,1,2,3,4,5,8,13,19} are mapped as round(tap * l_max / 19) when
// l_max < 19 (taps that collide merge by power addition); the dB profile is
// [0,-1.5,-1.4,-3.6,-0.6,-9.1,-7.0,-12.0,-16.9]. One Doppler-shifted path
// per delay tap: gains are complex Gaussian per the profile and then
// normalized to exact unit power, Doppler is uniform on [0, max_doppler_hz).
PathSet eva_paths(const FrameDims& dims, double max_doppler_hz, std::uint64_t seed);

// The scaled-and-merged EVA profile itself: (tap, linear power) pairs,
// pre-normalization. Exposed so the delay scaling and power merging are
// independently checkable.
std::vector<std::pair<int, double>> eva_profile(int l_max);

// JSON persistence: {"paths":[{"re","im","delay","doppler"}],"M","N","l_max"}.
// The file does not carry delta_f, so the loader takes it explicitly.
void save_path_set(const PathSet& ps, const std::string& path);
PathSet load_path_set(const std::string& path, double delta_f_hz);
std::string path_set_to_json(const PathSet& ps);
PathSet path_set_from_json(const std::string& text, double delta_f_hz);

// Periodic sinc: zeta_N(x) = (1/sqrt(N)) sum_n exp(j 2 pi x n / N). Equals
// sqrt(N) at integer multiples of N and 0 at other integers.
Complex zeta_n(double x, int N);

// Sampled delay-time gain straight from the physical paths:
//   g_s(l, q) = sum_{kappa in K_l} nu_l(kappa) z^{kappa (q - l)},
// z = exp(j 2 pi / (M N)). Valid for any sample index q >= 0, which is what
// the OFDM baseline needs (its frames are longer than N*M).
Complex time_gain(const PathSet& ps, int l, Index q);

enum class DopplerMode { integer, fractional };

// The channel as the detectors consume it. For each delay tap l and each
// row m: the delay-time response nu_t(m,l) (length N, one gain per block)
// and the delay-Doppler spread vector nu_dd(m,l) (length N), related by
//   nu_dd = DFT(nu_t) / N  (unnormalized DFT scaled by 1/N),
// the convention under which circ[nu_dd] = F_N diag(nu_t) F_N^dag and the
// flat channel gives nu_dd = delta_0. mrc_gain holds d_m = sum_l |nu_t|^2
// for the data rows.
struct DopplerSpreadSet {
    FrameDims dims;
    std::vector<int> taps;        // sorted distinct delay taps (the set L)
    std::vector<CMat> nu_time;    // per tap: N x M, column m = nu_t(m, l)
    std::vector<CMat> nu_dd;      // per tap: N x M, column m = nu_dd(m, l)
    RMat mrc_gain;                // N x M', column m = d_m (real, >= 0)

    int tap_count() const { return static_cast<int>(taps.size()); }
};

// Discretize a physical path set. Delays must already be integers (the
// fractional-delay sinc kernel is unsupported); Doppler shifts may be
// fractional. In integer mode every kappa must be an integer and nu_dd is
// built sparsely from the closed form; in fractional mode nu_dd comes from
// the zeta_N closed form. nu_time is exact in both modes.
DopplerSpreadSet discretize(const PathSet& ps, DopplerMode mode);

// nu_t(m,l)(n) for q = m + n M; throws on out-of-range q or l not in L.
Complex delay_time_gain(const DopplerSpreadSet& spread, int l, Index q);

// 1/N-scaled DFT used between the two Doppler-spread representations (see
// DopplerSpreadSet). Exposed so tests can check Fourier consistency.
CVec doppler_profile_dft(const CVec& nu_time);

struct ChannelOutput {
    CVec r;
    double noise_variance = 0.0;  // sigma_w^2 = 10^(-snr_db/10)
};

// r(q) = sum_{l in L} nu_t(m,l)(n) s(q-l) + w(q), q = m + n M, with terms
// q - l < 0 dropped and circularly-symmetric AWGN of per-sample variance
// sigma_w^2. snr_db = +inf disables the noise.
ChannelOutput apply_channel(const CVec& s, const DopplerSpreadSet& spread, double snr_db,
                            std::uint64_t noise_seed);

// Same input-output relation evaluated directly from the paths, for signals
// of any length (OFDM frames). Identical to apply_channel on NM samples.
ChannelOutput apply_channel_paths(const CVec& s, const PathSet& ps, double snr_db,
                                  std::uint64_t noise_seed);

double snr_db_to_noise_variance(double snr_db);

}  // namespace otfs
