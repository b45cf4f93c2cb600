#include "otfs/channel.hpp"

#include "otfs/rng.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>

namespace otfs {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kIntegerTol = 1e-9;

Complex cexp(double angle) { return {std::cos(angle), std::sin(angle)}; }

// z^e with z = exp(j 2 pi / (M N)).
Complex z_pow(double exponent, const FrameDims& dims) {
    return cexp(kTwoPi * exponent / static_cast<double>(dims.samples()));
}

bool near_integer(double v) { return std::abs(v - std::round(v)) < kIntegerTol; }

}  // namespace

double PathSet::total_power() const {
    double p = 0.0;
    for (const auto& path : paths) p += std::norm(path.gain);
    return p;
}

void PathSet::normalize_power() {
    const double p = total_power();
    if (p <= 0.0) throw std::invalid_argument("PathSet: cannot normalize zero-power channel");
    const double s = 1.0 / std::sqrt(p);
    for (auto& path : paths) path.gain *= s;
}

void PathSet::validate() const {
    dims.validate();
    if (paths.empty()) throw std::invalid_argument("PathSet: empty");
    for (const auto& path : paths) {
        if (path.delay < 0.0 || path.delay > dims.l_max)
            throw std::invalid_argument("PathSet: delay outside [0, l_max]");
        if (std::abs(path.doppler) >= dims.N / 2.0)
            throw std::invalid_argument("PathSet: |doppler| must be < N/2");
    }
}

std::vector<std::pair<int, double>> eva_profile(int l_max) {
    static const double kPowerDb[] = {0.0, -1.5, -1.4, -3.6, -0.6, -9.1, -7.0, -12.0, -16.9};
    static const int kTaps[] = {0, 1, 2, 3, 4, 5, 8, 13, 19};

    // Scale the excess-delay taps onto small grids; merged taps add power.
    std::map<int, double> tap_power;
    for (int i = 0; i < 9; ++i) {
        int tap = kTaps[i];
        if (l_max < 19)
            tap = static_cast<int>(std::lround(kTaps[i] * static_cast<double>(l_max) / 19.0));
        if (tap > l_max)
            throw std::invalid_argument("eva_profile: l_max too small for the scaled profile");
        tap_power[tap] += std::pow(10.0, kPowerDb[i] / 10.0);
    }
    return {tap_power.begin(), tap_power.end()};
}

PathSet eva_paths(const FrameDims& dims, double max_doppler_hz, std::uint64_t seed) {
    dims.validate();
    const auto tap_power = eva_profile(dims.l_max);

    const double max_kappa = max_doppler_hz * dims.N * dims.symbol_duration_s();
    if (max_kappa >= dims.N / 2.0)
        throw std::invalid_argument("eva_paths: max_doppler_hz exceeds the Doppler grid (|kappa| < N/2)");

    SplitMix64 rng(seed);
    PathSet ps;
    ps.dims = dims;
    for (const auto& [tap, power] : tap_power) {
        Path p;
        p.gain = rng.cgaussian(power);
        p.delay = tap;
        p.doppler = rng.uniform(0.0, max_kappa);
        ps.paths.push_back(p);
    }
    ps.normalize_power();
    return ps;
}

std::string path_set_to_json(const PathSet& ps) {
    nlohmann::json j;
    j["M"] = ps.dims.M;
    j["N"] = ps.dims.N;
    j["l_max"] = ps.dims.l_max;
    j["paths"] = nlohmann::json::array();
    for (const auto& p : ps.paths)
        j["paths"].push_back({{"re", p.gain.real()},
                              {"im", p.gain.imag()},
                              {"delay", p.delay},
                              {"doppler", p.doppler}});
    return j.dump(2);
}

PathSet path_set_from_json(const std::string& text, double delta_f_hz) {
    const auto j = nlohmann::json::parse(text);
    PathSet ps;
    ps.dims.M = j.at("M").get<int>();
    ps.dims.N = j.at("N").get<int>();
    ps.dims.l_max = j.at("l_max").get<int>();
    ps.dims.delta_f_hz = delta_f_hz;
    for (const auto& jp : j.at("paths"))
        ps.paths.push_back(Path{Complex(jp.at("re").get<double>(), jp.at("im").get<double>()),
                                jp.at("delay").get<double>(), jp.at("doppler").get<double>()});
    ps.validate();
    return ps;
}

void save_path_set(const PathSet& ps, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_path_set: cannot open " + path);
    out << path_set_to_json(ps) << "\n";
}

PathSet load_path_set(const std::string& path, double delta_f_hz) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_path_set: cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return path_set_from_json(text, delta_f_hz);
}

Complex zeta_n(double x, int N) {
    // (1/sqrt(N)) sum_{n<N} e^{j 2 pi x n / N}; closed form with the
    // removable singularity at x = 0 mod N handled explicitly (every term
    // is 1 there, so the value is exactly sqrt(N)).
    const double rN = static_cast<double>(N);
    if (near_integer(x / rN)) return {std::sqrt(rN), 0.0};
    const double num = std::sin(std::numbers::pi * x);
    const double den = std::sin(std::numbers::pi * x / rN);
    return (num / den / std::sqrt(rN)) * cexp(std::numbers::pi * x * (rN - 1.0) / rN);
}

Complex time_gain(const PathSet& ps, int l, Index q) {
    Complex g = 0.0;
    for (const auto& p : ps.paths) {
        if (static_cast<int>(std::lround(p.delay)) != l) continue;
        g += p.gain * z_pow(p.doppler * (static_cast<double>(q) - l), ps.dims);
    }
    return g;
}

DopplerSpreadSet discretize(const PathSet& ps, DopplerMode mode) {
    ps.validate();
    const FrameDims& dims = ps.dims;
    const int M = dims.M, N = dims.N;

    std::vector<int> taps;
    for (const auto& p : ps.paths) {
        if (!near_integer(p.delay))
            throw std::invalid_argument("discretize: fractional delays are unsupported");
        if (mode == DopplerMode::integer && !near_integer(p.doppler))
            throw std::invalid_argument("discretize: integer mode requires integer Doppler shifts");
        taps.push_back(static_cast<int>(std::lround(p.delay)));
    }
    std::sort(taps.begin(), taps.end());
    taps.erase(std::unique(taps.begin(), taps.end()), taps.end());

    DopplerSpreadSet spread;
    spread.dims = dims;
    spread.taps = taps;
    spread.nu_time.assign(taps.size(), CMat::Zero(N, M));
    spread.nu_dd.assign(taps.size(), CMat::Zero(N, M));

    for (std::size_t t = 0; t < taps.size(); ++t) {
        const int l = taps[t];
        for (const auto& p : ps.paths) {
            if (static_cast<int>(std::lround(p.delay)) != l) continue;
            for (int m = 0; m < M; ++m) {
                const Complex phase = p.gain * z_pow(p.doppler * (m - l), dims);
                // nu_t(m,l)(n) = sum_kappa nu_l(kappa) z^{kappa(m-l)} e^{j2pi kappa n/N}
                for (int n = 0; n < N; ++n)
                    spread.nu_time[t](n, m) += phase * cexp(kTwoPi * p.doppler * n / N);
                if (mode == DopplerMode::integer) {
                    const int k = ((static_cast<int>(std::lround(p.doppler)) % N) + N) % N;
                    spread.nu_dd[t](k, m) += phase;
                } else {
                    // nu_dd(m,l)(k) = (1/sqrt(N)) sum_kappa nu z^{kappa(m-l)} zeta_N(kappa-k)
                    for (int k = 0; k < N; ++k)
                        spread.nu_dd[t](k, m) +=
                            phase * zeta_n(p.doppler - k, N) / std::sqrt(static_cast<double>(N));
                }
            }
        }
    }

    const int Mp = dims.data_rows();
    spread.mrc_gain = RMat::Zero(N, Mp);
    for (int m = 0; m < Mp; ++m)
        for (std::size_t t = 0; t < taps.size(); ++t)
            spread.mrc_gain.col(m) += spread.nu_time[t].col(m + taps[t]).cwiseAbs2();
    return spread;
}

Complex delay_time_gain(const DopplerSpreadSet& spread, int l, Index q) {
    if (q < 0 || q >= spread.dims.samples())
        throw std::invalid_argument("delay_time_gain: sample index out of range");
    const auto it = std::find(spread.taps.begin(), spread.taps.end(), l);
    if (it == spread.taps.end())
        throw std::invalid_argument("delay_time_gain: delay tap not in L");
    const Index m = q % spread.dims.M;
    const Index n = q / spread.dims.M;
    return spread.nu_time[static_cast<std::size_t>(it - spread.taps.begin())](n, m);
}

CVec doppler_profile_dft(const CVec& nu_time) {
    const int N = static_cast<int>(nu_time.size());
    CVec out = CVec::Zero(N);
    for (int k = 0; k < N; ++k) {
        Complex acc = 0.0;
        for (int n = 0; n < N; ++n) acc += nu_time[n] * cexp(-kTwoPi * k * n / N);
        out[k] = acc / static_cast<double>(N);
    }
    return out;
}

double snr_db_to_noise_variance(double snr_db) {
    if (std::isinf(snr_db)) return 0.0;
    return std::pow(10.0, -snr_db / 10.0);
}

namespace {

void add_noise(CVec& r, double variance, std::uint64_t seed) {
    if (variance <= 0.0) return;
    SplitMix64 rng(seed);
    for (Index q = 0; q < r.size(); ++q) r[q] += rng.cgaussian(variance);
}

}  // namespace

ChannelOutput apply_channel(const CVec& s, const DopplerSpreadSet& spread, double snr_db,
                            std::uint64_t noise_seed) {
    if (s.size() != spread.dims.samples())
        throw std::invalid_argument("apply_channel: signal length must be N*M");
    const int M = spread.dims.M;
    ChannelOutput out;
    out.r = CVec::Zero(s.size());
    for (Index q = 0; q < s.size(); ++q) {
        const Index m = q % M, n = q / M;
        Complex acc = 0.0;
        for (std::size_t t = 0; t < spread.taps.size(); ++t) {
            const int l = spread.taps[t];
            if (q - l < 0) continue;
            acc += spread.nu_time[t](n, m) * s[q - l];
        }
        out.r[q] = acc;
    }
    out.noise_variance = snr_db_to_noise_variance(snr_db);
    add_noise(out.r, out.noise_variance, noise_seed);
    return out;
}

ChannelOutput apply_channel_paths(const CVec& s, const PathSet& ps, double snr_db,
                                  std::uint64_t noise_seed) {
    std::vector<int> taps;
    for (const auto& p : ps.paths) {
        if (!near_integer(p.delay))
            throw std::invalid_argument("apply_channel_paths: fractional delays are unsupported");
        taps.push_back(static_cast<int>(std::lround(p.delay)));
    }
    std::sort(taps.begin(), taps.end());
    taps.erase(std::unique(taps.begin(), taps.end()), taps.end());

    ChannelOutput out;
    out.r = CVec::Zero(s.size());
    for (Index q = 0; q < s.size(); ++q) {
        Complex acc = 0.0;
        for (int l : taps) {
            if (q - l < 0) continue;
            acc += time_gain(ps, l, q) * s[q - l];
        }
        out.r[q] = acc;
    }
    out.noise_variance = snr_db_to_noise_variance(snr_db);
    add_noise(out.r, out.noise_variance, noise_seed);
    return out;
}

}  // namespace otfs
