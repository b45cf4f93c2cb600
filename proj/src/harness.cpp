#include "otfs/harness.hpp"

#include "otfs/ofdm.hpp"
#include "otfs/rng.hpp"
#include "otfs/transforms.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace otfs {

namespace {

constexpr double kZ95 = 1.959963984540054;

std::string fmt_double(double v) {
    char buf[64];
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

Algorithm algorithm_from_name(const std::string& s) {
    if (s == "mrc_dd") return Algorithm::mrc_dd;
    if (s == "mrc_dt") return Algorithm::mrc_dt;
    if (s == "gs_time") return Algorithm::gs_time;
    if (s == "jacobi") return Algorithm::jacobi;
    throw std::invalid_argument("config: unknown algorithm '" + s + "'");
}

SweepMode mode_from_name(const std::string& s) {
    if (s == "uncoded-ber") return SweepMode::uncoded_ber;
    if (s == "turbo-fer") return SweepMode::turbo_fer;
    if (s == "ofdm-baseline") return SweepMode::ofdm_baseline;
    if (s == "equivalence-audit") return SweepMode::equivalence_audit;
    if (s == "radius-audit") return SweepMode::radius_audit;
    throw std::invalid_argument("config: unknown mode '" + s + "'");
}

double snr_entry(const nlohmann::json& j) {
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "inf" || s == "Infinity") return std::numeric_limits<double>::infinity();
        throw std::invalid_argument("config: bad snr_db entry '" + s + "'");
    }
    return j.get<double>();
}

}  // namespace

std::string sweep_mode_name(SweepMode mode) {
    switch (mode) {
        case SweepMode::uncoded_ber: return "uncoded-ber";
        case SweepMode::turbo_fer: return "turbo-fer";
        case SweepMode::ofdm_baseline: return "ofdm-baseline";
        case SweepMode::equivalence_audit: return "equivalence-audit";
        case SweepMode::radius_audit: return "radius-audit";
    }
    return "?";
}

std::string algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::mrc_dd: return "mrc_dd";
        case Algorithm::mrc_dt: return "mrc_dt";
        case Algorithm::gs_time: return "gs_time";
        case Algorithm::jacobi: return "jacobi";
    }
    return "?";
}

void SweepConfig::validate() const {
    dims.validate();
    if (qam_order != 4 && qam_order != 16 && qam_order != 64)
        throw std::invalid_argument("config: qam_order must be 4, 16 or 64");
    if (omegas.empty()) throw std::invalid_argument("config: omega list may not be empty");
    for (double w : omegas)
        if (!(w > 0.0 && w < 2.0)) throw std::invalid_argument("config: omega must lie in (0,2)");
    if (snr_db.empty()) throw std::invalid_argument("config: snr_db list may not be empty");
    if (max_iterations < 1) throw std::invalid_argument("config: max_iterations must be >= 1");
    if (min_frames < 1) throw std::invalid_argument("config: min_frames must be >= 1");
    if (max_frame_errors < 1) throw std::invalid_argument("config: max_frame_errors must be >= 1");
    if (ldpc_n < 8 || ldpc_n % 2) throw std::invalid_argument("config: ldpc_n must be even, >= 8");
    if (ldpc_iterations < 1) throw std::invalid_argument("config: ldpc_iterations must be >= 1");
    if (audit_channels < 1 || audit_iterations < 1)
        throw std::invalid_argument("config: audit sizes must be >= 1");
}

SweepConfig parse_config(const std::string& json_text) {
    const nlohmann::json j = nlohmann::json::parse(json_text);
    if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");

    SweepConfig cfg;
    for (const auto& [key, value] : j.items()) {
        if (key == "N") cfg.dims.N = value.get<int>();
        else if (key == "M") cfg.dims.M = value.get<int>();
        else if (key == "l_max") cfg.dims.l_max = value.get<int>();
        else if (key == "delta_f_hz") cfg.dims.delta_f_hz = value.get<double>();
        else if (key == "channel") cfg.channel = value.get<std::string>();
        else if (key == "max_doppler_hz") cfg.max_doppler_hz = value.get<double>();
        else if (key == "qam_order") cfg.qam_order = value.get<int>();
        else if (key == "algorithm") cfg.algorithm = algorithm_from_name(value.get<std::string>());
        else if (key == "omega") {
            cfg.omegas.clear();
            if (value.is_array())
                for (const auto& w : value) cfg.omegas.push_back(w.get<double>());
            else
                cfg.omegas.push_back(value.get<double>());
        } else if (key == "initializer") {
            const std::string s = value.get<std::string>();
            if (s == "zero") cfg.initializer = Initializer::zero;
            else if (s == "tf_mmse") cfg.initializer = Initializer::tf_mmse;
            else throw std::invalid_argument("config: unknown initializer '" + s + "'");
        } else if (key == "decision") {
            const std::string s = value.get<std::string>();
            if (s == "hard") cfg.decision = Decision::hard;
            else if (s == "linear") cfg.decision = Decision::linear;
            else throw std::invalid_argument("config: unknown decision '" + s + "'");
        } else if (key == "max_iterations") cfg.max_iterations = value.get<int>();
        else if (key == "tolerance") cfg.tolerance = value.get<double>();
        else if (key == "snr_db") {
            cfg.snr_db.clear();
            if (value.is_array())
                for (const auto& e : value) cfg.snr_db.push_back(snr_entry(e));
            else
                cfg.snr_db.push_back(snr_entry(value));
        } else if (key == "min_frames") cfg.min_frames = value.get<long>();
        else if (key == "max_frame_errors") cfg.max_frame_errors = value.get<long>();
        else if (key == "mode") cfg.mode = mode_from_name(value.get<std::string>());
        else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
        else if (key == "ldpc_alist") cfg.ldpc_alist = value.get<std::string>();
        else if (key == "ldpc_n") cfg.ldpc_n = value.get<int>();
        else if (key == "ldpc_iterations") cfg.ldpc_iterations = value.get<int>();
        else if (key == "audit_channels") cfg.audit_channels = value.get<int>();
        else if (key == "audit_iterations") cfg.audit_iterations = value.get<int>();
        else throw std::invalid_argument("config: unknown key '" + key + "'");
    }
    cfg.validate();
    return cfg;
}

SweepConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_config: cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_config(text);
}

void wilson_interval(long long k, long long n, double& lo, double& hi) {
    if (n <= 0) {
        lo = 0.0;
        hi = 1.0;
        return;
    }
    const double p = static_cast<double>(k) / static_cast<double>(n);
    const double z2 = kZ95 * kZ95;
    const double denom = 1.0 + z2 / static_cast<double>(n);
    const double center = (p + z2 / (2.0 * static_cast<double>(n))) / denom;
    const double half =
        kZ95 *
        std::sqrt(p * (1.0 - p) / static_cast<double>(n) + z2 / (4.0 * std::pow(static_cast<double>(n), 2))) /
        denom;
    lo = k == 0 ? 0.0 : std::max(0.0, center - half);
    hi = k == n ? 1.0 : std::min(1.0, center + half);
}

PathSet random_channel(const FrameDims& dims, int num_paths, double max_kappa,
                       std::uint64_t seed) {
    dims.validate();
    if (num_paths < 1 || num_paths > dims.l_max + 1)
        throw std::invalid_argument("random_channel: need 1 <= paths <= l_max + 1");
    if (max_kappa >= dims.N / 2.0)
        throw std::invalid_argument("random_channel: max_kappa must be < N/2");
    SplitMix64 rng(seed);
    std::vector<int> taps(static_cast<std::size_t>(dims.l_max) + 1);
    std::iota(taps.begin(), taps.end(), 0);
    for (std::size_t i = taps.size(); i > 1; --i)
        std::swap(taps[i - 1], taps[static_cast<std::size_t>(rng.below(i))]);
    taps.resize(static_cast<std::size_t>(num_paths));
    std::sort(taps.begin(), taps.end());

    PathSet ps;
    ps.dims = dims;
    for (int tap : taps) {
        Path p;
        p.gain = rng.cgaussian(1.0);
        p.delay = tap;
        p.doppler = max_kappa > 0.0 ? rng.uniform(-max_kappa, max_kappa) : 0.0;
        ps.paths.push_back(p);
    }
    ps.normalize_power();
    return ps;
}

namespace {

struct FrameStats {
    long long bit_errors = 0;
    long long bits = 0;
    bool frame_error = false;
    int iterations = 0;
    double ops = 0.0;
};

long long hamming(const BitVec& a, const BitVec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("hamming: length mismatch");
    long long d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
    return d;
}

DetectorOutput dispatch_detect(Algorithm alg, const CVec& r, const DopplerSpreadSet& spread,
                               const DetectorConfig& dcfg, const QamConstellation& qam) {
    const int M = spread.dims.M, N = spread.dims.N;
    switch (alg) {
        case Algorithm::mrc_dt:
            return detect_mrc_dt(time_to_dt(r, M, N), spread, dcfg, qam);
        case Algorithm::mrc_dd:
            return detect_mrc_dd(dt_to_dd(time_to_dt(r, M, N)), spread, dcfg, qam);
        case Algorithm::gs_time:
        case Algorithm::jacobi: {
            const DenseChannelMatrices mats = assemble(spread);
            const IterationMatrices iter = build_iteration_matrices(mats, r);
            std::optional<CMat> init;
            DetectorConfig cfg2 = dcfg;
            if (dcfg.initializer == Initializer::tf_mmse) {
                init = tf_mmse_init(r, spread, dcfg.noise_variance);
                cfg2.initializer = Initializer::zero;
            }
            return alg == Algorithm::gs_time ? detect_gs_time(r, iter, cfg2, qam, init)
                                             : detect_jacobi(r, iter, cfg2, qam, init);
        }
    }
    throw std::logic_error("dispatch_detect: unreachable");
}

class FrameRunner {
public:
    FrameRunner(const SweepConfig& cfg)
        : cfg_(cfg), qam_(QamConstellation::make(cfg.qam_order)) {
        if (cfg_.channel != "eva") {
            fixed_paths_ = load_path_set(cfg_.channel, cfg_.dims.delta_f_hz);
            if (fixed_paths_->dims.M != cfg_.dims.M || fixed_paths_->dims.N != cfg_.dims.N ||
                fixed_paths_->dims.l_max != cfg_.dims.l_max)
                throw std::invalid_argument("config: PathSet file dims disagree with the sweep dims");
        }
        if (cfg_.mode == SweepMode::turbo_fer)
            code_ = cfg_.ldpc_alist.empty() ? LdpcCode::make_default(cfg_.ldpc_n)
                                            : LdpcCode::from_alist(cfg_.ldpc_alist);
    }

    FrameStats run(double snr, double omega, std::uint64_t channel_seed, std::uint64_t bits_seed,
                   std::uint64_t noise_seed, std::uint64_t il_seed) const {
        const PathSet paths = fixed_paths_
                                  ? *fixed_paths_
                                  : eva_paths(cfg_.dims, cfg_.max_doppler_hz, channel_seed);
        switch (cfg_.mode) {
            case SweepMode::uncoded_ber: return run_uncoded(paths, snr, omega, bits_seed, noise_seed);
            case SweepMode::turbo_fer: return run_turbo(paths, snr, omega, bits_seed, noise_seed, il_seed);
            case SweepMode::ofdm_baseline: return run_ofdm(paths, snr, bits_seed, noise_seed);
            default:
                throw std::logic_error("FrameRunner: not a Monte-Carlo mode");
        }
    }

private:
    DetectorConfig detector_config(double omega, double noise_var) const {
        DetectorConfig d;
        d.algorithm = cfg_.algorithm;
        d.max_iterations = cfg_.max_iterations;
        d.omega = omega;
        d.initializer = cfg_.initializer;
        d.decision = cfg_.decision;
        d.tolerance = cfg_.tolerance;
        d.noise_variance = noise_var;
        return d;
    }

    FrameStats run_uncoded(const PathSet& paths, double snr, double omega,
                           std::uint64_t bits_seed, std::uint64_t noise_seed) const {
        const FrameDims& dims = cfg_.dims;
        const DopplerSpreadSet spread = discretize(paths, DopplerMode::fractional);
        const std::size_t nbits = static_cast<std::size_t>(dims.data_rows()) * dims.N *
                                  static_cast<std::size_t>(qam_.bits_per_symbol());
        const BitVec bits = random_bits(nbits, bits_seed);
        const OtfsFrame frame = map_bits(bits, qam_, dims);
        const CVec s = dt_to_time(dd_to_dt(frame.X));
        const ChannelOutput ch = apply_channel(s, spread, snr, noise_seed);

        const DetectorOutput out =
            dispatch_detect(cfg_.algorithm, ch.r, spread, detector_config(omega, ch.noise_variance), qam_);
        const BitVec rx = demap_frame(out.x_hat, qam_, dims);

        FrameStats st;
        st.bit_errors = hamming(bits, rx);
        st.bits = static_cast<long long>(nbits);
        st.frame_error = st.bit_errors > 0;
        st.iterations = out.iterations_used;
        st.ops = static_cast<double>(out.ops.total_per_iteration()) * out.iterations_used +
                 static_cast<double>(out.ops.init);
        return st;
    }

    FrameStats run_turbo(const PathSet& paths, double snr, double omega, std::uint64_t bits_seed,
                         std::uint64_t noise_seed, std::uint64_t il_seed) const {
        const FrameDims& dims = cfg_.dims;
        const DopplerSpreadSet spread = discretize(paths, DopplerMode::fractional);
        const CodedFrameSpec spec = coded_frame_spec(dims, qam_, code_);
        const BitVec info = random_bits(spec.info_bits, bits_seed);
        const TurboTx tx = turbo_tx(info, code_, qam_, dims, il_seed);
        const CVec s = dt_to_time(dd_to_dt(tx.frame.X));
        const ChannelOutput ch = apply_channel(s, spread, snr, noise_seed);

        const TurboResult res = turbo_detect(ch.r, spread, code_,
                                             detector_config(omega, ch.noise_variance), qam_,
                                             il_seed, cfg_.ldpc_iterations);
        FrameStats st;
        st.bit_errors = hamming(info, res.decoded_info);
        st.bits = static_cast<long long>(spec.info_bits);
        st.frame_error = !res.all_parity_ok || st.bit_errors > 0;
        st.iterations = res.turbo_iterations;
        st.ops = static_cast<double>(res.detector.ops.total_per_iteration()) * res.turbo_iterations;
        return st;
    }

    FrameStats run_ofdm(const PathSet& paths, double snr, std::uint64_t bits_seed,
                        std::uint64_t noise_seed) const {
        const FrameDims& dims = cfg_.dims;
        const std::size_t nbits = static_cast<std::size_t>(dims.N) * dims.M *
                                  static_cast<std::size_t>(qam_.bits_per_symbol());
        const BitVec bits = random_bits(nbits, bits_seed);
        const CVec s = ofdm_tx(bits, qam_, dims);
        const ChannelOutput ch = apply_channel_paths(s, paths, snr, noise_seed);
        const CMat H = ofdm_freq_response(paths, dims);
        const BitVec rx = ofdm_rx_mmse(ch.r, H, ch.noise_variance, qam_);

        FrameStats st;
        st.bit_errors = hamming(bits, rx);
        st.bits = static_cast<long long>(nbits);
        st.frame_error = st.bit_errors > 0;
        st.iterations = 1;
        return st;
    }

    const SweepConfig& cfg_;
    QamConstellation qam_;
    std::optional<PathSet> fixed_paths_;
    LdpcCode code_;
};

}  // namespace

SweepResult run_sweep(const SweepConfig& cfg) {
    cfg.validate();
    SweepResult result;
    result.config = cfg;

    if (cfg.mode == SweepMode::equivalence_audit) {
        result.equivalence =
            run_equivalence_audit(cfg.dims, cfg.audit_channels, cfg.audit_iterations, cfg.seed);
        return result;
    }
    if (cfg.mode == SweepMode::radius_audit) {
        result.radius = run_radius_audit(cfg.dims, cfg.audit_channels, cfg.omegas, cfg.seed,
                                         cfg.max_doppler_hz);
        return result;
    }

    const FrameRunner runner(cfg);
    for (std::size_t w = 0; w < cfg.omegas.size(); ++w) {
        for (std::size_t si = 0; si < cfg.snr_db.size(); ++si) {
            SnrPoint pt;
            pt.snr_db = cfg.snr_db[si];
            pt.omega = cfg.omegas[w];
            double iter_sum = 0.0, ops_sum = 0.0;
            // Channel / payload / noise streams depend only on the SNR index
            // and frame index, so omega values see identical realizations
            // (paired comparisons).
            for (long f = 0; f < cfg.min_frames; ++f) {
                const std::uint64_t base = derive_seed(cfg.seed, si, static_cast<std::uint64_t>(f));
                const FrameStats st =
                    runner.run(pt.snr_db, pt.omega, derive_seed(base, 0), derive_seed(base, 1),
                               derive_seed(base, 2), derive_seed(base, 3));
                ++pt.frames;
                pt.bit_errors += st.bit_errors;
                pt.total_bits += st.bits;
                pt.frame_errors += st.frame_error ? 1 : 0;
                iter_sum += st.iterations;
                ops_sum += st.ops;
                pt.max_iterations_seen = std::max(pt.max_iterations_seen, static_cast<long>(st.iterations));
                if (pt.frame_errors >= cfg.max_frame_errors) break;
            }
            pt.ber = pt.total_bits ? static_cast<double>(pt.bit_errors) / static_cast<double>(pt.total_bits) : 0.0;
            pt.fer = pt.frames ? static_cast<double>(pt.frame_errors) / static_cast<double>(pt.frames) : 0.0;
            wilson_interval(pt.bit_errors, pt.total_bits, pt.ber_ci_lo, pt.ber_ci_hi);
            pt.mean_iterations = pt.frames ? iter_sum / static_cast<double>(pt.frames) : 0.0;
            pt.ops_per_frame = pt.frames ? ops_sum / static_cast<double>(pt.frames) : 0.0;
            result.points.push_back(pt);
        }
    }
    return result;
}

std::string emit_plot_data(const SweepResult& result) {
    std::string csv = "snr_db,ber,fer,ber_ci_lo,ber_ci_hi,mean_iters,ops_per_frame,omega\n";
    for (const auto& pt : result.points) {
        csv += fmt_double(pt.snr_db) + "," + fmt_double(pt.ber) + "," + fmt_double(pt.fer) + "," +
               fmt_double(pt.ber_ci_lo) + "," + fmt_double(pt.ber_ci_hi) + "," +
               fmt_double(pt.mean_iterations) + "," + fmt_double(pt.ops_per_frame) + "," +
               fmt_double(pt.omega) + "\n";
    }
    return csv;
}

void write_csv(const SweepResult& result, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_csv: cannot open " + path);
    out << emit_plot_data(result);
}

std::vector<SnrPoint> parse_plot_data(const std::string& csv_text) {
    std::istringstream in(csv_text);
    std::string line;
    if (!std::getline(in, line) || line.rfind("snr_db,", 0) != 0)
        throw std::runtime_error("parse_plot_data: missing header");
    std::vector<SnrPoint> pts;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        std::vector<double> vals;
        while (std::getline(row, cell, ','))
            vals.push_back(cell == "inf" ? std::numeric_limits<double>::infinity() : std::stod(cell));
        if (vals.size() != 8) throw std::runtime_error("parse_plot_data: bad row '" + line + "'");
        SnrPoint pt;
        pt.snr_db = vals[0];
        pt.ber = vals[1];
        pt.fer = vals[2];
        pt.ber_ci_lo = vals[3];
        pt.ber_ci_hi = vals[4];
        pt.mean_iterations = vals[5];
        pt.ops_per_frame = vals[6];
        pt.omega = vals[7];
        pts.push_back(pt);
    }
    return pts;
}

EquivalenceReport run_equivalence_audit(const FrameDims& dims, int channels, int iterations,
                                        std::uint64_t seed) {
    dims.validate();
    const QamConstellation qam = QamConstellation::make(4);
    EquivalenceReport rep;
    rep.channels = channels;
    rep.iterations = iterations;

    DetectorConfig dcfg;
    dcfg.decision = Decision::linear;
    dcfg.initializer = Initializer::zero;
    dcfg.max_iterations = iterations;
    dcfg.stop_on_residual_increase = false;
    dcfg.record_state_history = true;

    for (int ch = 0; ch < channels; ++ch) {
        const std::uint64_t ch_seed = derive_seed(seed, 11, static_cast<std::uint64_t>(ch));
        const int paths = 2 + ch % std::max(1, std::min(3, dims.l_max));
        const PathSet ps = random_channel(dims, paths, dims.N / 4.0, ch_seed);
        const DopplerSpreadSet spread = discretize(ps, DopplerMode::fractional);

        const BitVec bits = random_bits(static_cast<std::size_t>(dims.data_rows()) * dims.N * 2,
                                        derive_seed(ch_seed, 1));
        const CMat X = map_bits(bits, qam, dims).X;
        const CVec s = dt_to_time(dd_to_dt(X));
        const CVec r = apply_channel(s, spread, std::numeric_limits<double>::infinity(), 0).r;

        const CMat Yt = time_to_dt(r, dims.M, dims.N);
        const DetectorOutput o_dt = detect_mrc_dt(Yt, spread, dcfg, qam);
        const DetectorOutput o_dd = detect_mrc_dd(dt_to_dd(Yt), spread, dcfg, qam);
        const DenseChannelMatrices mats = assemble(spread);
        const IterationMatrices iter = build_iteration_matrices(mats, r);
        const DetectorOutput o_gs = detect_gs_time(r, iter, dcfg, qam);

        for (int it = 0; it < iterations; ++it) {
            const CMat& a = o_dt.state_history[static_cast<std::size_t>(it)];
            const CMat& b = o_dd.state_history[static_cast<std::size_t>(it)];
            const CMat& g = o_gs.state_history[static_cast<std::size_t>(it)];
            rep.max_deviation = std::max({rep.max_deviation, (a - b).cwiseAbs().maxCoeff(),
                                          (a - g).cwiseAbs().maxCoeff(),
                                          (b - g).cwiseAbs().maxCoeff()});
        }
    }
    return rep;
}

RadiusReport run_radius_audit(const FrameDims& dims, int channels,
                              const std::vector<double>& omegas, std::uint64_t seed,
                              double max_doppler_hz) {
    dims.validate();
    RadiusReport rep;
    rep.channels = channels;
    rep.omegas = omegas;
    rep.max_radius_per_omega.assign(omegas.size(), 0.0);

    const CVec r0 = CVec::Zero(dims.samples());
    for (int ch = 0; ch < channels; ++ch) {
        const std::uint64_t ch_seed = derive_seed(seed, 13, static_cast<std::uint64_t>(ch));
        // Alternate EVA-profile draws with heavier equal-power multipath;
        // the latter reliably produce Jacobi-divergent blocks.
        PathSet ps;
        if (ch % 2 == 0 && max_doppler_hz > 0.0) {
            ps = eva_paths(dims, max_doppler_hz, ch_seed);
        } else {
            const int paths = std::min(dims.l_max + 1, 3 + ch % 4);
            ps = random_channel(dims, paths, dims.N / 8.0, ch_seed);
        }
        const DopplerSpreadSet spread = discretize(ps, DopplerMode::fractional);
        const DenseChannelMatrices mats = assemble(spread);

        // Only nonsingular instances enter the lemma checks; the relevant
        // matrix is the reduced one over the data columns.
        bool singular = false;
        for (const auto& g : mats.G_blocks) {
            const Eigen::JacobiSVD<CMat> svd(g.leftCols(dims.data_rows()));
            const auto& sv = svd.singularValues();
            if (sv(0) <= 0.0 || sv(sv.size() - 1) < 1e-10 * sv(0)) {
                singular = true;
                break;
            }
        }
        if (singular) continue;

        const IterationMatrices iter = build_iteration_matrices(mats, r0);
        for (const auto& blk : iter.blocks) {
            rep.max_gs_radius = std::max(rep.max_gs_radius, spectral_radius(blk.t_gs));
            const double rj = spectral_radius(blk.t_jacobi);
            rep.max_jacobi_radius = std::max(rep.max_jacobi_radius, rj);
            if (rj >= 1.0) rep.jacobi_unstable_seen = true;
            for (std::size_t w = 0; w < omegas.size(); ++w) {
                const CMat T = sor_iteration_matrix(blk, omegas[w]);
                rep.max_radius_per_omega[w] =
                    std::max(rep.max_radius_per_omega[w], spectral_radius(T));
                if (omegas[w] == 1.0)
                    rep.max_omega1_vs_gs =
                        std::max(rep.max_omega1_vs_gs, (T - blk.t_gs).cwiseAbs().maxCoeff());
            }
        }
    }
    return rep;
}

}  // namespace otfs
