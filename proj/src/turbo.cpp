#include "otfs/turbo.hpp"

#include "otfs/rng.hpp"
#include "otfs/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <set>

namespace otfs {

namespace {

constexpr double kLlrClip = 25.0;

// Dense GF(2) rows as 64-bit words.
struct BitRow {
    std::vector<std::uint64_t> w;

    explicit BitRow(int nbits) : w((static_cast<std::size_t>(nbits) + 63) / 64, 0) {}
    void set(int j) { w[static_cast<std::size_t>(j) / 64] |= 1ULL << (j % 64); }
    bool get(int j) const { return (w[static_cast<std::size_t>(j) / 64] >> (j % 64)) & 1; }
    void operator^=(const BitRow& o) {
        for (std::size_t i = 0; i < w.size(); ++i) w[i] ^= o.w[i];
    }
};

}  // namespace

bool LdpcCode::parity_ok(const BitVec& codeword) const {
    if (codeword.size() != static_cast<std::size_t>(n))
        throw std::invalid_argument("LdpcCode::parity_ok: wrong codeword length");
    for (const auto& vars : check_vars) {
        int acc = 0;
        for (int v : vars) acc ^= codeword[static_cast<std::size_t>(v)];
        if (acc) return false;
    }
    return true;
}

void LdpcCode::finalize() {
    const int m = static_cast<int>(check_vars.size());
    var_checks.assign(static_cast<std::size_t>(n), {});
    for (int ci = 0; ci < m; ++ci)
        for (int v : check_vars[static_cast<std::size_t>(ci)]) {
            if (v < 0 || v >= n) throw std::invalid_argument("LdpcCode: variable index out of range");
            var_checks[static_cast<std::size_t>(v)].push_back(ci);
        }

    // Gaussian elimination over GF(2); pivot columns carry the parity bits.
    std::vector<BitRow> rows(static_cast<std::size_t>(m), BitRow(n));
    for (int ci = 0; ci < m; ++ci)
        for (int v : check_vars[static_cast<std::size_t>(ci)]) rows[static_cast<std::size_t>(ci)].set(v);

    pivot_cols_.clear();
    std::vector<int> pivot_row_of_col(static_cast<std::size_t>(n), -1);
    int rank = 0;
    for (int col = 0; col < n && rank < m; ++col) {
        int sel = -1;
        for (int ri = rank; ri < m; ++ri)
            if (rows[static_cast<std::size_t>(ri)].get(col)) {
                sel = ri;
                break;
            }
        if (sel < 0) continue;
        std::swap(rows[static_cast<std::size_t>(sel)], rows[static_cast<std::size_t>(rank)]);
        for (int ri = 0; ri < m; ++ri)
            if (ri != rank && rows[static_cast<std::size_t>(ri)].get(col))
                rows[static_cast<std::size_t>(ri)] ^= rows[static_cast<std::size_t>(rank)];
        pivot_cols_.push_back(col);
        pivot_row_of_col[static_cast<std::size_t>(col)] = rank;
        ++rank;
    }
    if (rank != m)
        throw std::invalid_argument("LdpcCode: parity-check matrix is rank deficient");
    k = n - rank;

    free_cols_.clear();
    std::vector<char> is_pivot(static_cast<std::size_t>(n), 0);
    for (int c : pivot_cols_) is_pivot[static_cast<std::size_t>(c)] = 1;
    for (int c = 0; c < n; ++c)
        if (!is_pivot[static_cast<std::size_t>(c)]) free_cols_.push_back(c);

    pivot_deps_.assign(pivot_cols_.size(), {});
    for (std::size_t p = 0; p < pivot_cols_.size(); ++p) {
        const BitRow& row = rows[static_cast<std::size_t>(p)];
        for (int c : free_cols_)
            if (row.get(c)) pivot_deps_[p].push_back(c);
    }
}

BitVec LdpcCode::encode(const BitVec& info) const {
    if (info.size() != static_cast<std::size_t>(k))
        throw std::invalid_argument("LdpcCode::encode: wrong info length");
    BitVec cw(static_cast<std::size_t>(n), 0);
    for (std::size_t i = 0; i < free_cols_.size(); ++i)
        cw[static_cast<std::size_t>(free_cols_[i])] = info[i];
    for (std::size_t p = 0; p < pivot_cols_.size(); ++p) {
        int acc = 0;
        for (int c : pivot_deps_[p]) acc ^= cw[static_cast<std::size_t>(c)];
        cw[static_cast<std::size_t>(pivot_cols_[p])] = static_cast<std::uint8_t>(acc);
    }
    return cw;
}

BitVec LdpcCode::extract_info(const BitVec& codeword) const {
    if (codeword.size() != static_cast<std::size_t>(n))
        throw std::invalid_argument("LdpcCode::extract_info: wrong codeword length");
    BitVec info(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < free_cols_.size(); ++i)
        info[i] = codeword[static_cast<std::size_t>(free_cols_[i])];
    return info;
}

LdpcCode LdpcCode::make_default(int n, std::uint64_t seed) {
    if (n < 8 || n % 2 != 0)
        throw std::invalid_argument("LdpcCode::make_default: n must be even and >= 8");
    const int m = n / 2;
    const int kk = n - m;
    LdpcCode code;
    code.n = n;
    code.check_vars.assign(static_cast<std::size_t>(m), {});

    SplitMix64 rng(seed);
    // Information columns: weight 4, distinct seeded checks. Reject any
    // column equal to an earlier column or to the XOR of two earlier ones;
    // together with the even column weight this keeps the low-weight
    // codeword spectrum clear of the weight-2/3 patterns a min-sum decoder
    // slips into.
    std::set<std::vector<std::uint64_t>> seen;
    const std::size_t words = (static_cast<std::size_t>(m) + 63) / 64;
    std::vector<std::vector<std::uint64_t>> cols;
    auto as_bits = [&](const std::set<int>& checks) {
        std::vector<std::uint64_t> w(words, 0);
        for (int ci : checks) w[static_cast<std::size_t>(ci) / 64] |= 1ULL << (ci % 64);
        return w;
    };
    const int col_weight = std::min(4, m - 1);
    for (int col = 0; col < kk; ++col) {
        for (int attempt = 0;; ++attempt) {
            if (attempt > 10000)
                throw std::invalid_argument("LdpcCode::make_default: n too small for the ensemble");
            std::set<int> checks;
            while (static_cast<int>(checks.size()) < col_weight)
                checks.insert(static_cast<int>(rng.below(static_cast<std::uint64_t>(m))));
            const auto bits = as_bits(checks);
            if (seen.count(bits)) continue;
            for (int ci : checks) code.check_vars[static_cast<std::size_t>(ci)].push_back(col);
            seen.insert(bits);
            for (const auto& prev : cols) {
                std::vector<std::uint64_t> x(words);
                for (std::size_t w = 0; w < words; ++w) x[w] = bits[w] ^ prev[w];
                seen.insert(std::move(x));
            }
            cols.push_back(bits);
            break;
        }
    }
    // Dual-diagonal parity part.
    for (int i = 0; i < m; ++i) {
        code.check_vars[static_cast<std::size_t>(i)].push_back(kk + i);
        if (i + 1 < m) code.check_vars[static_cast<std::size_t>(i + 1)].push_back(kk + i);
    }
    for (auto& vars : code.check_vars) std::sort(vars.begin(), vars.end());
    code.finalize();
    return code;
}

void LdpcCode::to_alist(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("LdpcCode::to_alist: cannot open " + path);
    const int m = static_cast<int>(check_vars.size());
    std::size_t max_col = 0, max_row = 0;
    for (const auto& v : var_checks) max_col = std::max(max_col, v.size());
    for (const auto& v : check_vars) max_row = std::max(max_row, v.size());
    out << n << " " << m << "\n" << max_col << " " << max_row << "\n";
    for (int v = 0; v < n; ++v) out << var_checks[static_cast<std::size_t>(v)].size() << (v + 1 < n ? " " : "\n");
    for (int ci = 0; ci < m; ++ci)
        out << check_vars[static_cast<std::size_t>(ci)].size() << (ci + 1 < m ? " " : "\n");
    for (int v = 0; v < n; ++v) {
        const auto& cs = var_checks[static_cast<std::size_t>(v)];
        for (std::size_t j = 0; j < max_col; ++j)
            out << (j < cs.size() ? cs[j] + 1 : 0) << (j + 1 < max_col ? " " : "\n");
    }
    for (int ci = 0; ci < m; ++ci) {
        const auto& vs = check_vars[static_cast<std::size_t>(ci)];
        for (std::size_t j = 0; j < max_row; ++j)
            out << (j < vs.size() ? vs[j] + 1 : 0) << (j + 1 < max_row ? " " : "\n");
    }
}

LdpcCode LdpcCode::from_alist(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("LdpcCode::from_alist: cannot open " + path);
    std::vector<long> tok;
    long v;
    while (in >> v) tok.push_back(v);
    std::size_t pos = 0;
    auto next = [&]() -> long {
        if (pos >= tok.size()) throw std::runtime_error("malformed alist: truncated file");
        return tok[pos++];
    };

    const long nn = next(), mm = next();
    if (nn <= 0 || mm <= 0 || mm >= nn) throw std::runtime_error("malformed alist: bad dimensions");
    const long max_col = next(), max_row = next();
    if (max_col <= 0 || max_row <= 0) throw std::runtime_error("malformed alist: bad max degrees");

    std::vector<long> col_deg(static_cast<std::size_t>(nn)), row_deg(static_cast<std::size_t>(mm));
    long col_total = 0, row_total = 0;
    for (auto& d : col_deg) {
        d = next();
        if (d < 0 || d > max_col) throw std::runtime_error("malformed alist: column degree");
        col_total += d;
    }
    for (auto& d : row_deg) {
        d = next();
        if (d < 0 || d > max_row) throw std::runtime_error("malformed alist: row degree");
        row_total += d;
    }
    if (col_total != row_total) throw std::runtime_error("malformed alist: degree sums differ");

    // Adjacency entries may be zero-padded to the max degree or not.
    const std::size_t remaining = tok.size() - pos;
    const std::size_t padded =
        static_cast<std::size_t>(nn) * max_col + static_cast<std::size_t>(mm) * max_row;
    const std::size_t unpadded = static_cast<std::size_t>(col_total + row_total);
    bool is_padded;
    if (remaining == padded)
        is_padded = true;
    else if (remaining == unpadded)
        is_padded = false;
    else
        throw std::runtime_error("malformed alist: adjacency token count");

    LdpcCode code;
    code.n = static_cast<int>(nn);
    code.check_vars.assign(static_cast<std::size_t>(mm), {});
    std::vector<std::vector<int>> col_lists(static_cast<std::size_t>(nn));
    for (long c = 0; c < nn; ++c) {
        const long take = is_padded ? max_col : col_deg[static_cast<std::size_t>(c)];
        for (long j = 0; j < take; ++j) {
            const long ci = next();
            if (ci == 0) continue;  // padding
            if (ci < 1 || ci > mm) throw std::runtime_error("malformed alist: check index");
            col_lists[static_cast<std::size_t>(c)].push_back(static_cast<int>(ci - 1));
        }
        if (static_cast<long>(col_lists[static_cast<std::size_t>(c)].size()) !=
            col_deg[static_cast<std::size_t>(c)])
            throw std::runtime_error("malformed alist: column list disagrees with its degree");
    }
    for (long ci = 0; ci < mm; ++ci) {
        const long take = is_padded ? max_row : row_deg[static_cast<std::size_t>(ci)];
        for (long j = 0; j < take; ++j) {
            const long vv = next();
            if (vv == 0) continue;
            if (vv < 1 || vv > nn) throw std::runtime_error("malformed alist: variable index");
            code.check_vars[static_cast<std::size_t>(ci)].push_back(static_cast<int>(vv - 1));
        }
        if (static_cast<long>(code.check_vars[static_cast<std::size_t>(ci)].size()) !=
            row_deg[static_cast<std::size_t>(ci)])
            throw std::runtime_error("malformed alist: row list disagrees with its degree");
    }
    // Cross-check the two adjacency sections.
    std::vector<std::vector<int>> from_rows(static_cast<std::size_t>(nn));
    for (long ci = 0; ci < mm; ++ci)
        for (int vv : code.check_vars[static_cast<std::size_t>(ci)])
            from_rows[static_cast<std::size_t>(vv)].push_back(static_cast<int>(ci));
    for (long c = 0; c < nn; ++c) {
        auto a = col_lists[static_cast<std::size_t>(c)];
        auto b = from_rows[static_cast<std::size_t>(c)];
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        if (a != b) throw std::runtime_error("malformed alist: adjacency sections disagree");
    }
    for (auto& vars : code.check_vars) std::sort(vars.begin(), vars.end());
    code.finalize();
    return code;
}

LdpcDecodeResult min_sum_decode(const std::vector<double>& llrs, const LdpcCode& code,
                                int max_iterations, double scale) {
    if (llrs.size() != static_cast<std::size_t>(code.n))
        throw std::invalid_argument("min_sum_decode: llr length must equal n");
    const int m = static_cast<int>(code.check_vars.size());

    std::vector<std::vector<double>> msg(static_cast<std::size_t>(m));
    for (int ci = 0; ci < m; ++ci)
        msg[static_cast<std::size_t>(ci)].assign(code.check_vars[static_cast<std::size_t>(ci)].size(), 0.0);

    std::vector<double> total(llrs);
    LdpcDecodeResult res;
    res.bits.assign(static_cast<std::size_t>(code.n), 0);

    auto harden = [&]() {
        for (int v = 0; v < code.n; ++v) res.bits[static_cast<std::size_t>(v)] = total[static_cast<std::size_t>(v)] < 0.0 ? 1 : 0;
    };
    harden();
    if (code.parity_ok(res.bits)) {
        res.parity_ok = true;
        return res;
    }

    for (int it = 1; it <= max_iterations; ++it) {
        for (int ci = 0; ci < m; ++ci) {
            const auto& vars = code.check_vars[static_cast<std::size_t>(ci)];
            auto& out = msg[static_cast<std::size_t>(ci)];
            // Extrinsic inputs, their sign product and two smallest magnitudes.
            double min1 = std::numeric_limits<double>::infinity(), min2 = min1;
            int argmin = -1, sign_prod = 1;
            static thread_local std::vector<double> in;
            in.resize(vars.size());
            for (std::size_t j = 0; j < vars.size(); ++j) {
                const double e = total[static_cast<std::size_t>(vars[j])] - out[j];
                in[j] = e;
                if (e < 0.0) sign_prod = -sign_prod;
                const double a = std::abs(e);
                if (a < min1) {
                    min2 = min1;
                    min1 = a;
                    argmin = static_cast<int>(j);
                } else if (a < min2) {
                    min2 = a;
                }
            }
            for (std::size_t j = 0; j < vars.size(); ++j) {
                const int s = (in[j] < 0.0 ? -sign_prod : sign_prod);
                const double mag = (static_cast<int>(j) == argmin ? min2 : min1);
                const double nm = scale * s * mag;
                total[static_cast<std::size_t>(vars[j])] += nm - out[j];
                out[j] = nm;
            }
        }
        res.iterations = it;
        harden();
        if (code.parity_ok(res.bits)) {
            res.parity_ok = true;
            return res;
        }
    }
    return res;
}

Interleaver Interleaver::make(std::size_t length, std::uint64_t seed) {
    Interleaver il;
    il.perm.resize(length);
    std::iota(il.perm.begin(), il.perm.end(), 0U);
    SplitMix64 rng(seed);
    for (std::size_t i = length; i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.below(i));
        std::swap(il.perm[i - 1], il.perm[j]);
    }
    return il;
}

BitVec Interleaver::apply(const BitVec& in) const {
    if (in.size() != perm.size()) throw std::invalid_argument("Interleaver: length mismatch");
    BitVec out(in.size());
    for (std::size_t i = 0; i < in.size(); ++i) out[perm[i]] = in[i];
    return out;
}

BitVec Interleaver::invert(const BitVec& in) const {
    if (in.size() != perm.size()) throw std::invalid_argument("Interleaver: length mismatch");
    BitVec out(in.size());
    for (std::size_t i = 0; i < in.size(); ++i) out[i] = in[perm[i]];
    return out;
}

std::vector<double> Interleaver::gather(const std::vector<double>& in) const {
    if (in.size() != perm.size()) throw std::invalid_argument("Interleaver: length mismatch");
    std::vector<double> out(in.size());
    for (std::size_t i = 0; i < in.size(); ++i) out[i] = in[perm[i]];
    return out;
}

RVec npi_variance(const CMat& rnpi_dt, const DopplerSpreadSet& spread) {
    const FrameDims& dims = spread.dims;
    if (rnpi_dt.rows() != dims.M || rnpi_dt.cols() != dims.N)
        throw std::invalid_argument("npi_variance: rnpi must be M x N");
    const int N = dims.N, Mp = dims.data_rows();

    // Mean-removed row power tr(C_q)/N, one per receive row.
    RVec trace_n(dims.M);
    for (int q = 0; q < dims.M; ++q) {
        const Complex mean = rnpi_dt.row(q).mean();
        trace_n[q] = (rnpi_dt.row(q).array() - mean).abs2().sum() / N;
    }

    RVec sigma2(Mp);
    for (int m = 0; m < Mp; ++m) {
        double acc = 0.0;
        for (int t = 0; t < spread.tap_count(); ++t) {
            const int row = m + spread.taps[static_cast<std::size_t>(t)];
            double eta = 0.0;
            for (int nn = 0; nn < N; ++nn) {
                const double d = spread.mrc_gain(nn, m);
                if (d < kDivisionGuard) continue;
                eta += std::norm(spread.nu_time[static_cast<std::size_t>(t)](nn, row)) / (d * d);
            }
            acc += eta * trace_n[row];
        }
        sigma2[m] = std::max(acc / N, 1e-12);
    }
    return sigma2;
}

std::vector<double> bit_llrs(const CVec& soft_row, double sigma2, const QamConstellation& c,
                             bool max_log) {
    if (!(sigma2 > 0.0)) throw std::invalid_argument("bit_llrs: sigma2 must be positive");
    const int bps = c.bits_per_symbol();
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(soft_row.size()) * bps);
    for (Index nn = 0; nn < soft_row.size(); ++nn) {
        const Complex v = soft_row[nn];
        for (int b = 0; b < bps; ++b) {
            const int mask = 1 << (bps - 1 - b);
            if (max_log) {
                double d0 = std::numeric_limits<double>::infinity(), d1 = d0;
                for (int label = 0; label < c.order; ++label) {
                    const double d = std::norm(v - c.points[label]);
                    if (label & mask)
                        d1 = std::min(d1, d);
                    else
                        d0 = std::min(d0, d);
                }
                out.push_back((d1 - d0) / sigma2);
            } else {
                // log sum exp with the common max factored out
                double m0 = -std::numeric_limits<double>::infinity(), m1 = m0;
                for (int label = 0; label < c.order; ++label) {
                    const double e = -std::norm(v - c.points[label]) / sigma2;
                    if (label & mask)
                        m1 = std::max(m1, e);
                    else
                        m0 = std::max(m0, e);
                }
                double s0 = 0.0, s1 = 0.0;
                for (int label = 0; label < c.order; ++label) {
                    const double e = -std::norm(v - c.points[label]) / sigma2;
                    if (label & mask)
                        s1 += std::exp(e - m1);
                    else
                        s0 += std::exp(e - m0);
                }
                out.push_back((m0 + std::log(s0)) - (m1 + std::log(s1)));
            }
        }
    }
    return out;
}

CodedFrameSpec coded_frame_spec(const FrameDims& dims, const QamConstellation& c,
                                const LdpcCode& code) {
    CodedFrameSpec spec;
    spec.capacity_bits = static_cast<std::size_t>(dims.data_rows()) * dims.N *
                         static_cast<std::size_t>(c.bits_per_symbol());
    spec.codewords = static_cast<int>(spec.capacity_bits / static_cast<std::size_t>(code.n));
    if (spec.codewords < 1)
        throw std::invalid_argument("coded_frame_spec: frame too small for one codeword");
    spec.coded_bits = static_cast<std::size_t>(spec.codewords) * code.n;
    spec.pad_bits = spec.capacity_bits - spec.coded_bits;
    spec.info_bits = static_cast<std::size_t>(spec.codewords) * code.k;
    return spec;
}

TurboTx turbo_tx(const BitVec& info, const LdpcCode& code, const QamConstellation& c,
                 const FrameDims& dims, std::uint64_t interleaver_seed) {
    const CodedFrameSpec spec = coded_frame_spec(dims, c, code);
    if (info.size() != spec.info_bits)
        throw std::invalid_argument("turbo_tx: expected " + std::to_string(spec.info_bits) +
                                    " info bits");
    BitVec coded;
    coded.reserve(spec.coded_bits);
    for (int w = 0; w < spec.codewords; ++w) {
        const BitVec cw = code.encode(BitVec(info.begin() + static_cast<long>(w) * code.k,
                                             info.begin() + static_cast<long>(w + 1) * code.k));
        coded.insert(coded.end(), cw.begin(), cw.end());
    }
    const Interleaver il = Interleaver::make(spec.coded_bits, interleaver_seed);
    BitVec frame_bits = il.apply(coded);
    frame_bits.resize(spec.capacity_bits, 0);  // known-zero padding tail

    TurboTx tx;
    tx.frame = map_bits(frame_bits, c, dims);
    tx.info_bits = info;
    tx.frame_bits = std::move(frame_bits);
    return tx;
}

TurboResult turbo_detect(const CVec& r, const DopplerSpreadSet& spread, const LdpcCode& code,
                         const DetectorConfig& cfg, const QamConstellation& c,
                         std::uint64_t interleaver_seed, int ldpc_iterations, bool max_log) {
    cfg.validate();
    const FrameDims& dims = spread.dims;
    const CodedFrameSpec spec = coded_frame_spec(dims, c, code);
    const Interleaver il = Interleaver::make(spec.coded_bits, interleaver_seed);
    const int bps = c.bits_per_symbol();
    const CMat Yt = time_to_dt(r, dims.M, dims.N);

    CMat state;
    if (cfg.initializer == Initializer::tf_mmse)
        state = tf_mmse_init(r, spread, cfg.noise_variance);
    else
        state = CMat::Zero(dims.M, dims.N);

    DetectorConfig sweep_cfg = cfg;
    sweep_cfg.max_iterations = 1;
    sweep_cfg.decision = Decision::hard;
    sweep_cfg.record_state_history = false;

    TurboResult res;
    res.codeword_ok.assign(static_cast<std::size_t>(spec.codewords), 0);
    std::vector<double> frame_llrs(spec.capacity_bits, 0.0);
    BitVec coded(spec.coded_bits, 0);
    res.decoded_info.assign(spec.info_bits, 0);

    for (int t = 1; t <= cfg.max_iterations; ++t) {
        res.detector = detect_mrc_dt(Yt, spread, sweep_cfg, c, state);
        res.turbo_iterations = t;

        const RVec sigma2 = npi_variance(res.detector.rnpi_dt, spread);
        for (int m = 0; m < dims.data_rows(); ++m) {
            auto row_llrs = bit_llrs(res.detector.soft.row(m).transpose(), sigma2[m], c, max_log);
            // Clip before decoding: a DFE sweep that has locked onto wrong
            // decisions leaves a deceptively small residual, and the
            // resulting near-infinite LLRs would let min-sum settle on a
            // wrong codeword instead of failing parity.
            for (auto& l : row_llrs) l = std::clamp(l, -kLlrClip, kLlrClip);
            std::copy(row_llrs.begin(), row_llrs.end(),
                      frame_llrs.begin() + static_cast<long>(m) * dims.N * bps);
        }

        // Coded-bit LLRs sit in the first coded_bits frame positions via the
        // interleaver; pad positions are known zeros and never decoded.
        std::vector<double> coded_llrs(frame_llrs.begin(),
                                       frame_llrs.begin() + static_cast<long>(spec.coded_bits));
        coded_llrs = il.gather(coded_llrs);

        bool all_ok = true;
        for (int w = 0; w < spec.codewords; ++w) {
            const std::vector<double> cw_llrs(coded_llrs.begin() + static_cast<long>(w) * code.n,
                                              coded_llrs.begin() + static_cast<long>(w + 1) * code.n);
            const LdpcDecodeResult dec = min_sum_decode(cw_llrs, code, ldpc_iterations);
            res.codeword_ok[static_cast<std::size_t>(w)] = dec.parity_ok ? 1 : 0;
            all_ok = all_ok && dec.parity_ok;
            std::copy(dec.bits.begin(), dec.bits.end(), coded.begin() + static_cast<long>(w) * code.n);
            const BitVec info = code.extract_info(dec.bits);
            std::copy(info.begin(), info.end(),
                      res.decoded_info.begin() + static_cast<long>(w) * code.k);
        }
        res.all_parity_ok = all_ok;
        if (all_ok || t == cfg.max_iterations) break;

        // Feed back the hard re-modulated decoder output as the new state.
        BitVec frame_bits = il.apply(coded);
        frame_bits.resize(spec.capacity_bits, 0);
        state = dd_to_dt(map_bits(frame_bits, c, dims).X);
    }
    return res;
}

}  // namespace otfs
