#include "otfs/ofdm.hpp"

#include "otfs/transforms.hpp"

#include <cmath>
#include <numbers>

namespace otfs {

CVec ofdm_tx(const BitVec& bits, const QamConstellation& c, const FrameDims& dims) {
    dims.validate();
    const int M = dims.M, N = dims.N, cp = dims.l_max;
    const int bps = c.bits_per_symbol();
    const std::size_t need = static_cast<std::size_t>(N) * M * static_cast<std::size_t>(bps);
    if (bits.size() != need)
        throw std::invalid_argument("ofdm_tx: payload must be exactly N*M*log2(Q) bits");

    CVec s(ofdm_frame_samples(dims));
    CVec sym(M);
    std::size_t pos = 0;
    for (int n = 0; n < N; ++n) {
        for (int k = 0; k < M; ++k) {
            sym[k] = c.points[bits_to_label(bits, pos, bps)];
            pos += static_cast<std::size_t>(bps);
        }
        dft_inplace(sym, true);  // unitary IDFT keeps per-sample power at 1
        const Index base = static_cast<Index>(n) * (M + cp);
        s.segment(base, cp) = sym.tail(cp);  // cyclic prefix
        s.segment(base + cp, M) = sym;
    }
    return s;
}

CMat ofdm_freq_response(const PathSet& ps, const FrameDims& dims) {
    const int M = dims.M, N = dims.N, cp = dims.l_max;
    std::vector<int> taps;
    for (const auto& p : ps.paths) taps.push_back(static_cast<int>(std::lround(p.delay)));
    std::sort(taps.begin(), taps.end());
    taps.erase(std::unique(taps.begin(), taps.end()), taps.end());

    CMat H = CMat::Zero(M, N);
    for (int n = 0; n < N; ++n) {
        const Index q_mid = static_cast<Index>(n) * (M + cp) + cp + M / 2;
        for (int l : taps) {
            const Complex g = time_gain(ps, l, q_mid);
            for (int k = 0; k < M; ++k) {
                const double ang = -2.0 * std::numbers::pi * k * l / M;
                H(k, n) += g * Complex(std::cos(ang), std::sin(ang));
            }
        }
    }
    return H;
}

BitVec ofdm_rx_mmse(const CVec& r, const CMat& freq_response, double noise_variance,
                    const QamConstellation& c) {
    const int M = static_cast<int>(freq_response.rows());
    const int N = static_cast<int>(freq_response.cols());
    const int bps = c.bits_per_symbol();
    if (r.size() % N != 0)
        throw std::invalid_argument("ofdm_rx_mmse: signal length must be N blocks");
    const int block = static_cast<int>(r.size()) / N;
    const int cp = block - M;
    if (cp < 0) throw std::invalid_argument("ofdm_rx_mmse: block shorter than M");

    BitVec bits;
    bits.reserve(static_cast<std::size_t>(N) * M * static_cast<std::size_t>(bps));
    BitVec sym_bits(static_cast<std::size_t>(bps));
    CVec y(M);
    for (int n = 0; n < N; ++n) {
        y = r.segment(static_cast<Index>(n) * block + cp, M);
        dft_inplace(y, false);
        for (int k = 0; k < M; ++k) {
            const Complex h = freq_response(k, n);
            const double denom = std::norm(h) + noise_variance;
            const Complex est = denom > 0.0 ? Complex(std::conj(h) * y[k] / denom) : Complex(0.0);
            label_to_bits(slice(est, c).label, bps, sym_bits);
            bits.insert(bits.end(), sym_bits.begin(), sym_bits.end());
        }
    }
    return bits;
}

}  // namespace otfs
