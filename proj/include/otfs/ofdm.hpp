#pragma once

#include "otfs/channel.hpp"
#include "otfs/grid.hpp"
#include "otfs/types.hpp"

namespace otfs {

// CP-OFDM comparison system: N OFDM symbols of M subcarriers, cyclic prefix
// of length l_max (the same guard overhead as the ZP-OTFS grid), unitary
// IDFT per symbol so transmitted samples keep unit average power.

inline Index ofdm_frame_samples(const FrameDims& dims) {
    return static_cast<Index>(dims.N) * (dims.M + dims.l_max);
}

// bits: N*M*log2(Q) payload, symbol-major with the subcarrier index fastest.
CVec ofdm_tx(const BitVec& bits, const QamConstellation& c, const FrameDims& dims);

// Per-symbol single-tap frequency response, M x N: column n holds
// H_n(k) = sum_l g_s(l, q_mid) e^{-j 2 pi k l / M} with the channel frozen
// at the symbol's mid sample (the standard baseline reading for a
// time-varying channel; ICI is deliberately not modeled).
CMat ofdm_freq_response(const PathSet& ps, const FrameDims& dims);

// Strip CP, per-subcarrier MMSE division, hard demap.
BitVec ofdm_rx_mmse(const CVec& r, const CMat& freq_response, double noise_variance,
                    const QamConstellation& c);

}  // namespace otfs
