#pragma once

#include "otfs/channel.hpp"
#include "otfs/detect.hpp"
#include "otfs/grid.hpp"
#include "otfs/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace otfs {

// Sparse binary parity-check code. Adjacency is stored both ways; the
// systematic encoder (GF(2) elimination, pivot columns become parity) is
// built once on demand. Information bits live on the free columns, in
// increasing column order.
struct LdpcCode {
    int n = 0;  // codeword bits
    int k = 0;  // information bits (n - rank(H))
    std::vector<std::vector<int>> check_vars;  // per check: variable indices
    std::vector<std::vector<int>> var_checks;  // per variable: check indices

    double rate() const { return static_cast<double>(k) / n; }
    bool parity_ok(const BitVec& codeword) const;
    BitVec encode(const BitVec& info) const;
    BitVec extract_info(const BitVec& codeword) const;

    // Rate-1/2 default: info columns of weight 3 on seeded distinct checks,
    // dual-diagonal (staircase) parity part, so encoding is forward
    // substitution and the elimination is trivially full rank.
    static LdpcCode make_default(int n = 512, std::uint64_t seed = 0x1d9cULL);

    // MacKay alist text format (1-indexed, zero-padded entries accepted).
    static LdpcCode from_alist(const std::string& path);
    void to_alist(const std::string& path) const;

    void finalize();  // builds var_checks from check_vars + the encoder

private:
    // Encoder state: for each pivot (parity) column, the free columns that
    // XOR into it.
    std::vector<int> free_cols_;
    std::vector<int> pivot_cols_;
    std::vector<std::vector<int>> pivot_deps_;
};

struct LdpcDecodeResult {
    BitVec bits;
    bool parity_ok = false;
    int iterations = 0;
};

// Normalized min-sum (scale 0.75), flooding schedule, early exit once the
// hard decision satisfies every check. LLR convention: positive => bit 0.
LdpcDecodeResult min_sum_decode(const std::vector<double>& llrs, const LdpcCode& code,
                                int max_iterations, double scale = 0.75);

// Seeded uniform random bit interleaver; position i of the input moves to
// perm[i] of the output.
struct Interleaver {
    std::vector<std::uint32_t> perm;

    static Interleaver make(std::size_t length, std::uint64_t seed);
    BitVec apply(const BitVec& in) const;
    BitVec invert(const BitVec& in) const;
    // Gather soft values back into source order: out[i] = in[perm[i]].
    std::vector<double> gather(const std::vector<double>& in) const;
};

// Post-MRC noise-plus-interference variance per data row, from the
// delay-time RNPI: sigma_m^2 = (1/N) sum_l eta_{m,l} * tr(C_{m+l})/N with
// eta_{m,l} = ||nu_t(m+l,l) / d_m||^2 and C the mean-removed sample
// covariance of the RNPI row. Floored at 1e-12.
RVec npi_variance(const CMat& rnpi_dt, const DopplerSpreadSet& spread);

// Per-bit LLRs of one soft symbol row; positive => bit 0 more likely.
// max_log uses the two-minima approximation, otherwise the exact
// log-sum-exp form.
std::vector<double> bit_llrs(const CVec& soft_row, double sigma2, const QamConstellation& c,
                             bool max_log = true);

// Coded-frame layout: how many codewords fit and how many known-zero pad
// bits fill the remainder of the grid.
struct CodedFrameSpec {
    int codewords = 0;
    std::size_t capacity_bits = 0;
    std::size_t coded_bits = 0;
    std::size_t pad_bits = 0;
    std::size_t info_bits = 0;
};
CodedFrameSpec coded_frame_spec(const FrameDims& dims, const QamConstellation& c,
                                const LdpcCode& code);

struct TurboTx {
    OtfsFrame frame;
    BitVec info_bits;
    BitVec frame_bits;
};
// Encode, interleave, zero-pad and map a payload of codewords*k info bits.
TurboTx turbo_tx(const BitVec& info, const LdpcCode& code, const QamConstellation& c,
                 const FrameDims& dims, std::uint64_t interleaver_seed);

struct TurboResult {
    DetectorOutput detector;       // state of the final MRC sweep
    BitVec decoded_info;
    std::vector<std::uint8_t> codeword_ok;
    bool all_parity_ok = false;
    int turbo_iterations = 0;
};

// Turbo rake loop: each turbo iteration is one MRC sweep, de-interleave,
// LDPC decode, re-interleave and QAM remap of the hard decoder output fed
// back as the detector state. The first sweep starts from the tf_mmse
// estimate when cfg.initializer asks for it. Stops when every codeword
// passes parity or after cfg.max_iterations sweeps.
TurboResult turbo_detect(const CVec& r, const DopplerSpreadSet& spread, const LdpcCode& code,
                         const DetectorConfig& cfg, const QamConstellation& c,
                         std::uint64_t interleaver_seed, int ldpc_iterations = 30,
                         bool max_log = true);

}  // namespace otfs
