#include "otfs/grid.hpp"

#include "otfs/rng.hpp"

#include <cmath>

namespace otfs {

namespace {

int int_log2(int v) {
    int b = 0;
    while ((1 << b) < v) ++b;
    return b;
}

// Inverse reflected Gray code: label bits -> level index.
int gray_to_binary(int g) {
    int b = 0;
    for (; g; g >>= 1) b ^= g;
    return b;
}

}  // namespace

int QamConstellation::bits_per_symbol() const { return int_log2(order); }

QamConstellation QamConstellation::make(int order) {
    if (order != 4 && order != 16 && order != 64)
        throw std::invalid_argument("QamConstellation: order must be 4, 16 or 64");
    QamConstellation c;
    c.order = order;
    const int axis_bits = int_log2(order) / 2;
    const int K = 1 << axis_bits;  // levels per axis
    // E|x|^2 over the square grid is 2(K^2-1)/3 before scaling.
    const double scale = 1.0 / std::sqrt(2.0 * (K * K - 1) / 3.0);
    c.points.resize(order);
    for (int label = 0; label < order; ++label) {
        const int gi = label >> axis_bits;          // I-axis Gray bits
        const int gq = label & (K - 1);             // Q-axis Gray bits
        const int li = gray_to_binary(gi);          // level index 0..K-1
        const int lq = gray_to_binary(gq);
        c.points[label] = scale * Complex(2 * li - K + 1, 2 * lq - K + 1);
    }
    return c;
}

void OtfsFrame::validate() const {
    dims.validate();
    if (X.rows() != dims.M || X.cols() != dims.N)
        throw std::invalid_argument("OtfsFrame: grid shape must be M x N");
    for (int m = dims.data_rows(); m < dims.M; ++m)
        if (X.row(m).cwiseAbs().maxCoeff() != 0.0)
            throw std::invalid_argument("OtfsFrame: guard rows must be zero");
}

OtfsFrame map_bits(const BitVec& bits, const QamConstellation& c, const FrameDims& dims) {
    dims.validate();
    const int bps = c.bits_per_symbol();
    const std::size_t need =
        static_cast<std::size_t>(dims.data_rows()) * dims.N * static_cast<std::size_t>(bps);
    if (bits.size() != need)
        throw std::invalid_argument("map_bits: payload must be exactly M'*N*log2(Q) bits, got " +
                                    std::to_string(bits.size()) + ", need " + std::to_string(need));
    OtfsFrame frame{dims, CMat::Zero(dims.M, dims.N)};
    std::size_t pos = 0;
    for (int m = 0; m < dims.data_rows(); ++m)
        for (int n = 0; n < dims.N; ++n) {
            const int label = bits_to_label(bits, pos, bps);
            frame.X(m, n) = c.points[label];
            pos += static_cast<std::size_t>(bps);
        }
    return frame;
}

SliceResult slice(Complex value, const QamConstellation& c) {
    int best = 0;
    double best_d = std::norm(value - c.points[0]);
    for (int j = 1; j < c.order; ++j) {
        const double d = std::norm(value - c.points[j]);
        if (d < best_d) {  // strict: ties keep the lowest index
            best_d = d;
            best = j;
        }
    }
    return {c.points[best], best};
}

CMat slice_frame(const CMat& soft, const QamConstellation& c, const FrameDims& dims) {
    CMat hard = CMat::Zero(dims.M, dims.N);
    const int rows = std::min<int>(dims.data_rows(), static_cast<int>(soft.rows()));
    for (int m = 0; m < rows; ++m)
        for (int n = 0; n < dims.N; ++n) hard(m, n) = slice(soft(m, n), c).symbol;
    return hard;
}

BitVec demap_frame(const CMat& X, const QamConstellation& c, const FrameDims& dims) {
    const int bps = c.bits_per_symbol();
    BitVec bits;
    bits.reserve(static_cast<std::size_t>(dims.data_rows()) * dims.N * bps);
    BitVec sym(static_cast<std::size_t>(bps));
    for (int m = 0; m < dims.data_rows(); ++m)
        for (int n = 0; n < dims.N; ++n) {
            label_to_bits(slice(X(m, n), c).label, bps, sym);
            bits.insert(bits.end(), sym.begin(), sym.end());
        }
    return bits;
}

void label_to_bits(int label, int nbits, BitVec& out) {
    out.resize(static_cast<std::size_t>(nbits));
    for (int b = 0; b < nbits; ++b)
        out[static_cast<std::size_t>(b)] =
            static_cast<std::uint8_t>((label >> (nbits - 1 - b)) & 1);
}

int bits_to_label(const BitVec& bits, std::size_t offset, int nbits) {
    if (offset + static_cast<std::size_t>(nbits) > bits.size())
        throw std::invalid_argument("bits_to_label: out of range");
    int label = 0;
    for (int b = 0; b < nbits; ++b) label = (label << 1) | (bits[offset + b] & 1);
    return label;
}

BitVec random_bits(std::size_t count, std::uint64_t seed) {
    SplitMix64 g(seed);
    BitVec bits(count);
    for (auto& b : bits) b = static_cast<std::uint8_t>(g.next_u64() & 1);
    return bits;
}

}  // namespace otfs
