#pragma once

#include "otfs/types.hpp"

#include <cstdint>
#include <vector>

namespace otfs {

using BitVec = std::vector<std::uint8_t>;  // one 0/1 per entry

// Square Gray-coded QAM with unit average energy. Symbol index == bit label:
// the first half of the bits (MSB first) selects the I level, the second
// half the Q level, each through a reflected Gray code over the PAM levels
// {-(K-1), ..., -1, 1, ..., K-1} scaled by 1/sqrt(2(K^2-1)/3), K = sqrt(Q).
// So 4/16/64-QAM carry the usual 1/sqrt(2), 1/sqrt(10), 1/sqrt(42) factors.
struct QamConstellation {
    int order = 0;
    CVec points;  // points[label], unit average energy

    int bits_per_symbol() const;
    int bits_per_axis() const { return bits_per_symbol() / 2; }

    static QamConstellation make(int order);  // order in {4, 16, 64}
};

// A zero-padded OTFS frame: row m of X holds the symbol vector x_m^T, and
// rows m >= M - l_max are identically zero.
struct OtfsFrame {
    FrameDims dims;
    CMat X;

    void validate() const;
};

// Map a payload of exactly M'*N*log2(Q) bits onto the data rows, row-major
// over m = 0..M'-1 with the Doppler index n fastest; guard rows stay zero.
OtfsFrame map_bits(const BitVec& bits, const QamConstellation& c, const FrameDims& dims);

// Nearest constellation point by Euclidean distance; ties break toward the
// lowest symbol index, making the slicer a deterministic total function.
struct SliceResult {
    Complex symbol;
    int label = 0;
};
SliceResult slice(Complex value, const QamConstellation& c);

// Hard-slice every entry of a soft M x N grid (guard rows forced to zero).
CMat slice_frame(const CMat& soft, const QamConstellation& c, const FrameDims& dims);

// Recover the payload bits from (a hard or soft estimate of) a frame by
// slicing each data symbol. Inverse of map_bits on noiseless input.
BitVec demap_frame(const CMat& X, const QamConstellation& c, const FrameDims& dims);

// Label <-> bit helpers (MSB first).
void label_to_bits(int label, int nbits, BitVec& out);
int bits_to_label(const BitVec& bits, std::size_t offset, int nbits);

BitVec random_bits(std::size_t count, std::uint64_t seed);

}  // namespace otfs
