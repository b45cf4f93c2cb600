#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>

namespace otfs {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;
using Index = Eigen::Index;

// Geometry of a zero-padded OTFS frame. Rows of the M x N grid are delay
// bins, columns are Doppler bins; the last l_max rows are null guard symbols,
// which leaves M' = M - l_max data rows. Critical sampling (T * delta_f = 1)
// is assumed throughout, so T is derived from delta_f.
struct FrameDims {
    int M = 0;                 // delay bins per time block
    int N = 0;                 // Doppler bins == number of time blocks
    int l_max = 0;             // maximum discrete delay tap
    double delta_f_hz = 15e3;  // subcarrier spacing

    int data_rows() const { return M - l_max; }  // M'
    Index samples() const { return static_cast<Index>(M) * N; }
    double symbol_duration_s() const { return 1.0 / delta_f_hz; }  // T
    double frame_duration_s() const { return N * symbol_duration_s(); }
    double bandwidth_hz() const { return M * delta_f_hz; }

    void validate() const {
        if (M <= 0 || N <= 0)
            throw std::invalid_argument("FrameDims: M and N must be positive");
        if (l_max < 0 || l_max >= M)
            throw std::invalid_argument("FrameDims: need 0 <= l_max < M");
        if (!(delta_f_hz > 0))
            throw std::invalid_argument("FrameDims: delta_f_hz must be positive");
    }

    bool operator==(const FrameDims&) const = default;
};

}  // namespace otfs
