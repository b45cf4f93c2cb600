#pragma once

#include "otfs/channel.hpp"
#include "otfs/types.hpp"

#include <string>
#include <vector>

namespace otfs {

// Dense oracle: explicit channel matrices in all three domains. Desk scale
// only (NM capped); every block is stored, including the zero ones.
//   H    delay-Doppler, block (m, m-l) = K_{m,l} = circ[nu_dd(m,l)]
//   H_dt delay-time,    block (m, m-l) = diag(nu_t(m,l))
//   G    time domain,   G = P * H_dt * P^T, block diagonal with N blocks
//        G_n of bandwidth l_max + 1.
struct DenseChannelMatrices {
    FrameDims dims;
    CMat H;
    CMat H_dt;
    CMat G;
    std::vector<CMat> G_blocks;
};

inline constexpr Index kOracleSizeCap = 4096;

DenseChannelMatrices assemble(const DopplerSpreadSet& spread);

// circ[v]: first column v, entry (i,j) = v((i-j) mod N).
CMat circulant(const CVec& first_column);

// Largest |eigenvalue|. Full eigendecomposition below 256, power iteration
// above; 1e-6 relative accuracy. Throws if the power iteration stalls.
double spectral_radius(const CMat& A);

// Per-block normal equations and the classical iteration matrices of the
// time-domain detectors: R_n = D_n + L_n + L_n^dag. Guard entries of s_n
// are known zeros, so the system the detectors iterate is the reduced one
// over the M' data rows; R_n, z_n and the iteration matrices are M' x M'
// (the guard columns of the full normal matrix would make it singular for
// every channel whose shortest tap exceeds zero). G stays full for
// residual evaluation.
struct IterationBlock {
    CMat G;        // G_n, full M x M
    CMat R;        // reduced normal matrix, M' x M'
    CVec z;        // reduced matched-filter output
    RVec diag;     // D_n (real: R is Hermitian)
    CMat lower;    // L_n, strictly lower triangular part of R
    CMat t_jacobi; // D^-1 (L + L^dag)
    CMat t_gs;     // (D + L)^-1 L^dag
    CMat q_gs;     // (D + L)^-1
};

struct IterationMatrices {
    FrameDims dims;
    std::vector<IterationBlock> blocks;
};

IterationMatrices build_iteration_matrices(const DenseChannelMatrices& mats, const CVec& r);

// SOR iteration matrix T_omega = (D + w L)^-1 ((w-1) D + w L^dag) and its
// gain Q_omega = w (D + w L)^-1 (the w-scaling keeps the fixed point at
// R s = z). T_omega at w = 1 equals t_gs entrywise.
CMat sor_iteration_matrix(const IterationBlock& blk, double omega);
CMat sor_gain_matrix(const IterationBlock& blk, double omega);

// Non-iterative least-squares reference the detectors must converge to:
// per block, solve the reduced M' x M' normal equations (guard rows are
// known zeros), then map back to the delay-Doppler grid. Throws naming the
// offending block when one is numerically singular (smallest singular
// value < 1e-10 times the largest).
CMat direct_solve(const DenseChannelMatrices& mats, const CVec& r);

// Plain text matrix dump: "rows cols" header then row-major "re im" pairs.
void dump_matrix(const CMat& A, const std::string& path);
CMat load_matrix(const std::string& path);

}  // namespace otfs
