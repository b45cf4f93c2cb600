#pragma once

#include "otfs/types.hpp"

#include <vector>

namespace otfs {

// Unitary DFT conventions used everywhere in this library:
//   F_N(i,k) = exp(-j 2 pi i k / N) / sqrt(N)
// so forward and inverse transforms both carry the 1/sqrt(N) factor and
// norms are preserved. Many FFT packages return unnormalized transforms;
// keep all scaling behind these wrappers.

// Dense unitary DFT matrix (oracle-scale use only).
CMat dft_matrix(int n);

// In-place unitary DFT of v. Radix-2 when the length is a power of two,
// dense O(n^2) otherwise; both honor the same normalization.
void dft_inplace(CVec& v, bool inverse);
CVec dft(const CVec& v, bool inverse);

// Delay-Doppler <-> delay-time: per-row length-N (I)DFT of the M x N grid.
// Xt = X * F_N^dag  (each row x_m becomes xt_m = F_N^dag x_m).
CMat dd_to_dt(const CMat& X);
CMat dt_to_dd(const CMat& Xt);

// Delay-time <-> time: pure index shuffle, s(m + n M) = Xt(m, n). With
// column-major storage this is exactly vec(Xt).
CVec dt_to_time(const CMat& Xt);
CMat time_to_dt(const CVec& s, int M, int N);

// Stacking helpers between the M x N grid and the length-NM vector of M
// stacked length-N row vectors (the delay-Doppler / delay-time stacking
// x = [x_0^T ... x_{M-1}^T]^T).
CVec stack_rows(const CMat& X);
CMat unstack_rows(const CVec& x, int M, int N);

// Perfect shuffle P with s = P * xt_stacked: entry (nM + m, mN + n) = 1.
// Returned as the index map src such that s(i) = xt_stacked(src[i]);
// the dense form exists for the oracle module only.
std::vector<Index> perfect_shuffle(int M, int N);
CMat perfect_shuffle_dense(int M, int N);

// ISFFT / SFFT: Xtf = F_M * X * F_N^dag and its inverse. Unitary two-sided
// transform between the delay-Doppler and time-frequency grids.
CMat isfft(const CMat& X);
CMat sfft(const CMat& Xtf);

}  // namespace otfs
