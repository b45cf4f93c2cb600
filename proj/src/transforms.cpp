#include "otfs/transforms.hpp"

#include <cmath>
#include <numbers>

namespace otfs {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool is_pow2(Index n) { return n > 0 && (n & (n - 1)) == 0; }

// Iterative radix-2 Cooley-Tukey, unnormalized; caller applies 1/sqrt(N).
void fft_radix2(CVec& x, bool inverse) {
    const Index n = x.size();
    for (Index i = 1, j = 0; i < n; ++i) {
        Index bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(x[i], x[j]);
    }
    for (Index len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? 1.0 : -1.0) * kTwoPi / static_cast<double>(len);
        const Complex wlen(std::cos(ang), std::sin(ang));
        for (Index i = 0; i < n; i += len) {
            Complex w(1.0, 0.0);
            for (Index j = 0; j < len / 2; ++j) {
                const Complex u = x[i + j];
                const Complex v = x[i + j + len / 2] * w;
                x[i + j] = u + v;
                x[i + j + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

}  // namespace

CMat dft_matrix(int n) {
    if (n < 1) throw std::invalid_argument("dft_matrix: n must be >= 1");
    CMat f(n, n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            const double ang = -kTwoPi * static_cast<double>(i) * k / n;
            f(i, k) = scale * Complex(std::cos(ang), std::sin(ang));
        }
    return f;
}

void dft_inplace(CVec& v, bool inverse) {
    const Index n = v.size();
    if (n < 1) throw std::invalid_argument("dft_inplace: empty vector");
    if (n == 1) return;
    if (is_pow2(n)) {
        fft_radix2(v, inverse);
        v *= 1.0 / std::sqrt(static_cast<double>(n));
        return;
    }
    // General length: dense unitary DFT. Fine at oracle scale.
    CMat f = dft_matrix(static_cast<int>(n));
    v = inverse ? CVec(f.adjoint() * v) : CVec(f * v);
}

CVec dft(const CVec& v, bool inverse) {
    CVec out = v;
    dft_inplace(out, inverse);
    return out;
}

CMat dd_to_dt(const CMat& X) {
    CMat Xt(X.rows(), X.cols());
    CVec row(X.cols());
    for (Index m = 0; m < X.rows(); ++m) {
        row = X.row(m).transpose();
        dft_inplace(row, true);
        Xt.row(m) = row.transpose();
    }
    return Xt;
}

CMat dt_to_dd(const CMat& Xt) {
    CMat X(Xt.rows(), Xt.cols());
    CVec row(Xt.cols());
    for (Index m = 0; m < Xt.rows(); ++m) {
        row = Xt.row(m).transpose();
        dft_inplace(row, false);
        X.row(m) = row.transpose();
    }
    return X;
}

CVec dt_to_time(const CMat& Xt) {
    return Xt.reshaped();  // column-major vec: s(m + n M) = Xt(m, n)
}

CMat time_to_dt(const CVec& s, int M, int N) {
    if (s.size() != static_cast<Index>(M) * N)
        throw std::invalid_argument("time_to_dt: vector length must be M*N");
    return s.reshaped(M, N);
}

CVec stack_rows(const CMat& X) {
    return X.transpose().reshaped();  // row m occupies [mN, (m+1)N)
}

CMat unstack_rows(const CVec& x, int M, int N) {
    if (x.size() != static_cast<Index>(M) * N)
        throw std::invalid_argument("unstack_rows: vector length must be M*N");
    return x.reshaped(N, M).transpose();
}

std::vector<Index> perfect_shuffle(int M, int N) {
    if (M < 1 || N < 1) throw std::invalid_argument("perfect_shuffle: M, N must be >= 1");
    std::vector<Index> src(static_cast<std::size_t>(M) * N);
    for (Index n = 0; n < N; ++n)
        for (Index m = 0; m < M; ++m)
            src[static_cast<std::size_t>(n * M + m)] = m * N + n;
    return src;
}

CMat perfect_shuffle_dense(int M, int N) {
    const auto src = perfect_shuffle(M, N);
    CMat P = CMat::Zero(static_cast<Index>(M) * N, static_cast<Index>(M) * N);
    for (Index i = 0; i < P.rows(); ++i) P(i, src[static_cast<std::size_t>(i)]) = 1.0;
    return P;
}

CMat isfft(const CMat& X) {
    const Index M = X.rows(), N = X.cols();
    CMat out(M, N);
    CVec col(M);
    for (Index n = 0; n < N; ++n) {  // F_M applied to each column
        col = X.col(n);
        dft_inplace(col, false);
        out.col(n) = col;
    }
    CVec row(N);
    for (Index m = 0; m < M; ++m) {  // * F_N^dag: inverse DFT along rows
        row = out.row(m).transpose();
        dft_inplace(row, true);
        out.row(m) = row.transpose();
    }
    return out;
}

CMat sfft(const CMat& Xtf) {
    const Index M = Xtf.rows(), N = Xtf.cols();
    CMat out(M, N);
    CVec col(M);
    for (Index n = 0; n < N; ++n) {
        col = Xtf.col(n);
        dft_inplace(col, true);
        out.col(n) = col;
    }
    CVec row(N);
    for (Index m = 0; m < M; ++m) {
        row = out.row(m).transpose();
        dft_inplace(row, false);
        out.row(m) = row.transpose();
    }
    return out;
}

}  // namespace otfs
