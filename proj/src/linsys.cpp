#include "otfs/linsys.hpp"

#include "otfs/rng.hpp"
#include "otfs/transforms.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <fstream>
#include <iomanip>

namespace otfs {

CMat circulant(const CVec& v) {
    const Index n = v.size();
    CMat c(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) c(i, j) = v[((i - j) % n + n) % n];
    return c;
}

DenseChannelMatrices assemble(const DopplerSpreadSet& spread) {
    const FrameDims& dims = spread.dims;
    const Index NM = dims.samples();
    if (NM > kOracleSizeCap)
        throw std::invalid_argument(
            "assemble: N*M exceeds the oracle cap; use the delay-time detector fast path");
    const int M = dims.M, N = dims.N;

    DenseChannelMatrices out;
    out.dims = dims;
    out.H = CMat::Zero(NM, NM);
    out.H_dt = CMat::Zero(NM, NM);

    for (std::size_t t = 0; t < spread.taps.size(); ++t) {
        const int l = spread.taps[t];
        for (int m = l; m < M; ++m) {
            // block row m, block column m - l
            const Index r0 = static_cast<Index>(m) * N;
            const Index c0 = static_cast<Index>(m - l) * N;
            out.H.block(r0, c0, N, N) += circulant(spread.nu_dd[t].col(m));
            out.H_dt.block(r0, c0, N, N) +=
                CMat(spread.nu_time[t].col(m).asDiagonal());
        }
    }

    // G = P * H_dt * P^T as a pure index shuffle of entries.
    const auto src = perfect_shuffle(M, N);
    out.G = CMat::Zero(NM, NM);
    for (Index i = 0; i < NM; ++i)
        for (Index j = 0; j < NM; ++j)
            out.G(i, j) = out.H_dt(src[static_cast<std::size_t>(i)],
                                   src[static_cast<std::size_t>(j)]);

    out.G_blocks.reserve(static_cast<std::size_t>(N));
    for (int n = 0; n < N; ++n)
        out.G_blocks.push_back(out.G.block(static_cast<Index>(n) * M, static_cast<Index>(n) * M, M, M));
    return out;
}

double spectral_radius(const CMat& A) {
    if (A.rows() != A.cols()) throw std::invalid_argument("spectral_radius: matrix must be square");
    const Index n = A.rows();
    if (n == 0) return 0.0;
    if (n < 256) {
        Eigen::ComplexEigenSolver<CMat> es(A, /*computeEigenvectors=*/false);
        if (es.info() != Eigen::Success)
            throw std::runtime_error("spectral_radius: eigensolver failed");
        return es.eigenvalues().cwiseAbs().maxCoeff();
    }
    // Power iteration with a fixed seeded start; adequate for the audit
    // sizes this branch serves.
    SplitMix64 rng(0x5eedULL);
    CVec v(n);
    for (Index i = 0; i < n; ++i) v[i] = rng.cgaussian(1.0);
    v.normalize();
    double prev = 0.0;
    for (int it = 0; it < 20000; ++it) {
        CVec w = A * v;
        const double nw = w.norm();
        if (nw == 0.0) return 0.0;
        v = w / nw;
        if (it > 10 && std::abs(nw - prev) <= 1e-8 * std::max(1.0, nw)) return nw;
        prev = nw;
    }
    throw std::runtime_error("spectral_radius: power iteration did not converge");
}

IterationMatrices build_iteration_matrices(const DenseChannelMatrices& mats, const CVec& r) {
    const FrameDims& dims = mats.dims;
    if (r.size() != dims.samples())
        throw std::invalid_argument("build_iteration_matrices: r must have N*M samples");
    const int M = dims.M, N = dims.N;

    const int Mp = dims.data_rows();
    IterationMatrices out;
    out.dims = dims;
    out.blocks.reserve(static_cast<std::size_t>(N));
    for (int n = 0; n < N; ++n) {
        IterationBlock blk;
        blk.G = mats.G_blocks[static_cast<std::size_t>(n)];
        const CMat Gd = blk.G.leftCols(Mp);
        blk.R = Gd.adjoint() * Gd;
        blk.z = Gd.adjoint() * r.segment(static_cast<Index>(n) * M, M);
        blk.diag = blk.R.diagonal().real();
        blk.lower = blk.R.triangularView<Eigen::StrictlyLower>();
        const CMat D = blk.diag.cast<Complex>().asDiagonal();
        blk.t_jacobi = D.inverse() * (blk.lower + blk.lower.adjoint());
        const CMat DL = D + blk.lower;
        blk.q_gs = DL.inverse();
        blk.t_gs = blk.q_gs * blk.lower.adjoint();
        out.blocks.push_back(std::move(blk));
    }
    return out;
}

CMat sor_iteration_matrix(const IterationBlock& blk, double omega) {
    const CMat D = blk.diag.cast<Complex>().asDiagonal();
    const CMat A = D + omega * blk.lower;
    return A.inverse() * ((omega - 1.0) * D + omega * blk.lower.adjoint());
}

CMat sor_gain_matrix(const IterationBlock& blk, double omega) {
    const CMat D = blk.diag.cast<Complex>().asDiagonal();
    const CMat A = D + omega * blk.lower;
    return omega * A.inverse();
}

CMat direct_solve(const DenseChannelMatrices& mats, const CVec& r) {
    const FrameDims& dims = mats.dims;
    if (r.size() != dims.samples())
        throw std::invalid_argument("direct_solve: r must have N*M samples");
    const int M = dims.M, N = dims.N, Mp = dims.data_rows();

    CMat Xt = CMat::Zero(M, N);  // delay-time estimates, guard rows zero
    for (int n = 0; n < N; ++n) {
        // Reduced system: data columns only, guard entries are known zeros.
        const CMat Gd = mats.G_blocks[static_cast<std::size_t>(n)].leftCols(Mp);
        const CMat R = Gd.adjoint() * Gd;
        const Eigen::JacobiSVD<CMat> svd(R);
        const auto& sv = svd.singularValues();
        if (sv.size() == 0 || sv(0) <= 0.0 || sv(sv.size() - 1) < 1e-10 * sv(0))
            throw std::runtime_error("direct_solve: singular block n=" + std::to_string(n));
        const CVec z = Gd.adjoint() * r.segment(static_cast<Index>(n) * M, M);
        const CVec s = R.ldlt().solve(z);
        for (int m = 0; m < Mp; ++m) Xt(m, n) = s[m];
    }
    return dt_to_dd(Xt);
}

void dump_matrix(const CMat& A, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("dump_matrix: cannot open " + path);
    out << A.rows() << " " << A.cols() << "\n";
    out << std::setprecision(17);
    for (Index i = 0; i < A.rows(); ++i) {
        for (Index j = 0; j < A.cols(); ++j) {
            if (j) out << " ";
            out << A(i, j).real() << " " << A(i, j).imag();
        }
        out << "\n";
    }
}

CMat load_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_matrix: cannot open " + path);
    Index rows = 0, cols = 0;
    if (!(in >> rows >> cols) || rows < 0 || cols < 0)
        throw std::runtime_error("load_matrix: bad header in " + path);
    CMat A(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) {
            double re = 0.0, im = 0.0;
            if (!(in >> re >> im)) throw std::runtime_error("load_matrix: truncated " + path);
            A(i, j) = Complex(re, im);
        }
    return A;
}

}  // namespace otfs
