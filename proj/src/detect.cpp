#include "otfs/detect.hpp"

#include "otfs/transforms.hpp"

#include <cmath>

namespace otfs {

namespace {

int ilog2_or_square(Index n) {
    // Transform multiply model: N log2 N for power-of-two lengths (the
    // radix-2 accounting used throughout), dense N^2 otherwise.
    if (n > 0 && (n & (n - 1)) == 0) {
        int b = 0;
        while ((Index{1} << b) < n) ++b;
        return b;
    }
    return static_cast<int>(n);
}

CMat initial_state(const std::optional<CMat>& provided, const DetectorConfig& cfg, const CVec& r,
                   const DopplerSpreadSet& spread) {
    const FrameDims& dims = spread.dims;
    CMat Xt;
    if (provided) {
        if (provided->rows() != dims.M || provided->cols() != dims.N)
            throw std::invalid_argument("detector: initial state must be M x N");
        Xt = *provided;
    } else if (cfg.initializer == Initializer::tf_mmse) {
        Xt = tf_mmse_init(r, spread, cfg.noise_variance);
    } else {
        Xt = CMat::Zero(dims.M, dims.N);
    }
    for (int m = dims.data_rows(); m < dims.M; ++m) Xt.row(m).setZero();
    return Xt;
}

// Shared exit logic: records the post-sweep residual and reports whether
// the iteration loop should stop.
bool record_and_check_stop(std::vector<double>& history, double res, double y_norm,
                           const DetectorConfig& cfg) {
    const double prev = history.back();
    history.push_back(res);
    if (cfg.tolerance > 0.0 && res <= cfg.tolerance * y_norm) return true;
    if (cfg.stop_on_residual_increase && res >= prev) return true;
    return false;
}

}  // namespace

void DetectorConfig::validate() const {
    if (max_iterations < 1)
        throw std::invalid_argument("DetectorConfig: max_iterations must be >= 1");
    if (!(omega > 0.0 && omega < 2.0))
        throw std::invalid_argument("DetectorConfig: omega must lie in (0, 2)");
    if (tolerance < 0.0) throw std::invalid_argument("DetectorConfig: tolerance must be >= 0");
    if (noise_variance < 0.0)
        throw std::invalid_argument("DetectorConfig: noise_variance must be >= 0");
}

CMat tf_mmse_init(const CVec& r, const DopplerSpreadSet& spread, double noise_variance) {
    const FrameDims& dims = spread.dims;
    if (r.size() != dims.samples())
        throw std::invalid_argument("tf_mmse_init: r must have N*M samples");
    const int M = dims.M, N = dims.N;

    const CMat Yt = time_to_dt(r, M, N);

    // Ideal-pulse channel rows: row l of Hdd_t is nu_t(l,l) for l in L.
    CMat Hdd_t = CMat::Zero(M, N);
    for (std::size_t t = 0; t < spread.taps.size(); ++t) {
        const int l = spread.taps[t];
        Hdd_t.row(l) = spread.nu_time[t].col(l).transpose();
    }

    // Column-wise F_M; sqrt(M) restores the 2-D convolution-theorem scale
    // so a flat channel yields H_tf == 1 on every bin.
    CMat Htf(M, N), Ytf(M, N);
    CVec col(M);
    const double root_m = std::sqrt(static_cast<double>(M));
    for (int n = 0; n < N; ++n) {
        col = Hdd_t.col(n);
        dft_inplace(col, false);
        Htf.col(n) = root_m * col;
        col = Yt.col(n);
        dft_inplace(col, false);
        Ytf.col(n) = col;
    }

    CMat Xtf(M, N);
    for (int p = 0; p < M; ++p)
        for (int n = 0; n < N; ++n) {
            const double denom = std::norm(Htf(p, n)) + noise_variance;
            Xtf(p, n) = denom > 0.0 ? Complex(std::conj(Htf(p, n)) * Ytf(p, n) / denom) : Complex(0.0);
        }

    CMat Xt(M, N);
    for (int n = 0; n < N; ++n) {
        col = Xtf.col(n);
        dft_inplace(col, true);
        Xt.col(n) = col;
    }
    for (int m = dims.data_rows(); m < M; ++m) Xt.row(m).setZero();
    return Xt;
}

DetectorOutput detect_mrc_dt(const CMat& Yt, const DopplerSpreadSet& spread,
                             const DetectorConfig& cfg, const QamConstellation& c,
                             const std::optional<CMat>& initial_state_dt) {
    cfg.validate();
    const FrameDims& dims = spread.dims;
    if (Yt.rows() != dims.M || Yt.cols() != dims.N)
        throw std::invalid_argument("detect_mrc_dt: Yt must be M x N");
    const int M = dims.M, N = dims.N, Mp = dims.data_rows();
    const int L = spread.tap_count();
    const int logn = ilog2_or_square(N);
    const bool hard = cfg.decision == Decision::hard;

    DetectorOutput out;
    CMat Xt = initial_state(initial_state_dt, cfg, dt_to_time(Yt), spread);
    CMat Xhat_dd = hard ? CMat(dt_to_dd(Xt)) : CMat();  // tracked hard symbols
    if (hard)
        for (int m = Mp; m < M; ++m) Xhat_dd.row(m).setZero();

    // Initial RNPI, Dy_m = yt_m - sum_l nu_t(m,l) o xt_{m-l}.
    CMat Dy = Yt;
    for (int m = 0; m < M; ++m)
        for (int t = 0; t < L; ++t) {
            const int src = m - spread.taps[t];
            if (src < 0 || src >= Mp) continue;
            if (Xt.row(src).isZero(0.0)) continue;
            Dy.row(m) -= spread.nu_time[static_cast<std::size_t>(t)].col(m).transpose().cwiseProduct(
                Xt.row(src));
            out.ops.init += N;
        }

    const double y_norm = Yt.norm();
    out.residual_history.push_back(Dy.norm());
    out.soft = CMat::Zero(Mp, N);
    CMat soft_dt = Xt.topRows(Mp);  // c~ rows; pre-iteration value is the init

    CVec dg(N), ct(N), cdd(N), diff(N), xnew(N);
    for (int it = 1; it <= cfg.max_iterations; ++it) {
        for (int m = 0; m < Mp; ++m) {
            // Delta g~_m = sum_l nu_t(m+l,l)* o Dy_{m+l}
            dg.setZero();
            for (int t = 0; t < L; ++t) {
                const int row = m + spread.taps[t];
                dg += spread.nu_time[static_cast<std::size_t>(t)]
                          .col(row)
                          .conjugate()
                          .cwiseProduct(Dy.row(row).transpose());
            }
            out.ops.core_per_iteration += static_cast<long long>(N) * L;

            // c~ = x~ + w (Delta g~ / d~); guarded elementwise division.
            for (int n = 0; n < N; ++n) {
                const double d = spread.mrc_gain(n, m);
                if (d < kDivisionGuard) {
                    ct[n] = Xt(m, n);
                    ++out.guard_skips;
                } else {
                    ct[n] = Xt(m, n) + cfg.omega * dg[n] / d;
                }
            }
            out.ops.core_per_iteration += N;
            soft_dt.row(m) = ct.transpose();

            if (hard) {
                cdd = ct;
                dft_inplace(cdd, false);
                for (int n = 0; n < N; ++n) cdd[n] = slice(cdd[n], c).symbol;
                Xhat_dd.row(m) = cdd.transpose();
                xnew = cdd;
                dft_inplace(xnew, true);
                out.ops.transform_per_iteration += 2LL * N * logn;
            } else {
                xnew = ct;
            }

            diff = xnew - Xt.row(m).transpose();
            Xt.row(m) = xnew.transpose();

            // In-place RNPI update for the L branches touched by row m.
            for (int t = 0; t < L; ++t) {
                const int row = m + spread.taps[t];
                Dy.row(row) -= spread.nu_time[static_cast<std::size_t>(t)]
                                   .col(row)
                                   .cwiseProduct(diff)
                                   .transpose();
            }
            out.ops.core_per_iteration += static_cast<long long>(N) * L;
        }
        out.iterations_used = it;
        if (cfg.record_state_history) out.state_history.push_back(Xt);
        if (record_and_check_stop(out.residual_history, Dy.norm(), y_norm, cfg)) break;
    }
    // Counters accumulate across sweeps; report the per-iteration rate.
    out.ops.core_per_iteration /= out.iterations_used;
    out.ops.transform_per_iteration /= out.iterations_used;

    out.soft = dt_to_dd(soft_dt);
    out.x_hat = hard ? Xhat_dd : CMat(CMat::Zero(M, N));
    if (!hard) out.x_hat.topRows(Mp) = out.soft;
    out.rnpi_dt = Dy;
    return out;
}

DetectorOutput detect_mrc_dd(const CMat& Y, const DopplerSpreadSet& spread,
                             const DetectorConfig& cfg, const QamConstellation& c,
                             const std::optional<CMat>& initial_state_dt) {
    cfg.validate();
    const FrameDims& dims = spread.dims;
    if (Y.rows() != dims.M || Y.cols() != dims.N)
        throw std::invalid_argument("detect_mrc_dd: Y must be M x N");
    const int M = dims.M, N = dims.N, Mp = dims.data_rows();
    const int L = spread.tap_count();
    const bool hard = cfg.decision == Decision::hard;

    // Dense circulant blocks K_{m,l}; this detector is the readable
    // reference and works on the delay-Doppler matrices directly.
    std::vector<std::vector<CMat>> K(static_cast<std::size_t>(L));
    for (int t = 0; t < L; ++t) {
        K[static_cast<std::size_t>(t)].reserve(static_cast<std::size_t>(M));
        for (int m = 0; m < M; ++m)
            K[static_cast<std::size_t>(t)].push_back(
                circulant(spread.nu_dd[static_cast<std::size_t>(t)].col(m)));
    }

    DetectorOutput out;
    const CMat Yt = dd_to_dt(Y);
    CMat Xt = initial_state(initial_state_dt, cfg, dt_to_time(Yt), spread);
    CMat Xdd = dt_to_dd(Xt);
    for (int m = Mp; m < M; ++m) Xdd.row(m).setZero();

    const double y_norm = Y.norm();
    const auto residual_norm = [&]() {
        double acc = 0.0;
        CVec dy(N);
        for (int m = 0; m < M; ++m) {
            dy = Y.row(m).transpose();
            for (int t = 0; t < L; ++t) {
                const int src = m - spread.taps[t];
                if (src < 0 || src >= Mp) continue;
                dy -= K[static_cast<std::size_t>(t)][static_cast<std::size_t>(m)] *
                      Xdd.row(src).transpose();
            }
            acc += dy.squaredNorm();
        }
        return std::sqrt(acc);
    };

    out.residual_history.push_back(residual_norm());
    out.soft = CMat::Zero(Mp, N);

    CVec b(N), g(N), gt(N), xt_old(N), ct(N), cdd(N);
    for (int it = 1; it <= cfg.max_iterations; ++it) {
        for (int m = 0; m < Mp; ++m) {
            // Branch estimates b_m^l and their maximal ratio combination.
            g.setZero();
            for (int tl = 0; tl < L; ++tl) {
                const int l = spread.taps[tl];
                b = Y.row(m + l).transpose();
                for (int tp = 0; tp < L; ++tp) {
                    if (tp == tl) continue;
                    const int p = spread.taps[tp];
                    const int src = m + l - p;
                    if (src < 0 || src >= Mp) continue;
                    b -= K[static_cast<std::size_t>(tp)][static_cast<std::size_t>(m + l)] *
                         Xdd.row(src).transpose();
                    out.ops.core_per_iteration += static_cast<long long>(N) * N;
                }
                g += K[static_cast<std::size_t>(tl)][static_cast<std::size_t>(m + l)].adjoint() * b;
                out.ops.core_per_iteration += static_cast<long long>(N) * N;
            }

            // c_m = D_m^-1 g_m through the Fourier eigenvalues of the
            // circulant D_m (same guard semantics as the delay-time path).
            gt = g;
            dft_inplace(gt, true);
            xt_old = Xt.row(m).transpose();
            for (int n = 0; n < N; ++n) {
                const double d = spread.mrc_gain(n, m);
                if (d < kDivisionGuard) {
                    ct[n] = xt_old[n];
                    ++out.guard_skips;
                } else {
                    ct[n] = xt_old[n] + cfg.omega * (gt[n] - d * xt_old[n]) / d;
                }
            }
            cdd = ct;
            dft_inplace(cdd, false);
            out.soft.row(m) = cdd.transpose();

            if (hard) {
                for (int n = 0; n < N; ++n) cdd[n] = slice(cdd[n], c).symbol;
            }
            Xdd.row(m) = cdd.transpose();
            ct = cdd;
            dft_inplace(ct, true);
            Xt.row(m) = ct.transpose();
        }
        out.iterations_used = it;
        if (cfg.record_state_history) out.state_history.push_back(Xt);
        if (record_and_check_stop(out.residual_history, residual_norm(), y_norm, cfg)) break;
    }
    out.ops.core_per_iteration /= out.iterations_used;

    out.x_hat = Xdd;
    out.rnpi_dt = dd_to_dt(Y);  // final residual, for parity with the fast path
    {
        CMat recon = CMat::Zero(M, N);
        for (int m = 0; m < M; ++m)
            for (int t = 0; t < L; ++t) {
                const int src = m - spread.taps[t];
                if (src < 0 || src >= Mp) continue;
                recon.row(m) += spread.nu_time[static_cast<std::size_t>(t)]
                                    .col(m)
                                    .transpose()
                                    .cwiseProduct(Xt.row(src));
            }
        out.rnpi_dt -= recon;
    }
    return out;
}

namespace {

DetectorOutput time_domain_iterate(const CVec& r, const IterationMatrices& iter,
                                   const DetectorConfig& cfg, const QamConstellation& c,
                                   const std::optional<CMat>& initial_state_dt, bool sequential) {
    cfg.validate();
    const FrameDims& dims = iter.dims;
    if (r.size() != dims.samples())
        throw std::invalid_argument("time-domain detector: r must have N*M samples");
    const int M = dims.M, N = dims.N, Mp = dims.data_rows();

    // State S is the delay-time grid: column n is the time block s_n.
    CMat S = CMat::Zero(M, N);
    if (initial_state_dt) {
        if (initial_state_dt->rows() != M || initial_state_dt->cols() != N)
            throw std::invalid_argument("time-domain detector: initial state must be M x N");
        S = *initial_state_dt;
        for (int m = Mp; m < M; ++m) S.row(m).setZero();
    } else if (cfg.initializer == Initializer::tf_mmse) {
        throw std::invalid_argument(
            "time-domain detector: tf_mmse initializer requires an explicit initial state");
    }

    DetectorOutput out;
    const double y_norm = r.norm();
    const auto residual_norm = [&]() {
        double acc = 0.0;
        for (int n = 0; n < N; ++n)
            acc += (r.segment(static_cast<Index>(n) * M, M) -
                    iter.blocks[static_cast<std::size_t>(n)].G * S.col(n))
                       .squaredNorm();
        return std::sqrt(acc);
    };
    out.residual_history.push_back(residual_norm());

    CVec col(M);
    for (int it = 1; it <= cfg.max_iterations; ++it) {
        if (sequential) {
            // Gauss-Seidel / SOR row sweep, guard rows pinned at zero.
            for (int m = 0; m < Mp; ++m)
                for (int n = 0; n < N; ++n) {
                    const auto& blk = iter.blocks[static_cast<std::size_t>(n)];
                    const double d = blk.diag[m];
                    if (d < kDivisionGuard) {
                        ++out.guard_skips;
                        continue;
                    }
                    const Complex resid = blk.z[m] - (blk.R.row(m) * S.col(n).head(Mp)).value();
                    S(m, n) += cfg.omega * resid / d;
                }
        } else {
            // Jacobi: whole sweep from the previous state.
            for (int n = 0; n < N; ++n) {
                const auto& blk = iter.blocks[static_cast<std::size_t>(n)];
                col = S.col(n);
                for (int m = 0; m < Mp; ++m) {
                    const double d = blk.diag[m];
                    if (d < kDivisionGuard) {
                        ++out.guard_skips;
                        continue;
                    }
                    const Complex resid = blk.z[m] - (blk.R.row(m) * S.col(n).head(Mp)).value();
                    col[m] = S(m, n) + cfg.omega * resid / d;
                }
                S.col(n) = col;
            }
        }
        out.iterations_used = it;
        if (cfg.record_state_history) out.state_history.push_back(S);
        if (record_and_check_stop(out.residual_history, residual_norm(), y_norm, cfg)) break;
    }

    const CMat Xdd = dt_to_dd(S);
    out.soft = Xdd.topRows(Mp);
    if (cfg.decision == Decision::hard) {
        out.x_hat = slice_frame(Xdd, c, dims);
    } else {
        out.x_hat = CMat::Zero(M, N);
        out.x_hat.topRows(Mp) = out.soft;
    }
    out.rnpi_dt = CMat(M, N);
    for (int n = 0; n < N; ++n)
        out.rnpi_dt.col(n) = r.segment(static_cast<Index>(n) * M, M) -
                             iter.blocks[static_cast<std::size_t>(n)].G * S.col(n);
    return out;
}

}  // namespace

DetectorOutput detect_gs_time(const CVec& r, const IterationMatrices& iter,
                              const DetectorConfig& cfg, const QamConstellation& c,
                              const std::optional<CMat>& initial_state_dt) {
    return time_domain_iterate(r, iter, cfg, c, initial_state_dt, /*sequential=*/true);
}

DetectorOutput detect_jacobi(const CVec& r, const IterationMatrices& iter,
                             const DetectorConfig& cfg, const QamConstellation& c,
                             const std::optional<CMat>& initial_state_dt) {
    return time_domain_iterate(r, iter, cfg, c, initial_state_dt, /*sequential=*/false);
}

OpPrediction count_ops(const DetectorConfig& cfg, const FrameDims& dims, int num_taps) {
    dims.validate();
    if (num_taps < 1) throw std::invalid_argument("count_ops: need at least one delay tap");
    OpPrediction p;
    const long long N = dims.N, Mp = dims.data_rows();
    p.core = N * Mp * (2LL * num_taps + 1);
    p.transforms =
        cfg.decision == Decision::hard ? 2LL * N * Mp * ilog2_or_square(dims.N) : 0;
    p.total = p.core + p.transforms;
    return p;
}

}  // namespace otfs
