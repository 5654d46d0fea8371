#pragma once

#include "wrhss/eig.hpp"
#include "wrhss/threading.hpp"
#include "wrhss/waveform.hpp"

namespace wrhss {

/// sigma(alpha) = max over lambda in the spectrum of H of |(a-l)/(a+l)|.
/// The ratio is quasiconvex in lambda, so the extremes suffice.
inline double sigma_upper_bound(double alpha, double lmin, double lmax) {
    require(alpha > 0.0, "sigma_upper_bound: alpha must be positive");
    require(lmin > 0.0 && lmax >= lmin, "sigma_upper_bound: eigenvalue bounds must be positive");
    const double a = std::abs((alpha - lmin) / (alpha + lmin));
    const double b = std::abs((alpha - lmax) / (alpha + lmax));
    return std::max(a, b);
}

inline double sigma_upper_bound(double alpha, std::span<const double> lambdas) {
    require(!lambdas.empty(), "sigma_upper_bound: empty spectrum");
    double lmin = lambdas[0], lmax = lambdas[0];
    for (double l : lambdas) {
        require(l > 0.0, "sigma_upper_bound: eigenvalues must be positive");
        lmin = std::min(lmin, l);
        lmax = std::max(lmax, l);
    }
    return sigma_upper_bound(alpha, lmin, lmax);
}

struct OptimalAlpha {
    double alpha_star;
    double sigma_star;
};

/// alpha* = sqrt(gmin gmax), sigma(alpha*) = (sqrt(kappa)-1)/(sqrt(kappa)+1).
inline OptimalAlpha optimal_alpha(double gmin, double gmax) {
    require(gmin > 0.0 && gmax >= gmin, "optimal_alpha: need 0 < gmin <= gmax");
    const double a = std::sqrt(gmin * gmax);
    const double sk = std::sqrt(gmax / gmin);
    return {a, (sk - 1.0) / (sk + 1.0)};
}

enum class FreqScheme { wrhss, bad };

namespace detail {

inline DenseCMatrix dense_grid(const GridOperator& op) {
    return DenseCMatrix::from_operator(
        op.order(), [&op](std::span<const Complex> in, std::span<Complex> out) {
            op.matvec(in, out);
        });
}

inline DenseCMatrix shifted(const DenseCMatrix& m, Complex shift, double sign) {
    // shift I + sign * m
    DenseCMatrix out = m;
    for (Complex& v : out.a) v *= sign;
    for (long i = 0; i < out.m; ++i) out.at(i, i) += shift;
    return out;
}

}  // namespace detail

/// Frequency-domain iteration matrix at frequency omega.
///   wrhss: (aI + i w B + S)^{-1} (aI + H)^{-1} (aI - H)(aI - i w B - S)
///   bad:   (aI + i w B + H)^{-1} (aI - S)(aI + S)^{-1} (aI - i w B - H)
/// Dense LU solves throughout; nothing is inverted explicitly.
inline DenseCMatrix freq_iteration_matrix(const DiscreteProblem& p, double omega, double alpha,
                                          FreqScheme scheme = FreqScheme::wrhss) {
    require(alpha > 0.0, "freq_iteration_matrix: alpha must be positive");
    require(p.r <= 2048, "freq_iteration_matrix: dense analysis limited to n^d <= 2048");
    DenseCMatrix h = detail::dense_grid(p.h_op);
    DenseCMatrix s = detail::dense_grid(p.s_op);
    const Complex iwb(0.0, omega * p.bscale);  // i w B with B = h^2 I

    if (scheme == FreqScheme::wrhss) {
        // S~ = i w B + S
        DenseCMatrix t = detail::shifted(s, Complex(alpha, 0) - iwb, -1.0);  // aI - i w B - S
        DenseCMatrix num = detail::shifted(h, Complex(alpha, 0), -1.0) * t;  // (aI - H)(...)
        DenseCMatrix k = DenseLU(detail::shifted(h, Complex(alpha, 0), 1.0)).solve(num);
        return DenseLU(detail::shifted(s, Complex(alpha, 0) + iwb, 1.0)).solve(k);
    }
    DenseCMatrix t = detail::shifted(h, Complex(alpha, 0) - iwb, -1.0);      // aI - i w B - H
    DenseCMatrix u = DenseLU(detail::shifted(s, Complex(alpha, 0), 1.0)).solve(t);
    DenseCMatrix num = detail::shifted(s, Complex(alpha, 0), -1.0) * u;      // (aI - S)(...)
    return DenseLU(detail::shifted(h, Complex(alpha, 0) + iwb, 1.0)).solve(num);
}

/// One row of figure-ready scan data; absent axes are NaN.
struct ScanPoint {
    double omega = std::numeric_limits<double>::quiet_NaN();
    double alpha = std::numeric_limits<double>::quiet_NaN();
    double q = std::numeric_limits<double>::quiet_NaN();
    double rho = std::numeric_limits<double>::quiet_NaN();
    double sigma = std::numeric_limits<double>::quiet_NaN();
    bool ok = true;
};

struct SpectralScan {
    std::vector<ScanPoint> points;
    long n = 0;
    double q = std::numeric_limits<double>::quiet_NaN();
    double omega_c = std::numeric_limits<double>::quiet_NaN();
    long failed = 0;
};

struct OmegaSweepResult {
    double rho_min = 0.0;
    double rho_max = 0.0;
    SpectralScan scan;
};

/// rho(K~(w, a)) over a symmetric frequency grid on [-omega_c, omega_c].
/// Real problem data gives conjugate spectra at +-w, so only w >= 0 is
/// evaluated and the rest mirrored. Eigensolver failures flag the point and
/// the sweep continues.
inline OmegaSweepResult omega_sweep(const DiscreteProblem& p, double alpha, double omega_c,
                                    long grid_points, int threads = 1,
                                    FreqScheme scheme = FreqScheme::wrhss) {
    require(omega_c > 0.0, "omega_sweep: omega_c must be positive");
    require(grid_points >= 2, "omega_sweep: need at least two grid points");
    OmegaSweepResult out;
    out.scan.n = p.n;
    out.scan.q = p.q;
    out.scan.omega_c = omega_c;
    out.scan.points.resize(grid_points);
    const double step = 2.0 * omega_c / static_cast<double>(grid_points - 1);
    const double sigma = sigma_upper_bound(alpha, p.lambda_min_H(), p.lambda_max_H());

    // indices with omega >= 0; mirrored afterwards
    std::vector<long> work;
    for (long i = 0; i < grid_points; ++i) {
        const double w = -omega_c + step * static_cast<double>(i);
        if (w >= 0.0 || 2 * i == grid_points - 1) work.push_back(i);
    }
    parallel_for(static_cast<long>(work.size()), threads, [&](long wi) {
        const long i = work[wi];
        ScanPoint& pt = out.scan.points[i];
        pt.omega = -omega_c + step * static_cast<double>(i);
        pt.alpha = alpha;
        pt.q = p.q;
        pt.sigma = sigma;
        try {
            pt.rho = spectral_radius(freq_iteration_matrix(p, pt.omega, alpha, scheme));
        } catch (const std::exception&) {
            pt.ok = false;
        }
    });
    for (long i = 0; i < grid_points; ++i) {
        const long mirror = grid_points - 1 - i;
        ScanPoint& pt = out.scan.points[i];
        const double w = -omega_c + step * static_cast<double>(i);
        if (w < 0.0 && 2 * i != grid_points - 1) {
            pt = out.scan.points[mirror];
            pt.omega = w;
        }
    }
    out.rho_min = std::numeric_limits<double>::infinity();
    out.rho_max = 0.0;
    for (const ScanPoint& pt : out.scan.points) {
        if (!pt.ok) {
            ++out.scan.failed;
            continue;
        }
        out.rho_min = std::min(out.rho_min, pt.rho);
        out.rho_max = std::max(out.rho_max, pt.rho);
    }
    return out;
}

/// rho and sigma on the alpha x omega product grid (figure surfaces).
inline SpectralScan surface_scan(const DiscreteProblem& p, std::span<const double> alpha_grid,
                                 std::span<const double> omega_grid, int threads = 1) {
    require(!alpha_grid.empty() && !omega_grid.empty(), "surface_scan: empty grid");
    SpectralScan scan;
    scan.n = p.n;
    scan.q = p.q;
    const long na = static_cast<long>(alpha_grid.size());
    const long nw = static_cast<long>(omega_grid.size());
    scan.points.resize(na * nw);
    const double lmin = p.lambda_min_H(), lmax = p.lambda_max_H();
    parallel_for(na * nw, threads, [&](long idx) {
        const long ia = idx / nw, iw = idx % nw;
        ScanPoint& pt = scan.points[idx];
        pt.alpha = alpha_grid[ia];
        pt.omega = omega_grid[iw];
        pt.q = p.q;
        pt.sigma = sigma_upper_bound(pt.alpha, lmin, lmax);
        try {
            pt.rho = spectral_radius(freq_iteration_matrix(p, pt.omega, pt.alpha));
        } catch (const std::exception&) {
            pt.ok = false;
        }
    });
    for (const ScanPoint& pt : scan.points)
        if (!pt.ok) ++scan.failed;
    return scan;
}

/// rho(K) = sup over the frequency grid and sigma(alpha) against the mesh
/// Reynolds number, with alpha = q h / 2 at every point (figure curves).
inline SpectralScan reynolds_curve(const ProblemSpec& base, std::span<const double> q_grid,
                                   double omega_c, long omega_points, int threads = 1) {
    require(!q_grid.empty(), "reynolds_curve: empty grid");
    SpectralScan scan;
    scan.n = base.n;
    scan.omega_c = omega_c;
    scan.points.resize(q_grid.size());
    for (std::size_t i = 0; i < q_grid.size(); ++i) {
        ProblemSpec s = base;
        s.q = q_grid[i];
        DiscreteProblem p = build_problem(s);
        const double alpha = p.alpha_default();
        ScanPoint& pt = scan.points[i];
        pt.q = q_grid[i];
        pt.alpha = alpha;
        pt.sigma = sigma_upper_bound(alpha, p.lambda_min_H(), p.lambda_max_H());
        OmegaSweepResult sweep = omega_sweep(p, alpha, omega_c, omega_points, threads);
        if (sweep.scan.failed > 0) pt.ok = false;
        pt.rho = sweep.rho_max;
    }
    for (const ScanPoint& pt : scan.points)
        if (!pt.ok) ++scan.failed;
    return scan;
}

/// Bound for the bad splitting: max |(a - l_j(w)) / (a + l_j(w))| over the
/// eigenvalues of i w B + H. B = h^2 I commutes with H, so the eigenvalues
/// are i w h^2 + lambda(H) in closed form.
inline double bad_bound_sigma_hat(const DiscreteProblem& p, double alpha, double omega) {
    require(alpha > 0.0, "bad_bound_sigma_hat: alpha must be positive");
    const Complex shift(0.0, omega * p.bscale);
    double best = 0.0;
    for (double l : p.h_eigenvalues()) {
        const Complex lam = Complex(l, 0) + shift;
        best = std::max(best, std::abs((alpha - lam) / (alpha + lam)));
    }
    return best;
}

struct TripleNorms {
    double time_norm;
    double freq_norm;
};

/// Finite-dimensional surrogate of the norm equivalence between
/// |||v|||_t = ||(aI + B d/dt + S) v|| and |||v~|||_w = ||(aI + i w B + S) v~||.
/// The time side uses a forward difference, the frequency side the exact
/// i w symbol on the discrete Fourier transform, so the two agree up to
/// O(dt) for smooth compactly supported waveforms.
inline TripleNorms triple_norm_check(const DiscreteProblem& p, const Waveform& v, double alpha) {
    const long n = v.ell() + 1;  // sample count
    const long r = v.r();
    require(r == p.r, "triple_norm_check: dimension mismatch");
    const double dt = v.dt;
    CVector sv(r), w(r);

    double time_acc = 0.0;
    for (long j = 0; j < n; ++j) {
        p.apply_S(v.levels[j], sv);
        for (long i = 0; i < r; ++i) {
            const Complex next = (j + 1 < n) ? v.levels[j + 1][i] : Complex(0, 0);
            w[i] = alpha * v.levels[j][i] + sv[i] +
                   (p.bscale / dt) * (next - v.levels[j][i]);
        }
        for (long i = 0; i < r; ++i) time_acc += std::norm(w[i]);
    }

    // unitary DFT across levels, per state component
    std::vector<CVector> vt(n, CVector(r));
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (long k = 0; k < n; ++k) {
        for (long j = 0; j < n; ++j) {
            const long t = (j * k) % n;
            const Complex e = std::polar(scale, -2.0 * M_PI * static_cast<double>(t) /
                                                    static_cast<double>(n));
            for (long i = 0; i < r; ++i) vt[k][i] += e * v.levels[j][i];
        }
    }
    double freq_acc = 0.0;
    for (long k = 0; k < n; ++k) {
        const double kk = (2 * k <= n) ? static_cast<double>(k) : static_cast<double>(k - n);
        const double omega = 2.0 * M_PI * kk / (static_cast<double>(n) * dt);
        p.apply_S(vt[k], sv);
        for (long i = 0; i < r; ++i)
            w[i] = Complex(alpha, omega * p.bscale) * vt[k][i] + sv[i];
        for (long i = 0; i < r; ++i) freq_acc += std::norm(w[i]);
    }
    return {std::sqrt(dt * time_acc), std::sqrt(dt * freq_acc)};
}

}  // namespace wrhss
