#pragma once

#include <optional>

#include "wrhss/kronecker.hpp"

namespace wrhss {

/// Operator assembled per axis: the tridiagonal itself in 1-D, the Kronecker
/// sum I (x) T + T (x) I in 2-D.
struct GridOperator {
    int d = 1;
    Tridiagonal axis;

    GridOperator() = default;
    GridOperator(int d_, Tridiagonal t) : d(d_), axis(std::move(t)) {
        require(d == 1 || d == 2, "GridOperator: dimension must be 1 or 2");
    }

    long order() const { return d == 1 ? axis.order() : axis.order() * axis.order(); }

    void matvec(std::span<const Complex> x, std::span<Complex> y) const {
        if (d == 1)
            tridiag_matvec(axis, x, y);
        else
            kronsum_matvec(axis, x, y);
    }

    CVector matvec(const CVector& x) const {
        CVector y(x.size());
        matvec(x, y);
        return y;
    }
};

/// Run configuration mirroring one experiment setting.
struct ProblemSpec {
    int d = 1;                   // spatial dimension, 1 or 2
    long n = 1;                  // interior grid points per axis
    double q = 0.0;              // convection coefficient
    double dt = 1.0;             // time step
    long levels_per_window = 1;  // levels per window
    long windows = 1;            // window count J
    std::optional<double> alpha; // HSS parameter; defaults to q h / 2
    double tau = 1.0;            // SOR parameter
    double epsilon = 1e-5;       // WR stopping tolerance per window
    double eta = 1e-8;           // GMRES tolerance per level
    long gmres_restart = 5;      // restart parameter m
    long cap = 7000;             // iteration cap per window

    void validate() const {
        require(d == 1 || d == 2, "ProblemSpec: d must be 1 or 2");
        require(n >= 1, "ProblemSpec: n must be at least 1");
        require(dt > 0.0, "ProblemSpec: dt must be positive");
        require(levels_per_window >= 1, "ProblemSpec: levels_per_window must be >= 1");
        require(windows >= 1, "ProblemSpec: windows must be >= 1");
        require(epsilon > 0.0 && epsilon < 1.0, "ProblemSpec: epsilon must be in (0,1)");
        require(eta > 0.0 && eta < 1.0, "ProblemSpec: eta must be in (0,1)");
        require(gmres_restart >= 1, "ProblemSpec: gmres restart must be >= 1");
        require(cap >= 1, "ProblemSpec: cap must be >= 1");
        if (alpha) require(*alpha > 0.0, "ProblemSpec: alpha must be positive");
    }
};

/// Assembled unsteady discrete elliptic problem B x' + A x = f with B = h^2 I
/// and A the centered-difference convection-diffusion operator.
struct DiscreteProblem {
    int d = 1;
    long n = 1;
    long r = 1;      // n^d
    double q = 0.0;
    double h = 0.5;  // 1/(n+1)
    double re = 0.0; // mesh Reynolds number q h / 2
    double dt = 1.0;
    double bscale = 0.25;  // h^2, so B = bscale * I

    GridOperator a_op;  // A
    GridOperator h_op;  // Hermitian part H
    GridOperator s_op;  // skew-Hermitian part S

    CVector x0;  // initial value: the all-ones vector at t = 0
    CVector f0;  // manufactured forcing at t = 0

    double alpha_default() const { return 0.5 * q * h; }

    void apply_A(std::span<const Complex> x, std::span<Complex> y) const { a_op.matvec(x, y); }
    void apply_H(std::span<const Complex> x, std::span<Complex> y) const { h_op.matvec(x, y); }
    void apply_S(std::span<const Complex> x, std::span<Complex> y) const { s_op.matvec(x, y); }

    /// Extreme eigenvalues of H from the closed forms
    /// (1-D: 4 sin^2(j pi/(2(n+1))), 2-D: sums of two such terms).
    double lambda_min_H() const {
        const double s = std::sin(0.5 * M_PI / static_cast<double>(n + 1));
        return d * 4.0 * s * s;
    }
    double lambda_max_H() const {
        const double s =
            std::sin(0.5 * M_PI * static_cast<double>(n) / static_cast<double>(n + 1));
        return d * 4.0 * s * s;
    }
    std::vector<double> h_eigenvalues() const {
        std::vector<double> lam1(n);
        for (long j = 1; j <= n; ++j) {
            const double s = std::sin(0.5 * M_PI * static_cast<double>(j) /
                                      static_cast<double>(n + 1));
            lam1[j - 1] = 4.0 * s * s;
        }
        if (d == 1) return lam1;
        std::vector<double> lam(r);
        for (long jy = 0; jy < n; ++jy)
            for (long jx = 0; jx < n; ++jx) lam[jy * n + jx] = lam1[jy] + lam1[jx];
        return lam;
    }
};

inline DiscreteProblem build_problem(const ProblemSpec& spec) {
    spec.validate();
    DiscreteProblem p;
    p.d = spec.d;
    p.n = spec.n;
    p.r = (spec.d == 1) ? spec.n : spec.n * spec.n;
    p.q = spec.q;
    p.h = 1.0 / static_cast<double>(spec.n + 1);
    p.re = 0.5 * spec.q * p.h;
    p.dt = spec.dt;
    p.bscale = p.h * p.h;

    const Complex mone(-1.0, 0.0);
    Tridiagonal t = Tridiagonal::toeplitz(spec.n, Complex(-1.0 - p.re, 0.0), Complex(2.0, 0.0),
                                          Complex(-1.0 + p.re, 0.0));
    Tridiagonal hpart = Tridiagonal::toeplitz(spec.n, mone, Complex(2.0, 0.0), mone);
    Tridiagonal spart = Tridiagonal::toeplitz(spec.n, Complex(-p.re, 0.0), Complex(0.0, 0.0),
                                              Complex(p.re, 0.0));
    p.a_op = GridOperator(spec.d, std::move(t));
    p.h_op = GridOperator(spec.d, std::move(hpart));
    p.s_op = GridOperator(spec.d, std::move(spart));

    p.x0 = ones(p.r);
    // f(t) = B x'(t) + A x(t) = e^{-t} (-h^2 1 + A 1)
    p.f0.assign(p.r, Complex(0.0, 0.0));
    p.apply_A(p.x0, p.f0);
    for (Complex& v : p.f0) v -= Complex(p.bscale, 0.0);
    return p;
}

/// Forcing sample f(t) for the manufactured solution x(t) = e^{-t} 1.
inline CVector manufactured_forcing(const DiscreteProblem& p, double t) {
    require(t >= 0.0, "manufactured_forcing: t must be nonnegative");
    CVector f = p.f0;
    const double s = std::exp(-t);
    for (Complex& v : f) v *= s;
    return f;
}

/// The stored Hermitian/skew-Hermitian parts of A.
inline std::pair<const GridOperator&, const GridOperator&> hs_split(const DiscreteProblem& p) {
    return {p.h_op, p.s_op};
}

}  // namespace wrhss
