#pragma once

#include "wrhss/dst.hpp"

namespace wrhss {

namespace detail {

/// Apply the DST plan along both axes of an n-by-n grid stored row-major.
inline void dst2_inplace(const DstPlan& plan, std::span<Complex> grid, DstWorkspace& ws) {
    const long n = plan.order();
    for (long row = 0; row < n; ++row) {
        auto r = grid.subspan(row * n, n);
        plan.apply(r, r, ws);
    }
    if (static_cast<long>(ws.line.size()) < n) ws.line.resize(n);
    std::span<Complex> line(ws.line.data(), n);
    for (long col = 0; col < n; ++col) {
        for (long row = 0; row < n; ++row) line[row] = grid[row * n + col];
        plan.apply(line, line, ws);
        for (long row = 0; row < n; ++row) grid[row * n + col] = line[row];
    }
}

inline void dst_nd_inplace(int d, const DstPlan& plan, std::span<Complex> v, DstWorkspace& ws) {
    if (d == 1)
        plan.apply(v, v, ws);
    else
        dst2_inplace(plan, v, ws);
}

}  // namespace detail

/// Direct solver for (shift I + H) y = c with H the centered-difference
/// diffusion part: tridiag(-1,2,-1) along each axis. Diagonalized by the
/// sine transform; eigenvalues 4 sin^2(j pi / (2(n+1))) summed over axes.
class ShiftedHermitianSolver {
public:
    ShiftedHermitianSolver(int d, long n, double shift)
        : d_(d), n_(n), shift_(shift), plan_(n) {
        require(d == 1 || d == 2, "ShiftedHermitianSolver: dimension must be 1 or 2");
        require(shift > 0.0, "ShiftedHermitianSolver: shift must be positive");
        std::vector<double> lam(n);
        for (long j = 1; j <= n; ++j) {
            const double s = std::sin(0.5 * M_PI * static_cast<double>(j) /
                                      static_cast<double>(n + 1));
            lam[j - 1] = 4.0 * s * s;
        }
        r_ = (d == 1) ? n : n * n;
        invden_.resize(r_);
        if (d == 1) {
            for (long j = 0; j < n; ++j) invden_[j] = 1.0 / (shift + lam[j]);
        } else {
            for (long jy = 0; jy < n; ++jy)
                for (long jx = 0; jx < n; ++jx)
                    invden_[jy * n + jx] = 1.0 / (shift + lam[jy] + lam[jx]);
        }
    }

    long order() const { return r_; }
    const DstPlan& plan() const { return plan_; }

    void solve(std::span<const Complex> c, std::span<Complex> y, DstWorkspace& ws) const {
        require(static_cast<long>(c.size()) == r_ && static_cast<long>(y.size()) == r_,
                "ShiftedHermitianSolver: length mismatch");
        if (y.data() != c.data()) std::copy(c.begin(), c.end(), y.begin());
        detail::dst_nd_inplace(d_, plan_, y, ws);
        for (long i = 0; i < r_; ++i) y[i] *= invden_[i];
        detail::dst_nd_inplace(d_, plan_, y, ws);
    }

    CVector solve(std::span<const Complex> c) const {
        CVector y(c.size());
        DstWorkspace ws;
        solve(c, y, ws);
        return y;
    }

private:
    int d_;
    long n_, r_;
    double shift_;
    DstPlan plan_;
    std::vector<double> invden_;
};

/// Direct solver for (shift I + S) z = b with S the centered-difference
/// convection part: Re * tridiag(-1,0,1) along each axis. Uses the similarity
/// S = D (i Re C) D^{-1} with D = diag(i^k) applied as elementwise scaling and
/// C = tridiag(1,0,1), which the sine transform diagonalizes.
class ShiftedSkewSolver {
public:
    ShiftedSkewSolver(int d, long n, double shift, double re)
        : d_(d), n_(n), shift_(shift), re_(re), plan_(n) {
        require(d == 1 || d == 2, "ShiftedSkewSolver: dimension must be 1 or 2");
        require(shift > 0.0, "ShiftedSkewSolver: shift must be positive");
        r_ = (d == 1) ? n : n * n;
        if (re_ == 0.0) return;  // S = 0, handled directly in solve
        std::vector<double> cosv(n);
        for (long j = 1; j <= n; ++j)
            cosv[j - 1] = 2.0 * std::cos(M_PI * static_cast<double>(j) /
                                         static_cast<double>(n + 1));
        invden_.resize(r_);
        scale_.resize(r_);
        static const Complex ipow[4] = {Complex(1, 0), Complex(0, 1), Complex(-1, 0),
                                        Complex(0, -1)};
        if (d == 1) {
            for (long j = 0; j < n; ++j) {
                invden_[j] = 1.0 / Complex(shift, re * cosv[j]);
                scale_[j] = ipow[j & 3];
            }
        } else {
            for (long jy = 0; jy < n; ++jy)
                for (long jx = 0; jx < n; ++jx) {
                    invden_[jy * n + jx] = 1.0 / Complex(shift, re * (cosv[jy] + cosv[jx]));
                    scale_[jy * n + jx] = ipow[(jx + jy) & 3];
                }
        }
    }

    long order() const { return r_; }
    const DstPlan& plan() const { return plan_; }

    void solve(std::span<const Complex> b, std::span<Complex> z, DstWorkspace& ws) const {
        require(static_cast<long>(b.size()) == r_ && static_cast<long>(z.size()) == r_,
                "ShiftedSkewSolver: length mismatch");
        if (re_ == 0.0) {
            for (long i = 0; i < r_; ++i) z[i] = b[i] / shift_;
            return;
        }
        for (long i = 0; i < r_; ++i) z[i] = b[i] * std::conj(scale_[i]);
        detail::dst_nd_inplace(d_, plan_, z, ws);
        for (long i = 0; i < r_; ++i) z[i] *= invden_[i];
        detail::dst_nd_inplace(d_, plan_, z, ws);
        for (long i = 0; i < r_; ++i) z[i] *= scale_[i];
    }

    CVector solve(std::span<const Complex> b) const {
        CVector z(b.size());
        DstWorkspace ws;
        solve(b, z, ws);
        return z;
    }

private:
    int d_;
    long n_, r_;
    double shift_;
    double re_;
    DstPlan plan_;
    CVector invden_;
    CVector scale_;  // i^(sum of axis indices)
};

inline CVector solve_shifted_hermitian(int d, long n, double alpha,
                                       std::span<const Complex> c) {
    return ShiftedHermitianSolver(d, n, alpha).solve(c);
}

inline CVector solve_shifted_skew_hermitian(int d, long n, double beta, double re,
                                            std::span<const Complex> b) {
    return ShiftedSkewSolver(d, n, beta, re).solve(b);
}

}  // namespace wrhss
