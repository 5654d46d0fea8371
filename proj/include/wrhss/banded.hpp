#pragma once

#include <algorithm>

#include "wrhss/tridiagonal.hpp"

namespace wrhss {

/// General banded complex matrix. Row i stores columns [i-kl, i+kl+ku]; the
/// extra kl superdiagonals hold fill-in produced by row interchanges.
struct BandedMatrix {
    long n = 0;
    long kl = 0;
    long ku = 0;
    CVector a;  // row-major, width 2*kl + ku + 1 per row

    BandedMatrix() = default;
    BandedMatrix(long n_, long kl_, long ku_) : n(n_), kl(kl_), ku(ku_) {
        require(n >= 1 && kl >= 0 && ku >= 0, "BandedMatrix: bad shape");
        a.assign(static_cast<std::size_t>(n) * width(), Complex(0.0, 0.0));
    }

    long width() const { return 2 * kl + ku + 1; }

    bool in_storage(long i, long j) const {
        return i >= 0 && i < n && j >= i - kl && j <= i + kl + ku && j >= 0 && j < n;
    }

    Complex& at(long i, long j) { return a[i * width() + (j - (i - kl))]; }
    Complex at(long i, long j) const {
        if (!in_storage(i, j)) return Complex(0.0, 0.0);
        return a[i * width() + (j - (i - kl))];
    }

    void set(long i, long j, Complex v) {
        require(in_storage(i, j) && j >= i - kl && j <= i + ku,
                "BandedMatrix::set: entry outside band");
        at(i, j) = v;
    }

    static BandedMatrix from_tridiagonal(const Tridiagonal& t) {
        BandedMatrix b(t.order(), 1, 1);
        for (long i = 0; i < b.n; ++i) {
            b.at(i, i) = t.diag[i];
            if (i > 0) b.at(i, i - 1) = t.sub[i - 1];
            if (i < b.n - 1) b.at(i, i + 1) = t.super[i];
        }
        return b;
    }

    double max_magnitude() const {
        double m = 0.0;
        for (const Complex& v : a) m = std::max(m, std::abs(v));
        return m;
    }
};

/// LU factorization of a banded matrix with partial pivoting, reusable across
/// right-hand sides. Pivots smaller than 1e-14 times the largest band entry
/// are reported as singular.
class BandedLU {
public:
    explicit BandedLU(BandedMatrix m) : w_(std::move(m)) {
        const long n = w_.n, kl = w_.kl, ku = w_.ku;
        piv_.resize(n);
        lmul_.assign(static_cast<std::size_t>(n) * std::max<long>(kl, 1), Complex(0.0, 0.0));
        const double tol = 1e-14 * w_.max_magnitude();
        for (long j = 0; j < n; ++j) {
            const long last = std::min(j + kl, n - 1);
            long p = j;
            double best = std::abs(w_.at(j, j));
            for (long i = j + 1; i <= last; ++i) {
                const double v = std::abs(w_.at(i, j));
                if (v > best) {
                    best = v;
                    p = i;
                }
            }
            if (!(best > tol))
                throw singular_matrix_error("banded LU: singular to tolerance at pivot " +
                                                std::to_string(j),
                                            j);
            piv_[j] = p;
            const long cend = std::min(j + kl + ku, n - 1);
            if (p != j)
                for (long c = j; c <= cend; ++c) std::swap(w_.at(j, c), w_.at(p, c));
            const Complex d = w_.at(j, j);
            for (long i = j + 1; i <= last; ++i) {
                const Complex m = w_.at(i, j) / d;
                lmul_[j * std::max<long>(kl, 1) + (i - j - 1)] = m;
                w_.at(i, j) = Complex(0.0, 0.0);
                for (long c = j + 1; c <= cend; ++c) w_.at(i, c) -= m * w_.at(j, c);
            }
        }
    }

    long order() const { return w_.n; }

    void solve_inplace(std::span<Complex> x) const {
        const long n = w_.n, kl = w_.kl, ku = w_.ku;
        require(static_cast<long>(x.size()) == n, "BandedLU::solve: dimension mismatch");
        const long lw = std::max<long>(kl, 1);
        for (long j = 0; j < n; ++j) {
            if (piv_[j] != j) std::swap(x[j], x[piv_[j]]);
            const long last = std::min(j + kl, n - 1);
            for (long i = j + 1; i <= last; ++i) x[i] -= lmul_[j * lw + (i - j - 1)] * x[j];
        }
        for (long i = n - 1; i >= 0; --i) {
            Complex s = x[i];
            const long cend = std::min(i + kl + ku, n - 1);
            for (long c = i + 1; c <= cend; ++c) s -= w_.at(i, c) * x[c];
            x[i] = s / w_.at(i, i);
        }
    }

    CVector solve(std::span<const Complex> b) const {
        CVector x(b.begin(), b.end());
        solve_inplace(x);
        return x;
    }

private:
    BandedMatrix w_;
    std::vector<long> piv_;
    CVector lmul_;  // multipliers, kl per column
};

inline CVector banded_lu_solve(const BandedMatrix& m, std::span<const Complex> b) {
    require(static_cast<long>(b.size()) == m.n, "banded_lu_solve: dimension mismatch");
    return BandedLU(m).solve(b);
}

}  // namespace wrhss
