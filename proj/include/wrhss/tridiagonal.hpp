#pragma once

#include "wrhss/core.hpp"

namespace wrhss {

/// Complex tridiagonal matrix stored as three bands.
struct Tridiagonal {
    CVector sub;    // length n-1
    CVector diag;   // length n
    CVector super;  // length n-1

    Tridiagonal() = default;
    Tridiagonal(CVector sub_, CVector diag_, CVector super_)
        : sub(std::move(sub_)), diag(std::move(diag_)), super(std::move(super_)) {
        require(diag.size() >= 1, "Tridiagonal: order must be at least 1");
        require(sub.size() + 1 == diag.size() && super.size() + 1 == diag.size(),
                "Tridiagonal: band lengths must be n-1, n, n-1");
    }

    /// Toeplitz tridiagonal with constant bands (a, b, c).
    static Tridiagonal toeplitz(long n, Complex a, Complex b, Complex c) {
        require(n >= 1, "Tridiagonal: order must be at least 1");
        return Tridiagonal(CVector(n - 1, a), CVector(n, b), CVector(n - 1, c));
    }

    long order() const { return static_cast<long>(diag.size()); }

    Complex at(long i, long j) const {
        if (i == j) return diag[i];
        if (i == j + 1) return sub[j];
        if (j == i + 1) return super[i];
        return Complex(0.0, 0.0);
    }
};

inline void tridiag_matvec(const Tridiagonal& t, std::span<const Complex> x,
                           std::span<Complex> y) {
    const long n = t.order();
    require(static_cast<long>(x.size()) == n, "tridiag_matvec: dimension mismatch");
    require(static_cast<long>(y.size()) == n, "tridiag_matvec: dimension mismatch");
    if (n == 1) {
        y[0] = t.diag[0] * x[0];
        return;
    }
    y[0] = t.diag[0] * x[0] + t.super[0] * x[1];
    for (long i = 1; i < n - 1; ++i)
        y[i] = t.sub[i - 1] * x[i - 1] + t.diag[i] * x[i] + t.super[i] * x[i + 1];
    y[n - 1] = t.sub[n - 2] * x[n - 2] + t.diag[n - 1] * x[n - 1];
}

inline CVector tridiag_matvec(const Tridiagonal& t, const CVector& x) {
    CVector y(x.size());
    tridiag_matvec(t, x, y);
    return y;
}

}  // namespace wrhss
