#pragma once

#include "wrhss/tridiagonal.hpp"

namespace wrhss {

/// Matrix-free Kronecker sum I (x) T + T (x) I acting on vectors of length n^2,
/// indexed lexicographically (the first factor runs along contiguous blocks).
struct KroneckerSum {
    Tridiagonal factor;

    explicit KroneckerSum(Tridiagonal t) : factor(std::move(t)) {}

    long axis_order() const { return factor.order(); }
    long order() const { return factor.order() * factor.order(); }
};

inline void kronsum_matvec(const Tridiagonal& t, std::span<const Complex> x,
                           std::span<Complex> y) {
    const long n = t.order();
    const long r = n * n;
    require(static_cast<long>(x.size()) == r, "kronsum_matvec: length must be n^2");
    require(static_cast<long>(y.size()) == r, "kronsum_matvec: length must be n^2");

    // (I (x) T): apply T within each contiguous block of n.
    for (long b = 0; b < n; ++b)
        tridiag_matvec(t, x.subspan(b * n, n), y.subspan(b * n, n));

    if (n == 1) {
        y[0] += t.diag[0] * x[0];
        return;
    }
    // (T (x) I): couple entries at stride n.
    for (long g = 0; g < n; ++g) y[g] += t.diag[0] * x[g] + t.super[0] * x[g + n];
    for (long b = 1; b < n - 1; ++b) {
        const Complex s = t.sub[b - 1], d = t.diag[b], u = t.super[b];
        for (long g = b * n; g < (b + 1) * n; ++g)
            y[g] += s * x[g - n] + d * x[g] + u * x[g + n];
    }
    for (long g = (n - 1) * n; g < r; ++g)
        y[g] += t.sub[n - 2] * x[g - n] + t.diag[n - 1] * x[g];
}

inline void kronsum_matvec(const KroneckerSum& k, std::span<const Complex> x,
                           std::span<Complex> y) {
    kronsum_matvec(k.factor, x, y);
}

inline CVector kronsum_matvec(const KroneckerSum& k, const CVector& x) {
    CVector y(x.size());
    kronsum_matvec(k, x, y);
    return y;
}

}  // namespace wrhss
