#pragma once

// Test-only oracles: independent dense constructions and estimators the
// implementation paths are checked against.

#include <random>

#include "wrhss/banded.hpp"
#include "wrhss/dense.hpp"
#include "wrhss/problem.hpp"

namespace wrhss::test {

inline DenseCMatrix dense_from_tridiagonal(const Tridiagonal& t) {
    const long n = t.order();
    DenseCMatrix d(n);
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) d.at(i, j) = t.at(i, j);
    return d;
}

/// Explicit assembly of I (x) T + T (x) I.
inline DenseCMatrix dense_kron_sum(const Tridiagonal& t) {
    const long n = t.order();
    const long r = n * n;
    DenseCMatrix d(r);
    for (long by = 0; by < n; ++by)
        for (long bx = 0; bx < n; ++bx) {
            const Complex outer = (by == bx) ? Complex(1.0, 0.0) : Complex(0.0, 0.0);
            for (long iy = 0; iy < n; ++iy)
                for (long ix = 0; ix < n; ++ix) {
                    Complex v = outer * t.at(iy, ix);            // I (x) T
                    if (iy == ix) v += t.at(by, bx);             // T (x) I
                    d.at(by * n + iy, bx * n + ix) = v;
                }
        }
    return d;
}

inline DenseCMatrix dense_grid_operator(const GridOperator& op) {
    return op.d == 1 ? dense_from_tridiagonal(op.axis) : dense_kron_sum(op.axis);
}

inline DenseCMatrix dense_from_banded(const BandedMatrix& b) {
    DenseCMatrix d(b.n);
    for (long i = 0; i < b.n; ++i)
        for (long j = std::max<long>(0, i - b.kl); j <= std::min(b.n - 1, i + b.ku); ++j)
            d.at(i, j) = b.at(i, j);
    return d;
}

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline Complex random_complex(std::mt19937_64& g) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    return Complex(u(g), u(g));
}

inline CVector random_cvector(long n, std::mt19937_64& g) {
    CVector v(n);
    for (Complex& x : v) x = random_complex(g);
    return v;
}

inline DenseCMatrix random_dense(long n, std::mt19937_64& g) {
    DenseCMatrix d(n);
    for (Complex& x : d.a) x = random_complex(g);
    return d;
}

inline Tridiagonal random_tridiagonal(long n, std::mt19937_64& g) {
    Tridiagonal t = Tridiagonal::toeplitz(n, Complex(0, 0), Complex(0, 0), Complex(0, 0));
    for (Complex& x : t.sub) x = random_complex(g);
    for (Complex& x : t.diag) x = random_complex(g);
    for (Complex& x : t.super) x = random_complex(g);
    return t;
}

/// Random banded matrix made strictly diagonally dominant.
inline BandedMatrix random_dd_banded(long n, long kl, long ku, std::mt19937_64& g) {
    BandedMatrix b(n, kl, ku);
    for (long i = 0; i < n; ++i) {
        double offsum = 0.0;
        for (long j = std::max<long>(0, i - kl); j <= std::min(n - 1, i + ku); ++j) {
            if (j == i) continue;
            const Complex v = random_complex(g);
            b.set(i, j, v);
            offsum += std::abs(v);
        }
        b.set(i, i, Complex(offsum + 1.0, 0.5));
    }
    return b;
}

/// Gelfand spectral-radius estimate ||M^(2^m)||_F^(1/2^m) by repeated
/// squaring with renormalization.
inline double gelfand_estimate(DenseCMatrix m, int squarings) {
    double log_rho = 0.0;
    double weight = 1.0;
    for (int i = 0; i < squarings; ++i) {
        m = m * m;
        weight *= 0.5;
        const double f = m.frobenius();
        if (f == 0.0) return 0.0;
        log_rho += weight * std::log(f);
        const Complex inv(1.0 / f, 0.0);
        for (Complex& v : m.a) v *= inv;
    }
    return std::exp(log_rho);
}

inline double rel_err(double got, double want) {
    return std::abs(got - want) / std::max(1e-300, std::abs(want));
}

}  // namespace wrhss::test
