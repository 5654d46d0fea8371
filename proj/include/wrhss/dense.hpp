#pragma once

#include <functional>
#include <utility>

#include "wrhss/core.hpp"

namespace wrhss {

/// Dense square complex matrix, row-major.
struct DenseCMatrix {
    long m = 0;
    CVector a;

    DenseCMatrix() = default;
    explicit DenseCMatrix(long order) : m(order) {
        require(order >= 1, "DenseCMatrix: order must be at least 1");
        a.assign(static_cast<std::size_t>(m) * m, Complex(0.0, 0.0));
    }

    Complex& at(long i, long j) { return a[i * m + j]; }
    const Complex& at(long i, long j) const { return a[i * m + j]; }

    static DenseCMatrix identity(long order) {
        DenseCMatrix d(order);
        for (long i = 0; i < order; ++i) d.at(i, i) = Complex(1.0, 0.0);
        return d;
    }

    /// Assemble a matrix-free operator by applying it to unit vectors.
    static DenseCMatrix from_operator(
        long order, const std::function<void(std::span<const Complex>, std::span<Complex>)>& op) {
        DenseCMatrix d(order);
        CVector e(order, Complex(0.0, 0.0)), col(order);
        for (long j = 0; j < order; ++j) {
            e[j] = Complex(1.0, 0.0);
            op(e, col);
            e[j] = Complex(0.0, 0.0);
            for (long i = 0; i < order; ++i) d.at(i, j) = col[i];
        }
        return d;
    }

    DenseCMatrix conj_transpose() const {
        DenseCMatrix d(m);
        for (long i = 0; i < m; ++i)
            for (long j = 0; j < m; ++j) d.at(j, i) = std::conj(at(i, j));
        return d;
    }

    double frobenius() const {
        double s = 0.0;
        for (const Complex& v : a) s += std::norm(v);
        return std::sqrt(s);
    }

    void matvec(std::span<const Complex> x, std::span<Complex> y) const {
        require(static_cast<long>(x.size()) == m && static_cast<long>(y.size()) == m,
                "DenseCMatrix::matvec: dimension mismatch");
        for (long i = 0; i < m; ++i) {
            Complex s(0.0, 0.0);
            const Complex* row = a.data() + i * m;
            for (long j = 0; j < m; ++j) s += row[j] * x[j];
            y[i] = s;
        }
    }
};

inline DenseCMatrix operator*(const DenseCMatrix& x, const DenseCMatrix& y) {
    require(x.m == y.m, "matmul: order mismatch");
    DenseCMatrix z(x.m);
    const long m = x.m;
    for (long i = 0; i < m; ++i)
        for (long k = 0; k < m; ++k) {
            const Complex v = x.at(i, k);
            if (v == Complex(0.0, 0.0)) continue;
            for (long j = 0; j < m; ++j) z.at(i, j) += v * y.at(k, j);
        }
    return z;
}

inline DenseCMatrix operator+(const DenseCMatrix& x, const DenseCMatrix& y) {
    require(x.m == y.m, "matadd: order mismatch");
    DenseCMatrix z = x;
    for (std::size_t i = 0; i < z.a.size(); ++i) z.a[i] += y.a[i];
    return z;
}

inline DenseCMatrix operator-(const DenseCMatrix& x, const DenseCMatrix& y) {
    require(x.m == y.m, "matsub: order mismatch");
    DenseCMatrix z = x;
    for (std::size_t i = 0; i < z.a.size(); ++i) z.a[i] -= y.a[i];
    return z;
}

inline DenseCMatrix operator*(Complex s, const DenseCMatrix& x) {
    DenseCMatrix z = x;
    for (Complex& v : z.a) v *= s;
    return z;
}

/// Dense LU with partial pivoting; the basis of the oracle solves and of the
/// frequency-domain matrix construction.
class DenseLU {
public:
    explicit DenseLU(DenseCMatrix m) : lu_(std::move(m)) {
        const long n = lu_.m;
        piv_.resize(n);
        double maxmag = 0.0;
        for (const Complex& v : lu_.a) maxmag = std::max(maxmag, std::abs(v));
        const double tol = 1e-14 * maxmag;
        swaps_ = 0;
        for (long j = 0; j < n; ++j) {
            long p = j;
            double best = std::abs(lu_.at(j, j));
            for (long i = j + 1; i < n; ++i) {
                const double v = std::abs(lu_.at(i, j));
                if (v > best) {
                    best = v;
                    p = i;
                }
            }
            if (!(best > tol))
                throw singular_matrix_error("dense LU: singular to tolerance at pivot " +
                                                std::to_string(j),
                                            j);
            piv_[j] = p;
            if (p != j) {
                ++swaps_;
                for (long c = 0; c < n; ++c) std::swap(lu_.at(j, c), lu_.at(p, c));
            }
            const Complex d = lu_.at(j, j);
            for (long i = j + 1; i < n; ++i) {
                const Complex mult = lu_.at(i, j) / d;
                lu_.at(i, j) = mult;
                for (long c = j + 1; c < n; ++c) lu_.at(i, c) -= mult * lu_.at(j, c);
            }
        }
    }

    long order() const { return lu_.m; }

    void solve_inplace(std::span<Complex> x) const {
        const long n = lu_.m;
        require(static_cast<long>(x.size()) == n, "DenseLU::solve: dimension mismatch");
        // interchanges first: stored L rows were swapped by later pivots too
        for (long j = 0; j < n; ++j)
            if (piv_[j] != j) std::swap(x[j], x[piv_[j]]);
        for (long j = 0; j < n; ++j)
            for (long i = j + 1; i < n; ++i) x[i] -= lu_.at(i, j) * x[j];
        for (long i = n - 1; i >= 0; --i) {
            Complex s = x[i];
            for (long c = i + 1; c < n; ++c) s -= lu_.at(i, c) * x[c];
            x[i] = s / lu_.at(i, i);
        }
    }

    CVector solve(std::span<const Complex> b) const {
        CVector x(b.begin(), b.end());
        solve_inplace(x);
        return x;
    }

    /// Solve with a matrix right-hand side, column by column.
    DenseCMatrix solve(const DenseCMatrix& b) const {
        require(b.m == lu_.m, "DenseLU::solve: order mismatch");
        DenseCMatrix x = b;
        CVector col(lu_.m);
        for (long j = 0; j < lu_.m; ++j) {
            for (long i = 0; i < lu_.m; ++i) col[i] = x.at(i, j);
            solve_inplace(col);
            for (long i = 0; i < lu_.m; ++i) x.at(i, j) = col[i];
        }
        return x;
    }

    Complex determinant() const {
        Complex d = (swaps_ % 2 == 0) ? Complex(1.0, 0.0) : Complex(-1.0, 0.0);
        for (long i = 0; i < lu_.m; ++i) d *= lu_.at(i, i);
        return d;
    }

private:
    DenseCMatrix lu_;
    std::vector<long> piv_;
    long swaps_ = 0;
};

inline CVector dense_solve(const DenseCMatrix& m, std::span<const Complex> b) {
    return DenseLU(m).solve(b);
}

}  // namespace wrhss
