#pragma once

#include <algorithm>

#include "wrhss/dense.hpp"

namespace wrhss {

struct EigenResult {
    std::vector<Complex> eigenvalues;  // sorted by descending modulus
    long iterations = 0;               // QR sweeps spent
    bool converged = true;
};

namespace detail {

// Unitary plane rotation [c s; -conj(s) c] with real c mapping (f, g) to (r, 0).
inline void givens(Complex f, Complex g, double& c, Complex& s) {
    const double af = std::abs(f), ag = std::abs(g);
    if (ag == 0.0) {
        c = 1.0;
        s = Complex(0.0, 0.0);
        return;
    }
    if (af == 0.0) {
        c = 0.0;
        s = std::conj(g) / ag;
        return;
    }
    const double t = std::hypot(af, ag);
    c = af / t;
    s = (f / af) * std::conj(g) / t;
}

// In-place Householder reduction to upper Hessenberg form.
inline void hessenberg(DenseCMatrix& h) {
    const long m = h.m;
    CVector w(m);
    for (long k = 0; k + 2 < m; ++k) {
        double s = 0.0;
        for (long i = k + 1; i < m; ++i) s += std::norm(h.at(i, k));
        s = std::sqrt(s);
        if (s == 0.0) continue;
        const Complex x0 = h.at(k + 1, k);
        const Complex phase =
            (x0 == Complex(0.0, 0.0)) ? Complex(1.0, 0.0) : x0 / std::abs(x0);
        double vn = 0.0;
        w[k + 1] = x0 + phase * s;
        for (long i = k + 2; i < m; ++i) w[i] = h.at(i, k);
        for (long i = k + 1; i < m; ++i) vn += std::norm(w[i]);
        vn = std::sqrt(vn);
        if (vn == 0.0) continue;
        for (long i = k + 1; i < m; ++i) w[i] /= vn;
        // rows k+1..m-1
        for (long c = k; c < m; ++c) {
            Complex t(0.0, 0.0);
            for (long i = k + 1; i < m; ++i) t += std::conj(w[i]) * h.at(i, c);
            t *= 2.0;
            for (long i = k + 1; i < m; ++i) h.at(i, c) -= t * w[i];
        }
        // columns k+1..m-1
        for (long r = 0; r < m; ++r) {
            Complex t(0.0, 0.0);
            for (long i = k + 1; i < m; ++i) t += h.at(r, i) * w[i];
            t *= 2.0;
            for (long i = k + 1; i < m; ++i) h.at(r, i) -= t * std::conj(w[i]);
        }
        h.at(k + 1, k) = -phase * s;
        for (long i = k + 2; i < m; ++i) h.at(i, k) = Complex(0.0, 0.0);
    }
}

inline Complex wilkinson_shift(const DenseCMatrix& h, long hi) {
    const Complex a = h.at(hi - 1, hi - 1), b = h.at(hi - 1, hi);
    const Complex c = h.at(hi, hi - 1), d = h.at(hi, hi);
    const Complex tr2 = 0.5 * (a + d);
    const Complex disc = std::sqrt(tr2 * tr2 - (a * d - b * c));
    const Complex l1 = tr2 + disc, l2 = tr2 - disc;
    return (std::abs(l1 - d) < std::abs(l2 - d)) ? l1 : l2;
}

}  // namespace detail

/// Eigenvalues of a dense complex matrix: Hessenberg reduction followed by
/// implicit single-shift QR with Wilkinson shifts. Deflation threshold is
/// 1e-14 relative to the neighboring diagonal magnitudes. Returns a partial
/// (diagonal) estimate flagged unconverged after 100*order sweeps.
inline EigenResult complex_eigenvalues(DenseCMatrix m) {
    const long n = m.m;
    EigenResult out;
    if (n == 1) {
        out.eigenvalues = {m.at(0, 0)};
        return out;
    }
    detail::hessenberg(m);
    const double frob = std::max(m.frobenius(), 1e-300);
    const long max_sweeps = 100 * n;
    long sweeps = 0;
    long hi = n - 1;
    long stagnation = 0;

    auto subdiag_small = [&](long i) {
        double base = std::abs(m.at(i - 1, i - 1)) + std::abs(m.at(i, i));
        if (base == 0.0) base = frob;
        return std::abs(m.at(i, i - 1)) <= 1e-14 * base;
    };

    while (hi > 0) {
        // deflate converged trailing eigenvalues
        if (subdiag_small(hi)) {
            m.at(hi, hi - 1) = Complex(0.0, 0.0);
            --hi;
            stagnation = 0;
            continue;
        }
        // active block [lo, hi]
        long lo = hi;
        while (lo > 0 && !subdiag_small(lo)) --lo;
        if (lo > 0) m.at(lo, lo - 1) = Complex(0.0, 0.0);

        if (sweeps >= max_sweeps) {
            out.converged = false;
            break;
        }
        ++sweeps;
        ++stagnation;

        Complex mu;
        if (stagnation % 16 == 0) {
            // exceptional shift to break rare cycling
            mu = m.at(hi, hi) + 0.75 * std::abs(m.at(hi, hi - 1));
        } else {
            mu = detail::wilkinson_shift(m, hi);
        }

        // implicit single-shift bulge chase on [lo, hi]
        Complex x = m.at(lo, lo) - mu;
        Complex y = m.at(lo + 1, lo);
        for (long k = lo; k < hi; ++k) {
            double c;
            Complex s;
            detail::givens(x, y, c, s);
            const long cstart = std::max(lo, k - 1);
            for (long j = cstart; j <= hi; ++j) {
                const Complex t1 = m.at(k, j), t2 = m.at(k + 1, j);
                m.at(k, j) = c * t1 + s * t2;
                m.at(k + 1, j) = -std::conj(s) * t1 + c * t2;
            }
            if (k > lo) m.at(k + 1, k - 1) = Complex(0.0, 0.0);
            const long rend = std::min(k + 2, hi);
            for (long i = lo; i <= rend; ++i) {
                const Complex t1 = m.at(i, k), t2 = m.at(i, k + 1);
                m.at(i, k) = c * t1 + std::conj(s) * t2;
                m.at(i, k + 1) = -s * t1 + c * t2;
            }
            if (k < hi - 1) {
                x = m.at(k + 1, k);
                y = m.at(k + 2, k);
            }
        }
    }

    out.iterations = sweeps;
    out.eigenvalues.resize(n);
    for (long i = 0; i < n; ++i) out.eigenvalues[i] = m.at(i, i);
    std::sort(out.eigenvalues.begin(), out.eigenvalues.end(),
              [](const Complex& a, const Complex& b) {
                  const double ma = std::abs(a), mb = std::abs(b);
                  if (ma != mb) return ma > mb;
                  if (a.real() != b.real()) return a.real() > b.real();
                  return a.imag() > b.imag();
              });
    return out;
}

/// Largest eigenvalue modulus. Throws when the QR iteration fails to settle.
inline double spectral_radius(const DenseCMatrix& m) {
    EigenResult r = complex_eigenvalues(m);
    if (!r.converged)
        throw std::runtime_error("spectral_radius: QR iteration did not converge");
    return std::abs(r.eigenvalues.front());
}

}  // namespace wrhss
