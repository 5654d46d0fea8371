#pragma once

#include "wrhss/core.hpp"

namespace wrhss {

struct GmresOptions {
    long restart = 5;          // m
    double eta = 1e-8;         // relative tolerance
    long max_matvecs = 200000;
    // When positive, convergence targets ||r|| <= eta * denom_override rather
    // than eta * ||b - A x0||. Used by the tight-tolerance reference solves.
    double denom_override = -1.0;
};

struct GmresResult {
    CVector x;
    long matvecs = 0;      // every operator application, bookkeeping included
    long inner_steps = 0;  // Krylov (Arnoldi) steps only
    double relres = 1.0;
    bool converged = false;
};

namespace detail {

struct Reflector {
    long pos = 0;
    bool active = false;
    CVector w;  // unit vector, zeros before pos
};

// Builds the reflector that zeroes z below position pos and applies it to z.
inline Reflector make_reflector(std::span<Complex> z, long pos) {
    Reflector ref;
    ref.pos = pos;
    const long n = static_cast<long>(z.size());
    double s = 0.0;
    for (long i = pos; i < n; ++i) s += std::norm(z[i]);
    s = std::sqrt(s);
    double tail = 0.0;
    for (long i = pos + 1; i < n; ++i) tail += std::norm(z[i]);
    if (s == 0.0 || tail == 0.0) {
        ref.active = false;  // already in the required form
        return ref;
    }
    const Complex z0 = z[pos];
    const Complex phase = (z0 == Complex(0, 0)) ? Complex(1, 0) : z0 / std::abs(z0);
    ref.w.assign(n, Complex(0, 0));
    ref.w[pos] = z0 + phase * s;
    for (long i = pos + 1; i < n; ++i) ref.w[i] = z[i];
    double vn = 0.0;
    for (long i = pos; i < n; ++i) vn += std::norm(ref.w[i]);
    vn = std::sqrt(vn);
    for (long i = pos; i < n; ++i) ref.w[i] /= vn;
    ref.active = true;
    z[pos] = -phase * s;
    for (long i = pos + 1; i < n; ++i) z[i] = Complex(0, 0);
    return ref;
}

inline void apply_reflector(const Reflector& ref, std::span<Complex> z) {
    if (!ref.active) return;
    const long n = static_cast<long>(z.size());
    Complex t(0, 0);
    for (long i = ref.pos; i < n; ++i) t += std::conj(ref.w[i]) * z[i];
    t *= 2.0;
    for (long i = ref.pos; i < n; ++i) z[i] -= t * ref.w[i];
}

inline void lsq_givens(Complex f, Complex g, double& c, Complex& s) {
    const double af = std::abs(f), ag = std::abs(g);
    if (ag == 0.0) {
        c = 1.0;
        s = Complex(0, 0);
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

}  // namespace detail

/// Restarted GMRES(m) with the Householder Arnoldi procedure. Counts every
/// application of the operator. basis_out, when given, receives the
/// orthonormal basis vectors of the last cycle (test hook).
template <class MatVec>
GmresResult gmres_householder(MatVec&& aop, const CVector& b, const GmresOptions& opt,
                              const CVector* x0 = nullptr,
                              std::vector<CVector>* basis_out = nullptr) {
    require(opt.restart >= 1, "gmres: restart must be at least 1");
    require(opt.eta > 0.0 && opt.eta < 1.0, "gmres: eta must be in (0,1)");
    const long n = static_cast<long>(b.size());
    GmresResult out;
    out.x = x0 ? *x0 : CVector(n, Complex(0, 0));

    CVector r(n), av(n);
    auto compute_residual = [&](const CVector& x) {
        aop(std::span<const Complex>(x), std::span<Complex>(av));
        for (long i = 0; i < n; ++i) r[i] = b[i] - av[i];
    };
    if (x0) {
        compute_residual(out.x);
        ++out.matvecs;
    } else {
        r = b;
    }
    double rnorm = norm2(r);
    const double denom = (opt.denom_override > 0.0) ? opt.denom_override : rnorm;
    if (denom == 0.0) {
        out.converged = true;
        out.relres = 0.0;
        return out;
    }
    const double target = opt.eta * denom;
    if (rnorm <= target) {
        out.converged = true;
        out.relres = rnorm / denom;
        return out;
    }

    const long m = std::min(opt.restart, n);
    std::vector<detail::Reflector> refl;
    std::vector<CVector> hcols(m);  // R columns after rotations, length j+1 each
    CVector g(m + 1), y(m), v(n), z(n), u(n);
    std::vector<double> cs(m);
    CVector sn(m);

    while (out.matvecs < opt.max_matvecs) {
        refl.clear();
        if (basis_out) basis_out->clear();
        z = r;
        g.assign(m + 1, Complex(0, 0));
        long k_used = 0;

        for (long j = 0; j <= m; ++j) {
            refl.push_back(detail::make_reflector(std::span<Complex>(z), j));
            if (j == 0) {
                g[0] = z[0];
            } else {
                const long c = j - 1;
                CVector col(j + 1);
                for (long i = 0; i <= j; ++i) col[i] = z[i];
                for (long i = 0; i < c; ++i) {
                    const Complex t1 = col[i], t2 = col[i + 1];
                    col[i] = cs[i] * t1 + sn[i] * t2;
                    col[i + 1] = -std::conj(sn[i]) * t1 + cs[i] * t2;
                }
                detail::lsq_givens(col[c], col[c + 1], cs[c], sn[c]);
                {
                    const Complex t1 = col[c], t2 = col[c + 1];
                    col[c] = cs[c] * t1 + sn[c] * t2;
                    col[c + 1] = Complex(0, 0);
                    const Complex g1 = g[c];
                    g[c] = cs[c] * g1;
                    g[c + 1] = -std::conj(sn[c]) * g1;
                }
                hcols[c] = std::move(col);
                k_used = j;
                if (std::abs(g[j]) <= target) break;
            }
            if (j == m) break;

            // v_j = P_0 ... P_j e_j
            std::fill(v.begin(), v.end(), Complex(0, 0));
            v[j] = Complex(1, 0);
            for (long i = j; i >= 0; --i) detail::apply_reflector(refl[i], v);
            if (basis_out) basis_out->push_back(v);

            aop(std::span<const Complex>(v), std::span<Complex>(av));
            ++out.matvecs;
            ++out.inner_steps;
            z = av;
            for (long i = 0; i <= j; ++i) detail::apply_reflector(refl[i], z);
        }

        // back substitution R y = g
        for (long i = k_used - 1; i >= 0; --i) {
            Complex s = g[i];
            for (long c2 = i + 1; c2 < k_used; ++c2) s -= hcols[c2][i] * y[c2];
            y[i] = s / hcols[i][i];
        }
        // x += P_0 (y_0 e_0 + P_1 (y_1 e_1 + ...))
        std::fill(u.begin(), u.end(), Complex(0, 0));
        for (long i = k_used - 1; i >= 0; --i) {
            u[i] += y[i];
            detail::apply_reflector(refl[i], u);
        }
        for (long i = 0; i < n; ++i) out.x[i] += u[i];

        compute_residual(out.x);
        ++out.matvecs;
        rnorm = norm2(r);
        out.relres = rnorm / denom;
        if (rnorm <= target) {
            out.converged = true;
            return out;
        }
    }
    return out;  // flagged: converged == false, best iterate retained
}

}  // namespace wrhss
