#pragma once

#include <functional>
#include <memory>

#include "wrhss/shifted_solvers.hpp"
#include "wrhss/waveform.hpp"

namespace wrhss {

using ApplyFn = std::function<void(std::span<const Complex>, std::span<Complex>)>;
using SolveFn = std::function<void(std::span<const Complex>, std::span<Complex>)>;

/// One-step splitting B = M_B - N_B, A = M_A - N_A with an inner solver for
/// the level matrix (1/dt) M_B + M_A.
struct OneStepSplitting {
    ApplyFn mb, ma, nb, na;
    SolveFn level_solve;
    std::string name;
};

/// Two one-step splittings of the same (B, A), swept in sequence through the
/// half iterate.
struct TwoStepSplitting {
    OneStepSplitting half1, half2;
    std::string name;
};

struct SweepBuffers {
    CVector t1, t2, rhs;
    Waveform half;  // intermediate iterate of two-step sweeps

    void ensure(long r) {
        if (static_cast<long>(t1.size()) != r) {
            t1.assign(r, Complex(0, 0));
            t2.assign(r, Complex(0, 0));
            rhs.assign(r, Complex(0, 0));
        }
    }
};

/// One full forward pass over levels 1..ell of the backward-Euler discrete WR
/// recurrence:
///   ((1/dt)M_B + M_A) x_{j+1}^{new} = (1/dt)M_B x_j^{new}
///       + ((1/dt)N_B + N_A) x_{j+1}^{old} - (1/dt)N_B x_j^{old} + f_{j+1}.
inline void one_step_wr_sweep(const OneStepSplitting& s, double dt, const Waveform& x_old,
                              const ForcingSamples& f, Waveform& x_new, SweepBuffers& buf) {
    const long ell = x_old.ell();
    const long r = x_old.r();
    require(x_new.ell() == ell && x_new.r() == r, "one_step_wr_sweep: shape mismatch");
    require(static_cast<long>(f.size()) == ell + 1, "one_step_wr_sweep: forcing shape mismatch");
    buf.ensure(r);
    const double invdt = 1.0 / dt;
    x_new.levels[0] = x_old.levels[0];
    for (long j = 0; j < ell; ++j) {
        CVector& rhs = buf.rhs;
        // (1/dt) N_B (x_old[j+1] - x_old[j])
        for (long i = 0; i < r; ++i) buf.t1[i] = x_old.levels[j + 1][i] - x_old.levels[j][i];
        s.nb(buf.t1, buf.t2);
        const CVector& fj = f[j + 1];
        for (long i = 0; i < r; ++i) rhs[i] = invdt * buf.t2[i] + fj[i];
        // + N_A x_old[j+1]
        s.na(x_old.levels[j + 1], buf.t2);
        for (long i = 0; i < r; ++i) rhs[i] += buf.t2[i];
        // + (1/dt) M_B x_new[j]
        s.mb(x_new.levels[j], buf.t2);
        for (long i = 0; i < r; ++i) rhs[i] += invdt * buf.t2[i];
        s.level_solve(rhs, x_new.levels[j + 1]);
    }
}

inline Waveform one_step_wr_sweep(const OneStepSplitting& s, double dt, const Waveform& x_old,
                                  const ForcingSamples& f) {
    Waveform x_new(x_old.ell(), x_old.r(), x_old.dt);
    SweepBuffers buf;
    one_step_wr_sweep(s, dt, x_old, f, x_new, buf);
    return x_new;
}

/// Two sequential one-step sweeps through the half iterate x^{(k+1/2)}.
inline void two_step_wr_sweep(const TwoStepSplitting& s, double dt, const Waveform& x_old,
                              const ForcingSamples& f, Waveform& x_new, SweepBuffers& buf) {
    if (buf.half.ell() != x_old.ell() || buf.half.r() != x_old.r())
        buf.half = Waveform(x_old.ell(), x_old.r(), x_old.dt);
    one_step_wr_sweep(s.half1, dt, x_old, f, buf.half, buf);
    one_step_wr_sweep(s.half2, dt, buf.half, f, x_new, buf);
}

inline Waveform two_step_wr_sweep(const TwoStepSplitting& s, double dt, const Waveform& x_old,
                                  const ForcingSamples& f) {
    Waveform x_new(x_old.ell(), x_old.r(), x_old.dt);
    SweepBuffers buf;
    two_step_wr_sweep(s, dt, x_old, f, x_new, buf);
    return x_new;
}

namespace detail {

inline ApplyFn scaled_identity(double c) {
    return [c](std::span<const Complex> in, std::span<Complex> out) {
        for (std::size_t i = 0; i < in.size(); ++i) out[i] = c * in[i];
    };
}

inline ApplyFn zero_operator() {
    return [](std::span<const Complex>, std::span<Complex> out) {
        std::fill(out.begin(), out.end(), Complex(0, 0));
    };
}

// alpha I - Op
inline ApplyFn shift_minus(const GridOperator& op, double alpha) {
    return [&op, alpha](std::span<const Complex> in, std::span<Complex> out) {
        op.matvec(in, out);
        for (std::size_t i = 0; i < in.size(); ++i) out[i] = alpha * in[i] - out[i];
    };
}

// alpha I + Op
inline ApplyFn shift_plus(const GridOperator& op, double alpha) {
    return [&op, alpha](std::span<const Complex> in, std::span<Complex> out) {
        op.matvec(in, out);
        for (std::size_t i = 0; i < in.size(); ++i) out[i] += alpha * in[i];
    };
}

}  // namespace detail

enum class WrHssVariant { standard, reversed, bad };

inline const char* to_string(WrHssVariant v) {
    switch (v) {
        case WrHssVariant::standard: return "wr-hss";
        case WrHssVariant::reversed: return "wr-hss-reversed";
        case WrHssVariant::bad: return "wr-hss-bad";
    }
    return "?";
}

/// WR-HSS as a two-step splitting. The standard variant splits
///   B = 0 - (-h^2 I) = h^2 I - 0,
///   A = (a I + H) - (a I - S) = (a I + S) - (a I - H),
/// so each iteration solves (a I + H) y = c on every level independently and
/// then ((h^2/dt + a) I + S) z = b level by level. The reversed variant swaps
/// the roles of the two operator halves; the bad variant swaps only H and S,
/// which destroys the Hermitian/skew-Hermitian structure of the splitting.
inline TwoStepSplitting make_wr_hss_splitting(const DiscreteProblem& p, double alpha,
                                              WrHssVariant variant = WrHssVariant::standard) {
    require(alpha > 0.0, "wr-hss: alpha must be positive");
    TwoStepSplitting s;
    s.name = to_string(variant);
    const double hb = p.bscale;
    const double shift_dt = p.bscale / p.dt + alpha;

    // stationary half: M_B = 0, N_B = -h^2 I; differential half: M_B = h^2 I, N_B = 0
    auto stationary_half = [&](const GridOperator& mpart, const GridOperator& npart,
                               SolveFn solve, const char* name) {
        OneStepSplitting h;
        h.mb = detail::zero_operator();
        h.nb = detail::scaled_identity(-hb);
        h.ma = detail::shift_plus(mpart, alpha);
        h.na = detail::shift_minus(npart, alpha);
        h.level_solve = std::move(solve);
        h.name = name;
        return h;
    };
    auto differential_half = [&](const GridOperator& mpart, const GridOperator& npart,
                                 SolveFn solve, const char* name) {
        OneStepSplitting h;
        h.mb = detail::scaled_identity(hb);
        h.nb = detail::zero_operator();
        h.ma = detail::shift_plus(mpart, alpha);
        h.na = detail::shift_minus(npart, alpha);
        h.level_solve = std::move(solve);
        h.name = name;
        return h;
    };

    auto herm_solve = [&](double shift) {
        auto solver = std::make_shared<ShiftedHermitianSolver>(p.d, p.n, shift);
        auto ws = std::make_shared<DstWorkspace>();
        return SolveFn([solver, ws](std::span<const Complex> rhs, std::span<Complex> out) {
            solver->solve(rhs, out, *ws);
        });
    };
    auto skew_solve = [&](double shift) {
        auto solver = std::make_shared<ShiftedSkewSolver>(p.d, p.n, shift, p.re);
        auto ws = std::make_shared<DstWorkspace>();
        return SolveFn([solver, ws](std::span<const Complex> rhs, std::span<Complex> out) {
            solver->solve(rhs, out, *ws);
        });
    };

    switch (variant) {
        case WrHssVariant::standard:
            s.half1 = stationary_half(p.h_op, p.s_op, herm_solve(alpha), "hermitian half");
            s.half2 = differential_half(p.s_op, p.h_op, skew_solve(shift_dt), "skew half");
            break;
        case WrHssVariant::reversed:
            s.half1 = differential_half(p.s_op, p.h_op, skew_solve(shift_dt), "skew half");
            s.half2 = stationary_half(p.h_op, p.s_op, herm_solve(alpha), "hermitian half");
            break;
        case WrHssVariant::bad:
            s.half1 = stationary_half(p.s_op, p.h_op, skew_solve(alpha), "skew half");
            s.half2 = differential_half(p.h_op, p.s_op, herm_solve(shift_dt), "hermitian half");
            break;
    }
    return s;
}

/// WR-SOR: B = h^2 I - 0 and A = ((1/tau) D_A - L_A) - (((1-tau)/tau) D_A + U_A)
/// with D_A diagonal, L_A/U_A the strict triangular parts (natural
/// lexicographic ordering). Level solves are forward substitutions.
inline OneStepSplitting make_wr_sor_splitting(const DiscreteProblem& p, double tau) {
    require(tau > 0.0, "wr-sor: tau must be positive");
    OneStepSplitting s;
    s.name = "wr-sor";
    const double hb = p.bscale;
    const long n = p.n, r = p.r;
    const int d = p.d;
    const double diag_a = 2.0 * d;
    const double sub_a = -1.0 - p.re;   // strict lower entries of A
    const double super_a = -1.0 + p.re; // strict upper entries of A
    s.mb = detail::scaled_identity(hb);
    s.nb = detail::zero_operator();
    // M_A = (1/tau) D_A + strict lower part of A
    s.ma = [n, r, d, diag_a, sub_a, tau](std::span<const Complex> in, std::span<Complex> out) {
        const double dd = diag_a / tau;
        for (long g = 0; g < r; ++g) {
            Complex v = dd * in[g];
            if (g % n != 0) v += sub_a * in[g - 1];
            if (d == 2 && g >= n) v += sub_a * in[g - n];
            out[g] = v;
        }
    };
    // N_A = ((1-tau)/tau) D_A - strict upper part of A
    s.na = [n, r, d, diag_a, super_a, tau](std::span<const Complex> in, std::span<Complex> out) {
        const double dd = diag_a * (1.0 - tau) / tau;
        for (long g = 0; g < r; ++g) {
            Complex v = dd * in[g];
            if ((g + 1) % n != 0) v -= super_a * in[g + 1];
            if (d == 2 && g + n < r) v -= super_a * in[g + n];
            out[g] = v;
        }
    };
    const double lev_diag = hb / p.dt + diag_a / tau;
    s.level_solve = [n, r, d, sub_a, lev_diag](std::span<const Complex> rhs,
                                               std::span<Complex> out) {
        for (long g = 0; g < r; ++g) {
            Complex v = rhs[g];
            if (g % n != 0) v -= sub_a * out[g - 1];
            if (d == 2 && g >= n) v -= sub_a * out[g - n];
            out[g] = v / lev_diag;
        }
    };
    return s;
}

/// Trivial splitting M = L, N = 0; one sweep reproduces the direct
/// time-level-by-time-level solution. The caller provides the exact level
/// solver for ((h^2/dt) I + A).
inline OneStepSplitting make_trivial_splitting(const DiscreteProblem& p, SolveFn exact_level) {
    OneStepSplitting s;
    s.name = "trivial";
    s.mb = detail::scaled_identity(p.bscale);
    s.ma = [&p](std::span<const Complex> in, std::span<Complex> out) { p.apply_A(in, out); };
    s.nb = detail::zero_operator();
    s.na = detail::zero_operator();
    s.level_solve = std::move(exact_level);
    return s;
}

}  // namespace wrhss
