#pragma once

#include <chrono>
#include <limits>
#include <memory>

#include "wrhss/banded.hpp"
#include "wrhss/gmres.hpp"
#include "wrhss/splittings.hpp"

namespace wrhss {

/// Exact solver for the backward-Euler level matrix (h^2/dt) I + A:
/// banded LU in 1-D, tight-tolerance restarted GMRES(30) in 2-D with the
/// previous level as warm start.
class LevelDirectSolver {
public:
    explicit LevelDirectSolver(const DiscreteProblem& p, double eta = 1e-13, long restart = 30)
        : p_(&p), eta_(eta), restart_(restart) {
        if (p.d == 1) {
            Tridiagonal t = p.a_op.axis;
            const double c = p.bscale / p.dt;
            for (Complex& v : t.diag) v += c;
            lu_ = std::make_unique<BandedLU>(BandedMatrix::from_tridiagonal(t));
        }
    }

    void solve(const CVector& rhs, CVector& out, const CVector* warm = nullptr) const {
        if (p_->d == 1) {
            out = rhs;
            lu_->solve_inplace(out);
            return;
        }
        const double bnorm = norm2(rhs);
        if (bnorm == 0.0) {
            out.assign(rhs.size(), Complex(0, 0));
            return;
        }
        auto op = [this](std::span<const Complex> in, std::span<Complex> y) {
            ConvolutionKernel(*p_).apply_L0(in, y);
        };
        GmresOptions opt;
        opt.restart = restart_;
        opt.eta = eta_;
        opt.denom_override = bnorm;
        opt.max_matvecs = 2000000;
        GmresResult res = gmres_householder(op, rhs, opt, warm);
        if (!res.converged)
            throw std::runtime_error("reference level solve: GMRES did not reach tolerance");
        matvecs_ += res.matvecs;
        out = std::move(res.x);
    }

    long matvecs() const { return matvecs_; }

private:
    const DiscreteProblem* p_;
    double eta_;
    long restart_;
    std::unique_ptr<BandedLU> lu_;
    mutable long matvecs_ = 0;
};

/// Exact discrete solution of the convolution equation, computed time level
/// by time level. This waveform is the ERR reference.
inline Waveform reference_solve(const DiscreteProblem& p, long levels, long start_level = 0,
                                const CVector* x_init = nullptr) {
    require(levels >= 1, "reference_solve: need at least one level");
    Waveform w(levels, p.r, p.dt);
    w.levels[0] = x_init ? *x_init : p.x0;
    LevelDirectSolver solver(p);
    ForcingSamples f = sample_forcing(p, start_level, levels);
    CVector rhs(p.r);
    const double c = p.bscale / p.dt;
    for (long j = 0; j < levels; ++j) {
        for (long i = 0; i < p.r; ++i) rhs[i] = c * w.levels[j][i] + f[j + 1][i];
        solver.solve(rhs, w.levels[j + 1], &w.levels[j]);
    }
    return w;
}

/// Streams the reference solution level by level and accumulates the
/// sup-norm relative error of a solution fed to it in level order; keeps
/// memory at O(r) on long intervals.
class ErrAccumulator {
public:
    explicit ErrAccumulator(const DiscreteProblem& p, long start_level = 0)
        : p_(&p), solver_(p), prev_(p.x0), cur_(p.r), rhs_(p.r), level_(start_level) {}

    void feed(const CVector& x, long global_level) {
        require(global_level == level_ + 1, "ErrAccumulator: levels must arrive in order");
        const double c = p_->bscale / p_->dt;
        const double s = std::exp(-static_cast<double>(global_level) * p_->dt);
        for (long i = 0; i < p_->r; ++i) rhs_[i] = c * prev_[i] + s * p_->f0[i];
        solver_.solve(rhs_, cur_, &prev_);
        for (long i = 0; i < p_->r; ++i) {
            num_ = std::max(num_, std::abs(x[i] - cur_[i]));
            den_ = std::max(den_, std::abs(cur_[i]));
        }
        prev_ = cur_;
        level_ = global_level;
    }

    double err() const {
        return den_ > 0.0 ? num_ / den_ : std::numeric_limits<double>::quiet_NaN();
    }

private:
    const DiscreteProblem* p_;
    LevelDirectSolver solver_;
    CVector prev_, cur_, rhs_;
    long level_;
    double num_ = 0.0, den_ = 0.0;
};

struct SchemeConfig {
    enum class Kind { wr_hss, wr_sor, dgmres, direct };
    Kind kind = Kind::wr_hss;
    WrHssVariant variant = WrHssVariant::standard;
    double alpha = 0.0;  // wr-hss; <= 0 means q h / 2
    double tau = 0.2;    // wr-sor
    long m = 5;          // dgmres restart
    double eta = 1e-8;   // dgmres tolerance
    bool warm_start = false;  // dgmres initial guess: previous level vs zero
    long max_matvecs_per_level = 200000;

    std::string name() const {
        switch (kind) {
            case Kind::wr_hss: return to_string(variant);
            case Kind::wr_sor: return "wr-sor";
            case Kind::dgmres: return "dgmres";
            case Kind::direct: return "direct";
        }
        return "?";
    }
};

struct SolveReport {
    std::string scheme;
    int d = 1;
    long n = 0;
    double q = 0.0, dt = 0.0;
    long levels = 0, windows = 0;
    std::string param_name;
    double param = 0.0;
    long it = 0;         // rounded mean iterations per window (per level for dgmres)
    double it_mean = 0.0;
    double err = std::numeric_limits<double>::quiet_NaN();
    double res = std::numeric_limits<double>::quiet_NaN();
    double wall_seconds = 0.0;
    bool capped = false;
    bool diverged = false;
    std::vector<long> per_window;
};

struct RunSettings {
    long levels_per_window = 1;
    long windows = 1;
    double eps = 1e-5;
    long cap = 7000;
    long start_level = 0;
    const CVector* x_init = nullptr;  // defaults to the problem's x0
    bool compute_err = true;
    double divergence_guard = 1e8;
    // optional per-window observer: (window waveform, window index, start level)
    std::function<void(const Waveform&, long, long)> sink;
};

namespace detail {

struct WindowOutcome {
    long its = 0;
    double res = 0.0;
    bool capped = false;
    bool diverged = false;
};

template <class SweepFn>
WindowOutcome run_wr_window(const DiscreteProblem& p, SweepFn&& sweep, const CVector& x_init,
                            const ForcingSamples& f, long ell, double eps, long cap,
                            double guard, Waveform& x_out) {
    ConvolutionKernel kern(p);
    Waveform x_old = Waveform::constant(x_init, ell, p.dt);
    Waveform x_new(ell, p.r, p.dt);
    CVector scratch;
    const double r0 = residual_norm2(kern, x_old, f, scratch);
    WindowOutcome o;
    if (r0 == 0.0) {
        x_out = std::move(x_old);
        return o;
    }
    while (true) {
        sweep(x_old, f, x_new);
        ++o.its;
        o.res = residual_norm2(kern, x_new, f, scratch) / r0;
        std::swap(x_old, x_new);
        if (o.res < eps) break;
        if (!std::isfinite(o.res) || o.res > guard) {
            o.diverged = true;
            break;
        }
        if (o.its >= cap) {
            o.capped = true;
            break;
        }
    }
    x_out = std::move(x_old);
    return o;
}

}  // namespace detail

/// Windowing driver for the WR schemes: runs the scheme to tolerance on each
/// window and propagates the final level as the next window's initial value.
/// DGMRES and the direct reference run through the same front so reports are
/// uniform.
inline SolveReport run_windowed(const DiscreteProblem& p, const SchemeConfig& cfg,
                                const RunSettings& rs) {
    require(rs.levels_per_window >= 1 && rs.windows >= 1, "run_windowed: bad window shape");
    const auto t_start = std::chrono::steady_clock::now();
    SolveReport rep;
    rep.scheme = cfg.name();
    rep.d = p.d;
    rep.n = p.n;
    rep.q = p.q;
    rep.dt = p.dt;
    rep.levels = rs.levels_per_window * rs.windows;
    rep.windows = rs.windows;

    const long ell = rs.levels_per_window;
    CVector x_init = rs.x_init ? *rs.x_init : p.x0;
    std::unique_ptr<ErrAccumulator> errs;
    if (rs.compute_err && cfg.kind != SchemeConfig::Kind::direct)
        errs = std::make_unique<ErrAccumulator>(p, rs.start_level);

    // scheme-specific sweep state
    SweepBuffers buf;
    TwoStepSplitting hss;
    OneStepSplitting sor;
    std::unique_ptr<LevelDirectSolver> direct;
    double alpha = cfg.alpha > 0.0 ? cfg.alpha : p.alpha_default();
    switch (cfg.kind) {
        case SchemeConfig::Kind::wr_hss:
            hss = make_wr_hss_splitting(p, alpha, cfg.variant);
            rep.param_name = "alpha";
            rep.param = alpha;
            break;
        case SchemeConfig::Kind::wr_sor:
            sor = make_wr_sor_splitting(p, cfg.tau);
            rep.param_name = "tau";
            rep.param = cfg.tau;
            break;
        case SchemeConfig::Kind::dgmres:
            rep.param_name = "m";
            rep.param = static_cast<double>(cfg.m);
            break;
        case SchemeConfig::Kind::direct:
            direct = std::make_unique<LevelDirectSolver>(p);
            rep.param_name = "m";
            rep.param = 0.0;
            break;
    }

    ConvolutionKernel kern(p);
    CVector scratch;
    long total_its = 0;
    Waveform window_x;
    for (long w = 0; w < rs.windows; ++w) {
        const long start = rs.start_level + w * ell;
        ForcingSamples f = sample_forcing(p, start, ell);
        detail::WindowOutcome o;
        if (cfg.kind == SchemeConfig::Kind::wr_hss) {
            o = detail::run_wr_window(
                p,
                [&](const Waveform& xo, const ForcingSamples& ff, Waveform& xn) {
                    two_step_wr_sweep(hss, p.dt, xo, ff, xn, buf);
                },
                x_init, f, ell, rs.eps, rs.cap, rs.divergence_guard, window_x);
        } else if (cfg.kind == SchemeConfig::Kind::wr_sor) {
            o = detail::run_wr_window(
                p,
                [&](const Waveform& xo, const ForcingSamples& ff, Waveform& xn) {
                    one_step_wr_sweep(sor, p.dt, xo, ff, xn, buf);
                },
                x_init, f, ell, rs.eps, rs.cap, rs.divergence_guard, window_x);
        } else if (cfg.kind == SchemeConfig::Kind::dgmres) {
            // backward-Euler loop; each level solved by restarted GMRES with
            // the previous level as initial guess
            window_x = Waveform(ell, p.r, p.dt);
            window_x.levels[0] = x_init;
            const double c = p.bscale / p.dt;
            CVector rhs(p.r);
            long matvecs = 0;
            for (long j = 0; j < ell; ++j) {
                for (long i = 0; i < p.r; ++i)
                    rhs[i] = c * window_x.levels[j][i] + f[j + 1][i];
                GmresOptions opt;
                opt.restart = cfg.m;
                opt.eta = cfg.eta;
                opt.max_matvecs = cfg.max_matvecs_per_level;
                auto op = [&](std::span<const Complex> in, std::span<Complex> y) {
                    kern.apply_L0(in, y);
                };
                GmresResult res = gmres_householder(
                    op, rhs, opt, cfg.warm_start ? &window_x.levels[j] : nullptr);
                if (!res.converged) rep.diverged = true;
                matvecs += res.inner_steps;
                window_x.levels[j + 1] = std::move(res.x);
            }
            o.its = matvecs;  // per-window total of Krylov steps; averaged per level below
            {
                Waveform guess = Waveform::constant(x_init, ell, p.dt);
                const double r0 = residual_norm2(kern, guess, f, scratch);
                o.res = r0 > 0.0 ? residual_norm2(kern, window_x, f, scratch) / r0 : 0.0;
            }
        } else {  // direct
            window_x = Waveform(ell, p.r, p.dt);
            window_x.levels[0] = x_init;
            const double c = p.bscale / p.dt;
            CVector rhs(p.r);
            for (long j = 0; j < ell; ++j) {
                for (long i = 0; i < p.r; ++i)
                    rhs[i] = c * window_x.levels[j][i] + f[j + 1][i];
                direct->solve(rhs, window_x.levels[j + 1], &window_x.levels[j]);
            }
            Waveform guess = Waveform::constant(x_init, ell, p.dt);
            const double r0 = residual_norm2(kern, guess, f, scratch);
            o.res = r0 > 0.0 ? residual_norm2(kern, window_x, f, scratch) / r0 : 0.0;
        }

        rep.per_window.push_back(o.its);
        total_its += o.its;
        rep.res = o.res;
        rep.capped = rep.capped || o.capped;
        rep.diverged = rep.diverged || o.diverged;
        if (errs)
            for (long j = 1; j <= ell; ++j) errs->feed(window_x.levels[j], start + j);
        if (rs.sink) rs.sink(window_x, w, start);
        x_init = window_x.levels[ell];
    }

    if (cfg.kind == SchemeConfig::Kind::dgmres) {
        rep.it_mean = static_cast<double>(total_its) / static_cast<double>(rep.levels);
    } else {
        rep.it_mean = static_cast<double>(total_its) / static_cast<double>(rs.windows);
    }
    rep.it = std::llround(rep.it_mean);
    if (cfg.kind == SchemeConfig::Kind::direct)
        rep.err = 0.0;  // the direct run is the reference itself
    else if (errs)
        rep.err = errs->err();
    rep.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return rep;
}

/// Named scheme fronts.
inline SolveReport wr_hss_solve(const DiscreteProblem& p, double alpha, double eps, long cap,
                                WrHssVariant variant, RunSettings rs) {
    SchemeConfig cfg;
    cfg.kind = SchemeConfig::Kind::wr_hss;
    cfg.variant = variant;
    cfg.alpha = alpha;
    rs.eps = eps;
    rs.cap = cap;
    return run_windowed(p, cfg, rs);
}

inline SolveReport wr_sor_solve(const DiscreteProblem& p, double tau, double eps, long cap,
                                RunSettings rs) {
    SchemeConfig cfg;
    cfg.kind = SchemeConfig::Kind::wr_sor;
    cfg.tau = tau;
    rs.eps = eps;
    rs.cap = cap;
    return run_windowed(p, cfg, rs);
}

inline SolveReport dgmres_solve(const DiscreteProblem& p, double eta, long m, RunSettings rs) {
    SchemeConfig cfg;
    cfg.kind = SchemeConfig::Kind::dgmres;
    cfg.eta = eta;
    cfg.m = m;
    return run_windowed(p, cfg, rs);
}

}  // namespace wrhss
