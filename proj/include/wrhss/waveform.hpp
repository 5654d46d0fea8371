#pragma once

#include "wrhss/problem.hpp"

namespace wrhss {

/// Vector-valued time sequence {x_j}_{j=0..ell}; level 0 is the initial
/// condition and is never touched by iteration sweeps.
struct Waveform {
    double dt = 0.0;
    std::vector<CVector> levels;

    Waveform() = default;
    Waveform(long ell, long r, double dt_) : dt(dt_), levels(ell + 1, CVector(r)) {
        require(ell >= 1, "Waveform: need at least one level beyond the initial condition");
    }

    long ell() const { return static_cast<long>(levels.size()) - 1; }
    long r() const { return levels.empty() ? 0 : static_cast<long>(levels[0].size()); }

    /// Constant extension of the initial value: x_j = x0 for all levels.
    static Waveform constant(const CVector& x0, long ell, double dt) {
        Waveform w(ell, static_cast<long>(x0.size()), dt);
        for (auto& lvl : w.levels) lvl = x0;
        return w;
    }
};

/// Forcing samples for one window; entry j holds f at level j (index 0 unused).
using ForcingSamples = std::vector<CVector>;

/// Samples the manufactured forcing on levels 1..ell, where level j sits at
/// global time (start_level + j) * dt.
inline ForcingSamples sample_forcing(const DiscreteProblem& p, long start_level, long ell) {
    ForcingSamples f(ell + 1);
    for (long j = 1; j <= ell; ++j) {
        const double t = static_cast<double>(start_level + j) * p.dt;
        f[j] = p.f0;
        const double s = std::exp(-t);
        for (Complex& v : f[j]) v *= s;
    }
    return f;
}

/// Two-term matrix-valued kernel {L0, L1} of the backward-Euler discrete
/// operator: L0 = (1/dt) B + A and L1 = -(1/dt) B, higher terms zero.
struct ConvolutionKernel {
    const DiscreteProblem* p;

    explicit ConvolutionKernel(const DiscreteProblem& prob) : p(&prob) {}

    void apply_L0(std::span<const Complex> in, std::span<Complex> out) const {
        p->apply_A(in, out);
        const double c = p->bscale / p->dt;
        for (std::size_t i = 0; i < in.size(); ++i) out[i] += c * in[i];
    }

    void apply_L1(std::span<const Complex> in, std::span<Complex> out) const {
        const double c = -p->bscale / p->dt;
        for (std::size_t i = 0; i < in.size(); ++i) out[i] = c * in[i];
    }
};

/// (L x)_j = L0 x_j + L1 x_{j-1} on levels j >= 1; level 0 passes through.
inline Waveform apply_convolution(const ConvolutionKernel& k, const Waveform& x) {
    require(x.r() == k.p->r, "apply_convolution: dimension mismatch");
    Waveform out(x.ell(), x.r(), x.dt);
    out.levels[0] = x.levels[0];
    CVector t(x.r());
    for (long j = 1; j <= x.ell(); ++j) {
        k.apply_L0(x.levels[j], out.levels[j]);
        k.apply_L1(x.levels[j - 1], t);
        for (long i = 0; i < x.r(); ++i) out.levels[j][i] += t[i];
    }
    return out;
}

/// 2-norm of the residual sequence f - L x over levels 1..ell.
inline double residual_norm2(const ConvolutionKernel& k, const Waveform& x,
                             const ForcingSamples& f, CVector& scratch) {
    const long r = x.r();
    if (static_cast<long>(scratch.size()) < r) scratch.resize(r);
    std::span<Complex> t(scratch.data(), r);
    const double c1 = -k.p->bscale / k.p->dt;
    double acc = 0.0;
    for (long j = 1; j <= x.ell(); ++j) {
        k.apply_L0(x.levels[j], t);
        const CVector& prev = x.levels[j - 1];
        const CVector& fj = f[j];
        for (long i = 0; i < r; ++i) acc += std::norm(fj[i] - t[i] - c1 * prev[i]);
    }
    return std::sqrt(acc);
}

inline double residual_norm2(const ConvolutionKernel& k, const Waveform& x,
                             const ForcingSamples& f) {
    CVector scratch;
    return residual_norm2(k, x, f, scratch);
}

/// Sequence norms over levels 1..ell (level 0 is data, not an unknown).
inline double seq_norm2(const Waveform& x) {
    double acc = 0.0;
    for (long j = 1; j <= x.ell(); ++j)
        for (const Complex& v : x.levels[j]) acc += std::norm(v);
    return std::sqrt(acc);
}

inline double seq_norm_inf(const Waveform& x) {
    double m = 0.0;
    for (long j = 1; j <= x.ell(); ++j) m = std::max(m, norm_inf(x.levels[j]));
    return m;
}

struct SequenceMetrics {
    double err;       // sup-norm relative error against the reference
    double res;       // relative residual against r0norm
    double norm2;     // sequence 2-norm of approx
    double norm_inf;  // sequence sup-norm of approx
};

/// ERR and RES for an approximate waveform. Zero denominators yield NaN.
inline SequenceMetrics sequence_metrics(const ConvolutionKernel& k, const ForcingSamples& f,
                                        const Waveform& approx, const Waveform& ref,
                                        double r0norm) {
    require(approx.ell() == ref.ell() && approx.r() == ref.r(),
            "sequence_metrics: shape mismatch");
    double num = 0.0, den = 0.0;
    const long r = approx.r();
    for (long j = 1; j <= approx.ell(); ++j) {
        for (long i = 0; i < r; ++i) {
            num = std::max(num, std::abs(approx.levels[j][i] - ref.levels[j][i]));
            den = std::max(den, std::abs(ref.levels[j][i]));
        }
    }
    SequenceMetrics m;
    m.err = (den > 0.0) ? num / den : std::numeric_limits<double>::quiet_NaN();
    const double rn = residual_norm2(k, approx, f);
    m.res = (r0norm > 0.0) ? rn / r0norm : std::numeric_limits<double>::quiet_NaN();
    m.norm2 = seq_norm2(approx);
    m.norm_inf = seq_norm_inf(approx);
    return m;
}

}  // namespace wrhss
