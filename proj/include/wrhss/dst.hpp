#pragma once

#include <atomic>
#include <bit>

#include "wrhss/core.hpp"

namespace wrhss {

namespace detail {

/// Iterative radix-2 complex FFT for a fixed power-of-two length.
struct Pow2Fft {
    long m = 0;
    int log2m = 0;
    std::vector<long> bitrev;
    CVector tw;  // e^{-2 pi i k / m}, k < m/2

    Pow2Fft() = default;
    explicit Pow2Fft(long len) : m(len) {
        require(len >= 1 && (len & (len - 1)) == 0, "Pow2Fft: length must be a power of two");
        log2m = std::countr_zero(static_cast<unsigned long>(len));
        bitrev.resize(m);
        for (long i = 0; i < m; ++i) {
            long rev = 0;
            for (int b = 0; b < log2m; ++b)
                if (i & (1L << b)) rev |= 1L << (log2m - 1 - b);
            bitrev[i] = rev;
        }
        tw.resize(m / 2);
        for (long k = 0; k < m / 2; ++k)
            tw[k] = std::polar(1.0, -2.0 * M_PI * static_cast<double>(k) / static_cast<double>(m));
    }

    void forward(std::span<Complex> a) const {
        for (long i = 0; i < m; ++i)
            if (bitrev[i] > i) std::swap(a[i], a[bitrev[i]]);
        for (long len = 2; len <= m; len <<= 1) {
            const long half = len >> 1;
            const long step = m / len;
            for (long base = 0; base < m; base += len)
                for (long k = 0; k < half; ++k) {
                    const Complex w = tw[k * step];
                    const Complex u = a[base + k];
                    const Complex v = a[base + k + half] * w;
                    a[base + k] = u + v;
                    a[base + k + half] = u - v;
                }
        }
    }

    void inverse(std::span<Complex> a) const {
        for (Complex& v : a) v = std::conj(v);
        forward(a);
        const double inv = 1.0 / static_cast<double>(m);
        for (Complex& v : a) v = std::conj(v) * inv;
    }

    std::uint64_t butterflies() const { return static_cast<std::uint64_t>(m / 2) * log2m; }
};

}  // namespace detail

/// Scratch buffers for transform application; owned by the caller so plans can
/// be shared across threads.
struct DstWorkspace {
    CVector buf;   // DFT buffer (length N, or M for the Bluestein route)
    CVector aux;   // second Bluestein buffer
    CVector line;  // strided gather for 2-D columns
};

/// DST-I plan with normalization sqrt(2/(n+1)), which makes the transform
/// involutive. The fast path runs the transform through a length-2(n+1) FFT
/// (radix-2 when 2(n+1) is a power of two, Bluestein otherwise); the O(n^2)
/// reference path is kept as the comparison oracle. Both paths reduce twiddle
/// angles in integer arithmetic so they agree to roughly machine precision.
class DstPlan {
public:
    explicit DstPlan(long n) : n_(n), dft_len_(2 * (n + 1)) {
        require(n >= 1, "DstPlan: order must be at least 1");
        norm_ = std::sqrt(2.0 / static_cast<double>(n + 1));
        pow2_ = (dft_len_ & (dft_len_ - 1)) == 0;
        if (pow2_) {
            fft_ = detail::Pow2Fft(dft_len_);
        } else {
            long m = 1;
            while (m < 2 * dft_len_ - 1) m <<= 1;
            blu_len_ = m;
            fft_ = detail::Pow2Fft(m);
            chirp_.resize(dft_len_);
            const long period = 2 * dft_len_;
            for (long k = 0; k < dft_len_; ++k) {
                const long k2 = static_cast<long>((static_cast<unsigned long long>(k) * k) % period);
                chirp_[k] = std::polar(1.0, -M_PI * static_cast<double>(k2) /
                                               static_cast<double>(dft_len_));
            }
            chirp_dft_.assign(m, Complex(0.0, 0.0));
            chirp_dft_[0] = std::conj(chirp_[0]);
            for (long j = 1; j < dft_len_; ++j) {
                chirp_dft_[j] = std::conj(chirp_[j]);
                chirp_dft_[m - j] = std::conj(chirp_[j]);
            }
            fft_.forward(chirp_dft_);
        }
        // sine table with arguments reduced mod 2(n+1) for the reference path
        sine_.resize(dft_len_);
        for (long t = 0; t < dft_len_; ++t)
            sine_[t] = std::sin(M_PI * static_cast<double>(t) / static_cast<double>(n + 1));
    }

    long order() const { return n_; }
    double normalization() const { return norm_; }

    /// Fast path. in and out may alias.
    void apply(std::span<const Complex> in, std::span<Complex> out, DstWorkspace& ws) const {
        require(static_cast<long>(in.size()) == n_ && static_cast<long>(out.size()) == n_,
                "dst1: length mismatch");
        const long nbuf = pow2_ ? dft_len_ : blu_len_;
        if (static_cast<long>(ws.buf.size()) < nbuf) ws.buf.resize(nbuf);
        std::span<Complex> v(ws.buf.data(), nbuf);
        v[0] = Complex(0.0, 0.0);
        for (long j = 1; j <= n_; ++j) v[j] = in[j - 1];
        v[n_ + 1] = Complex(0.0, 0.0);
        for (long j = 1; j <= n_; ++j) v[dft_len_ - j] = -in[j - 1];
        if (pow2_) {
            fft_.forward(v.subspan(0, dft_len_));
            ops_.fetch_add(fft_.butterflies() + n_, std::memory_order_relaxed);
        } else {
            bluestein(v, ws.aux);
        }
        const Complex half_i(0.0, 0.5);
        for (long k = 1; k <= n_; ++k) out[k - 1] = norm_ * (half_i * v[k]);
    }

    void apply(std::span<const Complex> in, std::span<Complex> out) const {
        DstWorkspace ws;
        apply(in, out, ws);
    }

    /// Quadratic reference path with compensated summation; the oracle the
    /// fast path is compared against.
    void apply_reference(std::span<const Complex> in, std::span<Complex> out) const {
        require(static_cast<long>(in.size()) == n_ && static_cast<long>(out.size()) == n_,
                "dst1 reference: length mismatch");
        require(in.data() != out.data(), "dst1 reference: in-place not supported");
        for (long k = 1; k <= n_; ++k) {
            double sr = 0.0, cr = 0.0, si = 0.0, ci = 0.0;
            long t = 0;
            for (long j = 1; j <= n_; ++j) {
                t += k;
                if (t >= dft_len_) t -= dft_len_;
                const double s = sine_[t];
                // Kahan accumulation, real and imaginary parts separately
                double y = s * in[j - 1].real() - cr;
                double tt = sr + y;
                cr = (tt - sr) - y;
                sr = tt;
                y = s * in[j - 1].imag() - ci;
                tt = si + y;
                ci = (tt - si) - y;
                si = tt;
            }
            out[k - 1] = norm_ * Complex(sr, si);
        }
        ops_.fetch_add(static_cast<std::uint64_t>(n_) * n_, std::memory_order_relaxed);
    }

    std::uint64_t op_count() const { return ops_.load(std::memory_order_relaxed); }
    void reset_op_count() const { ops_.store(0, std::memory_order_relaxed); }

private:
    void bluestein(std::span<Complex> v, CVector& a) const {
        // DFT of v[0..dft_len_) computed as a chirp convolution of length blu_len_.
        a.assign(blu_len_, Complex(0.0, 0.0));
        for (long j = 0; j < dft_len_; ++j) a[j] = v[j] * chirp_[j];
        fft_.forward(a);
        for (long j = 0; j < blu_len_; ++j) a[j] *= chirp_dft_[j];
        fft_.inverse(a);
        for (long k = 0; k < dft_len_; ++k) v[k] = chirp_[k] * a[k];
        ops_.fetch_add(3 * fft_.butterflies() + 3 * dft_len_, std::memory_order_relaxed);
    }

    long n_;
    long dft_len_;
    bool pow2_ = true;
    long blu_len_ = 0;
    double norm_;
    detail::Pow2Fft fft_;
    CVector chirp_;
    CVector chirp_dft_;
    std::vector<double> sine_;
    mutable std::atomic<std::uint64_t> ops_{0};
};

inline CVector dst1(const DstPlan& plan, std::span<const Complex> x) {
    CVector y(x.size());
    plan.apply(x, y);
    return y;
}

}  // namespace wrhss
