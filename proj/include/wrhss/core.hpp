#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace wrhss {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;

/// Thrown when a factorization meets a pivot below the singularity tolerance.
class singular_matrix_error : public std::runtime_error {
public:
    singular_matrix_error(std::string what, long pivot)
        : std::runtime_error(std::move(what)), pivot_index(pivot) {}
    long pivot_index;
};

inline void require(bool cond, const char* what) {
    if (!cond) throw std::invalid_argument(what);
}

inline double norm2(std::span<const Complex> x) {
    double s = 0.0;
    for (const Complex& v : x) s += std::norm(v);
    return std::sqrt(s);
}

inline double norm_inf(std::span<const Complex> x) {
    double m = 0.0;
    for (const Complex& v : x) m = std::max(m, std::abs(v));
    return m;
}

struct VectorNorms {
    double two;
    double inf;
};

/// Euclidean and max-modulus norms of a complex vector.
inline VectorNorms vector_norms(std::span<const Complex> x) {
    return {norm2(x), norm_inf(x)};
}

inline bool all_finite(std::span<const Complex> x) {
    for (const Complex& v : x)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

inline CVector ones(std::size_t n) { return CVector(n, Complex(1.0, 0.0)); }

inline CVector zeros(std::size_t n) { return CVector(n, Complex(0.0, 0.0)); }

// y += a*x
inline void axpy(Complex a, std::span<const Complex> x, std::span<Complex> y) {
    require(x.size() == y.size(), "axpy: size mismatch");
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

inline Complex dot(std::span<const Complex> x, std::span<const Complex> y) {
    // (x, y) = y^* x
    require(x.size() == y.size(), "dot: size mismatch");
    Complex s(0.0, 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) s += std::conj(y[i]) * x[i];
    return s;
}

inline double max_abs_diff(std::span<const Complex> x, std::span<const Complex> y) {
    require(x.size() == y.size(), "max_abs_diff: size mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
    return m;
}

}  // namespace wrhss
