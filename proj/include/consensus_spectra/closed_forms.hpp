#pragma once

// Closed-form consensus parameters h and convergence rates R for the
// parity cases of each family, evaluated exactly as written. Several of
// them do not agree with the pair solve (see design.hpp: closed_form_R
// tags each rate against the canonical pipeline value). They are kept
// verbatim on purpose; do not "fix" them here.
//
// Conventions:
//   * `k_major` is the torus dimension producing lambda_s (the largest k).
//   * The r-nearest h expressions contain an undefined symbol `e`; it is
//     read as the asymmetry factor a.
//   * The odd-odd torus h expression carries literal 0.16 coefficients
//     where a^2 would be expected; they are kept as literals.
//   * Non-finite results (0/0, negative radicands) are returned as NaN.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>

namespace consensus::closed_forms {

namespace detail {
inline constexpr double pi = std::numbers::pi;
inline double sq(double x) { return x * x; }
inline double d(std::size_t v) { return static_cast<double>(v); }
}  // namespace detail

// -- ring, n even -------------------------------------------------------------

inline double ring_even_h(std::size_t n, double a) {
    using namespace detail;
    const double c = std::cos(2 * pi / d(n));
    const double s = std::sin(2 * pi / d(n));
    return (2 + 2 * c) / (3 - c * c + 2 * c - a * a * s * s);
}

inline double ring_even_rate(std::size_t n, double a) {
    using namespace detail;
    const double c = std::cos(2 * pi / d(n));
    const double a2 = a * a;
    return (2 - 2 * a2 - 2 * c + 2 * a2 * c) / (3 - a2 + (-1 + a2) * c);
}

// -- ring, n odd --------------------------------------------------------------

inline double ring_odd_h(std::size_t n, double a) {
    using namespace detail;
    const double c1 = std::cos(pi / d(n));
    const double c2 = std::cos(2 * pi / d(n));
    const double s1 = std::sin(pi / d(n));
    const double s2 = std::sin(2 * pi / d(n));
    return 2 * (c1 + c2) / (-c2 * c2 + 2 * c2 - a * a * s2 * s2 + c1 * c1 + a * a * s1 * s1 + 2 * c1);
}

inline double ring_odd_rate(std::size_t n, double a) {
    using namespace detail;
    auto c = [n](double k) { return std::cos(k * pi / d(n)); };
    const double a2 = a * a;
    const double a4 = a2 * a2;
    const double radicand = 2 + 4 * a2 + 2 * a4 - 2 * (-1 + a4) * c(1) + sq(-1 + a2) * c(2) + 2 * c(3) -
                            2 * a4 * c(3) + c(4) - 2 * a2 * c(4) + a4 * c(4);
    const double denom = std::sqrt(2.0) * (2 - (-1 + a2) * c(1) + (-1 + a2) * c(2));
    return 1 - std::sqrt(radicand) / denom;
}

// -- 2-D torus, both dimensions even ------------------------------------------

inline double torus_even_h(std::size_t k_major, double a) {
    using namespace detail;
    const double c = std::cos(2 * pi / d(k_major));
    const double s = std::sin(2 * pi / d(k_major));
    return (6 + 2 * c) / (15 - c * c + 2 * c - a * a * s * s);
}

inline double torus_even_rate(std::size_t k_major, double a) {
    using namespace detail;
    const double c = std::cos(2 * pi / d(k_major));
    const double s = std::sin(2 * pi / d(k_major));
    return (a * a * s * s + c * c + 6 * c + 9) / (a * a * s * s + c * c - 2 * c - 15);
}

// -- 2-D torus, both dimensions odd -------------------------------------------

inline double torus_odd_h(std::size_t k_minor, std::size_t k_major, double a) {
    using namespace detail;
    (void)a;  // the expression carries 0.16 literals in place of a^2
    const double k1 = d(k_minor);
    const double k2 = d(k_major);
    const double c2 = std::cos(2 * pi / k2);
    const double s2 = std::sin(2 * pi / k2);
    const double ca = std::cos(pi * (k1 - 1) / k1);
    const double cb = std::cos(pi * (k2 - 1) / k2);
    const double sa = std::sin(pi * (k1 - 1) / k1);
    const double sb = std::sin(pi * (k2 - 1) / k2);
    const double num = -2 * c2 + 2 * (2 * ca + cb) - 2;
    const double den = 0.16 * s2 * s2 - 0.16 * sq(sa + sb) + c2 * c2 - 2 * c2 - sq(2 * ca + cb) + 4 * (2 * ca + cb) - 3;
    return num / den;
}

inline double torus_odd_rate(std::size_t k_minor, std::size_t k_major, double a) {
    using namespace detail;
    const double k1 = d(k_minor);
    const double k2 = d(k_major);
    const double p1 = 4 * (2 * std::cos(pi / k1) + std::cos(pi / k2) + std::cos(2 * pi / k2) + 1);
    const double q1 = -a * a * sq(std::sin(2 * pi / k2)) + a * a * sq(std::sin(pi / k1) + std::sin(pi / k2)) -
                      sq(std::cos(2 * pi / k2)) + sq(2 * std::cos(pi / k1) + std::cos(pi / k2)) +
                      8 * std::cos(pi / k1) + 4 * std::cos(pi / k2) + 2 * std::cos(2 * pi / k2) + 3;
    return std::sqrt(a * a * p1 * p1 * sq(std::sin(2 * pi / k2)) / (q1 * q1) +
                     sq(1 - p1 * sq(std::sin(pi / k2)) / q1));
}

// -- m-dimensional torus, all dimensions even ---------------------------------

inline double multi_torus_even_h(std::size_t k_major, std::size_t m, double a) {
    using namespace detail;
    const double c = std::cos(2 * pi / d(k_major));
    const double s = std::sin(2 * pi / d(k_major));
    const double mm = d(m);
    return (2 - 2 * c - 4 * mm) / (1 - 4 * mm * mm + c * c - 2 * c + a * a * s * s);
}

inline double multi_torus_even_rate(std::size_t k_major, std::size_t m, double a) {
    using namespace detail;
    const double c = std::cos(2 * pi / d(k_major));
    const double s = std::sin(2 * pi / d(k_major));
    const double mm = d(m);
    return (a * a * s * s + (4 * mm - 2) * c + c * c + sq(1 - 2 * mm)) /
           (a * a * s * s + c * c - 2 * c - 4 * mm * mm + 1);
}

// -- m-dimensional torus, all dimensions odd ----------------------------------

/// `dims` with the major dimension first; the sums run over every dimension.
inline double multi_torus_odd_h(std::span<const std::size_t> dims, double a) {
    using namespace detail;
    const double m = d(dims.size());
    const double k1 = d(dims.front());
    const double c = std::cos(2 * pi / k1);
    const double s = std::sin(2 * pi / k1);
    double cos_sum = 0.0;
    double sin_sum = 0.0;
    for (std::size_t k : dims) {
        cos_sum += std::cos(pi * (d(k) - 1) / d(k));
        sin_sum += std::sin(pi * (d(k) - 1) / d(k));
    }
    return (2 - 2 * c - 4 * m) /
           (1 + c * c - 2 * c + a * a * s * s - m * m - cos_sum * cos_sum - a * a * sin_sum * sin_sum);
}

// -- r-nearest ring, n even ---------------------------------------------------

inline double rnearest_even_h(std::size_t n, std::size_t r, double a) {
    using namespace detail;
    const double nn = d(n);
    const double rr = d(r);
    const double dirichlet = std::sin((2 * rr + 1) * pi / nn) / std::sin(pi / nn);
    const double cr = std::cos(pi * rr);
    const double t = 1 / std::tan(pi / nn) - std::cos((2 * rr + 1) * pi / nn) / std::sin(pi / nn);
    const double e = a;
    return (cr - dirichlet) /
           (0.25 * dirichlet * dirichlet - (rr + 0.5) * (dirichlet - cr) - cr * cr / 4 + e * e / 4 * t * t);
}

inline double rnearest_even_rate(std::size_t n, std::size_t r, double a) {
    using namespace detail;
    const double nn = d(n);
    const double rr = d(r);
    const double cm1 = std::cos(2 * pi / nn) - 1;
    const double p2 = (a * std::sin(pi / nn) * std::cos((2 * rr + 1) * pi / nn) - 0.5 * a * std::sin(2 * pi / nn)) / cm1;
    const double q2 = std::sin((2 * rr + 1) * pi / nn) / std::sin(pi / nn) - std::cos(pi * rr);
    const double r2 = std::sin(pi / nn) * std::sin((2 * rr + 1) * pi / nn) / cm1 + rr + 0.5;
    const double s2 =
        0.25 * a * a * sq(2 * std::sin(pi / nn) * std::cos((2 * pi * rr + pi) / nn) - std::sin(2 * pi / nn)) / sq(cm1) +
        sq(std::sin(pi / nn)) * sq(std::sin((2 * pi * rr + pi) / nn)) / sq(cm1) +
        (rr + 0.5) * (std::cos(pi * rr) - std::sin((2 * pi * rr + pi) / nn) / std::sin(pi / nn)) -
        0.25 * sq(std::cos(pi * rr));
    return 1 - std::sqrt(sq(p2 * q2 / s2) + r2 * q2 / s2 + 1);
}

// -- r-nearest ring, n odd ----------------------------------------------------

inline double rnearest_odd_h(std::size_t n, std::size_t r, double a) {
    using namespace detail;
    const double nn = d(n);
    const double rr = d(r);
    const double x = pi * (nn - 1) / (2 * nn);
    const double s_near = std::sin((2 * rr + 1) * pi / nn) / std::sin(pi / nn);
    const double s_far = std::sin((2 * rr + 1) * x) / std::sin(x);
    const double t_near = 1 / std::tan(pi / nn) - std::cos((2 * rr + 1) * pi / nn) / std::sin(pi / nn);
    const double t_far = 1 / std::tan(x) - std::cos((2 * rr + 1) * x) / std::sin(x);
    const double e = a;
    return (s_far - s_near) / (0.25 * s_near * s_near + (rr + 0.5) * (-s_far + s_near) - 0.25 * s_far * s_far +
                               e * e / 4 * t_near * t_near - e * e / 4 * t_far * t_far);
}

inline double rnearest_odd_rate(std::size_t n, std::size_t r, double a) {
    using namespace detail;
    const double nn = d(n);
    const double rr = d(r);
    const double x = pi * (nn - 1) * (2 * rr + 1) / (2 * nn);
    const double cm1 = std::cos(2 * pi / nn) - 1;
    const double cp1 = std::cos(pi / nn) + 1;
    const double half = std::cos(pi / (2 * nn));
    const double dirichlet = std::sin((2 * rr + 1) * pi / nn) / std::sin(pi / nn);
    const double p3 = (-a * std::sin(pi / nn) * std::cos((2 * rr + 1) * pi / nn) + 0.5 * a * std::sin(2 * pi / nn)) / cm1;
    const double q3 = -dirichlet + std::sin(x) / half;
    const double r3 = -std::sin(pi / nn) * std::sin((2 * rr + 1) * pi / nn) / cm1 - rr - 0.5;
    const double s3 = -0.25 * a * a * sq(2 * half * std::cos(x) - std::sin(pi / nn)) / sq(cp1) +
                      0.25 * a * a * sq(2 * std::sin(pi / nn) * std::cos((2 * pi * rr + pi) / nn) - std::sin(2 * pi / nn)) / sq(cm1) -
                      sq(half) * sq(std::sin(x)) / sq(cp1) +
                      sq(std::sin(pi / nn)) * sq(std::sin((2 * pi * rr + pi) / nn)) / sq(cm1) +
                      (rr + 0.5) * (std::sin(x) / half - dirichlet);
    return 1 - std::sqrt(sq(p3 * q3 / s3) + r3 * q3 / s3 + 1);
}

}  // namespace consensus::closed_forms
