// Test-only reference implementations, deliberately independent of the
// library code paths they cross-check.
#ifndef INTERVALKIT_TESTS_ORACLES_HPP
#define INTERVALKIT_TESTS_ORACLES_HPP

#include <cmath>
#include <limits>
#include <stdexcept>

namespace oracles {

// erf by its Maclaurin series; accurate to ~1e-15 for |z| <= 3.
inline double erf_series(double z) {
    const double inv_sqrt_pi = 0.5641895835477562869480795;
    double term = z;
    double sum = z;
    for (int n = 1; n < 200; ++n) {
        term *= -z * z / n;
        const double contrib = term / (2.0 * n + 1.0);
        sum += contrib;
        if (std::abs(contrib) < 1e-18 * std::abs(sum)) break;
    }
    return 2.0 * inv_sqrt_pi * sum;
}

inline double normal_cdf_series(double x) {
    return 0.5 * (1.0 + erf_series(x * 0.70710678118654752440));
}

inline double normal_pdf(double x) {
    return 0.39894228040143267794 * std::exp(-0.5 * x * x);
}

// Standard normal quantile by bisection on the series cdf.
inline double normal_quantile_bisect(double p) {
    double lo = -10.0, hi = 10.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (normal_cdf_series(mid) < p)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

// Regularized lower incomplete gamma by its power series alone (no
// continued-fraction branch), adequate for moderate x.
inline double gamma_p_series_only(double a, double x) {
    if (x <= 0.0) return 0.0;
    double ap = a;
    double del = 1.0 / a;
    double sum = del;
    for (int n = 0; n < 10000; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-17)
            return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    throw std::runtime_error("oracle gamma series did not converge");
}

// Fixed-point iteration for cos(x) = x, run to convergence.
inline double dottie_fixed_point() {
    double x = 1.0;
    for (int i = 0; i < 10000; ++i) {
        const double next = std::cos(x);
        if (std::abs(next - x) < 1e-16) return next;
        x = next;
    }
    return x;
}

} // namespace oracles

#endif // INTERVALKIT_TESTS_ORACLES_HPP
