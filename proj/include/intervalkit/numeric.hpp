#ifndef INTERVALKIT_NUMERIC_HPP
#define INTERVALKIT_NUMERIC_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "intervalkit/errors.hpp"

namespace intervalkit {

/// Interval [lo, hi] handed to the 1-D solvers. lo < hi is required;
/// for root finding the target function must change sign across it.
struct Bracket {
    double lo;
    double hi;
};

/// Shared solver tolerances. Defaults are tight enough that downstream
/// 1e-6 interval tolerances are dominated by modeling, not arithmetic.
struct Tolerances {
    double abs_x = 1e-10;   ///< absolute tolerance on the abscissa
    double rel_f = 1e-12;   ///< relative tolerance on the function value
    double quad_tol = 1e-9; ///< quadrature absolute tolerance
    int max_iter = 200;

    void validate() const {
        if (!(abs_x > 0.0) || !(rel_f > 0.0) || !(quad_tol > 0.0))
            throw DomainError("Tolerances: all tolerances must be strictly positive");
        if (max_iter < 1)
            throw DomainError("Tolerances: max_iter must be >= 1");
    }
};

/// Brent-style bracketing root finder: bisection guarded by secant and
/// inverse quadratic interpolation. Deterministic; never leaves [lo, hi].
template <typename F>
double find_root(F&& f, Bracket bracket, const Tolerances& tol = {}) {
    tol.validate();
    if (!(bracket.lo < bracket.hi))
        throw DomainError("find_root: bracket requires lo < hi");

    double a = bracket.lo, b = bracket.hi;
    double fa = f(a), fb = f(b);
    if (std::isnan(fa) || std::isnan(fb))
        throw NumericFailure("find_root: function is NaN at a bracket endpoint");
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0.0) == (fb > 0.0))
        throw NoSignChange("find_root: f has the same sign at both bracket endpoints");

    const double fscale = std::min(std::abs(fa), std::abs(fb));
    constexpr double eps = std::numeric_limits<double>::epsilon();

    double c = a, fc = fa;
    double d = b - a, e = d;
    for (int iter = 0; iter < tol.max_iter; ++iter) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol1 = 2.0 * eps * std::abs(b) + 0.5 * tol.abs_x;
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0 ||
            (std::isfinite(fb) && std::abs(fb) <= tol.rel_f * fscale))
            return b;

        if (std::abs(e) >= tol1 && std::isfinite(fa) && std::isfinite(fb) &&
            std::isfinite(fc) && std::abs(fa) > std::abs(fb)) {
            // Attempt interpolation: secant, or inverse quadratic when
            // three distinct points are available.
            double p, q;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                const double qq = fa / fc;
                const double r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        if (std::abs(d) > tol1)
            b += d;
        else
            b += (xm > 0.0 ? tol1 : -tol1);
        fb = f(b);
        if (std::isnan(fb))
            throw NumericFailure("find_root: function returned NaN inside the bracket");
    }
    throw MaxIterationsExceeded("find_root: no convergence within max_iter");
}

/// Maximizes a continuous unimodal function on [lo, hi] by Brent's
/// parabolic-interpolation/golden-section search. Returns (argmax, max).
/// The argmax is localized to within abs_x of the true maximizer.
template <typename F>
std::pair<double, double> maximize_1d(F&& f, Bracket bracket, const Tolerances& tol = {}) {
    tol.validate();
    if (!(bracket.lo < bracket.hi))
        throw DomainError("maximize_1d: bracket requires lo < hi");

    constexpr double golden = 0.3819660112501051; // 2 - phi
    constexpr double eps = std::numeric_limits<double>::epsilon();
    // Internal target is abs_x/8 so that two runs on rescaled inputs
    // land within abs_x of each other.
    const double t_abs = 0.125 * tol.abs_x;

    double a = bracket.lo, b = bracket.hi;
    double x = a + golden * (b - a);
    double w = x, v = x;
    double fx = -f(x);
    if (std::isnan(fx))
        throw NumericFailure("maximize_1d: function is NaN inside the bracket");
    double fw = fx, fv = fx;
    double d = 0.0, e = 0.0;

    for (int iter = 0; iter < tol.max_iter; ++iter) {
        const double xm = 0.5 * (a + b);
        const double tol1 = eps * std::abs(x) + t_abs;
        const double tol2 = 2.0 * tol1;
        if (std::abs(x - xm) <= tol2 - 0.5 * (b - a))
            return {x, -fx};

        bool parabolic = false;
        if (std::abs(e) > tol1) {
            // Fit a parabola through (v, w, x).
            const double r = (x - w) * (fx - fv);
            double q = (x - v) * (fx - fw);
            double p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if (q > 0.0) p = -p;
            q = std::abs(q);
            const double e_prev = e;
            e = d;
            if (std::abs(p) < std::abs(0.5 * q * e_prev) && p > q * (a - x) && p < q * (b - x)) {
                d = p / q;
                const double u_trial = x + d;
                if (u_trial - a < tol2 || b - u_trial < tol2)
                    d = (xm > x ? tol1 : -tol1);
                parabolic = true;
            }
        }
        if (!parabolic) {
            e = (x < xm ? b : a) - x;
            d = golden * e;
        }

        const double u = (std::abs(d) >= tol1) ? x + d : x + (d > 0.0 ? tol1 : -tol1);
        const double fu = -f(u);
        if (std::isnan(fu))
            throw NumericFailure("maximize_1d: function returned NaN inside the bracket");

        if (fu <= fx) {
            if (u < x) b = x; else a = x;
            v = w; fv = fw;
            w = x; fw = fx;
            x = u; fx = fu;
        } else {
            if (u < x) a = u; else b = u;
            if (fu <= fw || w == x) {
                v = w; fv = fw;
                w = u; fw = fu;
            } else if (fu <= fv || v == x || v == w) {
                v = u; fv = fu;
            }
        }
    }
    throw MaxIterationsExceeded("maximize_1d: no convergence within max_iter");
}

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule (positive half).
inline constexpr std::array<double, 8> gk15_nodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr std::array<double, 8> gk15_weights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> g7_weights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct GkPanel {
    double integral;
    double error;
};

template <typename F>
GkPanel gk15_panel(F&& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double result_k = gk15_weights[7] * fc;
    double result_g = g7_weights[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const double dx = half * gk15_nodes[j];
        const double fsum = f(center - dx) + f(center + dx);
        result_k += gk15_weights[j] * fsum;
        if (j % 2 == 1)
            result_g += g7_weights[j / 2] * fsum;
    }
    result_k *= half;
    result_g *= half;
    if (std::isnan(result_k))
        throw NumericFailure("integrate: integrand returned NaN");
    return {result_k, std::abs(result_k - result_g)};
}

} // namespace detail

/// Adaptive quadrature over the finite interval [a, b]: Gauss-Kronrod 7-15
/// panels, splitting the worst panel first until the summed embedded error
/// estimates drop below quad_tol.
template <typename F>
double integrate(F&& f, double a, double b, const Tolerances& tol = {}) {
    tol.validate();
    if (!(a <= b))
        throw DomainError("integrate: requires a <= b");
    if (a == b)
        return 0.0;
    if (!std::isfinite(a) || !std::isfinite(b))
        throw DomainError("integrate: bounds must be finite (truncate infinite tails first)");

    struct Segment {
        double a, b, integral, error;
        bool operator<(const Segment& o) const { return error < o.error; }
    };
    const int max_segments = std::max(1000, tol.max_iter * 20);

    std::vector<Segment> heap;
    auto push = [&](double lo, double hi) -> double {
        const auto panel = detail::gk15_panel(f, lo, hi);
        heap.push_back({lo, hi, panel.integral, panel.error});
        std::push_heap(heap.begin(), heap.end());
        return panel.error;
    };
    double total_error = push(a, b);
    double done_integral = 0.0; // panels too narrow to split further

    while (total_error > tol.quad_tol && !heap.empty()) {
        if (static_cast<int>(heap.size()) >= max_segments)
            throw MaxSubdivisionsExceeded("integrate: exceeded subdivision budget");
        std::pop_heap(heap.begin(), heap.end());
        const Segment worst = heap.back();
        heap.pop_back();
        const double mid = 0.5 * (worst.a + worst.b);
        total_error -= worst.error;
        if (!(mid > worst.a && mid < worst.b)) {
            done_integral += worst.integral; // cannot bisect at machine precision
            continue;
        }
        total_error += push(worst.a, mid);
        total_error += push(mid, worst.b);
    }

    double total = done_integral;
    for (const auto& seg : heap)
        total += seg.integral;
    return total;
}

} // namespace intervalkit

#endif // INTERVALKIT_NUMERIC_HPP
