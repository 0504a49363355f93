#ifndef INTERVALKIT_HPD_HPP
#define INTERVALKIT_HPD_HPP

#include <algorithm>
#include <cmath>
#include <utility>

#include "intervalkit/densities.hpp"
#include "intervalkit/errors.hpp"
#include "intervalkit/numeric.hpp"

namespace intervalkit {

/// Flags for the three conditions under which the equal-density interval
/// is the unique shortest interval at its coverage:
///   (i)  it holds probability 1 - alpha,
///   (ii) the density takes the same positive value at both endpoints,
///   (iii) the mode lies strictly inside.
struct ConditionReport {
    bool coverage_ok = false;
    bool endpoint_density_equal = false;
    bool mode_interior = false;
    bool theorem_applies = false;
};

/// Highest-density interval [lower, upper] with the solved density level,
/// the achieved coverage, and the condition flags.
struct HpdInterval {
    double lower = 0.0;
    double upper = 0.0;
    double level = 0.0;    ///< common density value at the endpoints
    double coverage = 0.0; ///< achieved mass on [lower, upper]
    double alpha = 0.0;
    ConditionReport conditions;

    double width() const { return upper - lower; }
};

/// Verifies the three interval conditions without touching the interval.
/// Flag thresholds default looser than the solvers achieve so that
/// externally supplied endpoints rounded to ~6 digits still classify
/// correctly; tests assert the tight bounds on the numbers themselves.
inline ConditionReport check_conditions(const UnimodalDensity& d,
                                        std::pair<double, double> interval, double alpha,
                                        const Tolerances& tol = {},
                                        double coverage_tol = 1e-7,
                                        double density_tol = 1e-6) {
    tol.validate();
    const double l = std::min(interval.first, interval.second);
    const double u = std::max(interval.first, interval.second);
    if (l < d.support().lower || u > d.support().upper)
        throw DomainError("check_conditions: interval exceeds the support");

    ConditionReport r;
    const double coverage = d.mass_between(l, u);
    r.coverage_ok = std::abs(coverage - (1.0 - alpha)) <= coverage_tol;

    const double fl = d.pdf(l);
    const double fu = d.pdf(u);
    const double fm = std::exp(d.log_modal_density());
    const double scale = std::isfinite(fm) ? fm : std::max({fl, fu, 1.0});
    r.endpoint_density_equal = fl > 0.0 && fu > 0.0 && std::abs(fl - fu) <= density_tol * scale;

    r.mode_interior = l < d.mode() && d.mode() < u;
    r.theorem_applies = r.coverage_ok && r.endpoint_density_equal && r.mode_interior;
    return r;
}

/// pdf(x) / pdf(mode), evaluated as exp(log_pdf(x) - log_pdf(mode)) for
/// stability in the tails.
inline double density_ratio_to_mode(const UnimodalDensity& d, double x) {
    const double lm = d.log_modal_density();
    if (!std::isfinite(lm))
        throw ModeAtBoundary("density_ratio_to_mode: modal density is zero or unbounded");
    return std::clamp(std::exp(d.log_pdf(x) - lm), 0.0, 1.0);
}

namespace detail {

// Locates the point on one side of the mode where log_pdf equals log_level.
// Returns the support bound itself when the density never drops below the
// level before reaching it (the level set is truncated by the support).
// Raises NonUniqueHpd when the density is flat from the mode to the bound.
inline double level_endpoint(const UnimodalDensity& d, double log_level, bool lower_side,
                             const Tolerances& tol) {
    const Support& s = d.support();
    const double mode = d.mode();
    const double lm = d.log_modal_density();
    const double bound = lower_side ? s.lower : s.upper;

    if (std::isfinite(bound)) {
        // Approach the bound geometrically. Solving in u = log|x - bound|
        // keeps the root resolvable even when the density plunges within
        // ulps of the support edge.
        double g = -infinity;
        double frac = 1.0;
        bool have_far = false;
        for (int k = 0; k < 220; ++k) {
            frac *= 0.5;
            const double x = bound + (mode - bound) * frac;
            if (x == bound || x == mode) break;
            g = d.log_pdf(x);
            if (g < log_level) {
                have_far = true;
                break;
            }
        }
        if (!have_far) {
            if (std::abs(g - lm) <= 1e-12 * std::max(1.0, std::abs(lm)))
                throw NonUniqueHpd(
                    "hpd_levelset: density is flat at the solution level; "
                    "the interval is not unique");
            return bound; // density still above the level at the support edge
        }
        const double sign = mode > bound ? 1.0 : -1.0;
        const double gap = std::abs(mode - bound);
        const double u = find_root(
            [&](double t) { return d.log_pdf(bound + sign * std::exp(t)) - log_level; },
            Bracket{std::log(gap * frac), std::log(gap)}, tol);
        return bound + sign * std::exp(u);
    }

    const auto range = d.central_range(1e-16);
    double x = lower_side ? std::min(range.first, mode - std::max(1.0, std::abs(mode)))
                          : std::max(range.second, mode + std::max(1.0, std::abs(mode)));
    bool found = false;
    for (int k = 0; k < 200; ++k) {
        if (d.log_pdf(x) < log_level) {
            found = true;
            break;
        }
        x = mode + (x - mode) * 2.0;
        if (!std::isfinite(x)) break;
    }
    if (!found)
        throw NumericFailure("hpd_levelset: tail never falls below the candidate level");
    const double lo = std::min(x, mode);
    const double hi = std::max(x, mode);
    return find_root([&](double t) { return d.log_pdf(t) - log_level; }, Bracket{lo, hi}, tol);
}

inline void require_two_sided(const UnimodalDensity& d) {
    if (!d.is_normalized())
        throw NumericFailure("hpd: density does not integrate to one");
    if (d.mode_at_boundary())
        throw ModeAtBoundary(
            "hpd: mode sits on a support boundary; use hpd_one_sided instead");
    if (!std::isfinite(d.log_modal_density()))
        throw ModeAtBoundary("hpd: modal density is zero or unbounded");
}

} // namespace detail

/// Two-sided HPD interval by level-set search: for a candidate density
/// level c the endpoints solve pdf(x) = c on each side of the mode, and an
/// outer root-find in log c matches the coverage to 1 - alpha.
inline HpdInterval hpd_levelset(const UnimodalDensity& d, double alpha,
                                const Tolerances& tol = {}) {
    tol.validate();
    if (!(alpha > 0.0 && alpha < 1.0))
        throw DomainError("hpd_levelset: alpha must lie strictly in (0, 1)");
    detail::require_two_sided(d);

    const double lm = d.log_modal_density();
    const double target = 1.0 - alpha;

    auto coverage_minus_target = [&](double log_level) {
        const double l = detail::level_endpoint(d, log_level, true, tol);
        const double u = detail::level_endpoint(d, log_level, false, tol);
        return d.mass_between(l, u) - target;
    };

    // Search in log level: coverage is near-flat in the level close to the
    // modal density, and the log scale keeps the bracket well conditioned.
    double t_lo = lm + std::log(1e-12);
    double t_hi = lm + std::log1p(-1e-12);
    double f_lo = coverage_minus_target(t_lo);
    double f_hi = coverage_minus_target(t_hi);
    for (int k = 0; k < 8 && f_lo < 0.0; ++k) {
        t_lo -= 20.0;
        f_lo = coverage_minus_target(t_lo);
    }
    for (int k = 0; k < 8 && f_hi > 0.0; ++k) {
        t_hi = lm + (t_hi - lm) * 0.125;
        f_hi = coverage_minus_target(t_hi);
    }
    if (f_lo < 0.0 || f_hi > 0.0)
        throw NumericFailure("hpd_levelset: could not bracket the coverage target");

    // Tight in log level: near-flat densities squeeze the whole coverage
    // range into a sliver of levels.
    Tolerances outer = tol;
    outer.abs_x = 1e-15;
    outer.rel_f = std::min(tol.rel_f, 1e-11);
    const double t_star = find_root(coverage_minus_target, Bracket{t_lo, t_hi}, outer);

    HpdInterval out;
    out.lower = detail::level_endpoint(d, t_star, true, tol);
    out.upper = detail::level_endpoint(d, t_star, false, tol);
    out.level = std::exp(t_star);
    out.coverage = d.mass_between(out.lower, out.upper);
    out.alpha = alpha;
    out.conditions = check_conditions(d, {out.lower, out.upper}, alpha, tol);
    return out;
}

/// Independent HPD construction: minimizes the interval width
/// w(p) = quantile(p + 1 - alpha) - quantile(p) over p in [0, alpha] by a
/// grid scan refined with golden-section search. Serves as the oracle for
/// hpd_levelset. Ties resolve to the smaller p.
inline HpdInterval hpd_quantile_scan(const UnimodalDensity& d, double alpha,
                                     int grid_size = 400, const Tolerances& tol = {}) {
    tol.validate();
    if (!(alpha > 0.0 && alpha < 1.0))
        throw DomainError("hpd_quantile_scan: alpha must lie strictly in (0, 1)");
    if (grid_size < 100)
        throw DomainError("hpd_quantile_scan: grid_size must be >= 100");
    if (!d.is_normalized())
        throw NumericFailure("hpd: density does not integrate to one");

    const Support& s = d.support();
    auto lower_at = [&](double p) { return p <= 0.0 ? s.lower : d.quantile(p); };
    auto upper_at = [&](double p) {
        const double q = p + 1.0 - alpha;
        return q >= 1.0 ? s.upper : d.quantile(q);
    };
    auto width_at = [&](double p) { return upper_at(p) - lower_at(p); };

    int best_i = 0;
    double best_w = infinity;
    for (int i = 0; i < grid_size; ++i) {
        const double p = alpha * i / (grid_size - 1);
        const double w = width_at(p);
        if (w < best_w) {
            best_w = w;
            best_i = i;
        }
    }
    if (!std::isfinite(best_w))
        throw NumericFailure("hpd_quantile_scan: no finite-width interval on the grid");

    double a = alpha * std::max(0, best_i - 1) / (grid_size - 1);
    double b = alpha * std::min(grid_size - 1, best_i + 1) / (grid_size - 1);
    constexpr double invphi = 0.6180339887498949;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double w1 = width_at(x1);
    double w2 = width_at(x2);
    const double p_stop = std::max(1e-13, 1e-12 * alpha);
    for (int it = 0; it < 200 && (b - a) > p_stop; ++it) {
        if (w1 <= w2) {
            b = x2;
            x2 = x1;
            w2 = w1;
            x1 = b - invphi * (b - a);
            w1 = width_at(x1);
        } else {
            a = x1;
            x1 = x2;
            w1 = w2;
            x2 = a + invphi * (b - a);
            w2 = width_at(x2);
        }
    }
    double p_star = (w1 <= w2) ? x1 : x2;
    double w_star = std::min(w1, w2);

    // Deterministic output: snap to the leftmost shortest interval.
    const double tie_eps = 1e-12 * (1.0 + std::abs(w_star));
    const double w0 = width_at(0.0);
    if (std::isfinite(w0) && w0 <= w_star + tie_eps) {
        p_star = 0.0;
        w_star = w0;
    }

    HpdInterval out;
    out.lower = lower_at(p_star);
    out.upper = upper_at(p_star);
    const bool l_interior = out.lower > s.lower;
    const bool u_interior = out.upper < s.upper;
    if (l_interior && u_interior)
        out.level = 0.5 * (d.pdf(out.lower) + d.pdf(out.upper));
    else
        out.level = l_interior ? d.pdf(out.lower) : d.pdf(out.upper);
    out.coverage = d.mass_between(out.lower, out.upper);
    out.alpha = alpha;
    out.conditions = check_conditions(d, {out.lower, out.upper}, alpha, tol);
    return out;
}

/// One-sided interval for densities whose mode sits on a support boundary
/// (monotone densities). The equal-density conditions cannot hold there;
/// the report flags this instead of pretending otherwise.
inline HpdInterval hpd_one_sided(const UnimodalDensity& d, double alpha,
                                 const Tolerances& tol = {}) {
    tol.validate();
    if (!(alpha > 0.0 && alpha < 1.0))
        throw DomainError("hpd_one_sided: alpha must lie strictly in (0, 1)");
    if (!d.mode_at_boundary())
        throw DomainError("hpd_one_sided: density mode is not at a support boundary");
    if (!d.is_normalized())
        throw NumericFailure("hpd: density does not integrate to one");

    const Support& s = d.support();
    const double dist_lo = std::isfinite(s.lower) ? std::abs(d.mode() - s.lower) : infinity;
    const double dist_hi = std::isfinite(s.upper) ? std::abs(d.mode() - s.upper) : infinity;

    HpdInterval out;
    if (dist_lo <= dist_hi) {
        out.lower = s.lower;
        out.upper = d.quantile(1.0 - alpha);
        out.level = d.pdf(out.upper);
    } else {
        out.lower = d.quantile(alpha);
        out.upper = s.upper;
        out.level = d.pdf(out.lower);
    }
    out.coverage = d.mass_between(out.lower, out.upper);
    out.alpha = alpha;
    out.conditions.coverage_ok = std::abs(out.coverage - (1.0 - alpha)) <= 1e-7;
    out.conditions.endpoint_density_equal = false;
    out.conditions.mode_interior = false;
    out.conditions.theorem_applies = false;
    return out;
}

} // namespace intervalkit

#endif // INTERVALKIT_HPD_HPP
