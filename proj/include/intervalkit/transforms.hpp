#ifndef INTERVALKIT_TRANSFORMS_HPP
#define INTERVALKIT_TRANSFORMS_HPP

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "intervalkit/densities.hpp"
#include "intervalkit/errors.hpp"
#include "intervalkit/hpd.hpp"
#include "intervalkit/numeric.hpp"

namespace intervalkit {

enum class Direction { Increasing, Decreasing };

/// Differentiable monotone map with explicit inverse and derivative.
struct MonotoneTransform {
    std::function<double(double)> forward;
    std::function<double(double)> inverse;
    std::function<double(double)> derivative;
    Direction direction = Direction::Increasing;
    std::string name;

    double operator()(double x) const { return forward(x); }
};

/// ChangeOfVariable carries the |dx/dy| Jacobian, so the output is again a
/// probability density. Reparameterization is the Jacobian-free relabeling
/// used for likelihood-style quantities; its output generally does not
/// integrate to one.
enum class PushforwardSemantics { ChangeOfVariable, Reparameterization };

inline MonotoneTransform identity_transform() {
    return {[](double x) { return x; }, [](double y) { return y; },
            [](double) { return 1.0; }, Direction::Increasing, "identity"};
}

inline MonotoneTransform log_transform() {
    return {[](double x) { return std::log(x); }, [](double y) { return std::exp(y); },
            [](double x) { return 1.0 / x; }, Direction::Increasing, "log"};
}

inline MonotoneTransform exp_transform() {
    return {[](double x) { return std::exp(x); }, [](double y) { return std::log(y); },
            [](double x) { return std::exp(x); }, Direction::Increasing, "exp"};
}

inline MonotoneTransform affine_transform(double a, double b) {
    if (a == 0.0 || !std::isfinite(a) || !std::isfinite(b))
        throw DomainError("affine transform: requires finite a != 0 and finite b");
    return {[a, b](double x) { return a * x + b; },
            [a, b](double y) { return (y - b) / a; },
            [a](double) { return a; },
            a > 0.0 ? Direction::Increasing : Direction::Decreasing,
            "affine(" + std::to_string(a) + "," + std::to_string(b) + ")"};
}

/// x -> x^k on the positive half-line.
inline MonotoneTransform power_transform(double k) {
    if (k == 0.0 || !std::isfinite(k))
        throw DomainError("power transform: requires finite k != 0");
    return {[k](double x) { return std::pow(x, k); },
            [k](double y) { return std::pow(y, 1.0 / k); },
            [k](double x) { return k * std::pow(x, k - 1.0); },
            k > 0.0 ? Direction::Increasing : Direction::Decreasing,
            "power(" + std::to_string(k) + ")"};
}

inline MonotoneTransform logit_transform() {
    return {[](double x) { return std::log(x) - std::log1p(-x); },
            [](double y) { return 1.0 / (1.0 + std::exp(-y)); },
            [](double x) { return 1.0 / (x * (1.0 - x)); },
            Direction::Increasing, "logit"};
}

/// Builds a transform from CLI syntax: "log", "exp", "identity", "logit",
/// "affine:a,b", "power:k".
inline MonotoneTransform builtin_transform(std::string_view spec) {
    const auto colon = spec.find(':');
    const std::string_view name = spec.substr(0, colon);
    std::vector<double> args;
    if (colon != std::string_view::npos) {
        std::string_view rest = spec.substr(colon + 1);
        while (!rest.empty()) {
            const auto comma = rest.find(',');
            const std::string_view tok = rest.substr(0, comma);
            double v = 0.0;
            const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
            if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
                throw DomainError("transform: bad numeric argument '" + std::string(tok) + "'");
            args.push_back(v);
            if (comma == std::string_view::npos) break;
            rest = rest.substr(comma + 1);
        }
    }
    auto expect = [&](std::size_t n) {
        if (args.size() != n)
            throw DomainError("transform '" + std::string(name) + "': expected " +
                              std::to_string(n) + " argument(s)");
    };
    if (name == "identity") { expect(0); return identity_transform(); }
    if (name == "log") { expect(0); return log_transform(); }
    if (name == "exp") { expect(0); return exp_transform(); }
    if (name == "logit") { expect(0); return logit_transform(); }
    if (name == "affine") { expect(2); return affine_transform(args[0], args[1]); }
    if (name == "power") { expect(1); return power_transform(args[0]); }
    throw DomainError("unknown transform '" + std::string(name) + "'");
}

/// Image of an interval under a monotone map, returned ordered.
inline std::pair<double, double> map_interval_monotone(std::pair<double, double> interval,
                                                       const MonotoneTransform& g) {
    const double a = g.forward(interval.first);
    const double b = g.forward(interval.second);
    if (std::isnan(a) || std::isnan(b))
        throw DomainError("map_interval_monotone: transform undefined on the interval");
    return {std::min(a, b), std::max(a, b)};
}

/// Image of an interval under a general continuous map: endpoint values
/// plus interior extrema.
template <typename F>
std::pair<double, double> map_interval_general(std::pair<double, double> interval, F&& f,
                                               const Tolerances& tol = {}) {
    const double l = std::min(interval.first, interval.second);
    const double u = std::max(interval.first, interval.second);
    const double fl = f(l);
    const double fu = f(u);
    if (std::isnan(fl) || std::isnan(fu))
        throw NumericFailure("map_interval_general: function undefined at an endpoint");
    double lo = std::min(fl, fu);
    double hi = std::max(fl, fu);
    if (l < u) {
        const auto mx = maximize_1d(f, Bracket{l, u}, tol);
        const auto mn = maximize_1d([&](double x) { return -f(x); }, Bracket{l, u}, tol);
        hi = std::max(hi, mx.second);
        lo = std::min(lo, -mn.second);
    }
    return {lo, hi};
}

namespace detail {

inline double map_support_endpoint(const MonotoneTransform& g, double e) {
    const double y = g.forward(e);
    if (std::isnan(y))
        throw DomainError("pushforward: transform undefined at a support endpoint");
    return y;
}

inline void verify_unimodal_grid(const UnimodalDensity& d, int n = 1000) {
    auto [lo, hi] = d.central_range(1e-9);
    if (!(lo < hi)) return;
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i)
        v[i] = d.log_pdf(lo + (hi - lo) * i / (n - 1));
    const auto peak = std::max_element(v.begin(), v.end()) - v.begin();
    auto slack = [](double x) { return 1e-9 * std::max(1.0, std::abs(x)); };
    for (long i = 0; i < peak; ++i)
        if (v[i + 1] < v[i] - slack(v[i]))
            throw NonUnimodal("pushforward: density fails the unimodality grid check");
    for (long i = peak; i + 1 < n; ++i)
        if (v[i + 1] > v[i] + slack(v[i]))
            throw NonUnimodal("pushforward: density fails the unimodality grid check");
}

} // namespace detail

/// Density of Y = g(X). Under ChangeOfVariable semantics,
/// log f_Y(y) = log f_X(g^{-1}(y)) - log|g'(g^{-1}(y))| and the cdf maps
/// through exactly; under Reparameterization the Jacobian term is dropped
/// and the mode maps as g(mode). The result is rejected if it fails a
/// 1000-point unimodality check.
inline UnimodalDensity pushforward(const UnimodalDensity& d, const MonotoneTransform& g,
                                   PushforwardSemantics semantics,
                                   const Tolerances& tol = {}) {
    if (!g.forward || !g.inverse || !g.derivative)
        throw DomainError("pushforward: transform must provide forward, inverse, derivative");
    const Support& s = d.support();
    const bool increasing = g.direction == Direction::Increasing;

    const double m_lo = detail::map_support_endpoint(g, s.lower);
    const double m_hi = detail::map_support_endpoint(g, s.upper);
    Support ms;
    ms.lower = std::min(m_lo, m_hi);
    ms.upper = std::max(m_lo, m_hi);
    ms.lower_open = (increasing ? s.lower_open : s.upper_open) || !std::isfinite(ms.lower);
    ms.upper_open = (increasing ? s.upper_open : s.lower_open) || !std::isfinite(ms.upper);
    ms.validate();

    const auto base_range = d.central_range(1e-9);
    const double h_a = g.forward(base_range.first);
    const double h_b = g.forward(base_range.second);

    DensityParts parts;
    parts.support = ms;
    parts.range_hint = std::make_pair(std::min(h_a, h_b), std::max(h_a, h_b));
    if (semantics == PushforwardSemantics::ChangeOfVariable) {
        parts.log_pdf = [d, g](double y) {
            const double x = g.inverse(y);
            const double lp = d.log_pdf(x);
            if (lp == -infinity) return -infinity;
            return lp - std::log(std::abs(g.derivative(x)));
        };
        parts.cdf = [d, g, increasing](double y) {
            const double c = d.cdf(g.inverse(y));
            return increasing ? c : 1.0 - c;
        };
        parts.quantile = [d, g, increasing](double p) {
            return g.forward(d.quantile(increasing ? p : 1.0 - p));
        };
        parts.normalized = true;
        // seeds the numeric mode search; exact for Jacobian-constant maps
        parts.mode_candidate = g.forward(d.mode());
    } else {
        parts.log_pdf = [d, g](double y) { return d.log_pdf(g.inverse(y)); };
        parts.normalized = false;
        parts.mode = g.forward(d.mode()); // argmax invariance of the relabeling
    }

    UnimodalDensity out = UnimodalDensity::from_parts(std::move(parts), tol);
    detail::verify_unimodal_grid(out);
    return out;
}

/// Side-by-side record of what a monotone transform does to an HPD
/// interval: the mapped interval, the HPD recomputed on the with-Jacobian
/// pushforward, both modes, and the endpoint-to-mode density ratios under
/// the Jacobian-free reading (where the invariance is an exact identity).
struct InvarianceReport {
    HpdInterval original_hpd;
    std::pair<double, double> mapped_interval;
    HpdInterval pushforward_hpd;
    double mode_mapped = 0.0;
    double mode_of_pushforward = 0.0;
    std::pair<double, double> ratio_original;
    std::pair<double, double> ratio_reparam;
    struct Widths {
        double mapped = 0.0;
        double recomputed = 0.0;
    } widths;
};

inline InvarianceReport invariance_report(const UnimodalDensity& d, const MonotoneTransform& g,
                                          double alpha, const Tolerances& tol = {}) {
    InvarianceReport r;
    r.original_hpd = hpd_levelset(d, alpha, tol);
    const double l = r.original_hpd.lower;
    const double u = r.original_hpd.upper;
    r.mapped_interval = map_interval_monotone({l, u}, g);

    const UnimodalDensity pushed = pushforward(d, g, PushforwardSemantics::ChangeOfVariable, tol);
    r.pushforward_hpd = hpd_levelset(pushed, alpha, tol);
    r.mode_mapped = g.forward(d.mode());
    r.mode_of_pushforward = pushed.mode();

    r.ratio_original = {density_ratio_to_mode(d, l), density_ratio_to_mode(d, u)};

    const UnimodalDensity relabeled =
        pushforward(d, g, PushforwardSemantics::Reparameterization, tol);
    const double log_at_mode = relabeled.log_pdf(g.forward(d.mode()));
    auto reparam_ratio = [&](double x) {
        return std::clamp(std::exp(relabeled.log_pdf(g.forward(x)) - log_at_mode), 0.0, 1.0);
    };
    r.ratio_reparam = {reparam_ratio(l), reparam_ratio(u)};

    r.widths.mapped = r.mapped_interval.second - r.mapped_interval.first;
    r.widths.recomputed = r.pushforward_hpd.width();
    return r;
}

} // namespace intervalkit

#endif // INTERVALKIT_TRANSFORMS_HPP
