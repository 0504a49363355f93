#ifndef INTERVALKIT_DENSITIES_HPP
#define INTERVALKIT_DENSITIES_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "intervalkit/errors.hpp"
#include "intervalkit/numeric.hpp"
#include "intervalkit/special_functions.hpp"

namespace intervalkit {

inline constexpr double infinity = std::numeric_limits<double>::infinity();

/// Range of valid x values. Endpoints may be infinite; open flags tell
/// whether the endpoint itself belongs to the support.
struct Support {
    double lower = -infinity;
    double upper = infinity;
    bool lower_open = true;
    bool upper_open = true;

    bool contains(double x) const {
        if (std::isnan(x)) return false;
        if (x < lower || (lower_open && x == lower)) return false;
        if (x > upper || (upper_open && x == upper)) return false;
        return true;
    }
    bool bounded_below() const { return std::isfinite(lower); }
    bool bounded_above() const { return std::isfinite(upper); }

    void validate() const {
        if (!(lower < upper))
            throw DomainError("Support: requires lower < upper");
    }
};

enum class Family { Normal, LogNormal, Gamma, Beta, Exponential, Custom };

inline const char* family_name(Family f) {
    switch (f) {
        case Family::Normal: return "normal";
        case Family::LogNormal: return "lognormal";
        case Family::Gamma: return "gamma";
        case Family::Beta: return "beta";
        case Family::Exponential: return "exponential";
        case Family::Custom: return "custom";
    }
    return "unknown";
}

enum class Normalization { Normalized, Unnormalized };

/// User-supplied closed-form density. Unnormalized densities are
/// normalized by quadrature at construction time.
struct CustomDensitySpec {
    std::function<double(double)> log_pdf;
    Support support;
    Normalization normalization = Normalization::Unnormalized;
};

namespace detail {

// Drop (in log density) below the mode past which tails are truncated
// for quadrature: pdf < 1e-16 * modal density.
inline constexpr double log_tail_drop = 36.841361487904734;

template <typename F>
std::pair<double, double> locate_log_maximum(F&& f, const Support& s, const Tolerances& tol) {
    double anchor;
    if (s.bounded_below() && s.bounded_above())
        anchor = 0.5 * (s.lower + s.upper);
    else if (s.bounded_below())
        anchor = s.lower + 1.0;
    else if (s.bounded_above())
        anchor = s.upper - 1.0;
    else
        anchor = 0.0;

    std::vector<double> pts;
    pts.reserve(130);
    pts.push_back(anchor);
    auto push_toward = [&](bool lower_side) {
        const double bound = lower_side ? s.lower : s.upper;
        if (std::isfinite(bound)) {
            double gap = anchor - bound;
            for (int k = 1; k <= 50; ++k) {
                gap *= 0.5;
                const double x = bound + gap;
                if (x == bound || x == anchor) break;
                pts.push_back(x);
            }
        } else {
            double step = std::max(1.0, std::abs(anchor));
            for (int k = 0; k <= 60; ++k) {
                pts.push_back(lower_side ? anchor - step : anchor + step);
                step *= 2.0;
            }
        }
    };
    push_toward(true);
    push_toward(false);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    std::size_t best = pts.size();
    double best_val = -infinity;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double v = f(pts[i]);
        if (std::isnan(v)) continue;
        if (v > best_val) {
            best_val = v;
            best = i;
        }
    }
    if (best == pts.size() || best_val == -infinity)
        throw NumericFailure("density maximum search: log-pdf is -inf everywhere probed");

    const double lo = pts[best > 0 ? best - 1 : best];
    const double hi = pts[best + 1 < pts.size() ? best + 1 : best];
    if (!(lo < hi))
        return {pts[best], best_val};
    auto [x, v] = maximize_1d(f, Bracket{lo, hi}, tol);
    if (v < best_val) {
        x = pts[best];
        v = best_val;
    }
    return {x, v};
}

} // namespace detail

/// Pieces for assembling a density object directly; used for custom
/// densities and transform pushforwards.
struct DensityParts {
    std::function<double(double)> log_pdf; ///< already normalized if `normalized`
    Support support;
    std::optional<double> mode;                              ///< numeric search when absent
    std::optional<double> mode_candidate;                    ///< extra argmax candidate
    std::function<double(double)> cdf;                       ///< optional closed form
    std::function<double(double)> quantile;                  ///< optional closed form
    bool normalized = true;
    std::optional<std::pair<double, double>> range_hint;     ///< effective mass range
};

/// A continuous density with a single mode: evaluable pdf/log-pdf/cdf,
/// known support, known mode. Immutable after construction.
class UnimodalDensity {
public:
    static UnimodalDensity normal(double mu, double sigma) {
        if (!(sigma > 0.0)) throw DomainError("normal: sigma must be > 0");
        UnimodalDensity d;
        d.family_ = Family::Normal;
        d.params_ = {mu, sigma};
        d.support_ = Support{-infinity, infinity, true, true};
        d.mode_ = mu;
        d.log_mode_density_ = -std::log(sigma) - 0.5 * log_two_pi;
        return d;
    }

    static UnimodalDensity lognormal(double mu, double sigma) {
        if (!(sigma > 0.0)) throw DomainError("lognormal: sigma must be > 0");
        UnimodalDensity d;
        d.family_ = Family::LogNormal;
        d.params_ = {mu, sigma};
        d.support_ = Support{0.0, infinity, true, true};
        d.mode_ = std::exp(mu - sigma * sigma);
        d.log_mode_density_ = d.log_pdf(d.mode_);
        return d;
    }

    static UnimodalDensity gamma(double shape, double rate) {
        if (!(shape > 0.0) || !(rate > 0.0))
            throw DomainError("gamma: shape and rate must be > 0");
        UnimodalDensity d;
        d.family_ = Family::Gamma;
        d.params_ = {shape, rate};
        d.support_ = Support{0.0, infinity, false, true};
        if (shape > 1.0) {
            d.mode_ = (shape - 1.0) / rate;
            d.log_mode_density_ = d.log_pdf(d.mode_);
        } else {
            // shape == 1 is the exponential shape; shape < 1 is unbounded
            // at zero (infinite modal density sentinel).
            d.mode_ = 0.0;
            d.mode_at_boundary_ = true;
            d.log_mode_density_ = (shape == 1.0) ? std::log(rate) : infinity;
        }
        return d;
    }

    static UnimodalDensity beta(double a, double b) {
        if (!(a > 0.0) || !(b > 0.0))
            throw DomainError("beta: both shape parameters must be > 0");
        if (a < 1.0 && b < 1.0)
            throw DomainError("beta: a < 1 and b < 1 gives a bimodal (U-shaped) density");
        UnimodalDensity d;
        d.family_ = Family::Beta;
        d.params_ = {a, b};
        d.support_ = Support{0.0, 1.0, false, false};
        if (a > 1.0 && b > 1.0) {
            d.mode_ = (a - 1.0) / (a + b - 2.0);
            d.log_mode_density_ = d.log_pdf(d.mode_);
        } else if (a == 1.0 && b == 1.0) {
            d.mode_ = 0.5; // flat density: every point is modal
            d.log_mode_density_ = 0.0;
        } else if (a <= 1.0) {
            d.mode_ = 0.0;
            d.mode_at_boundary_ = true;
            d.log_mode_density_ = (a == 1.0) ? std::log(b) : infinity;
        } else {
            d.mode_ = 1.0;
            d.mode_at_boundary_ = true;
            d.log_mode_density_ = (b == 1.0) ? std::log(a) : infinity;
        }
        return d;
    }

    static UnimodalDensity exponential(double rate) {
        if (!(rate > 0.0)) throw DomainError("exponential: rate must be > 0");
        UnimodalDensity d;
        d.family_ = Family::Exponential;
        d.params_ = {rate};
        d.support_ = Support{0.0, infinity, false, true};
        d.mode_ = 0.0;
        d.mode_at_boundary_ = true;
        d.log_mode_density_ = std::log(rate);
        return d;
    }

    static UnimodalDensity custom(const CustomDensitySpec& spec, const Tolerances& tol = {}) {
        if (!spec.log_pdf)
            throw DomainError("custom density: log_pdf callable required");
        spec.support.validate();
        UnimodalDensity d;
        d.family_ = Family::Custom;
        d.support_ = spec.support;
        d.tol_ = tol;
        d.raw_log_pdf_ = spec.log_pdf;
        d.init_custom_mode(tol);
        d.init_truncation(tol);
        // One quadrature makes every downstream integral a true probability.
        const double shifted_mass = integrate(
            [&](double x) { return std::exp(d.bounded_log_pdf(x) - d.log_mode_density_); },
            d.trunc_lo_, d.trunc_hi_, tol);
        if (!(shifted_mass > 0.0) || !std::isfinite(shifted_mass))
            throw NumericFailure("custom density: normalization integral is not finite");
        const double log_z = std::log(shifted_mass) + d.log_mode_density_;
        if (spec.normalization == Normalization::Unnormalized) {
            d.log_shift_ = log_z;
            d.log_mode_density_ -= log_z;
        } else if (std::abs(std::exp(log_z) - 1.0) > 1e-4) {
            throw DomainError("custom density: declared Normalized but integrates to " +
                              std::to_string(std::exp(log_z)));
        }
        d.init_total_mass();
        return d;
    }

    static UnimodalDensity from_parts(DensityParts parts, const Tolerances& tol = {}) {
        parts.support.validate();
        if (!parts.log_pdf)
            throw DomainError("from_parts: log_pdf callable required");
        UnimodalDensity d;
        d.family_ = Family::Custom;
        d.support_ = parts.support;
        d.tol_ = tol;
        d.raw_log_pdf_ = std::move(parts.log_pdf);
        d.normalized_ = parts.normalized;
        d.custom_cdf_ = std::move(parts.cdf);
        d.custom_quantile_ = std::move(parts.quantile);
        if (parts.mode) {
            d.mode_ = *parts.mode;
            d.log_mode_density_ = d.bounded_log_pdf(d.mode_);
            const double snap = 4.0 * tol.abs_x;
            d.mode_at_boundary_ =
                (d.support_.bounded_below() && std::abs(d.mode_ - d.support_.lower) <= snap) ||
                (d.support_.bounded_above() && std::abs(d.mode_ - d.support_.upper) <= snap);
        } else {
            d.init_custom_mode(tol, parts.mode_candidate);
        }
        if (parts.range_hint) {
            d.trunc_lo_ = std::min(parts.range_hint->first, parts.range_hint->second);
            d.trunc_hi_ = std::max(parts.range_hint->first, parts.range_hint->second);
        } else {
            d.init_truncation(tol);
        }
        if (d.normalized_ && !d.custom_cdf_)
            d.init_total_mass();
        return d;
    }

    Family family() const { return family_; }
    const std::vector<double>& params() const { return params_; }
    const Support& support() const { return support_; }
    double mode() const { return mode_; }
    bool mode_at_boundary() const { return mode_at_boundary_; }
    /// May be +inf (unbounded density at a support boundary).
    double log_modal_density() const { return log_mode_density_; }
    bool is_normalized() const { return normalized_; }

    double log_pdf(double x) const {
        switch (family_) {
            case Family::Normal: {
                const double z = (x - params_[0]) / params_[1];
                return -std::log(params_[1]) - 0.5 * log_two_pi - 0.5 * z * z;
            }
            case Family::LogNormal: {
                if (!(x > 0.0)) return -infinity;
                const double z = (std::log(x) - params_[0]) / params_[1];
                return -std::log(x) - std::log(params_[1]) - 0.5 * log_two_pi - 0.5 * z * z;
            }
            case Family::Gamma: {
                const double k = params_[0], r = params_[1];
                if (x < 0.0) return -infinity;
                if (x == 0.0)
                    return k > 1.0 ? -infinity : (k == 1.0 ? std::log(r) : infinity);
                return k * std::log(r) + (k - 1.0) * std::log(x) - r * x - std::lgamma(k);
            }
            case Family::Beta: {
                const double a = params_[0], b = params_[1];
                if (x < 0.0 || x > 1.0) return -infinity;
                if (x == 0.0)
                    return a > 1.0 ? -infinity : (a == 1.0 ? std::log(b) : infinity);
                if (x == 1.0)
                    return b > 1.0 ? -infinity : (b == 1.0 ? std::log(a) : infinity);
                return (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) - log_beta(a, b);
            }
            case Family::Exponential:
                return x < 0.0 ? -infinity : std::log(params_[0]) - params_[0] * x;
            case Family::Custom:
                return bounded_log_pdf(x) - log_shift_;
        }
        return -infinity;
    }

    double pdf(double x) const { return std::exp(log_pdf(x)); }

    /// Monotone nondecreasing; 0 at/below the support, 1 at/above it.
    double cdf(double x) const {
        if (std::isnan(x))
            throw DomainError("cdf: x is NaN");
        if (x <= support_.lower) return 0.0;
        if (x >= support_.upper) return 1.0;
        switch (family_) {
            case Family::Normal:
                return normal_cdf((x - params_[0]) / params_[1]);
            case Family::LogNormal:
                return normal_cdf((std::log(x) - params_[0]) / params_[1]);
            case Family::Gamma:
                return gamma_p(params_[0], params_[1] * x);
            case Family::Beta:
                return inc_beta(params_[0], params_[1], x);
            case Family::Exponential:
                return -std::expm1(-params_[0] * x);
            case Family::Custom: {
                if (custom_cdf_) return std::clamp(custom_cdf_(x), 0.0, 1.0);
                require_normalized("cdf");
                if (x <= trunc_lo_) return 0.0;
                if (x >= trunc_hi_) return 1.0;
                const double m = integrate([this](double t) { return pdf(t); },
                                           trunc_lo_, x, tol_);
                return std::clamp(m / total_mass_, 0.0, 1.0);
            }
        }
        return 0.0;
    }

    double quantile(double p) const {
        if (!(p > 0.0 && p < 1.0))
            throw DomainError("quantile: p must lie strictly in (0, 1)");
        switch (family_) {
            case Family::Normal:
                return params_[0] + params_[1] * normal_quantile(p);
            case Family::LogNormal:
                return std::exp(params_[0] + params_[1] * normal_quantile(p));
            case Family::Gamma:
                return gamma_p_inverse(params_[0], p) / params_[1];
            case Family::Beta:
                return inc_beta_inverse(params_[0], params_[1], p);
            case Family::Exponential:
                return -std::log1p(-p) / params_[0];
            case Family::Custom: {
                if (custom_quantile_) return custom_quantile_(p);
                require_normalized("quantile");
                return find_root([&](double x) { return cdf(x) - p; },
                                 Bracket{trunc_lo_, trunc_hi_}, tol_);
            }
        }
        return 0.0;
    }

    /// Probability mass on [a, b] clipped to the support.
    double mass_between(double a, double b) const {
        if (std::isnan(a) || std::isnan(b))
            throw DomainError("mass_between: NaN bound");
        const double lo = std::max(a, support_.lower);
        const double hi = std::min(b, support_.upper);
        if (!(lo < hi)) return 0.0;
        if (family_ == Family::Custom && !custom_cdf_) {
            require_normalized("mass_between");
            const double qa = std::max(lo, trunc_lo_);
            const double qb = std::min(hi, trunc_hi_);
            if (!(qa < qb)) return 0.0;
            return integrate([this](double t) { return pdf(t); }, qa, qb, tol_) /
                   total_mass_;
        }
        return cdf(hi) - cdf(lo);
    }

    /// Interval holding all but ~2*tail of the mass; used for grids and
    /// tail truncation. Falls back to the stored effective range for
    /// custom densities.
    std::pair<double, double> central_range(double tail = 1e-9) const {
        if (family_ == Family::Custom)
            return {trunc_lo_, trunc_hi_};
        return {quantile(tail), quantile(1.0 - tail)};
    }

private:
    void require_normalized(const char* op) const {
        if (!normalized_)
            throw NumericFailure(std::string(op) +
                                 ": density is a Jacobian-free relabeling and does not "
                                 "integrate to one");
    }

    double bounded_log_pdf(double x) const {
        if (!support_.contains(x)) return -infinity;
        const double v = raw_log_pdf_(x);
        return std::isnan(v) ? -infinity : v;
    }

    void init_custom_mode(const Tolerances& tol, std::optional<double> candidate = {}) {
        auto f = [this](double x) { return bounded_log_pdf(x); };
        auto [x, v] = detail::locate_log_maximum(f, support_, tol);
        if (candidate && std::isfinite(*candidate)) {
            // a caller-known argmax wins whenever its density is at least
            // as high as the numeric search result
            const double cv = bounded_log_pdf(*candidate);
            if (cv >= v) {
                x = *candidate;
                v = cv;
            }
        }
        mode_ = x;
        log_mode_density_ = v;
        const double snap = std::max(4.0 * tol.abs_x, 64.0 * std::numeric_limits<double>::epsilon() *
                                                          (1.0 + std::abs(x)));
        for (const bool lower_side : {true, false}) {
            const double e = lower_side ? support_.lower : support_.upper;
            const bool open = lower_side ? support_.lower_open : support_.upper_open;
            if (!std::isfinite(e) || std::abs(x - e) > snap) continue;
            mode_at_boundary_ = true;
            if (!open) {
                const double ve = bounded_log_pdf(e);
                if (ve >= v) {
                    mode_ = e;
                    log_mode_density_ = ve;
                }
            }
        }
        if (!std::isfinite(log_mode_density_))
            throw NumericFailure("custom density: modal log-density is not finite");
    }

    void init_truncation(const Tolerances& tol) {
        const double target = log_mode_density_ - detail::log_tail_drop;
        auto walk = [&](bool lower_side) {
            const double bound = lower_side ? support_.lower : support_.upper;
            if (std::isfinite(bound)) return bound;
            double step = std::max(1.0, std::abs(mode_));
            for (int k = 0; k < 200; ++k) {
                const double x = lower_side ? mode_ - step : mode_ + step;
                if (bounded_log_pdf(x) < target) return x;
                step *= 2.0;
            }
            throw NumericFailure("custom density: tail does not decay; cannot truncate");
        };
        trunc_lo_ = walk(true);
        trunc_hi_ = walk(false);
        (void)tol;
    }

    void init_total_mass() {
        total_mass_ = integrate([this](double t) { return pdf(t); },
                                trunc_lo_, trunc_hi_, tol_);
        if (!(total_mass_ > 0.0) || !std::isfinite(total_mass_))
            throw NumericFailure("custom density: mass integral is not finite");
    }

    Family family_ = Family::Custom;
    std::vector<double> params_;
    Support support_;
    double mode_ = 0.0;
    double log_mode_density_ = 0.0;
    bool mode_at_boundary_ = false;
    bool normalized_ = true;

    std::function<double(double)> raw_log_pdf_;
    std::function<double(double)> custom_cdf_;
    std::function<double(double)> custom_quantile_;
    double log_shift_ = 0.0;
    double trunc_lo_ = 0.0;
    double trunc_hi_ = 0.0;
    double total_mass_ = 1.0;
    Tolerances tol_{};
};

} // namespace intervalkit

#endif // INTERVALKIT_DENSITIES_HPP
