#ifndef INTERVALKIT_LIKELIHOOD_HPP
#define INTERVALKIT_LIKELIHOOD_HPP

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "intervalkit/errors.hpp"
#include "intervalkit/numeric.hpp"
#include "intervalkit/special_functions.hpp"
#include "intervalkit/transforms.hpp"

namespace intervalkit {

struct ParamBounds {
    double lower = -infinity;
    double upper = infinity;
};

enum class LikelihoodFamily {
    BinomialProportion,
    NormalMeanKnownSigma,
    NormalMeanProfileSigma,
    NormalSigmaProfileMean,
    PoissonRate,
    LogNormalMuProfileSigma,
    Reparameterized
};

struct MleResult {
    double theta_hat = 0.0;
    std::vector<double> eta_hat;
    double log_lik_at_max = 0.0;
    bool at_boundary = false;
};

struct ProfilePoint {
    double value = 0.0;          ///< max over nuisance of the log-likelihood at fixed theta
    std::vector<double> eta;     ///< the maximizing nuisance values
};

enum class EndpointStatus { Solved, AtParameterBound };

/// Profile likelihood ratio confidence interval: both endpoints solve
/// profile_deviance(theta) = chi2(1, 1-alpha) unless the deviance never
/// reaches the threshold before a parameter bound.
struct LrciInterval {
    double lower = 0.0;
    double upper = 0.0;
    double theta_hat = 0.0;
    double deviance_at_lower = 0.0;
    double deviance_at_upper = 0.0;
    double alpha = 0.0;
    EndpointStatus lower_status = EndpointStatus::Solved;
    EndpointStatus upper_status = EndpointStatus::Solved;

    double width() const { return upper - lower; }
};

/// Observed data plus parameter space with one interest parameter and an
/// optional nuisance parameter. Immutable; evaluation is through
/// precomputed sufficient statistics.
class LikelihoodModel {
public:
    /// One Binomial(n, theta) observation with x observed successes.
    static LikelihoodModel binomial_proportion(long n, long x) {
        if (n < 1) throw DomainError("binomial: n must be >= 1");
        if (x < 0 || x > n) throw DomainError("binomial: x must lie in [0, n]");
        LikelihoodModel m;
        m.family_ = LikelihoodFamily::BinomialProportion;
        m.n_obs_ = 1;
        m.trials_ = static_cast<double>(n);
        m.successes_ = static_cast<double>(x);
        m.log_const_ = std::lgamma(n + 1.0) - std::lgamma(x + 1.0) - std::lgamma(n - x + 1.0);
        m.natural_bounds_ = {0.0, 1.0};
        m.bounds_ = m.natural_bounds_;
        return m;
    }

    static LikelihoodModel normal_mean_known_sigma(std::vector<double> data, double sigma) {
        if (!(sigma > 0.0)) throw DomainError("normal-mean: sigma must be > 0");
        LikelihoodModel m = from_data(LikelihoodFamily::NormalMeanKnownSigma, data);
        m.sigma_known_ = sigma;
        return m;
    }

    static LikelihoodModel normal_mean_profile_sigma(std::vector<double> data) {
        return from_data(LikelihoodFamily::NormalMeanProfileSigma, data);
    }

    static LikelihoodModel normal_sigma_profile_mean(std::vector<double> data) {
        LikelihoodModel m = from_data(LikelihoodFamily::NormalSigmaProfileMean, data);
        m.natural_bounds_ = {0.0, infinity};
        m.bounds_ = m.natural_bounds_;
        return m;
    }

    static LikelihoodModel poisson_rate(std::vector<double> counts) {
        if (counts.empty()) throw DomainError("poisson: data must be nonempty");
        double sum = 0.0, log_fact = 0.0;
        for (double c : counts) {
            if (!(c >= 0.0) || std::abs(c - std::round(c)) > 1e-9)
                throw DomainError("poisson: observations must be nonnegative integers");
            sum += std::round(c);
            log_fact += std::lgamma(std::round(c) + 1.0);
        }
        LikelihoodModel m;
        m.family_ = LikelihoodFamily::PoissonRate;
        m.n_obs_ = static_cast<long>(counts.size());
        m.sum_ = sum;
        m.mean_ = sum / static_cast<double>(counts.size());
        m.log_const_ = -log_fact;
        m.natural_bounds_ = {0.0, infinity};
        m.bounds_ = m.natural_bounds_;
        return m;
    }

    static LikelihoodModel lognormal_mu_profile_sigma(std::vector<double> data) {
        if (data.empty()) throw DomainError("lognormal-mu: data must be nonempty");
        double log_sum = 0.0;
        std::vector<double> logs(data.size());
        for (std::size_t i = 0; i < data.size(); ++i) {
            if (!(data[i] > 0.0))
                throw DomainError("lognormal-mu: observations must be positive");
            logs[i] = std::log(data[i]);
            log_sum += logs[i];
        }
        LikelihoodModel m = from_data(LikelihoodFamily::LogNormalMuProfileSigma, logs);
        m.log_const_ = -log_sum; // product of 1/x_i Jacobians of the log scale
        return m;
    }

    /// Same data and likelihood, with the interest parameter relabeled as
    /// zeta = g(theta). The profile is evaluated at theta = g^{-1}(zeta),
    /// so likelihood-ratio quantities carry over exactly.
    static LikelihoodModel reparameterized(LikelihoodModel base, MonotoneTransform g) {
        if (!g.forward || !g.inverse)
            throw DomainError("reparameterized: transform must provide forward and inverse");
        const double b_lo = g.forward(base.bounds_.lower);
        const double b_hi = g.forward(base.bounds_.upper);
        if (std::isnan(b_lo) || std::isnan(b_hi))
            throw DomainError("reparameterized: transform undefined on the parameter space");
        LikelihoodModel m;
        m.family_ = LikelihoodFamily::Reparameterized;
        m.n_obs_ = base.n_obs_;
        m.natural_bounds_ = {std::min(b_lo, b_hi), std::max(b_lo, b_hi)};
        m.bounds_ = m.natural_bounds_;
        m.base_ = std::make_shared<const LikelihoodModel>(std::move(base));
        m.transform_ = std::make_shared<const MonotoneTransform>(std::move(g));
        return m;
    }

    /// Restricts the interest parameter to the intersection of `b` with
    /// the natural parameter space.
    LikelihoodModel with_interest_bounds(ParamBounds b) const {
        LikelihoodModel m = *this;
        m.bounds_.lower = std::max(natural_bounds_.lower, b.lower);
        m.bounds_.upper = std::min(natural_bounds_.upper, b.upper);
        if (!(m.bounds_.lower < m.bounds_.upper))
            throw DomainError("with_interest_bounds: empty parameter range");
        return m;
    }

    LikelihoodFamily family() const { return family_; }
    ParamBounds interest_bounds() const { return bounds_; }
    long n_observations() const { return n_obs_; }

    std::size_t nuisance_count() const {
        switch (family_) {
            case LikelihoodFamily::NormalMeanProfileSigma:
            case LikelihoodFamily::NormalSigmaProfileMean:
            case LikelihoodFamily::LogNormalMuProfileSigma:
                return 1;
            case LikelihoodFamily::Reparameterized:
                return base_->nuisance_count();
            default:
                return 0;
        }
    }

    std::string interest_name() const {
        switch (family_) {
            case LikelihoodFamily::BinomialProportion: return "theta";
            case LikelihoodFamily::NormalMeanKnownSigma:
            case LikelihoodFamily::NormalMeanProfileSigma:
            case LikelihoodFamily::LogNormalMuProfileSigma: return "mu";
            case LikelihoodFamily::NormalSigmaProfileMean: return "sigma";
            case LikelihoodFamily::PoissonRate: return "lambda";
            case LikelihoodFamily::Reparameterized:
                return transform_->name + "(" + base_->interest_name() + ")";
        }
        return "theta";
    }

    // --- evaluation -------------------------------------------------------

    double log_likelihood_at(double theta, std::span<const double> eta) const {
        require_in_bounds(theta);
        if (eta.size() != nuisance_count())
            throw DomainError("log_likelihood: expected " + std::to_string(nuisance_count()) +
                              " nuisance value(s)");
        switch (family_) {
            case LikelihoodFamily::BinomialProportion: {
                return log_const_ + xlogy(successes_, theta) +
                       xlogy(trials_ - successes_, 1.0 - theta);
            }
            case LikelihoodFamily::NormalMeanKnownSigma:
                return normal_log_lik(theta, sigma_known_);
            case LikelihoodFamily::NormalMeanProfileSigma:
                return normal_log_lik(theta, eta[0]);
            case LikelihoodFamily::NormalSigmaProfileMean:
                return normal_log_lik(eta[0], theta);
            case LikelihoodFamily::PoissonRate: {
                const double n = static_cast<double>(n_obs_);
                return log_const_ - n * theta + xlogy(sum_, theta);
            }
            case LikelihoodFamily::LogNormalMuProfileSigma:
                // Normal likelihood of the logged data plus the 1/x Jacobians.
                return log_const_ + normal_log_lik(theta, eta[0]);
            case LikelihoodFamily::Reparameterized:
                return base_->log_likelihood_at(inverse_to_base(theta), eta);
        }
        return -infinity;
    }

    ProfilePoint profile_at(double theta) const {
        require_in_bounds(theta);
        switch (family_) {
            case LikelihoodFamily::BinomialProportion:
            case LikelihoodFamily::NormalMeanKnownSigma:
            case LikelihoodFamily::PoissonRate:
                return {log_likelihood_at(theta, {}), {}};
            case LikelihoodFamily::NormalMeanProfileSigma:
            case LikelihoodFamily::LogNormalMuProfileSigma: {
                // Closed-form nuisance MLE: mean squared deviation about theta.
                const double s2 =
                    (sum_sq_dev_ + static_cast<double>(n_obs_) * sq(mean_ - theta)) /
                    static_cast<double>(n_obs_);
                if (!(s2 > 0.0))
                    throw NumericFailure("profile: degenerate data (zero scale at theta)");
                const double sd = std::sqrt(s2);
                const double extra =
                    family_ == LikelihoodFamily::LogNormalMuProfileSigma ? log_const_ : 0.0;
                return {extra + normal_log_lik(theta, sd), {sd}};
            }
            case LikelihoodFamily::NormalSigmaProfileMean:
                // The conditional mean MLE is the sample mean for every sigma.
                return {normal_log_lik(mean_, theta), {mean_}};
            case LikelihoodFamily::Reparameterized:
                return base_->profile_at(inverse_to_base(theta));
        }
        return {-infinity, {}};
    }

    MleResult mle_result() const {
        MleResult r;
        switch (family_) {
            case LikelihoodFamily::BinomialProportion:
                r.theta_hat = clamp_to_bounds(successes_ / trials_, r.at_boundary);
                break;
            case LikelihoodFamily::NormalMeanKnownSigma:
            case LikelihoodFamily::NormalMeanProfileSigma:
            case LikelihoodFamily::LogNormalMuProfileSigma:
            case LikelihoodFamily::PoissonRate:
                r.theta_hat = clamp_to_bounds(mean_, r.at_boundary);
                break;
            case LikelihoodFamily::NormalSigmaProfileMean:
                r.theta_hat = clamp_to_bounds(
                    std::sqrt(sum_sq_dev_ / static_cast<double>(n_obs_)), r.at_boundary);
                break;
            case LikelihoodFamily::Reparameterized: {
                const MleResult base = base_->mle_result();
                r.theta_hat = transform_->forward(base.theta_hat);
                r.theta_hat = std::clamp(r.theta_hat, bounds_.lower, bounds_.upper);
                r.eta_hat = base.eta_hat;
                r.log_lik_at_max = base.log_lik_at_max;
                r.at_boundary = base.at_boundary || r.theta_hat == bounds_.lower ||
                                r.theta_hat == bounds_.upper;
                return r;
            }
        }
        // Zero-scale data puts the nuisance on its bound even though the
        // interest estimate is interior.
        if ((family_ == LikelihoodFamily::NormalMeanProfileSigma ||
             family_ == LikelihoodFamily::NormalSigmaProfileMean ||
             family_ == LikelihoodFamily::LogNormalMuProfileSigma) &&
            sum_sq_dev_ == 0.0)
            r.at_boundary = true;

        try {
            const ProfilePoint p = profile_at(r.theta_hat);
            r.eta_hat = p.eta;
            r.log_lik_at_max = p.value;
        } catch (const NumericFailure&) {
            r.log_lik_at_max = infinity;
            r.at_boundary = true;
        }
        return r;
    }

private:
    static LikelihoodModel from_data(LikelihoodFamily fam, const std::vector<double>& data) {
        if (data.empty()) throw DomainError("likelihood model: data must be nonempty");
        LikelihoodModel m;
        m.family_ = fam;
        m.n_obs_ = static_cast<long>(data.size());
        m.sum_ = std::accumulate(data.begin(), data.end(), 0.0);
        m.mean_ = m.sum_ / static_cast<double>(data.size());
        m.sum_sq_dev_ = 0.0;
        for (double x : data) m.sum_sq_dev_ += sq(x - m.mean_);
        return m;
    }

    static double sq(double x) { return x * x; }

    // x * log(y) with the 0 * log(0) = 0 convention.
    static double xlogy(double x, double y) {
        if (x == 0.0) return 0.0;
        return x * std::log(y);
    }

    // Normal log-likelihood in (mu, sigma) from the stored summaries.
    double normal_log_lik(double mu, double sigma) const {
        const double n = static_cast<double>(n_obs_);
        if (!(sigma > 0.0)) return -infinity;
        return -n * std::log(sigma) - 0.5 * n * log_two_pi -
               (sum_sq_dev_ + n * sq(mean_ - mu)) / (2.0 * sigma * sigma);
    }

    void require_in_bounds(double theta) const {
        if (std::isnan(theta) || theta < bounds_.lower || theta > bounds_.upper)
            throw DomainError("interest parameter outside the parameter space");
    }

    double clamp_to_bounds(double v, bool& at_bound) const {
        const double c = std::clamp(v, bounds_.lower, bounds_.upper);
        at_bound = (std::isfinite(bounds_.lower) && c == bounds_.lower) ||
                   (std::isfinite(bounds_.upper) && c == bounds_.upper);
        return c;
    }

    double inverse_to_base(double zeta) const {
        double th = transform_->inverse(zeta);
        if (std::isnan(th))
            throw DomainError("reparameterized model: inverse transform undefined");
        return std::clamp(th, base_->bounds_.lower, base_->bounds_.upper);
    }

    LikelihoodFamily family_ = LikelihoodFamily::BinomialProportion;
    long n_obs_ = 0;
    double trials_ = 0.0;
    double successes_ = 0.0;
    double sum_ = 0.0;
    double mean_ = 0.0;
    double sum_sq_dev_ = 0.0;
    double sigma_known_ = 0.0;
    double log_const_ = 0.0;
    ParamBounds natural_bounds_{};
    ParamBounds bounds_{};
    std::shared_ptr<const LikelihoodModel> base_;
    std::shared_ptr<const MonotoneTransform> transform_;
};

inline double log_likelihood(const LikelihoodModel& m, double theta,
                             std::span<const double> eta = {}) {
    return m.log_likelihood_at(theta, eta);
}

inline MleResult mle(const LikelihoodModel& m) { return m.mle_result(); }

inline ProfilePoint profile_log_likelihood(const LikelihoodModel& m, double theta) {
    return m.profile_at(theta);
}

/// -2 log of the profile likelihood ratio at theta; zero at the MLE.
inline double profile_deviance(const LikelihoodModel& m, double theta) {
    const MleResult r = m.mle_result();
    if (!std::isfinite(r.log_lik_at_max))
        throw NumericFailure("profile_deviance: maximized log-likelihood is not finite");
    const double d = -2.0 * (m.profile_at(theta).value - r.log_lik_at_max);
    return std::max(d, 0.0);
}

/// Likelihood ratio lambda = L(restricted) / L(unrestricted), in [0, 1].
/// The numerator maximizes over the nuisance at fixed theta; the
/// denominator is the global maximum.
inline double lrt_lambda(const LikelihoodModel& m, double restricted_theta) {
    const MleResult r = m.mle_result();
    if (!std::isfinite(r.log_lik_at_max))
        throw NumericFailure("lrt_lambda: maximized log-likelihood is not finite");
    const double lr = std::exp(m.profile_at(restricted_theta).value - r.log_lik_at_max);
    return std::clamp(lr, 0.0, 1.0);
}

namespace detail {

struct WilksEndpoint {
    double value;
    double deviance;
    EndpointStatus status;
};

template <typename Dev>
WilksEndpoint wilks_solve_side(Dev&& dev, double theta_hat, double bound, bool lower_side,
                               double threshold, const Tolerances& tol) {
    double step = std::max(std::abs(theta_hat), 1.0) * 0.1;
    double inner = theta_hat;
    double outer = theta_hat;
    bool bracketed = false;
    for (int k = 0; k < 60; ++k) {
        double cand = lower_side ? theta_hat - step : theta_hat + step;
        bool clamped = false;
        if (lower_side && cand <= bound) {
            cand = bound;
            clamped = true;
        } else if (!lower_side && cand >= bound) {
            cand = bound;
            clamped = true;
        }
        const double f = dev(cand) - threshold;
        if (f >= 0.0) {
            outer = cand;
            bracketed = true;
            break;
        }
        if (clamped)
            return {bound, f + threshold, EndpointStatus::AtParameterBound};
        inner = cand;
        step *= 2.0;
    }
    if (!bracketed)
        throw NumericFailure("wilks_lrci: deviance never reached the threshold");

    // The deviance may be infinite exactly at a bound; pull the outer end
    // inward until it is finite while keeping the sign change.
    for (int j = 0; j < 200 && !std::isfinite(dev(outer)); ++j) {
        const double mid = 0.5 * (inner + outer);
        if (dev(mid) - threshold >= 0.0)
            outer = mid;
        else
            inner = mid;
    }
    const double root =
        find_root([&](double th) { return dev(th) - threshold; },
                  Bracket{std::min(inner, outer), std::max(inner, outer)}, tol);
    return {root, dev(root), EndpointStatus::Solved};
}

} // namespace detail

/// Inverts the profile deviance against the chi-square(1) quantile on both
/// sides of the MLE. Throws BoundaryMle when the MLE sits on a parameter
/// bound (the chi-square calibration fails there).
inline LrciInterval wilks_lrci(const LikelihoodModel& m, double alpha,
                               const Tolerances& tol = {}) {
    tol.validate();
    if (!(alpha > 0.0 && alpha < 1.0))
        throw DomainError("wilks_lrci: alpha must lie strictly in (0, 1)");
    const MleResult r = m.mle_result();
    if (r.at_boundary)
        throw BoundaryMle(
            "wilks_lrci: the MLE lies on the boundary of the parameter space, where the "
            "chi-square limit of the likelihood ratio does not apply");

    const double threshold = chi_square_quantile(1, 1.0 - alpha);
    auto dev = [&](double theta) {
        return std::max(-2.0 * (m.profile_at(theta).value - r.log_lik_at_max), 0.0);
    };

    const ParamBounds b = m.interest_bounds();
    const auto lo = detail::wilks_solve_side(dev, r.theta_hat, b.lower, true, threshold, tol);
    const auto hi = detail::wilks_solve_side(dev, r.theta_hat, b.upper, false, threshold, tol);

    LrciInterval out;
    out.lower = lo.value;
    out.upper = hi.value;
    out.theta_hat = r.theta_hat;
    out.deviance_at_lower = lo.deviance;
    out.deviance_at_upper = hi.deviance;
    out.alpha = alpha;
    out.lower_status = lo.status;
    out.upper_status = hi.status;
    return out;
}

} // namespace intervalkit

#endif // INTERVALKIT_LIKELIHOOD_HPP
