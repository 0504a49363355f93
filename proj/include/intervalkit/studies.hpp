#ifndef INTERVALKIT_STUDIES_HPP
#define INTERVALKIT_STUDIES_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "intervalkit/densities.hpp"
#include "intervalkit/errors.hpp"
#include "intervalkit/hpd.hpp"
#include "intervalkit/likelihood.hpp"
#include "intervalkit/special_functions.hpp"

namespace intervalkit {

/// Counter-based random stream: each replication derives its own state
/// from (master seed, replication index) through a 64-bit mix, so parallel
/// scheduling cannot reorder the draws.
class ReplicationRng {
public:
    ReplicationRng(std::uint64_t master_seed, std::uint64_t replication_index)
        : state_(mix(master_seed + 0x9E3779B97F4A7C15ULL * (replication_index + 1))) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix(state_);
    }

    /// Uniform double strictly inside (0, 1).
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double normal(double mu, double sigma) { return mu + sigma * normal_quantile(uniform()); }

    long bernoulli_count(long n, double p) {
        long k = 0;
        for (long i = 0; i < n; ++i)
            if (uniform() < p) ++k;
        return k;
    }

    long poisson(double lambda) {
        // cdf inversion; fine for the moderate rates used in studies
        const double u = uniform();
        double p = std::exp(-lambda);
        double cum = p;
        long k = 0;
        while (u > cum && k < 100000) {
            ++k;
            p *= lambda / static_cast<double>(k);
            cum += p;
        }
        return k;
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ULL;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBULL;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t state_;
};

enum class CoverageFamily {
    BinomialProportion,
    NormalMeanKnownSigma,
    NormalMeanProfileSigma,
    NormalSigmaProfileMean,
    PoissonRate,
    LogNormalMuProfileSigma
};

inline const char* coverage_family_name(CoverageFamily f) {
    switch (f) {
        case CoverageFamily::BinomialProportion: return "binomial";
        case CoverageFamily::NormalMeanKnownSigma: return "normal-mean";
        case CoverageFamily::NormalMeanProfileSigma: return "normal-mean-profile";
        case CoverageFamily::NormalSigmaProfileMean: return "normal-sigma";
        case CoverageFamily::PoissonRate: return "poisson";
        case CoverageFamily::LogNormalMuProfileSigma: return "lognormal-mu";
    }
    return "unknown";
}

/// Specification of one coverage experiment. true_params[0] is always the
/// interest parameter; two-parameter families take the nuisance second
/// (normal-mean and lognormal-mu: {mu, sigma}; normal-sigma: {sigma, mu}).
struct CoverageSpec {
    CoverageFamily family = CoverageFamily::BinomialProportion;
    std::vector<double> true_params;
    int n_obs = 0;         ///< observations per replication (binomial: trials)
    int replications = 0;
    double alpha = 0.05;
    std::uint64_t seed = 0;

    void validate() const {
        if (replications < 100)
            throw DomainError("coverage: replications must be >= 100");
        if (n_obs < 1)
            throw DomainError("coverage: n_obs must be >= 1");
        if (!(alpha > 0.0 && alpha < 1.0))
            throw DomainError("coverage: alpha must lie strictly in (0, 1)");
        switch (family) {
            case CoverageFamily::BinomialProportion:
                if (true_params.size() != 1 || !(true_params[0] > 0.0 && true_params[0] < 1.0))
                    throw DomainError("coverage: binomial needs theta strictly in (0, 1)");
                break;
            case CoverageFamily::NormalMeanKnownSigma:
            case CoverageFamily::NormalMeanProfileSigma:
            case CoverageFamily::LogNormalMuProfileSigma:
                if (true_params.size() != 2 || !(true_params[1] > 0.0))
                    throw DomainError("coverage: this family needs {mu, sigma} with sigma > 0");
                break;
            case CoverageFamily::NormalSigmaProfileMean:
                if (true_params.size() != 2 || !(true_params[0] > 0.0))
                    throw DomainError("coverage: normal-sigma needs {sigma, mu} with sigma > 0");
                break;
            case CoverageFamily::PoissonRate:
                if (true_params.size() != 1 || !(true_params[0] > 0.0))
                    throw DomainError("coverage: poisson needs lambda > 0");
                break;
        }
    }
};

struct CoverageResult {
    double empirical_coverage = 0.0;
    double mc_stderr = 0.0;
    long n_boundary_skips = 0;   ///< replications whose MLE hit a bound
    long replications_used = 0;
};

namespace detail {

struct CoverageCounts {
    long covered = 0;
    long used = 0;
    long skipped = 0;
};

inline CoverageCounts coverage_chunk(const CoverageSpec& spec, int first, int last) {
    CoverageCounts c;
    const double truth = spec.true_params[0];
    for (int i = first; i < last; ++i) {
        ReplicationRng rng(spec.seed, static_cast<std::uint64_t>(i));
        LikelihoodModel model = [&]() {
            switch (spec.family) {
                case CoverageFamily::BinomialProportion: {
                    const long x = rng.bernoulli_count(spec.n_obs, truth);
                    return LikelihoodModel::binomial_proportion(spec.n_obs, x);
                }
                case CoverageFamily::NormalMeanKnownSigma:
                case CoverageFamily::NormalMeanProfileSigma: {
                    std::vector<double> data(spec.n_obs);
                    for (auto& v : data) v = rng.normal(truth, spec.true_params[1]);
                    return spec.family == CoverageFamily::NormalMeanKnownSigma
                               ? LikelihoodModel::normal_mean_known_sigma(std::move(data),
                                                                          spec.true_params[1])
                               : LikelihoodModel::normal_mean_profile_sigma(std::move(data));
                }
                case CoverageFamily::NormalSigmaProfileMean: {
                    std::vector<double> data(spec.n_obs);
                    for (auto& v : data) v = rng.normal(spec.true_params[1], truth);
                    return LikelihoodModel::normal_sigma_profile_mean(std::move(data));
                }
                case CoverageFamily::LogNormalMuProfileSigma: {
                    std::vector<double> data(spec.n_obs);
                    for (auto& v : data)
                        v = std::exp(rng.normal(truth, spec.true_params[1]));
                    return LikelihoodModel::lognormal_mu_profile_sigma(std::move(data));
                }
                case CoverageFamily::PoissonRate: {
                    std::vector<double> data(spec.n_obs);
                    for (auto& v : data) v = static_cast<double>(rng.poisson(truth));
                    return LikelihoodModel::poisson_rate(std::move(data));
                }
            }
            throw DomainError("coverage: unknown family");
        }();
        try {
            const LrciInterval ci = wilks_lrci(model, spec.alpha);
            ++c.used;
            if (ci.lower <= truth && truth <= ci.upper) ++c.covered;
        } catch (const BoundaryMle&) {
            ++c.skipped;
        } catch (const Error& e) {
            throw NumericFailure("coverage replication " + std::to_string(i) + ": " + e.what());
        }
    }
    return c;
}

} // namespace detail

/// Draws `replications` datasets at the true parameters, computes the
/// Wilks LRCI for each, and reports how often the truth is covered.
/// Boundary-MLE replications are excluded and counted, mirroring the
/// chi-square caveat rather than silently biasing the estimate. Results
/// are identical for a fixed seed regardless of `jobs`.
inline CoverageResult simulate_lrci_coverage(const CoverageSpec& spec, int jobs = 1) {
    spec.validate();
    if (jobs < 1) jobs = 1;
    jobs = std::min<int>(jobs, spec.replications);

    detail::CoverageCounts total;
    if (jobs == 1) {
        total = detail::coverage_chunk(spec, 0, spec.replications);
    } else {
        std::vector<detail::CoverageCounts> parts(jobs);
        std::vector<std::thread> workers;
        std::exception_ptr failure;
        std::mutex failure_mutex;
        const int chunk = (spec.replications + jobs - 1) / jobs;
        for (int j = 0; j < jobs; ++j) {
            const int first = j * chunk;
            const int last = std::min(spec.replications, first + chunk);
            workers.emplace_back([&, j, first, last]() {
                try {
                    parts[j] = detail::coverage_chunk(spec, first, last);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            });
        }
        for (auto& w : workers) w.join();
        if (failure) std::rethrow_exception(failure);
        for (const auto& p : parts) {
            total.covered += p.covered;
            total.used += p.used;
            total.skipped += p.skipped;
        }
    }

    if (total.used == 0)
        throw NumericFailure("coverage: every replication hit a boundary MLE");
    CoverageResult r;
    r.replications_used = total.used;
    r.n_boundary_skips = total.skipped;
    r.empirical_coverage = static_cast<double>(total.covered) / static_cast<double>(total.used);
    r.mc_stderr = std::sqrt(r.empirical_coverage * (1.0 - r.empirical_coverage) /
                            static_cast<double>(total.used));
    return r;
}

/// Side-by-side HPD/LRCI record for one model: the HPD of the flat-prior
/// surrogate density (profile likelihood normalized over the interest
/// parameter) against the Wilks interval.
struct HpdLrciComparison {
    HpdInterval hpd;
    LrciInterval lrci;
    double hpd_width = 0.0;
    double lrci_width = 0.0;
    double surrogate_mode = 0.0; ///< mode of the normalized profile density
    double theta_hat = 0.0;
    double deviance_threshold = 0.0;
    double hpd_density_level = 0.0;
    UnimodalDensity surrogate;   ///< the normalized profile density itself
};

/// Builds the normalized profile-likelihood density for the interest
/// parameter (an explicit flat-prior surrogate, used to exhibit the
/// HPD/LRCI analogy, not to do Bayesian inference) and compares its HPD
/// with the Wilks LRCI.
inline HpdLrciComparison compare_hpd_lrci(const LikelihoodModel& model, double alpha,
                                          const Tolerances& tol = {}) {
    tol.validate();
    const ParamBounds bounds = model.interest_bounds();

    CustomDensitySpec spec;
    spec.support = Support{bounds.lower, bounds.upper, true, true};
    spec.normalization = Normalization::Unnormalized;
    spec.log_pdf = [model](double theta) {
        try {
            return model.profile_at(theta).value;
        } catch (const DomainError&) {
            return -infinity;
        }
    };

    UnimodalDensity surrogate = [&]() {
        try {
            return UnimodalDensity::custom(spec, tol);
        } catch (const Error& e) {
            throw NonIntegrableLikelihood(
                std::string("compare_hpd_lrci: profile likelihood cannot be normalized: ") +
                e.what());
        }
    }();

    HpdLrciComparison out;
    out.hpd = hpd_levelset(surrogate, alpha, tol);
    out.lrci = wilks_lrci(model, alpha, tol);
    out.hpd_width = out.hpd.width();
    out.lrci_width = out.lrci.width();
    out.surrogate_mode = surrogate.mode();
    out.theta_hat = out.lrci.theta_hat;
    out.deviance_threshold = chi_square_quantile(1, 1.0 - alpha);
    out.hpd_density_level = out.hpd.level;
    out.surrogate = std::move(surrogate);
    return out;
}

} // namespace intervalkit

#endif // INTERVALKIT_STUDIES_HPP
