#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "intervalkit/likelihood.hpp"
#include "oracles.hpp"

using namespace intervalkit;
using Catch::Matchers::WithinAbs;

namespace {

std::vector<double> pm_data(int pairs, double a) {
    std::vector<double> d;
    for (int i = 0; i < pairs; ++i) {
        d.push_back(a);
        d.push_back(-a);
    }
    return d;
}

} // namespace

TEST_CASE("log_likelihood closed forms") {
    const auto bin = LikelihoodModel::binomial_proportion(20, 10);
    REQUIRE_THAT(log_likelihood(bin, 0.5),
                 WithinAbs(std::log(184756.0) + 20.0 * std::log(0.5), 1e-10));

    const auto nm = LikelihoodModel::normal_mean_known_sigma({0.0}, 1.0);
    REQUIRE_THAT(log_likelihood(nm, 0.0), WithinAbs(-0.5 * std::log(2.0 * pi), 1e-12));

    const auto po = LikelihoodModel::poisson_rate({2, 3, 4});
    REQUIRE_THAT(log_likelihood(po, 3.0),
                 WithinAbs(-9.0 + 9.0 * std::log(3.0) - std::log(2.0 * 6.0 * 24.0), 1e-10));

    REQUIRE_THROWS_AS(log_likelihood(bin, 1.5), DomainError);
    REQUIRE_THROWS_AS(log_likelihood(bin, 0.5, std::vector<double>{1.0}), DomainError);
}

TEST_CASE("model constructors validate data") {
    REQUIRE_THROWS_AS(LikelihoodModel::binomial_proportion(0, 0), DomainError);
    REQUIRE_THROWS_AS(LikelihoodModel::binomial_proportion(10, 11), DomainError);
    REQUIRE_THROWS_AS(LikelihoodModel::normal_mean_known_sigma({}, 1.0), DomainError);
    REQUIRE_THROWS_AS(LikelihoodModel::normal_mean_known_sigma({1.0}, 0.0), DomainError);
    REQUIRE_THROWS_AS(LikelihoodModel::poisson_rate({1.5}), DomainError);
    REQUIRE_THROWS_AS(LikelihoodModel::poisson_rate({-1.0}), DomainError);
    REQUIRE_THROWS_AS(LikelihoodModel::lognormal_mu_profile_sigma({1.0, -2.0}), DomainError);
}

TEST_CASE("closed-form MLEs") {
    const auto b1 = mle(LikelihoodModel::binomial_proportion(20, 10));
    REQUIRE_THAT(b1.theta_hat, WithinAbs(0.5, 1e-14));
    REQUIRE_FALSE(b1.at_boundary);

    const auto b0 = mle(LikelihoodModel::binomial_proportion(20, 0));
    REQUIRE(b0.theta_hat == 0.0);
    REQUIRE(b0.at_boundary);

    std::vector<double> data{0.4, 2.0, 1.2, 0.8, 1.6, 2.4, 0.0, 1.2, 1.1, 1.3};
    double mean = 0.0;
    for (double x : data) mean += x;
    mean /= data.size();
    const auto nm = mle(LikelihoodModel::normal_mean_profile_sigma(data));
    REQUIRE_THAT(nm.theta_hat, WithinAbs(mean, 1e-12));
    REQUIRE(nm.eta_hat.size() == 1);
    double ssd = 0.0;
    for (double x : data) ssd += (x - mean) * (x - mean);
    REQUIRE_THAT(nm.eta_hat[0], WithinAbs(std::sqrt(ssd / data.size()), 1e-12));

    const auto po = mle(LikelihoodModel::poisson_rate({0, 0, 0}));
    REQUIRE(po.theta_hat == 0.0);
    REQUIRE(po.at_boundary);

    const auto sg = mle(LikelihoodModel::normal_sigma_profile_mean({0.0, 2.0}));
    REQUIRE_THAT(sg.theta_hat, WithinAbs(1.0, 1e-12));
    REQUIRE_THAT(sg.eta_hat[0], WithinAbs(1.0, 1e-12));
}

TEST_CASE("lrt_lambda is a ratio in [0, 1]") {
    const auto m = LikelihoodModel::binomial_proportion(20, 10);
    REQUIRE_THAT(lrt_lambda(m, 0.5), WithinAbs(1.0, 1e-12));
    const double expected = std::pow(0.3 / 0.5, 10.0) * std::pow(0.7 / 0.5, 10.0);
    REQUIRE_THAT(lrt_lambda(m, 0.3), WithinAbs(expected, 1e-10));
    REQUIRE(lrt_lambda(m, 1e-8) < 1e-20);
}

TEST_CASE("profile maximizes over the nuisance in closed form") {
    const auto data = pm_data(5, std::sqrt(0.9)); // n=10, mean 0, ssd 9
    const auto m = LikelihoodModel::normal_mean_profile_sigma(data);

    const auto at_peak = profile_log_likelihood(m, 0.0);
    REQUIRE_THAT(at_peak.value, WithinAbs(mle(m).log_lik_at_max, 1e-12));
    REQUIRE_THAT(at_peak.eta[0], WithinAbs(std::sqrt(0.9), 1e-12));

    // value(mu) = const - (n/2) log(0.9 + mu^2)
    for (double mu : {0.3, -0.7, 1.9}) {
        const auto p = profile_log_likelihood(m, mu);
        const double drop = at_peak.value - p.value;
        REQUIRE_THAT(drop, WithinAbs(5.0 * std::log((0.9 + mu * mu) / 0.9), 1e-10));
        REQUIRE_THAT(p.eta[0], WithinAbs(std::sqrt(0.9 + mu * mu), 1e-12));
    }

    // no nuisance: the profile is the plain log-likelihood
    const auto bin = LikelihoodModel::binomial_proportion(20, 10);
    REQUIRE_THAT(profile_log_likelihood(bin, 0.37).value,
                 WithinAbs(log_likelihood(bin, 0.37), 1e-14));
}

TEST_CASE("profile deviance reference values") {
    const auto bin = LikelihoodModel::binomial_proportion(20, 10);
    REQUIRE(profile_deviance(bin, 0.5) == 0.0);
    REQUIRE_THAT(profile_deviance(bin, 0.29105),
                 WithinAbs(20.0 * std::log(0.25 / (0.29105 * (1.0 - 0.29105))), 1e-10));
    // at the root of the closed-form reduction the deviance is the 0.95 level
    const double q = 0.25 * std::exp(-chi_square_quantile(1, 0.95) / 20.0);
    const double theta_root = 0.5 * (1.0 - std::sqrt(1.0 - 4.0 * q));
    REQUIRE_THAT(theta_root, WithinAbs(0.29105, 1e-4));
    REQUIRE_THAT(profile_deviance(bin, theta_root), WithinAbs(3.8415, 1e-3));

    const auto nm =
        LikelihoodModel::normal_mean_known_sigma(std::vector<double>(25, 0.0), 1.0);
    REQUIRE_THAT(profile_deviance(nm, 0.392), WithinAbs(25.0 * 0.392 * 0.392, 1e-10));
}

TEST_CASE("deviance equals -2 log lambda") {
    const auto m = LikelihoodModel::poisson_rate({2, 3, 4});
    for (double lam : {1.5, 2.7, 3.0, 4.8}) {
        REQUIRE_THAT(-2.0 * std::log(lrt_lambda(m, lam)),
                     WithinAbs(profile_deviance(m, lam), 1e-10));
    }
}

TEST_CASE("wilks interval for the normal mean is the textbook interval") {
    const auto m = LikelihoodModel::normal_mean_known_sigma(std::vector<double>(25, 0.0), 1.0);
    const auto ci = wilks_lrci(m, 0.05);
    const double half = oracles::normal_quantile_bisect(0.975) / 5.0;
    REQUIRE_THAT(ci.lower, WithinAbs(-half, 1e-6));
    REQUIRE_THAT(ci.upper, WithinAbs(half, 1e-6));
    REQUIRE(ci.lower_status == EndpointStatus::Solved);
    REQUIRE(ci.upper_status == EndpointStatus::Solved);
}

TEST_CASE("wilks interval for the binomial matches the closed-form reduction") {
    const auto ci = wilks_lrci(LikelihoodModel::binomial_proportion(20, 10), 0.05);
    // 20 log(0.25 / (theta (1-theta))) = chi2 threshold, solved by the quadratic formula
    const double q = 0.25 * std::exp(-chi_square_quantile(1, 0.95) / 20.0);
    const double root = std::sqrt(1.0 - 4.0 * q);
    REQUIRE_THAT(ci.lower, WithinAbs(0.5 * (1.0 - root), 1e-8));
    REQUIRE_THAT(ci.upper, WithinAbs(0.5 * (1.0 + root), 1e-8));
    REQUIRE_THAT(ci.lower, WithinAbs(0.29105, 1e-4));
    REQUIRE_THAT(ci.upper, WithinAbs(0.70895, 1e-4));
}

TEST_CASE("boundary MLE raises instead of inverting") {
    REQUIRE_THROWS_AS(wilks_lrci(LikelihoodModel::binomial_proportion(20, 0), 0.05),
                      BoundaryMle);
    REQUIRE_THROWS_AS(wilks_lrci(LikelihoodModel::binomial_proportion(20, 20), 0.05),
                      BoundaryMle);
    REQUIRE_THROWS_AS(wilks_lrci(LikelihoodModel::poisson_rate({0, 0}), 0.05), BoundaryMle);
    // restricted parameter space pushing the MLE onto a bound
    const auto clamped =
        LikelihoodModel::binomial_proportion(20, 10).with_interest_bounds({0.6, 0.9});
    REQUIRE_THROWS_AS(wilks_lrci(clamped, 0.05), BoundaryMle);
}

TEST_CASE("endpoints stop at parameter bounds when the deviance stays low") {
    const auto m =
        LikelihoodModel::binomial_proportion(20, 10).with_interest_bounds({0.4, 0.6});
    const auto ci = wilks_lrci(m, 0.05);
    REQUIRE(ci.lower == 0.4);
    REQUIRE(ci.upper == 0.6);
    REQUIRE(ci.lower_status == EndpointStatus::AtParameterBound);
    REQUIRE(ci.upper_status == EndpointStatus::AtParameterBound);
    REQUIRE(ci.deviance_at_lower < chi_square_quantile(1, 0.95));
    REQUIRE(ci.deviance_at_upper < chi_square_quantile(1, 0.95));
}

TEST_CASE("solved endpoints sit exactly on the deviance threshold") {
    std::vector<LikelihoodModel> models;
    models.push_back(LikelihoodModel::binomial_proportion(20, 10));
    models.push_back(LikelihoodModel::binomial_proportion(20, 4));
    models.push_back(LikelihoodModel::poisson_rate({2, 3, 4}));
    models.push_back(LikelihoodModel::normal_mean_profile_sigma(pm_data(5, 1.1)));
    models.push_back(LikelihoodModel::normal_sigma_profile_mean(pm_data(4, 0.8)));
    models.push_back(
        LikelihoodModel::lognormal_mu_profile_sigma({0.5, 1.1, 2.0, 0.7, 1.4, 3.2}));
    for (const auto& m : models) {
        for (double alpha : {0.05, 0.10}) {
            const double threshold = chi_square_quantile(1, 1.0 - alpha);
            const auto ci = wilks_lrci(m, alpha);
            REQUIRE(ci.lower_status == EndpointStatus::Solved);
            REQUIRE(ci.upper_status == EndpointStatus::Solved);
            REQUIRE_THAT(ci.deviance_at_lower, WithinAbs(threshold, 1e-6));
            REQUIRE_THAT(ci.deviance_at_upper, WithinAbs(threshold, 1e-6));
            REQUIRE(ci.lower <= ci.theta_hat);
            REQUIRE(ci.theta_hat <= ci.upper);
            const auto b = m.interest_bounds();
            REQUIRE(ci.lower >= b.lower);
            REQUIRE(ci.upper <= b.upper);
        }
    }
}

TEST_CASE("LRCI endpoints map exactly under monotone reparameterization") {
    const auto bin = LikelihoodModel::binomial_proportion(20, 10);
    const auto po = LikelihoodModel::poisson_rate({2, 3, 4});
    const auto base_bin = wilks_lrci(bin, 0.05);
    const auto base_po = wilks_lrci(po, 0.05);

    for (const char* name : {"log", "logit", "affine:2,3"}) {
        const auto g = builtin_transform(name);
        const auto rep = wilks_lrci(LikelihoodModel::reparameterized(bin, g), 0.05);
        const auto mapped = map_interval_monotone({base_bin.lower, base_bin.upper}, g);
        REQUIRE_THAT(rep.lower, WithinAbs(mapped.first, 1e-6));
        REQUIRE_THAT(rep.upper, WithinAbs(mapped.second, 1e-6));
    }
    for (const char* name : {"log", "affine:2,3"}) {
        const auto g = builtin_transform(name);
        const auto rep = wilks_lrci(LikelihoodModel::reparameterized(po, g), 0.05);
        const auto mapped = map_interval_monotone({base_po.lower, base_po.upper}, g);
        REQUIRE_THAT(rep.lower, WithinAbs(mapped.first, 1e-6));
        REQUIRE_THAT(rep.upper, WithinAbs(mapped.second, 1e-6));
    }
    // the reparameterized MLE is the mapped MLE
    const auto zeta = mle(LikelihoodModel::reparameterized(bin, logit_transform()));
    REQUIRE_THAT(zeta.theta_hat, WithinAbs(0.0, 1e-12)); // logit(0.5)
}

TEST_CASE("LRCIs nest as alpha shrinks") {
    const auto m = LikelihoodModel::poisson_rate({2, 3, 4});
    LrciInterval prev = wilks_lrci(m, 0.01);
    for (double alpha : {0.05, 0.10, 0.32}) {
        const auto ci = wilks_lrci(m, alpha);
        REQUIRE(ci.lower >= prev.lower - 1e-10);
        REQUIRE(ci.upper <= prev.upper + 1e-10);
        prev = ci;
    }
}

TEST_CASE("scaling normal data scales the mean LRCI") {
    const std::vector<double> data{0.4, 2.0, 1.2, 0.8, 1.6, 2.4, 0.0, 1.2, 1.1, 1.3};
    const double s = 3.7;
    std::vector<double> scaled = data;
    for (auto& x : scaled) x *= s;
    const auto base = wilks_lrci(LikelihoodModel::normal_mean_profile_sigma(data), 0.05);
    const auto big = wilks_lrci(LikelihoodModel::normal_mean_profile_sigma(scaled), 0.05);
    REQUIRE_THAT(big.lower, WithinAbs(s * base.lower, 1e-8 * s));
    REQUIRE_THAT(big.upper, WithinAbs(s * base.upper, 1e-8 * s));
}

TEST_CASE("lognormal mu model is the normal model of the logs") {
    const std::vector<double> data{0.5, 1.1, 2.0, 0.7, 1.4, 3.2};
    std::vector<double> logs;
    for (double x : data) logs.push_back(std::log(x));
    const auto a = wilks_lrci(LikelihoodModel::lognormal_mu_profile_sigma(data), 0.05);
    const auto b = wilks_lrci(LikelihoodModel::normal_mean_profile_sigma(logs), 0.05);
    REQUIRE_THAT(a.lower, WithinAbs(b.lower, 1e-9));
    REQUIRE_THAT(a.upper, WithinAbs(b.upper, 1e-9));
}
