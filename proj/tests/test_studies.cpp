#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstring>

#include "intervalkit/studies.hpp"
#include "oracles.hpp"

using namespace intervalkit;
using Catch::Matchers::WithinAbs;

namespace {

CoverageSpec normal_spec(int reps) {
    CoverageSpec s;
    s.family = CoverageFamily::NormalMeanKnownSigma;
    s.true_params = {0.0, 1.0};
    s.n_obs = 25;
    s.replications = reps;
    s.alpha = 0.05;
    s.seed = 20240817;
    return s;
}

bool bitwise_equal(const CoverageResult& a, const CoverageResult& b) {
    return std::memcmp(&a.empirical_coverage, &b.empirical_coverage, sizeof(double)) == 0 &&
           std::memcmp(&a.mc_stderr, &b.mc_stderr, sizeof(double)) == 0 &&
           a.n_boundary_skips == b.n_boundary_skips &&
           a.replications_used == b.replications_used;
}

} // namespace

TEST_CASE("coverage specs validate") {
    CoverageSpec s = normal_spec(50);
    REQUIRE_THROWS_AS(simulate_lrci_coverage(s), DomainError); // below minimum replications
    s = normal_spec(100);
    s.true_params = {0.0, -1.0};
    REQUIRE_THROWS_AS(simulate_lrci_coverage(s), DomainError);
    s = normal_spec(100);
    s.alpha = 0.0;
    REQUIRE_THROWS_AS(simulate_lrci_coverage(s), DomainError);
    CoverageSpec b;
    b.family = CoverageFamily::BinomialProportion;
    b.true_params = {1.2};
    b.n_obs = 10;
    b.replications = 100;
    REQUIRE_THROWS_AS(simulate_lrci_coverage(b), DomainError);
}

TEST_CASE("coverage runs are deterministic and scheduling-independent") {
    const CoverageSpec s = normal_spec(100);
    const auto a = simulate_lrci_coverage(s);
    const auto b = simulate_lrci_coverage(s);
    REQUIRE(bitwise_equal(a, b));
    const auto c = simulate_lrci_coverage(s, 4);
    REQUIRE(bitwise_equal(a, c));
    const auto d = simulate_lrci_coverage(s, 7);
    REQUIRE(bitwise_equal(a, d));
}

TEST_CASE("normal-mean coverage is exact up to MC noise") {
    // the deviance is exactly chi-square(1) here
    const auto r = simulate_lrci_coverage(normal_spec(4000), 2);
    REQUIRE(r.n_boundary_skips == 0);
    REQUIRE(r.replications_used == 4000);
    REQUIRE(std::abs(r.empirical_coverage - 0.95) <= 4.0 * r.mc_stderr);
    REQUIRE_THAT(r.mc_stderr,
                 WithinAbs(std::sqrt(r.empirical_coverage * (1.0 - r.empirical_coverage) / 4000.0),
                           1e-15));
}

TEST_CASE("binomial coverage lands in the expected window") {
    CoverageSpec s;
    s.family = CoverageFamily::BinomialProportion;
    s.true_params = {0.3};
    s.n_obs = 50;
    s.replications = 4000;
    s.alpha = 0.05;
    s.seed = 42;
    const auto r = simulate_lrci_coverage(s, 2);
    // exact coverage of this interval is ~0.9567
    REQUIRE(r.empirical_coverage > 0.935);
    REQUIRE(r.empirical_coverage < 0.975);
}

TEST_CASE("poisson boundary replications are skipped and counted") {
    CoverageSpec s;
    s.family = CoverageFamily::PoissonRate;
    s.true_params = {0.05}; // all-zero samples are common
    s.n_obs = 5;
    s.replications = 400;
    s.alpha = 0.05;
    s.seed = 7;
    const auto r = simulate_lrci_coverage(s);
    REQUIRE(r.n_boundary_skips > 0);
    REQUIRE(r.replications_used + r.n_boundary_skips == 400);
}

TEST_CASE("profile-sigma normal coverage is near nominal") {
    CoverageSpec s;
    s.family = CoverageFamily::NormalMeanProfileSigma;
    s.true_params = {1.0, 2.0};
    s.n_obs = 40;
    s.replications = 2000;
    s.alpha = 0.05;
    s.seed = 99;
    const auto r = simulate_lrci_coverage(s, 2);
    REQUIRE(std::abs(r.empirical_coverage - 0.95) < 0.02);
}

TEST_CASE("sigma-interest and lognormal-mu coverage families run") {
    CoverageSpec s;
    s.family = CoverageFamily::NormalSigmaProfileMean;
    s.true_params = {2.0, -1.0}; // {sigma, mu}
    s.n_obs = 30;
    s.replications = 800;
    s.alpha = 0.05;
    s.seed = 5;
    const auto r = simulate_lrci_coverage(s);
    REQUIRE(std::abs(r.empirical_coverage - 0.95) < 0.03);

    CoverageSpec l;
    l.family = CoverageFamily::LogNormalMuProfileSigma;
    l.true_params = {0.3, 0.8};
    l.n_obs = 30;
    l.replications = 800;
    l.alpha = 0.05;
    l.seed = 6;
    const auto rl = simulate_lrci_coverage(l);
    REQUIRE(std::abs(rl.empirical_coverage - 0.95) < 0.03);
}

TEST_CASE("compare: gaussian likelihood makes HPD and LRCI identical") {
    const auto m = LikelihoodModel::normal_mean_known_sigma(std::vector<double>(25, 0.0), 1.0);
    const auto c = compare_hpd_lrci(m, 0.05);
    REQUIRE_THAT(c.hpd.lower, WithinAbs(c.lrci.lower, 1e-6));
    REQUIRE_THAT(c.hpd.upper, WithinAbs(c.lrci.upper, 1e-6));
    const double half = oracles::normal_quantile_bisect(0.975) / 5.0;
    REQUIRE_THAT(c.lrci.lower, WithinAbs(-half, 1e-6));
    REQUIRE_THAT(c.surrogate_mode, WithinAbs(c.theta_hat, 1e-6));
}

TEST_CASE("compare: symmetric binomial") {
    const auto c = compare_hpd_lrci(LikelihoodModel::binomial_proportion(20, 10), 0.05);
    REQUIRE_THAT(c.hpd.lower, WithinAbs(c.lrci.lower, 0.02));
    REQUIRE_THAT(c.hpd.upper, WithinAbs(c.lrci.upper, 0.02));
    REQUIRE_THAT(c.surrogate_mode, WithinAbs(0.5, 1e-8));
    REQUIRE_THAT(c.theta_hat, WithinAbs(0.5, 1e-12));
}

TEST_CASE("compare: asymmetric binomial yields two well-formed intervals") {
    const auto c = compare_hpd_lrci(LikelihoodModel::binomial_proportion(20, 4), 0.05);
    REQUIRE(c.hpd.lower > 0.0);
    REQUIRE(c.hpd.upper < 1.0);
    REQUIRE(c.lrci.lower > 0.0);
    REQUIRE(c.lrci.upper < 1.0);
    REQUIRE(c.hpd_width > 0.0);
    REQUIRE(c.lrci_width > 0.0);
    REQUIRE(std::abs(c.hpd.lower - c.lrci.lower) > 1e-4); // genuinely different intervals
    REQUIRE_THAT(c.hpd.coverage, WithinAbs(0.95, 1e-8));
    REQUIRE_THAT(c.lrci.deviance_at_lower, WithinAbs(c.deviance_threshold, 1e-6));
}

TEST_CASE("compare rejects non-integrable profiles") {
    // single observation: the profile likelihood blows up at mu = x1
    const auto m = LikelihoodModel::normal_mean_profile_sigma({0.5});
    REQUIRE_THROWS_AS(compare_hpd_lrci(m, 0.05), NonIntegrableLikelihood);
}
