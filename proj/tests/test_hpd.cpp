#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "intervalkit/hpd.hpp"
#include "oracles.hpp"

using namespace intervalkit;
using Catch::Matchers::WithinAbs;

TEST_CASE("normal HPD is the symmetric central interval") {
    const auto d = UnimodalDensity::normal(0, 1);
    const auto h = hpd_levelset(d, 0.05);
    const double z = oracles::normal_quantile_bisect(0.975);
    REQUIRE_THAT(h.lower, WithinAbs(-z, 1e-6));
    REQUIRE_THAT(h.upper, WithinAbs(z, 1e-6));
    REQUIRE_THAT(h.coverage, WithinAbs(0.95, 1e-8));
    REQUIRE(h.conditions.theorem_applies);
    REQUIRE_THAT(h.level, WithinAbs(d.pdf(h.lower), 1e-10));
}

TEST_CASE("flat density has no unique HPD") {
    REQUIRE_THROWS_AS(hpd_levelset(UnimodalDensity::beta(1, 1), 0.05), NonUniqueHpd);
}

TEST_CASE("levelset matches a dense grid scan over levels for Gamma(3,1)") {
    const auto d = UnimodalDensity::gamma(3, 1);
    const auto h = hpd_levelset(d, 0.10);

    // oracle: scan candidate levels with step 1e-5 * pdf(mode); endpoints by
    // bisection on the closed-form pdf, coverage from the series-only
    // incomplete gamma
    auto pdf = [](double x) { return 0.5 * x * x * std::exp(-x); };
    const double f_mode = pdf(2.0);
    auto left_root = [&](double c) {
        double lo = 0.0, hi = 2.0;
        for (int i = 0; i < 80; ++i) {
            const double mid = 0.5 * (lo + hi);
            (pdf(mid) < c ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    };
    auto right_root = [&](double c) {
        double lo = 2.0, hi = 60.0;
        for (int i = 0; i < 80; ++i) {
            const double mid = 0.5 * (lo + hi);
            (pdf(mid) >= c ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    };
    double best_gap = 1e9, best_l = 0, best_u = 0;
    const double step = 1e-5 * f_mode;
    for (double c = step; c < f_mode; c += step) {
        const double l = left_root(c);
        const double u = right_root(c);
        const double cov = oracles::gamma_p_series_only(3.0, u) -
                           oracles::gamma_p_series_only(3.0, l);
        if (std::abs(cov - 0.90) < best_gap) {
            best_gap = std::abs(cov - 0.90);
            best_l = l;
            best_u = u;
        }
    }
    REQUIRE_THAT(h.lower, WithinAbs(best_l, 1e-4));
    REQUIRE_THAT(h.upper, WithinAbs(best_u, 1e-4));
}

TEST_CASE("levelset refuses boundary modes and unbounded densities") {
    REQUIRE_THROWS_AS(hpd_levelset(UnimodalDensity::exponential(1), 0.05), ModeAtBoundary);
    REQUIRE_THROWS_AS(hpd_levelset(UnimodalDensity::gamma(0.5, 1), 0.05), ModeAtBoundary);
    REQUIRE_THROWS_AS(hpd_levelset(UnimodalDensity::normal(0, 1), 0.0), DomainError);
    REQUIRE_THROWS_AS(hpd_levelset(UnimodalDensity::normal(0, 1), 1.0), DomainError);
}

TEST_CASE("quantile scan centers the normal interval") {
    const auto d = UnimodalDensity::normal(0, 1);
    const auto h = hpd_quantile_scan(d, 0.05);
    REQUIRE_THAT(d.cdf(h.lower), WithinAbs(0.025, 1e-6)); // minimizing p
    REQUIRE_THAT(h.lower, WithinAbs(-1.959964, 1e-5));
    REQUIRE_THAT(h.upper, WithinAbs(1.959964, 1e-5));
}

TEST_CASE("quantile scan pushes a decreasing density to the support edge") {
    const auto d = UnimodalDensity::exponential(1);
    const auto h = hpd_quantile_scan(d, 0.05);
    REQUIRE(h.lower == 0.0);
    REQUIRE_THAT(h.upper, WithinAbs(2.995732273553991, 1e-6));
    REQUIRE_FALSE(h.conditions.theorem_applies);
}

TEST_CASE("quantile scan agrees with the levelset solver for LogNormal(0,1)") {
    const auto d = UnimodalDensity::lognormal(0, 1);
    const auto a = hpd_levelset(d, 0.05);
    const auto b = hpd_quantile_scan(d, 0.05);
    REQUIRE_THAT(a.lower, WithinAbs(b.lower, 1e-5));
    REQUIRE_THAT(a.upper, WithinAbs(b.upper, 1e-5));
}

TEST_CASE("quantile scan validates grid size") {
    REQUIRE_THROWS_AS(hpd_quantile_scan(UnimodalDensity::normal(0, 1), 0.05, 50), DomainError);
}

TEST_CASE("one-sided interval for boundary modes") {
    const auto h1 = hpd_one_sided(UnimodalDensity::exponential(1), 0.05);
    REQUIRE(h1.lower == 0.0);
    REQUIRE_THAT(h1.upper, WithinAbs(2.995732273553991, 1e-6));
    REQUIRE_FALSE(h1.conditions.theorem_applies);
    REQUIRE_FALSE(h1.conditions.endpoint_density_equal);
    REQUIRE(h1.conditions.coverage_ok);

    const auto h2 = hpd_one_sided(UnimodalDensity::exponential(2), 0.10);
    REQUIRE_THAT(h2.upper, WithinAbs(-std::log(0.10) / 2.0, 1e-9));

    // Beta(1,3): cdf is 1 - (1-x)^3, so the 95% cut sits at 1 - 0.05^(1/3)
    const auto h3 = hpd_one_sided(UnimodalDensity::beta(1, 3), 0.05);
    REQUIRE(h3.lower == 0.0);
    REQUIRE_THAT(h3.upper, WithinAbs(1.0 - std::cbrt(0.05), 1e-6));

    // mirrored case: mode at the upper edge
    const auto h4 = hpd_one_sided(UnimodalDensity::beta(3, 1), 0.05);
    REQUIRE(h4.upper == 1.0);
    REQUIRE_THAT(h4.lower, WithinAbs(std::cbrt(0.05), 1e-6));

    REQUIRE_THROWS_AS(hpd_one_sided(UnimodalDensity::normal(0, 1), 0.05), DomainError);
}

TEST_CASE("density ratio to the mode") {
    const auto d = UnimodalDensity::normal(0, 1);
    REQUIRE(density_ratio_to_mode(d, 0.0) == 1.0);
    const double x = 1.959964;
    REQUIRE_THAT(density_ratio_to_mode(d, x), WithinAbs(std::exp(-0.5 * x * x), 1e-12));

    const auto g = UnimodalDensity::gamma(3, 1);
    const auto h = hpd_levelset(g, 0.10);
    REQUIRE_THAT(density_ratio_to_mode(g, h.lower),
                 WithinAbs(density_ratio_to_mode(g, h.upper), 1e-8));

    REQUIRE_THROWS_AS(density_ratio_to_mode(UnimodalDensity::gamma(0.5, 1), 1.0),
                      ModeAtBoundary);
}

TEST_CASE("check_conditions classifies intervals") {
    const auto d = UnimodalDensity::normal(0, 1);
    const auto all = check_conditions(d, {-1.959964, 1.959964}, 0.05);
    REQUIRE(all.coverage_ok);
    REQUIRE(all.endpoint_density_equal);
    REQUIRE(all.mode_interior);
    REQUIRE(all.theorem_applies);

    // one-sided 95% interval: right coverage, unequal endpoint densities
    const auto one = check_conditions(d, {-1.644854, 8.0}, 0.05);
    REQUIRE(one.coverage_ok);
    REQUIRE_FALSE(one.endpoint_density_equal);
    REQUIRE(one.mode_interior);
    REQUIRE_FALSE(one.theorem_applies);

    const auto ex = check_conditions(UnimodalDensity::exponential(1), {0.0, 2.9957323}, 0.05);
    REQUIRE_FALSE(ex.mode_interior);
    REQUIRE(ex.coverage_ok);
}

TEST_CASE("cross-algorithm agreement over families and alphas") {
    const std::vector<UnimodalDensity> ds = {
        UnimodalDensity::normal(0, 1), UnimodalDensity::lognormal(0, 1),
        UnimodalDensity::gamma(3, 1), UnimodalDensity::beta(2, 5)};
    for (const auto& d : ds) {
        for (double alpha : {0.05, 0.32}) {
            const auto a = hpd_levelset(d, alpha);
            const auto b = hpd_quantile_scan(d, alpha);
            REQUIRE_THAT(a.lower, WithinAbs(b.lower, 1e-5));
            REQUIRE_THAT(a.upper, WithinAbs(b.upper, 1e-5));
            REQUIRE_THAT(a.coverage, WithinAbs(1.0 - alpha, 1e-8));
            REQUIRE(std::abs(d.pdf(a.lower) - d.pdf(a.upper)) <=
                    1e-8 * std::exp(d.log_modal_density()));
            REQUIRE(a.lower < d.mode());
            REQUIRE(d.mode() < a.upper);
            REQUIRE(a.conditions.theorem_applies);
        }
    }
}

TEST_CASE("HPD intervals are nested in alpha") {
    const auto d = UnimodalDensity::gamma(3, 1);
    HpdInterval prev = hpd_levelset(d, 0.01);
    for (double alpha : {0.05, 0.10, 0.32}) {
        const auto h = hpd_levelset(d, alpha);
        REQUIRE(h.lower >= prev.lower - 1e-8);
        REQUIRE(h.upper <= prev.upper + 1e-8);
        prev = h;
    }
}

TEST_CASE("levelset works on a custom density") {
    // triangle-ish smooth bump: unnormalized log density -x^4 on (-inf, inf)
    CustomDensitySpec spec;
    spec.log_pdf = [](double x) { return -x * x * x * x; };
    spec.support = Support{-infinity, infinity, true, true};
    spec.normalization = Normalization::Unnormalized;
    const auto d = UnimodalDensity::custom(spec);
    const auto h = hpd_levelset(d, 0.10);
    REQUIRE_THAT(h.coverage, WithinAbs(0.90, 1e-8));
    REQUIRE_THAT(h.lower, WithinAbs(-h.upper, 1e-7)); // symmetric density
    REQUIRE(h.conditions.theorem_applies);
}
