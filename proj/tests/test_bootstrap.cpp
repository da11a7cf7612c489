#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "xgram/bootstrap.hpp"
#include "xgram/limits.hpp"
#include "xgram/quantile.hpp"

using namespace xgram;
using Catch::Approx;

namespace {

IndicatorSeries sample_series(std::uint64_t seed, std::size_t n, double p, double m) {
    std::mt19937_64 rng(seed);
    return IndicatorSeries(oracle::random_indicators(rng, n, p), m, Centering::Empirical, 1.0 / m);
}

// Mean and standard error of a sample.
struct Estimate {
    double mean = 0.0;
    double se = 0.0;
};

Estimate estimate(const std::vector<double>& v) {
    return {oracle::mean(v), oracle::sd(v) / std::sqrt(static_cast<double>(v.size()))};
}

// Sample covariance of (x, y) with the standard error of the centered product mean.
Estimate covariance(const std::vector<double>& x, const std::vector<double>& y) {
    const double mx = oracle::mean(x);
    const double my = oracle::mean(y);
    std::vector<double> prod(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) prod[i] = (x[i] - mx) * (y[i] - my);
    return estimate(prod);
}

}  // namespace

TEST_CASE("bootstrap plan validation", "[bootstrap]") {
    BootstrapPlan plan;
    plan.n = 10;
    CHECK_NOTHROW(plan.validate());
    plan.theta = 1.0;
    CHECK_THROWS_AS(plan.validate(), std::invalid_argument);
    plan.theta = 0.5;
    plan.B = 0;
    CHECK_THROWS_AS(plan.validate(), std::invalid_argument);
    plan.B = 1;
    plan.n = 1;
    CHECK_THROWS_AS(plan.validate(), std::invalid_argument);
}

TEST_CASE("stationary bootstrap indices", "[bootstrap]") {
    BootstrapPlan plan{0.1, 10, 3, 37};
    for (std::uint32_t r = 0; r < 20; ++r) {
        const auto idx = sb_indices(plan, r);
        CHECK(idx.size() == 37);
        for (auto i : idx) CHECK(i < 37);
    }
    CHECK(sb_indices(plan, 5) == sb_indices(plan, 5));
    CHECK(sb_indices(plan, 5) != sb_indices(plan, 6));
}

TEST_CASE("theta near one gives iid uniform indices", "[bootstrap]") {
    BootstrapPlan plan{1.0 - 1e-12, 1, 8, 50};
    std::size_t consecutive = 0;
    std::size_t total = 0;
    for (std::uint32_t r = 0; r < 200; ++r) {
        const auto idx = sb_indices(plan, r);
        for (std::size_t t = 1; t < idx.size(); ++t) {
            consecutive += idx[t] == (idx[t - 1] + 1) % 50 ? 1 : 0;
            ++total;
        }
    }
    // Independent uniform draws continue a run with probability 1/n.
    const double rate = static_cast<double>(consecutive) / total;
    CHECK(std::abs(rate - 1.0 / 50.0) <= 4.0 * std::sqrt(0.02 * 0.98 / total));
}

TEST_CASE("mean block length is 1/theta", "[bootstrap]") {
    const double theta = 0.05;
    RandomStream stream({17, 0, StreamPurpose::BootstrapIndex});
    std::vector<double> lengths(100000);
    for (double& l : lengths) l = static_cast<double>(stream.geometric(theta));
    const auto e = estimate(lengths);
    CHECK(std::abs(e.mean - 1.0 / theta) <= 3.0 * e.se);
    for (double l : lengths) CHECK(l >= 1.0);
}

TEST_CASE("bootstrap indices are marginally uniform", "[bootstrap]") {
    // Within a replicate, draws are correlated by blocks; one fixed position
    // per replicate gives 1e5 independent draws for a plain chi-square test.
    const std::size_t n = 50;
    BootstrapPlan plan{0.1, 1, 99, n};
    std::vector<double> counts(n, 0.0);
    const std::uint32_t total = 100000;
    for (std::uint32_t r = 0; r < total; ++r) counts[sb_indices(plan, r)[17]] += 1.0;
    const double expected = static_cast<double>(total) / n;
    double chi2 = 0.0;
    for (double c : counts) chi2 += (c - expected) * (c - expected) / expected;
    INFO("chi2 " << chi2);
    CHECK(chi2 <= 85.35);  // chi-square(49) upper 1e-3 point
}

TEST_CASE("bootstrap extremogram", "[bootstrap]") {
    const auto ind = sample_series(4, 40, 0.3, 3.0);
    std::vector<std::size_t> identity(40);
    std::iota(identity.begin(), identity.end(), 0);
    const auto boot = bootstrap_extremogram(ind, identity, 10);
    const auto orig = sample_extremogram(ind.with_centering(Centering::Empirical), 10);
    for (std::size_t h = 0; h <= 10; ++h) CHECK(boot.gamma[h] == Approx(orig.gamma[h]).margin(1e-14));

    const auto ones = IndicatorSeries::from_raw(std::vector<std::uint8_t>(12, 1), 2.0);
    BootstrapPlan plan{0.3, 1, 1, 12};
    for (double g : bootstrap_extremogram(ones, sb_indices(plan, 0), 11).gamma) CHECK(g == 0.0);

    const std::vector<std::uint8_t> raw = {1, 0, 0, 1, 1, 0};
    const auto small = IndicatorSeries::from_raw(raw, 2.0);
    const std::vector<std::size_t> idx = {4, 5, 0, 3, 3, 1};
    const auto est = bootstrap_extremogram(small, idx, 5);
    const double mean = 0.5;
    for (std::size_t h = 0; h < 6; ++h) {
        double s = 0.0;
        for (std::size_t t = 0; t + h < 6; ++t) s += (raw[idx[t]] - mean) * (raw[idx[t + h]] - mean);
        CHECK(est.gamma[h] == Approx(2.0 / 6.0 * s).margin(1e-15));
    }
    CHECK_THROWS_AS(bootstrap_extremogram(small, std::vector<std::size_t>{0, 1}, 1), std::invalid_argument);
}

TEST_CASE("conditional mean of the bootstrap extremogram", "[bootstrap]") {
    const auto ind = sample_series(12, 200, 0.1, 10.0);
    const auto c = sample_centered(ind);
    double sq = 0.0;
    for (double v : c) sq += v * v;
    CHECK(estar_gamma(ind, 0.3, 0) == Approx(10.0 / 200.0 * sq));
    CHECK(estar_gamma(ind, 0.9, 0) == Approx(10.0 / 200.0 * sq));
    CHECK(std::abs(estar_gamma(ind, 1.0 - 1e-12, 3)) < 1e-20);

    const auto all = estar_gamma_all(ind, 0.1);
    for (std::size_t h : {0u, 1u, 7u, 100u, 199u}) CHECK(all[h] == Approx(estar_gamma(ind, 0.1, h)).margin(1e-14));

    BootstrapPlan plan{0.1, 20000, 55, 200};
    std::vector<std::vector<double>> draws(3);
    const std::size_t lags[] = {1, 3, 7};
    for (std::uint32_t b = 0; b < plan.B; ++b) {
        const auto est = bootstrap_extremogram(ind, sb_indices(plan, b), 7);
        for (int k = 0; k < 3; ++k) draws[k].push_back(est.gamma[lags[k]]);
    }
    for (int k = 0; k < 3; ++k) {
        const auto e = estimate(draws[k]);
        INFO("h " << lags[k] << " mc " << e.mean << " closed " << estar_gamma(ind, 0.1, lags[k]));
        CHECK(std::abs(e.mean - estar_gamma(ind, 0.1, lags[k])) <= 4.0 * e.se);
    }
}

TEST_CASE("star moments match Monte Carlo", "[bootstrap][mc]") {
    const std::size_t n = 100;
    const double theta = 0.2;
    const auto ind = sample_series(21, n, 0.25, 4.0);
    const auto hat = sample_centered(ind);
    const auto tilde = ind.centered(Centering::Theoretical);
    BootstrapPlan plan{theta, 1, 808, n};
    for (auto [h, s] : {std::pair<std::size_t, std::size_t>{1, 3}, {3, 1}, {2, 2}, {0, 5}}) {
        const auto sm = star_moments(ind, theta, h, s);
        CHECK(std::abs(sm.e_hat) < 1e-15);
        std::vector<double> hat_a, hat_b, tilde_a, tilde_b;
        for (std::uint32_t r = 0; r < 50000; ++r) {
            const auto idx = sb_indices(plan, r);
            hat_a.push_back(hat[idx[0]] * hat[idx[h]]);
            tilde_a.push_back(tilde[idx[0]] * tilde[(idx[0] + h) % n]);
            hat_b.push_back(hat[idx[s]] * hat[idx[s + h]]);
            tilde_b.push_back(tilde[idx[s]] * tilde[(idx[s] + h) % n]);
        }
        INFO("h " << h << " s " << s);
        const auto check = [](Estimate e, double closed) { CHECK(std::abs(e.mean - closed) <= 4.0 * e.se); };
        check(estimate(hat_a), sm.e_hat_pair);
        check(estimate(tilde_a), sm.e_tilde_pair);
        check(covariance(tilde_a, tilde_b), sm.cov_tilde_tilde);
        check(covariance(hat_a, tilde_b), sm.cov_hat_tilde);
        check(covariance(tilde_a, hat_b), sm.cov_tilde_hat);
        check(covariance(hat_a, hat_b), sm.cov_hat_hat);
        if (h == s) CHECK(sm.cov_hat_hat >= -1e-10);
    }
}

TEST_CASE("bootstrap statistic distribution", "[bootstrap]") {
    const auto ind = sample_series(30, 256, 0.08, 12.5);
    BootstrapPlan plan{0.1, 1, 4, 256};
    const auto grid = fourier_grid(256);
    const auto one = bootstrap_igram_distribution(ind, WeightFunction::one(), grid, plan, TestKind::GR);
    REQUIRE(one.statistics.size() == 1);
    CHECK(bootstrap_igram_quantile(ind, WeightFunction::one(), plan, TestKind::GR, 0.95) == one.statistics[0]);
    CHECK(bootstrap_igram_quantile(ind, WeightFunction::one(), plan, TestKind::GR, 0.01) == one.statistics[0]);

    plan.B = 500;
    const auto dist = bootstrap_igram_distribution(ind, WeightFunction::one(), grid, plan, TestKind::CvM, 1);
    const auto dist4 = bootstrap_igram_distribution(ind, WeightFunction::one(), grid, plan, TestKind::CvM, 4);
    CHECK(dist.statistics == dist4.statistics);
    CHECK(order_statistic_quantile(dist.statistics, 0.99) >= order_statistic_quantile(dist.statistics, 0.95));
    for (double s : dist.statistics) CHECK(s >= 0.0);
    // The center is E* J*, the psi-hat series of the conditional lag means.
    CHECK(dist.center == discretized_from_lags(estar_gamma_all(ind, 0.1), 256, WeightFunction::one(), grid));

    plan.n = 100;
    CHECK_THROWS_AS(bootstrap_igram_distribution(ind, WeightFunction::one(), grid, plan, TestKind::GR),
                    std::invalid_argument);
}

TEST_CASE("bootstrap GR quantile is close to the bridge law for iid data", "[bootstrap][mc]") {
    const std::size_t n = 10000;
    const double p0 = 0.05;
    const auto series = simulate(presets::iid_t(3.0), n, 31337);
    const auto thr = threshold_from_p0(series, ExtremeSet::upper_tail(), p0);
    const auto ind = indicators(series, thr, ExtremeSet::upper_tail(), Centering::Empirical);
    const double gamma0 = sample_extremogram(ind, 0).gamma[0];
    BootstrapPlan plan{1.0 / 50.0, 4000, 9, n};
    const double boot = bootstrap_igram_quantile(ind, WeightFunction::one(), plan, TestKind::GR, 0.95);
    const double bridge = bridge_sup_quantile(0.95, gamma0);
    INFO("bootstrap " << boot << " bridge " << bridge);
    CHECK(std::abs(boot / bridge - 1.0) <= 0.15);
}
