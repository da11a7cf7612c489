#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "oracles.hpp"
#include "xgram/error.hpp"
#include "xgram/limits.hpp"
#include "xgram/quantile.hpp"

using namespace xgram;
using Catch::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

struct Moments {
    std::vector<double> mean;
    Eigen::MatrixXd cov;
    Eigen::MatrixXd cov_se;  // standard error of each covariance entry
};

Moments sample_moments(const std::vector<std::vector<double>>& paths) {
    const std::size_t d = paths.front().size();
    const double N = static_cast<double>(paths.size());
    Moments out;
    out.mean.assign(d, 0.0);
    for (const auto& p : paths)
        for (std::size_t i = 0; i < d; ++i) out.mean[i] += p[i] / N;
    out.cov = Eigen::MatrixXd::Zero(d, d);
    Eigen::MatrixXd second = Eigen::MatrixXd::Zero(d, d);
    for (const auto& p : paths) {
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                const double v = (p[i] - out.mean[i]) * (p[j] - out.mean[j]);
                out.cov(i, j) += v / N;
                second(i, j) += v * v / N;
            }
        }
    }
    out.cov_se = ((second - out.cov.cwiseProduct(out.cov)) / N).cwiseSqrt();
    return out;
}

}  // namespace

TEST_CASE("uniform pi grid", "[limits]") {
    const auto g = uniform_pi_grid(4);
    REQUIRE(g.size() == 5);
    CHECK(g[2] == Approx(kPi / 2.0));
    CHECK(g.back() == kPi);
    CHECK_THROWS_AS(uniform_pi_grid(0), std::invalid_argument);
}

TEST_CASE("zero variances give a zero path", "[limits]") {
    const auto grid = uniform_pi_grid(16);
    const auto zero = LimitProcessSpec::independent_hat(std::vector<double>(20, 0.0), WeightFunction::one(), grid);
    for (double v : simulate_limit(zero, 3)) CHECK(v == 0.0);
    const auto bridge0 = LimitProcessSpec::bridge(0.0, 50, WeightFunction::one(), grid);
    for (double v : simulate_limit(bridge0, 3)) CHECK(v == 0.0);
    const auto general0 = LimitProcessSpec::general(Eigen::MatrixXd::Zero(6, 6), WeightFunction::one(), grid);
    for (double v : simulate_limit(general0, 3)) CHECK(v == 0.0);
}

TEST_CASE("bridge path is the sine series of its normals", "[limits]") {
    // Off the FFT grid, the path is summed directly; on the uniform grid the
    // FFT route is used. Both must agree with the explicit series.
    const std::size_t H = 300;
    const std::vector<double> grid = {0.0, 0.3, 1.0, 2.5, kPi};
    const auto spec = LimitProcessSpec::bridge(1.7, H, WeightFunction::one(), grid);
    const auto path = simulate_limit(spec, 12, 4);
    RandomStream stream({12, 4, StreamPurpose::LimitProcess});
    std::vector<double> z(H);
    for (double& v : z) v = stream.normal();
    for (std::size_t k = 0; k < grid.size(); ++k) {
        double s = 0.0;
        for (std::size_t h = 1; h <= H; ++h) s += 2.0 * std::sin(h * grid[k]) / h * 1.7 * z[h - 1];
        CHECK(path[k] == Approx(s).margin(1e-10));
    }

    const auto ugrid = uniform_pi_grid(64);
    const auto fast = simulate_limit(LimitProcessSpec::bridge(1.7, H, WeightFunction::one(), ugrid), 12, 4);
    for (std::size_t k = 0; k < ugrid.size(); ++k) {
        double s = 0.0;
        for (std::size_t h = 1; h <= H; ++h) s += 2.0 * std::sin(h * ugrid[k]) / h * 1.7 * z[h - 1];
        CHECK(fast[k] == Approx(s).margin(1e-9));
    }
}

TEST_CASE("truncated bridge variance is within the tail bound", "[limits]") {
    for (std::size_t H : {10u, 100u, 10000u}) {
        const double sigma = 1.5;
        const auto grid = uniform_pi_grid(128);
        const LimitSimulator sim(LimitProcessSpec::bridge(sigma, H, WeightFunction::one(), grid));
        const auto var = sim.pointwise_variance();
        for (std::size_t k = 0; k < grid.size(); ++k) {
            const double exact = 2.0 * sigma * sigma * grid[k] * (kPi - grid[k]);
            CHECK(std::abs(var[k] - exact) <= 4.0 * sigma * sigma / H);
        }
    }
}

TEST_CASE("bridge covariance and mean by Monte Carlo", "[limits][mc]") {
    const std::vector<double> grid = {kPi / 4.0, kPi / 2.0, 2.0};
    const auto spec = LimitProcessSpec::bridge(1.0, 10000, WeightFunction::one(), grid);
    const LimitSimulator sim(spec);
    auto ws = sim.make_workspace();
    std::vector<std::vector<double>> paths;
    const std::uint32_t N = 100000;
    paths.reserve(N);
    for (std::uint32_t r = 0; r < N; ++r) {
        RandomStream stream({31, r, StreamPurpose::LimitProcess});
        paths.push_back(sim.path(stream, ws));
    }
    const auto mom = sample_moments(paths);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(std::abs(mom.mean[i]) <= 4.0 * std::sqrt(mom.cov(i, i) / N));
        for (std::size_t j = 0; j < grid.size(); ++j) {
            const double exact = 2.0 * (kPi * std::min(grid[i], grid[j]) - grid[i] * grid[j]);
            CHECK(std::abs(mom.cov(i, j) - exact) <= 3.0 * mom.cov_se(i, j));
        }
    }
}

TEST_CASE("general covariance round trip", "[limits][mc]") {
    // With g = 1 the basis rows at three points are (x, 2 sin x, sin 2x):
    // invert it to recover (Z_0, Z_1, Z_2) from each path.
    Eigen::MatrixXd sigma(3, 3);
    sigma << 2.0, 0.6, -0.3, 0.6, 1.0, 0.4, -0.3, 0.4, 0.5;
    const std::vector<double> grid = {0.4, 1.1, 2.3};
    const auto spec = LimitProcessSpec::general(sigma, WeightFunction::one(), grid);
    Eigen::Matrix3d basis;
    for (int k = 0; k < 3; ++k) basis.row(k) << grid[k], 2.0 * std::sin(grid[k]), std::sin(2.0 * grid[k]);
    const Eigen::Matrix3d inv = basis.inverse();
    const LimitSimulator sim(spec);
    auto ws = sim.make_workspace();
    std::vector<std::vector<double>> draws;
    const std::uint32_t N = 40000;
    for (std::uint32_t r = 0; r < N; ++r) {
        RandomStream stream({5, r, StreamPurpose::LimitProcess});
        const auto p = sim.path(stream, ws);
        const Eigen::Vector3d z = inv * Eigen::Vector3d(p[0], p[1], p[2]);
        draws.push_back({z[0], z[1], z[2]});
    }
    const auto mom = sample_moments(draws);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(std::abs(mom.cov(i, j) - sigma(i, j)) <= 4.0 * mom.cov_se(i, j));

    const auto var = sim.pointwise_variance();
    for (int k = 0; k < 3; ++k) {
        const Eigen::Vector3d row = basis.row(k).transpose();
        CHECK(var[k] == Approx(row.dot(sigma * row)));
    }
}

TEST_CASE("singular covariances are accepted, indefinite ones rejected", "[limits]") {
    const auto grid = uniform_pi_grid(8);
    Eigen::MatrixXd rank_one(2, 2);
    rank_one << 1.0, 1.0, 1.0, 1.0;
    CHECK_NOTHROW(simulate_limit(LimitProcessSpec::general(rank_one, WeightFunction::one(), grid), 1));
    Eigen::MatrixXd bad(2, 2);
    bad << 1.0, 2.0, 2.0, 1.0;
    CHECK_THROWS_AS(LimitProcessSpec::general(bad, WeightFunction::one(), grid).validate(), NonPsdError);
    Eigen::MatrixXd asym(2, 2);
    asym << 1.0, 0.5, 0.0, 1.0;
    CHECK_THROWS_AS(LimitProcessSpec::general(asym, WeightFunction::one(), grid).validate(), NonPsdError);
    CHECK_THROWS_AS(LimitProcessSpec::bridge(1.0, 0, WeightFunction::one(), grid).validate(), std::invalid_argument);
    CHECK_THROWS_AS(LimitProcessSpec::bridge(-1.0, 5, WeightFunction::one(), grid).validate(), std::invalid_argument);
}

TEST_CASE("Kolmogorov distribution", "[limits]") {
    CHECK(kolmogorov_cdf(0.0) == 0.0);
    // Reference values of the Kolmogorov distribution.
    CHECK(kolmogorov_cdf(0.5) == Approx(0.0360547563).margin(1e-8));
    CHECK(kolmogorov_cdf(1.0) == Approx(0.7300003283).margin(1e-8));
    CHECK(kolmogorov_cdf(2.0) == Approx(0.9993290747).margin(1e-8));
    double prev = 0.0;
    for (int i = 1; i <= 4000; ++i) {
        const double k = kolmogorov_cdf(i * 1e-3);
        CHECK(k >= prev);
        CHECK(k <= 1.0);
        prev = k;
    }
    CHECK(kolmogorov_quantile(0.95) == Approx(1.3581).margin(1e-3));
    CHECK(kolmogorov_cdf(kolmogorov_quantile(0.3)) == Approx(0.3).margin(1e-10));
    CHECK_THROWS_AS(kolmogorov_quantile(1.0), std::invalid_argument);
}

TEST_CASE("bridge sup quantile", "[limits]") {
    CHECK(bridge_sup_quantile(0.95, 1.0) == Approx(kPi * std::sqrt(2.0) * 1.3581).epsilon(1e-3));
    CHECK(bridge_sup_quantile(0.95, 1.0) == Approx(6.034).margin(2e-3));
    for (double p : {0.5, 0.9, 0.99}) CHECK(bridge_sup_quantile(p, 2.0) == Approx(2.0 * bridge_sup_quantile(p, 1.0)));
    CHECK_THROWS_AS(bridge_sup_quantile(0.0, 1.0), std::invalid_argument);
}

TEST_CASE("bridge sup quantile agrees with simulation", "[limits][mc]") {
    const auto spec = LimitProcessSpec::bridge(1.0, 10000, WeightFunction::one(), uniform_pi_grid(8192));
    const auto sups = limit_functional_sample(spec, TestKind::GR, 20000, 2024);
    const double mc = order_statistic_quantile(sups, 0.95);
    INFO("MC " << mc);
    CHECK(std::abs(mc / bridge_sup_quantile(0.95, 1.0) - 1.0) <= 0.02);
}

TEST_CASE("printed sup density does not integrate to one", "[limits]") {
    const double upper = 40.0;
    const int steps = 400000;
    const double dx = upper / steps;
    double s = 0.0;
    for (int i = 1; i < steps; ++i) s += printed_sup_density(i * dx);
    s *= dx;
    CHECK(s == Approx(kPi * kPi / 6.0).margin(1e-6));
    CHECK(std::abs(s - 1.0) > 0.5);
}

TEST_CASE("CvM limit quantiles", "[limits][mc]") {
    CvmOptions opts;
    opts.seed = 88;
    opts.reps = 20000;
    CHECK(cvm_limit_quantile(0.95, 0.0, CvmMethod::ChiSqSeriesMC, opts) == 0.0);
    opts.reps = 200;
    CHECK(cvm_limit_quantile(0.95, 0.0, CvmMethod::SeriesMC, opts) == 0.0);

    opts.reps = 20000;
    const double series = cvm_limit_quantile(0.95, 1.0, CvmMethod::SeriesMC, opts);
    const double chisq = cvm_limit_quantile(0.95, 1.0, CvmMethod::ChiSqSeriesMC, opts);
    INFO("series " << series << " chisq " << chisq);
    CHECK(std::abs(series / chisq - 1.0) <= 0.03);

    // Exact scaling identities under common random numbers.
    opts.reps = 2000;
    const double base = cvm_limit_quantile(0.95, 1.0, CvmMethod::ChiSqSeriesMC, opts);
    CHECK(cvm_limit_quantile(0.95, 2.0, CvmMethod::ChiSqSeriesMC, opts) == Approx(4.0 * base).epsilon(1e-12));
    opts.reps = 300;
    const double base_series = cvm_limit_quantile(0.95, 1.0, CvmMethod::SeriesMC, opts);
    CHECK(cvm_limit_quantile(0.95, 2.0, CvmMethod::SeriesMC, opts) == Approx(4.0 * base_series).epsilon(1e-12));

    opts.reps = 2000;
    auto printed = opts;
    printed.printed_coefficients = true;
    CHECK(cvm_limit_quantile(0.95, 1.0, CvmMethod::ChiSqSeriesMC, printed) * kPi == Approx(base).epsilon(1e-12));
}

TEST_CASE("iid eta covariance", "[limits]") {
    const auto c = eta_null_covariance_iid(1.0, 5);
    CHECK(c.isApprox(Eigen::MatrixXd::Identity(5, 5)));
    const auto c2 = eta_null_covariance_iid(0.5, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(c2(i, j) == (i == j ? 0.25 : 0.0));
    CHECK_THROWS_AS(eta_null_covariance_iid(0.0, 3), std::invalid_argument);
}

TEST_CASE("eta-bar covariance plug-in matches brute force", "[limits]") {
    std::mt19937_64 rng(3);
    const auto raw = oracle::random_indicators(rng, 60, 0.4);
    const double m = 2.5;
    const auto ind = IndicatorSeries::from_raw(raw, m);
    const std::size_t n = raw.size();
    double mean = 0.0;
    for (auto v : raw) mean += v;
    mean /= n;
    auto gam = [&](std::size_t h) {
        double s = 0.0;
        for (std::size_t t = 0; t + h < n; ++t) s += (raw[t] - mean) * (raw[t + h] - mean);
        return m / n * s;
    };
    auto four = [&](std::size_t a, std::size_t b, std::size_t c) {
        double s = 0.0;
        for (std::size_t t = 0; t + std::max({a, b, c}) < n; ++t) s += raw[t] * raw[t + a] * raw[t + b] * raw[t + c];
        return m * m / n * s;
    };
    // eta = 1, H = 3: lags 2, 3, 4; only |j - i| = 0 carries the fourth-order term.
    const auto cov = eta_bar_covariance(ind, 1, 3);
    REQUIRE(cov.rows() == 3);
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            const std::size_t i = 2 + std::min(a, b);
            const std::size_t j = 2 + std::max(a, b);
            double expected = gam(0) * gam(j - i);
            if (j == i) expected += 2.0 * four(1, i, 1 + j);
            CHECK(cov(a, b) == Approx(expected).margin(1e-12));
        }
    }
    CHECK_THROWS_AS(eta_bar_covariance(ind, 30, 5), std::invalid_argument);
}

TEST_CASE("independent-hat variances", "[limits]") {
    const auto ind = IndicatorSeries::from_raw({1, 1, 0, 1, 1, 0, 1, 1}, 2.0);
    const auto v = independent_hat_variances(ind, 2);
    REQUIRE(v.size() == 2);
    CHECK(v[0] == Approx(2.0 * 2.0 / 8.0 * 3.0));
    CHECK(v[1] == Approx(2.0 * 2.0 / 8.0 * 2.0));
}

TEST_CASE("limit samples are deterministic across workers", "[limits]") {
    const auto spec = LimitProcessSpec::bridge(1.0, 500, WeightFunction::one(), uniform_pi_grid(256));
    const auto a = limit_functional_sample(spec, TestKind::CvM, 300, 7, 1);
    const auto b = limit_functional_sample(spec, TestKind::CvM, 300, 7, 4);
    CHECK(a == b);
}
