#include "xgram/igram.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "xgram/error.hpp"
#include "xgram/fft.hpp"
#include "xgram/parallel.hpp"
#include "xgram/rng.hpp"

namespace xgram {

namespace {

constexpr double kPi = std::numbers::pi;

void check_grid(std::span<const double> grid) {
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (!(grid[k] >= 0.0 && grid[k] <= kPi + 1e-12)) {
            throw std::invalid_argument("grid points must lie in [0, pi]");
        }
        if (k > 0 && grid[k] < grid[k - 1]) {
            throw std::invalid_argument("grid must be nondecreasing");
        }
    }
}

// Index k with x == 2 pi k / n (k <= n/2), if x is such a point.
std::optional<std::size_t> fourier_index(double x, std::size_t n) {
    const double k = std::round(x * static_cast<double>(n) / (2.0 * kPi));
    if (k < 0.0 || 2.0 * k > static_cast<double>(n)) {
        return std::nullopt;
    }
    const auto kk = static_cast<std::size_t>(k);
    if (std::abs(fourier_frequency(kk, n) - x) > 1e-12) {
        return std::nullopt;
    }
    return kk;
}

void check_same_grid(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw GridMismatchError("curve and centering have different grid sizes");
    }
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (std::abs(a[k] - b[k]) > 1e-12) {
            throw GridMismatchError("curve and centering grids differ at point " + std::to_string(k));
        }
    }
}

IgramCurve replicate_curve(const IndicatorSeries& ind, const WeightFunction& g, std::span<const double> grid,
                           IgramVariant variant) {
    if (variant == IgramVariant::Discretized) {
        return igram_discretized(ind, g, grid);
    }
    return igram_continuous(full_extremogram(ind), g, grid);
}

}  // namespace

std::string to_string(IgramVariant v) { return v == IgramVariant::Continuous ? "continuous" : "discretized"; }

IgramVariant igram_variant_from_string(const std::string& text) {
    if (text == "continuous") return IgramVariant::Continuous;
    if (text == "discretized") return IgramVariant::Discretized;
    throw std::invalid_argument("unknown igram variant '" + text + "' (expected continuous or discretized)");
}

std::string to_string(CenteringProvenance::Kind kind) {
    switch (kind) {
        case CenteringProvenance::Kind::MonteCarlo:
            return "monte-carlo";
        case CenteringProvenance::Kind::ExactIid:
            return "exact-iid";
        case CenteringProvenance::Kind::EtaPartialSum:
            return "eta-partial-sum";
    }
    return "eta-partial-sum";
}

std::string to_string(TestKind k) { return k == TestKind::GR ? "gr" : "cvm"; }

std::string to_string(Rate r) { return r == Rate::SqrtNoverM ? "sqrt(n/m)" : "sqrt(n)"; }

std::string to_string(QuantileSource q) {
    switch (q) {
        case QuantileSource::None:
            return "none";
        case QuantileSource::Bootstrap:
            return "bootstrap";
        case QuantileSource::LimitSeries:
            return "limit-series";
        case QuantileSource::BridgeClosedForm:
            return "bridge-closed-form";
        case QuantileSource::NullModelMC:
            return "null-model-mc";
    }
    return "none";
}

TestKind test_kind_from_string(const std::string& text) {
    if (text == "gr") return TestKind::GR;
    if (text == "cvm") return TestKind::CvM;
    throw std::invalid_argument("unknown test kind '" + text + "' (expected gr or cvm)");
}

double rate_value(Rate rate, std::size_t n, double m) {
    const auto nd = static_cast<double>(n);
    return rate == Rate::SqrtN ? std::sqrt(nd) : std::sqrt(nd / m);
}

std::vector<double> fourier_grid(std::size_t n) {
    if (n < 2) {
        throw std::invalid_argument("fourier_grid: n must be at least 2");
    }
    std::vector<double> grid;
    for (std::size_t k = 0; 2 * k <= n; ++k) {
        grid.push_back(fourier_frequency(k, n));
    }
    if (n % 2 == 1) {
        grid.push_back(kPi);
    }
    return grid;
}

IgramCurve igram_continuous(const ExtremogramEstimate& ext, const WeightFunction& g, std::span<const double> grid) {
    check_grid(grid);
    if (ext.gamma.empty()) {
        throw std::invalid_argument("igram_continuous: empty extremogram");
    }
    const std::size_t lags = ext.gamma.size();
    IgramCurve curve;
    curve.grid.assign(grid.begin(), grid.end());
    curve.values.assign(grid.size(), 0.0);
    curve.variant = IgramVariant::Continuous;
    curve.m = ext.m;
    curve.n = ext.n;

    if (!g.is_one()) {
        for (std::size_t h = 0; h < lags; ++h) {
            const double w = h == 0 ? ext.gamma[0] : 2.0 * ext.gamma[h];
            if (w == 0.0) continue;
            const auto p = psi_on_grid(g, h, grid);
            for (std::size_t k = 0; k < grid.size(); ++k) {
                curve.values[k] += w * p[k];
            }
        }
        return curve;
    }

    // g = 1: sum_h (gamma_h / h) sin(h x) is minus the imaginary part of the
    // DFT of gamma_h / h at Fourier frequencies of length n.
    const std::size_t n = ext.n;
    std::vector<std::optional<std::size_t>> on_grid(grid.size());
    bool any_fourier = false;
    if (n >= 2 && lags <= n) {
        for (std::size_t k = 0; k < grid.size(); ++k) {
            on_grid[k] = fourier_index(grid[k], n);
            any_fourier = any_fourier || on_grid[k].has_value();
        }
    }
    std::vector<std::complex<double>> spectrum;
    if (any_fourier) {
        RealDft dft(n);
        std::vector<double> a(n, 0.0);
        for (std::size_t h = 1; h < lags; ++h) {
            a[h] = ext.gamma[h] / static_cast<double>(h);
        }
        const auto s = dft.forward(a);
        spectrum.assign(s.begin(), s.end());
    }
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double x = grid[k];
        double sine_sum = 0.0;
        if (on_grid[k]) {
            sine_sum = -spectrum[*on_grid[k]].imag();
        } else {
            for (std::size_t h = 1; h < lags; ++h) {
                const double hd = static_cast<double>(h);
                sine_sum += ext.gamma[h] * std::sin(hd * x) / hd;
            }
        }
        curve.values[k] = x * ext.gamma[0] + 2.0 * sine_sum;
    }
    return curve;
}

std::vector<double> cumulate_spectrum(std::span<const double> spectrum, std::size_t n, const WeightFunction& g,
                                      std::span<const double> grid) {
    const std::size_t half = n / 2;
    if (spectrum.size() < half + 1) {
        throw std::invalid_argument("cumulate_spectrum: need bins 0..n/2");
    }
    std::vector<double> prefix(half + 1, 0.0);
    const double step = 2.0 * kPi / static_cast<double>(n);
    for (std::size_t i = 1; i <= half; ++i) {
        const double w = g.is_one() ? 1.0 : g(fourier_frequency(i, n));
        prefix[i] = prefix[i - 1] + step * w * spectrum[i];
    }
    std::vector<double> out(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        out[k] = prefix[std::min(fourier_index_floor(grid[k], n), half)];
    }
    return out;
}

IgramCurve igram_discretized(const IndicatorSeries& ind, const WeightFunction& g, std::span<const double> grid) {
    const std::size_t n = ind.size();
    if (n < 4) {
        throw std::invalid_argument("igram_discretized: n must be at least 4");
    }
    check_grid(grid);
    IgramCurve curve;
    curve.grid.assign(grid.begin(), grid.end());
    curve.values = cumulate_spectrum(half_spectrum(ind), n, g, grid);
    curve.variant = IgramVariant::Discretized;
    curve.m = ind.m();
    curve.n = n;
    return curve;
}

std::vector<double> discretized_from_lags(std::span<const double> lags, std::size_t n, const WeightFunction& g,
                                          std::span<const double> grid) {
    if (n < 4) {
        throw std::invalid_argument("discretized_from_lags: n must be at least 4");
    }
    if (lags.empty() || lags.size() > n) {
        throw std::invalid_argument("discretized_from_lags: need between 1 and n lag coefficients");
    }
    check_grid(grid);
    RealDft dft(n);
    std::vector<double> e(n, 0.0);
    e[0] = lags[0];
    for (std::size_t h = 1; h < lags.size(); ++h) {
        e[h] = 2.0 * lags[h];
    }
    const auto s = dft.forward(e);
    std::vector<double> spectrum(s.size());
    for (std::size_t k = 0; k < s.size(); ++k) {
        spectrum[k] = s[k].real();
    }
    return cumulate_spectrum(spectrum, n, g, grid);
}

CenteringCurve centering_monte_carlo(const ModelSpec& model, std::size_t n, double p0, const ExtremeSet& set,
                                     const WeightFunction& g, std::span<const double> grid, std::size_t replicates,
                                     std::uint64_t seed, const MonteCarloOptions& options) {
    if (replicates < 1) {
        throw std::invalid_argument("centering_monte_carlo: need at least one replicate");
    }
    model.validate();
    check_grid(grid);
    const unsigned workers = options.workers == 0 ? default_workers() : options.workers;

    std::vector<double> thresholds(replicates);
    parallel_for(replicates, workers, [&](std::size_t r) {
        const auto series = simulate(model, n, seed, static_cast<std::uint32_t>(r));
        thresholds[r] = threshold_from_p0(series, set, p0).a_m;
    });
    const double a_m = pairwise_sum(thresholds) / static_cast<double>(replicates);
    const ThresholdSpec fixed{p0, a_m, 1.0 / p0, 0};

    ReplicateAccumulator acc(replicates, grid.size());
    parallel_chunks(replicates, ReplicateAccumulator::kChunk, workers, [&](std::size_t r) {
        const auto series = simulate(model, n, seed, static_cast<std::uint32_t>(r));
        const auto ind = indicators(series, fixed, set, options.centering);
        acc.add(r, replicate_curve(ind, g, grid, options.variant).values);
    });

    CenteringCurve center;
    center.grid.assign(grid.begin(), grid.end());
    center.values = acc.mean();
    center.std_error = acc.standard_error();
    center.a_m = a_m;
    center.provenance.kind = CenteringProvenance::Kind::MonteCarlo;
    center.provenance.model = model;
    center.provenance.replicates = replicates;
    center.provenance.seed = seed;
    return center;
}

CenteringCurve eta_null_center(const ExtremogramEstimate& ext, const WeightFunction& g, std::span<const double> grid,
                               std::size_t eta, IgramVariant variant) {
    if (eta >= ext.gamma.size()) {
        throw std::invalid_argument("eta_null_center: eta exceeds the lags of the extremogram");
    }
    CenteringCurve center;
    center.grid.assign(grid.begin(), grid.end());
    center.provenance.kind = CenteringProvenance::Kind::EtaPartialSum;
    center.provenance.eta = eta;
    const std::span<const double> lags(ext.gamma.data(), eta + 1);
    if (variant == IgramVariant::Discretized) {
        center.values = discretized_from_lags(lags, ext.n, g, grid);
        return center;
    }
    ExtremogramEstimate truncated = ext;
    truncated.gamma.resize(eta + 1);
    truncated.rho.resize(eta + 1);
    center.values = igram_continuous(truncated, g, grid).values;
    return center;
}

IgramCurve standardized_igram(const IgramCurve& curve, const ExtremogramEstimate& ext) {
    if (ext.gamma.empty() || ext.gamma[0] == 0.0) {
        throw DataError("standardized igram: gamma(0) is zero (no extremes)");
    }
    IgramCurve out = curve;
    for (double& v : out.values) {
        v /= ext.gamma[0];
    }
    out.standardized = true;
    return out;
}

double deviation_statistic(std::span<const double> curve, std::span<const double> center,
                           std::span<const double> grid, TestKind kind, double rate) {
    if (curve.size() != center.size() || curve.size() != grid.size()) {
        throw GridMismatchError("curve, centering and grid sizes differ");
    }
    if (kind == TestKind::GR) {
        double sup = 0.0;
        for (std::size_t k = 0; k < curve.size(); ++k) {
            sup = std::max(sup, std::abs(curve[k] - center[k]));
        }
        return rate * sup;
    }
    double integral = 0.0;
    for (std::size_t k = 0; k + 1 < curve.size(); ++k) {
        const double d0 = curve[k] - center[k];
        const double d1 = curve[k + 1] - center[k + 1];
        integral += 0.5 * (grid[k + 1] - grid[k]) * (d0 * d0 + d1 * d1);
    }
    return rate * rate * integral;
}

namespace {

TestResult make_result(const IgramCurve& curve, const CenteringCurve& center, Rate rate, TestKind kind) {
    check_same_grid(curve.grid, center.grid);
    if (curve.values.size() != curve.grid.size() || center.values.size() != center.grid.size()) {
        throw std::invalid_argument("curve values do not match the grid");
    }
    TestResult result;
    result.kind = kind;
    result.rate = rate;
    result.rate_value = rate_value(rate, curve.n, curve.m);
    result.statistic = deviation_statistic(curve.values, center.values, curve.grid, kind, result.rate_value);
    return result;
}

}  // namespace

TestResult grs(const IgramCurve& curve, const CenteringCurve& center, Rate rate) {
    return make_result(curve, center, rate, TestKind::GR);
}

TestResult cvm(const IgramCurve& curve, const CenteringCurve& center, Rate rate) {
    return make_result(curve, center, rate, TestKind::CvM);
}

TestResult with_critical_value(TestResult result, double critical_value, QuantileSource source, double level) {
    if (!(level > 0.0 && level < 1.0)) {
        throw std::invalid_argument("level must lie in (0, 1)");
    }
    result.critical_value = critical_value;
    result.quantile_source = source;
    result.level = level;
    result.reject = result.statistic > critical_value;
    return result;
}

std::vector<double> null_model_statistics(const ModelSpec& model, std::size_t n, double p0, const ExtremeSet& set,
                                          const WeightFunction& g, const CenteringCurve& center, TestKind kind,
                                          std::size_t replicates, std::uint64_t seed,
                                          const MonteCarloOptions& options) {
    if (!(center.a_m > 0.0)) {
        throw std::invalid_argument("null_model_statistics: centering carries no Monte Carlo threshold");
    }
    model.validate();
    const unsigned workers = options.workers == 0 ? default_workers() : options.workers;
    const std::uint64_t family = derive_seed(seed, StreamPurpose::NullModel);
    const ThresholdSpec fixed{p0, center.a_m, 1.0 / p0, 0};
    const double rate = rate_value(Rate::SqrtNoverM, n, fixed.m);
    std::vector<double> stats(replicates);
    parallel_for(replicates, workers, [&](std::size_t r) {
        const auto series = simulate(model, n, family, static_cast<std::uint32_t>(r));
        const auto ind = indicators(series, fixed, set, options.centering);
        const auto curve = replicate_curve(ind, g, center.grid, options.variant);
        stats[r] = deviation_statistic(curve.values, center.values, center.grid, kind, rate);
    });
    return stats;
}

}  // namespace xgram
