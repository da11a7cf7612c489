#include "xgram/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "xgram/fft.hpp"
#include "xgram/parallel.hpp"
#include "xgram/quantile.hpp"
#include "xgram/rng.hpp"

namespace xgram {

namespace {

constexpr std::size_t kChunk = 64;

// n^{-1} sum_i f(i) over the circle.
template <typename F>
double circular_mean(std::size_t n, F&& f) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        s += f(i);
    }
    return s / static_cast<double>(n);
}

}  // namespace

void BootstrapPlan::validate() const {
    if (!(theta > 0.0 && theta < 1.0)) {
        throw std::invalid_argument("bootstrap: theta must lie in (0, 1)");
    }
    if (B < 1) {
        throw std::invalid_argument("bootstrap: B must be at least 1");
    }
    if (n < 2) {
        throw std::invalid_argument("bootstrap: n must be at least 2");
    }
}

std::vector<std::size_t> sb_indices(const BootstrapPlan& plan, std::uint32_t replicate) {
    plan.validate();
    RandomStream stream({plan.seed, replicate, StreamPurpose::BootstrapIndex});
    std::vector<std::size_t> idx;
    idx.reserve(plan.n);
    while (idx.size() < plan.n) {
        const std::size_t start = stream.index(plan.n);
        const std::size_t length = stream.geometric(plan.theta);
        for (std::size_t l = 0; l < length && idx.size() < plan.n; ++l) {
            idx.push_back((start + l) % plan.n);
        }
    }
    return idx;
}

std::vector<double> sample_centered(const IndicatorSeries& ind) { return ind.centered(Centering::Empirical); }

ExtremogramEstimate bootstrap_extremogram(const IndicatorSeries& ind, std::span<const std::size_t> idx,
                                          std::size_t max_lag) {
    const std::size_t n = ind.size();
    if (idx.size() != n) {
        throw std::invalid_argument("bootstrap_extremogram: index sequence must have length n");
    }
    if (max_lag >= n) {
        throw std::invalid_argument("bootstrap_extremogram: max_lag must be below n");
    }
    const auto c = sample_centered(ind);
    std::vector<double> x(n);
    for (std::size_t t = 0; t < n; ++t) {
        if (idx[t] >= n) {
            throw std::invalid_argument("bootstrap_extremogram: index out of range");
        }
        x[t] = c[idx[t]];
    }
    auto sums = lag_products(x, max_lag);
    ExtremogramEstimate est;
    est.centering = Centering::Empirical;
    est.m = ind.m();
    est.n = n;
    const double scale = ind.m() / static_cast<double>(n);
    est.gamma.resize(sums.size());
    est.rho.resize(sums.size());
    for (std::size_t h = 0; h < sums.size(); ++h) {
        est.gamma[h] = scale * sums[h];
    }
    est.rho_defined = est.gamma[0] > 0.0;
    for (std::size_t h = 0; h < sums.size(); ++h) {
        est.rho[h] = est.rho_defined ? est.gamma[h] / est.gamma[0] : std::nan("");
    }
    return est;
}

double estar_gamma(const IndicatorSeries& ind, double theta, std::size_t h) {
    const std::size_t n = ind.size();
    if (h >= n) {
        throw std::invalid_argument("estar_gamma: h must be below n");
    }
    if (!(theta > 0.0 && theta <= 1.0)) {
        throw std::invalid_argument("estar_gamma: theta must lie in (0, 1]");
    }
    const auto c = sample_centered(ind);
    double s = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        s += c[t] * c[(t + h) % n];
    }
    const double nd = static_cast<double>(n);
    const double hd = static_cast<double>(h);
    return (1.0 - hd / nd) * std::pow(1.0 - theta, hd) * ind.m() / nd * s;
}

std::vector<double> estar_gamma_all(const IndicatorSeries& ind, double theta) {
    if (!(theta > 0.0 && theta <= 1.0)) {
        throw std::invalid_argument("estar_gamma: theta must lie in (0, 1]");
    }
    const std::size_t n = ind.size();
    auto out = circular_lag_products(sample_centered(ind));
    const double nd = static_cast<double>(n);
    double decay = 1.0;
    for (std::size_t h = 0; h < n; ++h) {
        out[h] *= (1.0 - static_cast<double>(h) / nd) * decay * ind.m() / nd;
        decay *= 1.0 - theta;
    }
    return out;
}

StarMoments star_moments(const IndicatorSeries& ind, double theta, std::size_t h, std::size_t s) {
    const std::size_t n = ind.size();
    if (h >= n || s >= n) {
        throw std::invalid_argument("star_moments: lags must be below n");
    }
    if (!(theta > 0.0 && theta <= 1.0)) {
        throw std::invalid_argument("star_moments: theta must lie in (0, 1]");
    }
    const auto hat = sample_centered(ind);
    const auto tilde = ind.centered(Centering::Theoretical);
    auto at = [n](const std::vector<double>& v, std::size_t i) { return v[i % n]; };
    const double q = 1.0 - theta;

    const double b_h = circular_mean(n, [&](std::size_t i) { return hat[i] * at(hat, i + h); });
    const double b_s = circular_mean(n, [&](std::size_t i) { return hat[i] * at(hat, i + s); });
    const double a_h = circular_mean(n, [&](std::size_t i) { return tilde[i] * at(tilde, i + h); });
    const double tttt = circular_mean(n, [&](std::size_t i) {
        return tilde[i] * at(tilde, i + h) * at(tilde, i + s) * at(tilde, i + s + h);
    });
    const double hhtt = circular_mean(n, [&](std::size_t i) {
        return hat[i] * at(hat, i + h) * at(tilde, i + s) * at(tilde, i + s + h);
    });
    const double tthh = circular_mean(n, [&](std::size_t i) {
        return tilde[i] * at(tilde, i + h) * at(hat, i + s) * at(hat, i + s + h);
    });
    const double hhhh = circular_mean(n, [&](std::size_t i) {
        return hat[i] * at(hat, i + s) * at(hat, i + h) * at(hat, i + s + h);
    });
    const auto pw = [q](std::size_t k) { return std::pow(q, static_cast<double>(k)); };

    StarMoments out;
    out.h = h;
    out.s = s;
    out.e_hat = circular_mean(n, [&](std::size_t i) { return hat[i]; });
    out.e_hat_pair = pw(h) * b_h;
    out.e_tilde_pair = a_h;
    out.cov_tilde_tilde = pw(s) * (tttt - a_h * a_h);
    out.cov_hat_tilde = pw(std::max(s, h)) * (hhtt - b_h * a_h);
    out.cov_tilde_hat = pw(s + h) * (tthh - b_h * a_h);
    if (s < h) {
        const double ds = pw(s) * b_s;
        const double dh = pw(h) * b_h;
        out.cov_hat_hat = pw(s + h) * (hhhh - b_s * b_s) + ds * ds - dh * dh;
    } else {
        out.cov_hat_hat = pw(s + h) * (hhhh - b_h * b_h);
    }
    return out;
}

BootstrapDistribution bootstrap_igram_distribution(const IndicatorSeries& ind, const WeightFunction& g,
                                                   std::span<const double> grid, const BootstrapPlan& plan,
                                                   TestKind kind, unsigned workers) {
    plan.validate();
    const std::size_t n = ind.size();
    if (plan.n != n) {
        throw std::invalid_argument("bootstrap: plan length differs from the series length");
    }
    if (n < 4) {
        throw std::invalid_argument("bootstrap: n must be at least 4");
    }
    BootstrapDistribution dist;
    dist.kind = kind;
    dist.grid.assign(grid.begin(), grid.end());
    dist.center = discretized_from_lags(estar_gamma_all(ind, plan.theta), n, g, grid);
    dist.rate = rate_value(Rate::SqrtNoverM, n, ind.m());
    dist.statistics.resize(plan.B);

    const auto c = sample_centered(ind);
    const double scale = ind.m() / static_cast<double>(n);
    const std::size_t chunks = (plan.B + kChunk - 1) / kChunk;
    parallel_for(chunks, workers == 0 ? default_workers() : workers, [&](std::size_t chunk) {
        RealDft dft(n);
        std::vector<double> x(n);
        std::vector<double> spectrum(dft.bins());
        const std::size_t end = std::min(plan.B, (chunk + 1) * kChunk);
        for (std::size_t b = chunk * kChunk; b < end; ++b) {
            const auto idx = sb_indices(plan, static_cast<std::uint32_t>(b));
            for (std::size_t t = 0; t < n; ++t) {
                x[t] = c[idx[t]];
            }
            const auto f = dft.forward(x);
            for (std::size_t k = 0; k < f.size(); ++k) {
                spectrum[k] = scale * std::norm(f[k]);
            }
            const auto curve = cumulate_spectrum(spectrum, n, g, dist.grid);
            dist.statistics[b] = deviation_statistic(curve, dist.center, dist.grid, kind, dist.rate);
        }
    });
    return dist;
}

double bootstrap_igram_quantile(const IndicatorSeries& ind, const WeightFunction& g, const BootstrapPlan& plan,
                                TestKind kind, double p, unsigned workers) {
    const auto grid = fourier_grid(ind.size());
    const auto dist = bootstrap_igram_distribution(ind, g, grid, plan, kind, workers);
    return order_statistic_quantile(dist.statistics, p);
}

}  // namespace xgram
