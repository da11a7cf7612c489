#pragma once

// Direct O(n^2) reference implementations used as test oracles. They follow
// the defining sums literally and share no code with the library.

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

inline constexpr double pi = std::numbers::pi;

inline std::vector<double> center(const std::vector<std::uint8_t>& raw, double offset) {
    std::vector<double> c(raw.size());
    for (std::size_t t = 0; t < raw.size(); ++t) c[t] = raw[t] - offset;
    return c;
}

inline double gamma(const std::vector<double>& c, double m, std::size_t h) {
    const std::size_t n = c.size();
    double s = 0.0;
    for (std::size_t t = 1; t + h <= n; ++t) s += c[t - 1] * c[t + h - 1];
    return m / static_cast<double>(n) * s;
}

inline double periodogram(const std::vector<double>& c, double m, double lambda) {
    std::complex<double> s = 0.0;
    for (std::size_t t = 1; t <= c.size(); ++t) {
        s += c[t - 1] * std::exp(std::complex<double>(0.0, -lambda * static_cast<double>(t)));
    }
    return m / static_cast<double>(c.size()) * std::norm(s);
}

// J(x) for g = 1 from the lag form.
inline double igram_continuous(const std::vector<double>& c, double m, double x) {
    double j = x * gamma(c, m, 0);
    for (std::size_t h = 1; h < c.size(); ++h) {
        j += 2.0 * std::sin(static_cast<double>(h) * x) / static_cast<double>(h) * gamma(c, m, h);
    }
    return j;
}

inline double psi_hat(const std::function<double(double)>& g, std::size_t h, double x, std::size_t n) {
    const auto xn = static_cast<std::size_t>(std::floor(static_cast<double>(n) * x / (2.0 * pi) + 1e-9));
    double s = 0.0;
    for (std::size_t i = 1; i <= xn; ++i) {
        const double w = 2.0 * pi * static_cast<double>(i) / static_cast<double>(n);
        s += g(w) * std::cos(static_cast<double>(h) * w);
    }
    return 2.0 * pi / static_cast<double>(n) * s;
}

// Discretized J from the psi-hat coefficient form.
inline double igram_discretized(const std::vector<double>& c, double m, double x,
                                const std::function<double(double)>& g) {
    const std::size_t n = c.size();
    double j = psi_hat(g, 0, x, n) * gamma(c, m, 0);
    for (std::size_t h = 1; h < n; ++h) j += 2.0 * psi_hat(g, h, x, n) * gamma(c, m, h);
    return j;
}

inline std::vector<std::uint8_t> random_indicators(std::mt19937_64& rng, std::size_t n, double p) {
    std::bernoulli_distribution b(p);
    std::vector<std::uint8_t> raw(n);
    for (auto& v : raw) v = b(rng) ? 1 : 0;
    return raw;
}

inline double mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

inline double sd(const std::vector<double>& v) {
    const double mu = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - mu) * (x - mu);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

}  // namespace oracle
