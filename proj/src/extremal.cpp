#include "xgram/extremal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "xgram/error.hpp"
#include "xgram/fft.hpp"

namespace xgram {

ExtremeSet ExtremeSet::interval(double lower, double upper) {
    if (!(lower < upper)) {
        throw std::invalid_argument("interval set: lower must be below upper");
    }
    if (!(lower > 0.0 || upper < 0.0)) {
        throw std::invalid_argument("interval set must be bounded away from zero");
    }
    return {Kind::Interval, lower, upper};
}

bool ExtremeSet::contains(double scaled) const {
    switch (kind) {
        case Kind::UpperTail:
            return scaled > 1.0;
        case Kind::LowerTail:
            return scaled < -1.0;
        case Kind::AbsTail:
            return std::abs(scaled) > 1.0;
        case Kind::Interval:
            return scaled > lower && scaled < upper;
    }
    return false;
}

double ExtremeSet::tail_functional(double x) const {
    switch (kind) {
        case Kind::UpperTail:
            return x;
        case Kind::LowerTail:
            return -x;
        case Kind::AbsTail:
            return std::abs(x);
        case Kind::Interval:
            return lower > 0.0 ? x : -x;
    }
    return x;
}

ExtremeSet parse_extreme_set(const std::string& text) {
    if (text == "upper") return ExtremeSet::upper_tail();
    if (text == "lower") return ExtremeSet::lower_tail();
    if (text == "abs") return ExtremeSet::abs_tail();
    if (text.rfind("interval:", 0) == 0) {
        const auto rest = text.substr(9);
        const auto colon = rest.find(':');
        if (colon == std::string::npos) {
            throw std::invalid_argument("interval set must be written interval:a:b");
        }
        return ExtremeSet::interval(std::stod(rest.substr(0, colon)), std::stod(rest.substr(colon + 1)));
    }
    throw std::invalid_argument("unknown set '" + text + "' (expected upper, lower, abs or interval:a:b)");
}

std::string to_string(const ExtremeSet& set) {
    switch (set.kind) {
        case ExtremeSet::Kind::UpperTail:
            return "upper";
        case ExtremeSet::Kind::LowerTail:
            return "lower";
        case ExtremeSet::Kind::AbsTail:
            return "abs";
        case ExtremeSet::Kind::Interval: {
            std::string out = "interval:";
            out += std::to_string(set.lower);
            out += ":";
            out += std::to_string(set.upper);
            return out;
        }
    }
    return "upper";
}

std::string to_string(Centering c) {
    switch (c) {
        case Centering::None:
            return "none";
        case Centering::Theoretical:
            return "theoretical";
        case Centering::Empirical:
            return "empirical";
    }
    return "none";
}

Centering centering_from_string(const std::string& text) {
    if (text == "none") return Centering::None;
    if (text == "theoretical") return Centering::Theoretical;
    if (text == "empirical") return Centering::Empirical;
    throw std::invalid_argument("unknown centering '" + text + "' (expected none, theoretical or empirical)");
}

IndicatorSeries::IndicatorSeries(std::vector<std::uint8_t> raw, double m, Centering centering, double p0)
    : raw_(std::move(raw)), m_(m), centering_(centering), p0_(p0) {
    if (raw_.empty()) {
        throw std::invalid_argument("indicator series must not be empty");
    }
    if (!(m_ > 0.0)) {
        throw std::invalid_argument("indicator series: m must be positive");
    }
    for (auto v : raw_) {
        if (v > 1) {
            throw std::invalid_argument("indicator values must be 0 or 1");
        }
        count_ += v;
    }
    mean_ = static_cast<double>(count_) / static_cast<double>(raw_.size());
}

IndicatorSeries IndicatorSeries::from_raw(std::vector<std::uint8_t> raw, double m, Centering centering) {
    return IndicatorSeries(std::move(raw), m, centering, 1.0 / m);
}

double IndicatorSeries::offset(Centering mode) const {
    switch (mode) {
        case Centering::None:
            return 0.0;
        case Centering::Theoretical:
            return p0_;
        case Centering::Empirical:
            return mean_;
    }
    return 0.0;
}

std::vector<double> IndicatorSeries::centered(Centering mode) const {
    const double c = offset(mode);
    std::vector<double> out(raw_.size());
    for (std::size_t t = 0; t < raw_.size(); ++t) {
        out[t] = static_cast<double>(raw_[t]) - c;
    }
    return out;
}

IndicatorSeries IndicatorSeries::with_centering(Centering mode) const {
    IndicatorSeries copy = *this;
    copy.centering_ = mode;
    return copy;
}

ThresholdSpec threshold_from_p0(std::span<const double> values, const ExtremeSet& set, double p0) {
    if (!(p0 > 0.0 && p0 <= 0.5)) {
        throw std::invalid_argument("threshold: p0 must lie in (0, 0.5]");
    }
    const std::size_t n = values.size();
    const auto min_n = static_cast<std::size_t>(std::ceil(1.0 / p0 - 1e-9));
    if (n < min_n) {
        throw std::invalid_argument("threshold: series shorter than ceil(1/p0)");
    }
    std::vector<double> tail(n);
    std::transform(values.begin(), values.end(), tail.begin(), [&](double x) { return set.tail_functional(x); });

    // ceil(n (1 - p0)) = n - floor(n p0); the guard absorbs representation
    // error in products such as 100 * 0.05.
    const auto upper_count = static_cast<std::size_t>(std::floor(static_cast<double>(n) * p0 + 1e-9));
    const std::size_t rank = n - upper_count;  // 1-based order statistic
    std::nth_element(tail.begin(), tail.begin() + static_cast<std::ptrdiff_t>(rank - 1), tail.end());
    const double a_m = tail[rank - 1];

    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    if (*lo == *hi) {
        throw TieError("threshold: constant series, every value ties with the threshold");
    }
    if (!(a_m > 0.0)) {
        throw DegenerateThresholdError("threshold: resolved a_m = " + std::to_string(a_m) +
                                       " is not positive; choose a smaller p0");
    }
    const auto exceed = static_cast<std::size_t>(
        std::count_if(values.begin(), values.end(), [&](double x) { return set.tail_functional(x) > a_m; }));
    if (exceed < 1) {
        throw DegenerateThresholdError("threshold: no observation exceeds a_m");
    }
    return {p0, a_m, 1.0 / p0, exceed};
}

ThresholdSpec threshold_from_p0(const Series& series, const ExtremeSet& set, double p0) {
    return threshold_from_p0(series.values(), set, p0);
}

IndicatorSeries indicators(std::span<const double> values, const ThresholdSpec& thr, const ExtremeSet& set,
                           Centering centering) {
    if (!(thr.a_m > 0.0)) {
        throw std::invalid_argument("indicators: threshold must be positive");
    }
    std::vector<std::uint8_t> raw(values.size());
    for (std::size_t t = 0; t < values.size(); ++t) {
        raw[t] = set.contains(values[t] / thr.a_m) ? 1 : 0;
    }
    return IndicatorSeries(std::move(raw), thr.m, centering, thr.p0);
}

IndicatorSeries indicators(const Series& series, const ThresholdSpec& thr, const ExtremeSet& set,
                           Centering centering) {
    return indicators(series.values(), thr, set, centering);
}

std::size_t default_max_lag(std::size_t n) {
    return static_cast<std::size_t>(std::floor(10.0 * std::log10(static_cast<double>(n))));
}

std::vector<double> lag_products(std::span<const double> x, std::size_t max_lag) {
    const std::size_t n = x.size();
    if (max_lag >= n) {
        throw std::invalid_argument("lag_products: max_lag must be below the series length");
    }
    std::vector<double> out(max_lag + 1, 0.0);
    if (max_lag < 64 || n < 256) {
        for (std::size_t h = 0; h <= max_lag; ++h) {
            double s = 0.0;
            for (std::size_t t = 0; t + h < n; ++t) {
                s += x[t] * x[t + h];
            }
            out[h] = s;
        }
        return out;
    }
    // Zero padding to 2n turns the circular correlation into the linear one.
    RealDft dft(2 * n);
    std::vector<double> padded(2 * n, 0.0);
    std::copy(x.begin(), x.end(), padded.begin());
    const auto spec = dft.forward(padded);
    std::vector<std::complex<double>> power(spec.size());
    for (std::size_t k = 0; k < spec.size(); ++k) {
        power[k] = std::norm(spec[k]);
    }
    const auto corr = dft.inverse(power);
    const double scale = 1.0 / static_cast<double>(2 * n);
    for (std::size_t h = 0; h <= max_lag; ++h) {
        out[h] = corr[h] * scale;
    }
    return out;
}

std::vector<double> circular_lag_products(std::span<const double> x) {
    const std::size_t n = x.size();
    std::vector<double> out(n, 0.0);
    if (n < 256) {
        for (std::size_t h = 0; h < n; ++h) {
            double s = 0.0;
            for (std::size_t t = 0; t < n; ++t) {
                s += x[t] * x[(t + h) % n];
            }
            out[h] = s;
        }
        return out;
    }
    RealDft dft(n);
    const auto spec = dft.forward(x);
    std::vector<std::complex<double>> power(spec.size());
    for (std::size_t k = 0; k < spec.size(); ++k) {
        power[k] = std::norm(spec[k]);
    }
    const auto corr = dft.inverse(power);
    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t h = 0; h < n; ++h) {
        out[h] = corr[h] * scale;
    }
    return out;
}

namespace {

ExtremogramEstimate finish_estimate(const IndicatorSeries& ind, std::vector<double> sums) {
    ExtremogramEstimate est;
    est.centering = ind.centering();
    est.m = ind.m();
    est.n = ind.size();
    const double scale = ind.m() / static_cast<double>(ind.size());
    est.gamma = std::move(sums);
    for (double& g : est.gamma) {
        g *= scale;
    }
    est.rho.resize(est.gamma.size());
    est.rho_defined = est.gamma[0] > 0.0;
    for (std::size_t h = 0; h < est.gamma.size(); ++h) {
        est.rho[h] = est.rho_defined ? est.gamma[h] / est.gamma[0] : std::numeric_limits<double>::quiet_NaN();
    }
    return est;
}

}  // namespace

ExtremogramEstimate sample_extremogram(const IndicatorSeries& ind, std::size_t max_lag) {
    if (max_lag >= ind.size()) {
        throw std::invalid_argument("sample_extremogram: max_lag must be below n");
    }
    const auto c = ind.centered();
    return finish_estimate(ind, lag_products(c, max_lag));
}

ExtremogramEstimate full_extremogram(const IndicatorSeries& ind) {
    return sample_extremogram(ind, ind.size() - 1);
}

double fourth_order_extremogram(const IndicatorSeries& ind, std::size_t u, std::size_t s, std::size_t t) {
    const std::size_t n = ind.size();
    const std::size_t top = std::max({u, s, t});
    if (top >= n) {
        throw std::invalid_argument("fourth_order_extremogram: lags must be below n");
    }
    const auto& raw = ind.raw();
    std::size_t count = 0;
    for (std::size_t i = 0; i + top < n; ++i) {
        count += static_cast<std::size_t>(raw[i] & raw[i + u] & raw[i + s] & raw[i + t]);
    }
    return ind.m() * ind.m() / static_cast<double>(n) * static_cast<double>(count);
}

}  // namespace xgram
