#include "xgram/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "xgram/fft.hpp"
#include "xgram/io.hpp"

namespace xgram {

namespace {

constexpr double kPi = std::numbers::pi;

// Antiderivative of cos(h l) (a + b l).
double segment_antiderivative(std::size_t h, double a, double b, double l) {
    if (h == 0) {
        return a * l + 0.5 * b * l * l;
    }
    const double hd = static_cast<double>(h);
    return (a + b * l) * std::sin(hd * l) / hd + b * std::cos(hd * l) / (hd * hd);
}

}  // namespace

WeightFunction WeightFunction::one() { return WeightFunction{}; }

WeightFunction WeightFunction::tabulated(std::vector<double> nodes, std::vector<double> values, double beta) {
    if (nodes.size() < 2 || nodes.size() != values.size()) {
        throw std::invalid_argument("weight table needs at least two (node, value) pairs");
    }
    if (std::abs(nodes.front()) > 1e-12 || std::abs(nodes.back() - kPi) > 1e-9) {
        throw std::invalid_argument("weight table nodes must span [0, pi]");
    }
    nodes.front() = 0.0;
    nodes.back() = kPi;
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        if (!(nodes[i] > nodes[i - 1])) {
            throw std::invalid_argument("weight table nodes must be strictly increasing");
        }
    }
    for (double v : values) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw std::invalid_argument("weight function must be finite and nonnegative");
        }
    }
    if (!(beta > 0.75 && beta <= 1.0)) {
        throw std::invalid_argument("weight function: Hoelder exponent must lie in (3/4, 1]");
    }
    WeightFunction g;
    g.kind_ = Kind::Tabulated;
    g.beta_ = beta;
    g.nodes_ = std::move(nodes);
    g.values_ = std::move(values);
    return g;
}

WeightFunction WeightFunction::linear() {
    auto g = tabulated({0.0, kPi}, {0.0, kPi}, 1.0);
    g.source_ = "linear";
    return g;
}

double WeightFunction::operator()(double lambda) const {
    if (kind_ == Kind::One) {
        return 1.0;
    }
    if (lambda <= nodes_.front()) return values_.front();
    if (lambda >= nodes_.back()) return values_.back();
    const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), lambda);
    const std::size_t j = static_cast<std::size_t>(it - nodes_.begin());
    const double w = (lambda - nodes_[j - 1]) / (nodes_[j] - nodes_[j - 1]);
    return values_[j - 1] + w * (values_[j] - values_[j - 1]);
}

WeightFunction WeightFunction::parse(const std::string& text) {
    if (text == "one") {
        return one();
    }
    if (text == "linear") {
        return linear();
    }
    if (text.rfind("table:", 0) == 0) {
        const std::string path = text.substr(6);
        const auto columns = read_numeric_columns(path, 2);
        auto g = tabulated(columns[0], columns[1], 1.0);
        g.source_ = text;
        return g;
    }
    throw std::invalid_argument("unknown weight '" + text + "' (expected one, linear or table:<path>)");
}

std::string WeightFunction::describe() const {
    if (kind_ == Kind::One) {
        return "one";
    }
    return source_.empty() ? "tabulated" : source_;
}

double fourier_frequency(std::size_t j, std::size_t n) {
    return 2.0 * kPi * static_cast<double>(j) / static_cast<double>(n);
}

std::size_t fourier_index_floor(double x, std::size_t n) {
    if (x <= 0.0) {
        return 0;
    }
    return static_cast<std::size_t>(std::floor(static_cast<double>(n) * x / (2.0 * kPi) + 1e-9));
}

std::vector<double> half_spectrum(const IndicatorSeries& ind) {
    const std::size_t n = ind.size();
    RealDft dft(n);
    const auto spec = dft.forward(ind.centered());
    const double scale = ind.m() / static_cast<double>(n);
    std::vector<double> out(spec.size());
    for (std::size_t k = 0; k < spec.size(); ++k) {
        out[k] = scale * std::norm(spec[k]);
    }
    return out;
}

PeriodogramEstimate periodogram_fourier(const IndicatorSeries& ind) {
    const std::size_t n = ind.size();
    if (n < 4) {
        throw std::invalid_argument("periodogram: n must be at least 4");
    }
    const auto full = half_spectrum(ind);
    PeriodogramEstimate est;
    est.m = ind.m();
    est.n = n;
    est.centering = ind.centering();
    for (std::size_t j = 1; 2 * j < n; ++j) {
        est.frequencies.push_back(fourier_frequency(j, n));
        est.values.push_back(full[j]);
    }
    return est;
}

double periodogram_at(const IndicatorSeries& ind, double lambda) {
    if (!(lambda >= 0.0 && lambda <= kPi)) {
        throw std::invalid_argument("periodogram_at: lambda must lie in [0, pi]");
    }
    const auto c = ind.centered();
    std::complex<double> sum{0.0, 0.0};
    for (std::size_t t = 0; t < c.size(); ++t) {
        sum += c[t] * std::polar(1.0, -static_cast<double>(t + 1) * lambda);
    }
    return ind.m() / static_cast<double>(c.size()) * std::norm(sum);
}

double psi(const WeightFunction& g, std::size_t h, double x) {
    const double grid[1] = {x};
    return psi_on_grid(g, h, grid)[0];
}

std::vector<double> psi_on_grid(const WeightFunction& g, std::size_t h, std::span<const double> grid) {
    std::vector<double> out(grid.size());
    for (double x : grid) {
        if (!(x >= 0.0 && x <= kPi + 1e-12)) {
            throw std::invalid_argument("psi: x must lie in [0, pi]");
        }
    }
    if (g.is_one()) {
        const double hd = static_cast<double>(h);
        for (std::size_t k = 0; k < grid.size(); ++k) {
            out[k] = h == 0 ? grid[k] : std::sin(hd * grid[k]) / hd;
        }
        return out;
    }

    // Cumulative integrals over whole segments, then a partial segment.
    const auto& nodes = g.nodes();
    const auto& vals = g.values();
    std::vector<double> cumulative(nodes.size(), 0.0);
    std::vector<double> slope(nodes.size() - 1);
    std::vector<double> intercept(nodes.size() - 1);
    for (std::size_t j = 0; j + 1 < nodes.size(); ++j) {
        slope[j] = (vals[j + 1] - vals[j]) / (nodes[j + 1] - nodes[j]);
        intercept[j] = vals[j] - slope[j] * nodes[j];
        cumulative[j + 1] = cumulative[j] + segment_antiderivative(h, intercept[j], slope[j], nodes[j + 1]) -
                            segment_antiderivative(h, intercept[j], slope[j], nodes[j]);
    }
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double x = std::min(grid[k], kPi);
        auto it = std::upper_bound(nodes.begin(), nodes.end(), x);
        std::size_t j = static_cast<std::size_t>(it - nodes.begin());
        j = std::clamp<std::size_t>(j, 1, nodes.size() - 1) - 1;
        out[k] = cumulative[j] + segment_antiderivative(h, intercept[j], slope[j], x) -
                 segment_antiderivative(h, intercept[j], slope[j], nodes[j]);
    }
    return out;
}

double psi_hat(const WeightFunction& g, std::size_t h, double x, std::size_t n) {
    if (n < 4) {
        throw std::invalid_argument("psi_hat: n must be at least 4");
    }
    const std::size_t xn = fourier_index_floor(x, n);
    double sum = 0.0;
    const double hd = static_cast<double>(h);
    for (std::size_t i = 1; i <= xn; ++i) {
        const double w = fourier_frequency(i, n);
        sum += g(w) * std::cos(hd * w);
    }
    return 2.0 * kPi / static_cast<double>(n) * sum;
}

double fourier_coeff(const WeightFunction& g, std::size_t h) {
    if (g.is_one()) {
        return h == 0 ? kPi : 0.0;
    }
    return psi(g, h, kPi);
}

}  // namespace xgram
