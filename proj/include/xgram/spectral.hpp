#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "xgram/extremal.hpp"

namespace xgram {

/**
 * Nonnegative weight g on [0, pi].
 *
 * Tabulated weights are linear interpolants of (node, value) pairs whose
 * nodes span [0, pi]. The Hoelder exponent beta is caller-declared metadata;
 * it cannot be verified from a table.
 */
class WeightFunction {
public:
    enum class Kind { One, Tabulated };

    static WeightFunction one();
    static WeightFunction tabulated(std::vector<double> nodes, std::vector<double> values, double beta = 1.0);
    /// g(lambda) = lambda, tabulated on two nodes.
    static WeightFunction linear();

    Kind kind() const { return kind_; }
    bool is_one() const { return kind_ == Kind::One; }
    double beta() const { return beta_; }
    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& values() const { return values_; }

    double operator()(double lambda) const;

    /// "one", "linear", or "table:<csv path>" (two columns: lambda, g).
    static WeightFunction parse(const std::string& text);
    std::string describe() const;

private:
    Kind kind_ = Kind::One;
    double beta_ = 1.0;
    std::vector<double> nodes_;
    std::vector<double> values_;
    std::string source_;
};

struct PeriodogramEstimate {
    std::vector<double> frequencies;  // omega_n(j) = 2 pi j / n, 0 < omega < pi
    std::vector<double> values;
    double m = 0.0;
    std::size_t n = 0;
    Centering centering = Centering::None;
};

/// Fourier frequency omega_n(j) = 2 pi j / n.
double fourier_frequency(std::size_t j, std::size_t n);

/// x_n = [n x / 2 pi], with a small guard so that x = omega_n(k) maps to k.
std::size_t fourier_index_floor(double x, std::size_t n);

/// (m/n) |sum_t c(I_t) e^{-i t omega}|^2 at omega_n(j), j = 0..floor(n/2),
/// from one length-n FFT.
std::vector<double> half_spectrum(const IndicatorSeries& ind);

PeriodogramEstimate periodogram_fourier(const IndicatorSeries& ind);

/// Direct O(n) evaluation at any lambda in [0, pi].
double periodogram_at(const IndicatorSeries& ind, double lambda);

/// psi_h(x) = int_0^x cos(h lambda) g(lambda) d lambda. Closed form for g = 1;
/// exact integration of the piecewise-linear interpolant otherwise.
double psi(const WeightFunction& g, std::size_t h, double x);

/// psi_h on a whole grid (grid need not be sorted).
std::vector<double> psi_on_grid(const WeightFunction& g, std::size_t h, std::span<const double> grid);

/// Riemann sum (2 pi / n) sum_{i=1}^{x_n} g(omega_n(i)) cos(h omega_n(i)).
double psi_hat(const WeightFunction& g, std::size_t h, double x, std::size_t n);

/// c_h(g) = int_0^pi cos(h lambda) g(lambda) d lambda.
double fourier_coeff(const WeightFunction& g, std::size_t h);

}  // namespace xgram
