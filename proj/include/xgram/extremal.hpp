#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "xgram/models.hpp"

namespace xgram {

/// Set A for the scaled observations X_t / a_m. Always bounded away from 0.
struct ExtremeSet {
    enum class Kind { UpperTail, LowerTail, AbsTail, Interval };

    Kind kind = Kind::UpperTail;
    double lower = 1.0;  // Interval only: open interval (lower, upper)
    double upper = 0.0;

    static ExtremeSet upper_tail() { return {Kind::UpperTail, 1.0, 0.0}; }
    static ExtremeSet lower_tail() { return {Kind::LowerTail, 0.0, -1.0}; }
    static ExtremeSet abs_tail() { return {Kind::AbsTail, 1.0, 0.0}; }
    /// Throws std::invalid_argument unless 0 lies outside [lower, upper].
    static ExtremeSet interval(double lower, double upper);

    bool contains(double scaled) const;

    /// Tail functional whose upper quantile defines a_m: X, -X or |X|.
    double tail_functional(double x) const;

    friend bool operator==(const ExtremeSet&, const ExtremeSet&) = default;
};

/// Parses "upper", "lower", "abs" or "interval:a:b".
ExtremeSet parse_extreme_set(const std::string& text);
std::string to_string(const ExtremeSet& set);

/// Resolved threshold with p0 = P(X > a_m) = 1/m.
struct ThresholdSpec {
    double p0 = 0.05;
    double a_m = 1.0;
    double m = 20.0;
    std::size_t exceedances = 0;
};

enum class Centering { None, Theoretical, Empirical };

std::string to_string(Centering c);
Centering centering_from_string(const std::string& text);

/**
 * Extreme-event indicators I_t = 1{X_t / a_m in A}.
 *
 * The centering mode is recorded rather than applied: centered() yields
 * I_t (None), I_t - p0 (Theoretical) or I_t - mean(I) (Empirical).
 */
class IndicatorSeries {
public:
    IndicatorSeries(std::vector<std::uint8_t> raw, double m, Centering centering, double p0);

    /// Build directly from 0/1 values; p0 defaults to 1/m.
    static IndicatorSeries from_raw(std::vector<std::uint8_t> raw, double m, Centering centering = Centering::None);

    const std::vector<std::uint8_t>& raw() const { return raw_; }
    std::size_t size() const { return raw_.size(); }
    double m() const { return m_; }
    double p0() const { return p0_; }
    Centering centering() const { return centering_; }

    /// Sample mean of the raw indicators.
    double mean() const { return mean_; }
    std::size_t count() const { return count_; }

    /// Offset subtracted by a centering mode.
    double offset(Centering mode) const;
    double offset() const { return offset(centering_); }

    std::vector<double> centered(Centering mode) const;
    std::vector<double> centered() const { return centered(centering_); }

    IndicatorSeries with_centering(Centering mode) const;

private:
    std::vector<std::uint8_t> raw_;
    double m_;
    Centering centering_;
    double p0_;
    double mean_ = 0.0;
    std::size_t count_ = 0;
};

struct ExtremogramEstimate {
    std::vector<double> gamma;  // lags 0..max_lag
    std::vector<double> rho;    // gamma / gamma[0]; NaN when undefined
    bool rho_defined = true;    // false when gamma[0] == 0
    Centering centering = Centering::None;
    double m = 0.0;
    std::size_t n = 0;

    std::size_t max_lag() const { return gamma.empty() ? 0 : gamma.size() - 1; }
};

/// a_m is the floor(n p0)-th largest value of the tail functional (the
/// ceil(n(1-p0))-th order statistic), exceedance strict, m = 1/p0.
ThresholdSpec threshold_from_p0(std::span<const double> values, const ExtremeSet& set, double p0);
ThresholdSpec threshold_from_p0(const Series& series, const ExtremeSet& set, double p0);

IndicatorSeries indicators(std::span<const double> values, const ThresholdSpec& thr, const ExtremeSet& set,
                           Centering centering);
IndicatorSeries indicators(const Series& series, const ThresholdSpec& thr, const ExtremeSet& set,
                           Centering centering);

/// floor(10 log10 n).
std::size_t default_max_lag(std::size_t n);

/// gamma(h) = (m/n) sum_{t=1}^{n-h} c(I_t) c(I_{t+h}), non-circular.
ExtremogramEstimate sample_extremogram(const IndicatorSeries& ind, std::size_t max_lag);

/// All lags 0..n-1; uses an FFT for long series.
ExtremogramEstimate full_extremogram(const IndicatorSeries& ind);

/// (m^2/n) sum_i I_i I_{i+u} I_{i+s} I_{i+t} on raw indicators. The product
/// is symmetric in the lags, so any order is accepted; max lag must be < n.
double fourth_order_extremogram(const IndicatorSeries& ind, std::size_t u, std::size_t s, std::size_t t);

/// Non-circular lag sums sum_{t=0}^{n-1-h} x_t x_{t+h} for h = 0..max_lag.
std::vector<double> lag_products(std::span<const double> x, std::size_t max_lag);

/// Circular lag sums sum_{t=0}^{n-1} x_t x_{(t+h) mod n} for h = 0..n-1.
std::vector<double> circular_lag_products(std::span<const double> x);

}  // namespace xgram
