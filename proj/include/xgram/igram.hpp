#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "xgram/extremal.hpp"
#include "xgram/models.hpp"
#include "xgram/spectral.hpp"

namespace xgram {

enum class IgramVariant { Continuous, Discretized };

std::string to_string(IgramVariant v);
IgramVariant igram_variant_from_string(const std::string& text);

/// Integrated extremal periodogram J(x) = int_0^x I(l) g(l) dl on a grid.
struct IgramCurve {
    std::vector<double> grid;
    std::vector<double> values;
    IgramVariant variant = IgramVariant::Continuous;
    bool standardized = false;
    double m = 0.0;
    std::size_t n = 0;
};

/// Where a centering curve came from.
struct CenteringProvenance {
    enum class Kind { MonteCarlo, ExactIid, EtaPartialSum };
    Kind kind = Kind::EtaPartialSum;
    std::optional<ModelSpec> model;  // MonteCarlo
    std::size_t replicates = 0;      // MonteCarlo
    std::uint64_t seed = 0;          // MonteCarlo
    std::size_t eta = 0;             // EtaPartialSum
};

std::string to_string(CenteringProvenance::Kind kind);

struct CenteringCurve {
    std::vector<double> grid;
    std::vector<double> values;
    CenteringProvenance provenance;
    std::vector<double> std_error;  // MonteCarlo only
    double a_m = 0.0;               // MonteCarlo only: average threshold
};

enum class TestKind { GR, CvM };
enum class Rate { SqrtNoverM, SqrtN };
enum class QuantileSource { None, Bootstrap, LimitSeries, BridgeClosedForm, NullModelMC };

std::string to_string(TestKind k);
std::string to_string(Rate r);
std::string to_string(QuantileSource q);
TestKind test_kind_from_string(const std::string& text);

struct TestResult {
    double statistic = 0.0;
    TestKind kind = TestKind::GR;
    Rate rate = Rate::SqrtNoverM;
    double rate_value = 1.0;
    QuantileSource quantile_source = QuantileSource::None;
    double critical_value = 0.0;
    double level = 0.05;
    bool reject = false;
};

/// sqrt(n/m) or sqrt(n).
double rate_value(Rate rate, std::size_t n, double m);

/// {2 pi k / n : k = 0..floor(n/2)}, with pi appended when n is odd.
std::vector<double> fourier_grid(std::size_t n);

/**
 * psi_0(x) gamma(0) + 2 sum_{h>=1} psi_h(x) gamma(h) over the lags held by
 * `ext` (pass a full-range estimate for J itself). For g = 1, grid points on
 * the Fourier grid of ext.n are served by one FFT of gamma(h)/h; other points
 * are summed directly.
 */
IgramCurve igram_continuous(const ExtremogramEstimate& ext, const WeightFunction& g, std::span<const double> grid);

/// (2 pi / n) sum_{i <= x_n} I(omega_i) g(omega_i): one FFT and a prefix sum.
IgramCurve igram_discretized(const IndicatorSeries& ind, const WeightFunction& g, std::span<const double> grid);

/// Cumulative Riemann sums of a periodogram given at omega_j, j = 0..n/2.
std::vector<double> cumulate_spectrum(std::span<const double> spectrum, std::size_t n, const WeightFunction& g,
                                      std::span<const double> grid);

/**
 * psi-hat form: psi_hat_0(x) c(0) + 2 sum_{h>=1} psi_hat_h(x) c(h) for lag
 * coefficients c(0..L), L < n, evaluated through one FFT of the cosine
 * series at the Fourier frequencies.
 */
std::vector<double> discretized_from_lags(std::span<const double> lags, std::size_t n, const WeightFunction& g,
                                          std::span<const double> grid);

struct MonteCarloOptions {
    IgramVariant variant = IgramVariant::Discretized;
    Centering centering = Centering::Theoretical;
    unsigned workers = 0;
};

/**
 * E J(x) under a null model, in two passes over the same replicate streams:
 * first the average a_m of the per-replicate empirical thresholds, then the
 * average curve with every replicate thresholded at that fixed a_m.
 */
CenteringCurve centering_monte_carlo(const ModelSpec& model, std::size_t n, double p0, const ExtremeSet& set,
                                     const WeightFunction& g, std::span<const double> grid, std::size_t replicates,
                                     std::uint64_t seed, const MonteCarloOptions& options = {});

/// psi_0 gamma(0) + 2 sum_{h<=eta} psi_h gamma(h) (psi-hat for the
/// discretized variant, which needs ext.n >= 4).
CenteringCurve eta_null_center(const ExtremogramEstimate& ext, const WeightFunction& g, std::span<const double> grid,
                               std::size_t eta, IgramVariant variant = IgramVariant::Continuous);

/// J / gamma(0). Throws DataError when gamma(0) == 0.
IgramCurve standardized_igram(const IgramCurve& curve, const ExtremogramEstimate& ext);

/// rate * max |J - EJ| over the grid. Throws GridMismatchError.
TestResult grs(const IgramCurve& curve, const CenteringCurve& center, Rate rate = Rate::SqrtNoverM);

/// rate^2 * trapezoid integral of (J - EJ)^2. Throws GridMismatchError.
TestResult cvm(const IgramCurve& curve, const CenteringCurve& center, Rate rate = Rate::SqrtNoverM);

/// Fills the critical value and the reject flag.
TestResult with_critical_value(TestResult result, double critical_value, QuantileSource source, double level);

/// Statistic of one curve against a centering of the same grid.
double deviation_statistic(std::span<const double> curve, std::span<const double> center,
                           std::span<const double> grid, TestKind kind, double rate);

/**
 * Null distribution of the GR/CvM statistic by simulation: each replicate
 * is simulated from `model` (an independent stream family), thresholded at
 * the fixed `center.a_m`, and compared with `center` at rate sqrt(n/m).
 */
std::vector<double> null_model_statistics(const ModelSpec& model, std::size_t n, double p0, const ExtremeSet& set,
                                          const WeightFunction& g, const CenteringCurve& center, TestKind kind,
                                          std::size_t replicates, std::uint64_t seed,
                                          const MonteCarloOptions& options = {});

}  // namespace xgram
