#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "xgram/extremal.hpp"
#include "xgram/igram.hpp"
#include "xgram/spectral.hpp"

namespace xgram {

/// Stationary bootstrap: blocks with uniform starts K_i and geometric(theta)
/// lengths L_i, wrapped circularly, mean block length 1/theta.
struct BootstrapPlan {
    double theta = 1.0 / 50.0;
    std::size_t B = 4000;
    std::uint64_t seed = 0;
    std::size_t n = 0;

    void validate() const;
};

/// Resampled positions (0-based) for one replicate; drawn from the
/// (seed, replicate, BootstrapIndex) stream, blocks generated until n
/// entries exist.
std::vector<std::size_t> sb_indices(const BootstrapPlan& plan, std::uint32_t replicate);

/// Original-sample centered indicators I_t - mean(I).
std::vector<double> sample_centered(const IndicatorSeries& ind);

/**
 * gamma*(h) = (m/n) sum_{t=1}^{n-h} c_{idx_t} c_{idx_{t+h}} with
 * c = I - mean(I) of the original sample: products pair positions of the
 * resampled sequence.
 */
ExtremogramEstimate bootstrap_extremogram(const IndicatorSeries& ind, std::span<const std::size_t> idx,
                                          std::size_t max_lag);

/// E* gamma*(h) = (1 - h/n) (1 - theta)^h (m/n) sum_t c_t c_{(t+h) mod n}.
double estar_gamma(const IndicatorSeries& ind, double theta, std::size_t h);

/// estar_gamma for h = 0..n-1 via one circular correlation.
std::vector<double> estar_gamma_all(const IndicatorSeries& ind, double theta);

/**
 * Conditional moments of single bootstrap draws. With hat I = I - mean(I),
 * tilde I = I - p0, positions 1* and (1+h)* of the resampled sequence, and
 * 1* + h the original-series neighbour of the first draw; all sums circular.
 */
struct StarMoments {
    std::size_t h = 0;
    std::size_t s = 0;
    double e_hat = 0.0;              // E* hat I_{1*}
    double e_hat_pair = 0.0;         // E* hat I_{1*} hat I_{(1+h)*}
    double e_tilde_pair = 0.0;       // E* tilde I_{1*} tilde I_{1*+h}
    double cov_tilde_tilde = 0.0;    // cov*(tilde pair at 1*, tilde pair at (1+s)*)
    double cov_hat_tilde = 0.0;      // cov*(hat pair at 1*, tilde pair at (1+s)*)
    double cov_tilde_hat = 0.0;      // cov*(tilde pair at 1*, hat pair at (1+s)*)
    double cov_hat_hat = 0.0;        // cov*(hat pair at 1*, hat pair at (1+s)*)
};

StarMoments star_moments(const IndicatorSeries& ind, double theta, std::size_t h, std::size_t s);

/// Bootstrap replicates of the GR/CvM statistic at rate sqrt(n/m), each
/// centered at E* J* (never at the sample curve).
struct BootstrapDistribution {
    TestKind kind = TestKind::GR;
    std::vector<double> grid;
    std::vector<double> center;  // E* J* on the grid
    std::vector<double> statistics;
    double rate = 1.0;
};

BootstrapDistribution bootstrap_igram_distribution(const IndicatorSeries& ind, const WeightFunction& g,
                                                   std::span<const double> grid, const BootstrapPlan& plan,
                                                   TestKind kind, unsigned workers = 0);

/// Order statistic ceil(pB) of the bootstrap statistics on the Fourier grid.
double bootstrap_igram_quantile(const IndicatorSeries& ind, const WeightFunction& g, const BootstrapPlan& plan,
                                TestKind kind, double p, unsigned workers = 0);

}  // namespace xgram
