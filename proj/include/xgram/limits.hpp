#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "xgram/extremal.hpp"
#include "xgram/fft.hpp"
#include "xgram/igram.hpp"
#include "xgram/rng.hpp"
#include "xgram/spectral.hpp"

namespace xgram {

/**
 * Gaussian limit process on a grid over [0, pi]:
 *   GeneralG        psi_0 Z_0 + 2 sum_{h=1}^{H} psi_h Z_h,  Z ~ N(0, Sigma), Sigma over lags 0..H
 *   EtaBar          2 sum_{h=1}^{H} psi_{eta+h} Z_h,        Z ~ N(0, Sigma), Sigma over lags eta+1..eta+H
 *   IndependentHat  2 sum_{h=1}^{H} psi_h Z_h,              Z_h independent, Var Z_h = v_h
 *   Bridge          2 sum_{h=1}^{H} psi_h Z_h,              Z_h iid N(0, sigma^2)
 */
struct LimitProcessSpec {
    enum class Kind { GeneralG, EtaBar, IndependentHat, Bridge };

    Kind kind = Kind::Bridge;
    Eigen::MatrixXd covariance;     // GeneralG, EtaBar
    std::vector<double> variances;  // IndependentHat: v_1..v_H
    std::size_t eta = 0;
    double sigma = 1.0;
    std::size_t H = 10000;
    WeightFunction g;
    std::vector<double> grid;

    static LimitProcessSpec general(Eigen::MatrixXd sigma_h, WeightFunction g, std::vector<double> grid);
    static LimitProcessSpec eta_bar(std::size_t eta, Eigen::MatrixXd sigma_bar, WeightFunction g,
                                    std::vector<double> grid);
    static LimitProcessSpec independent_hat(std::vector<double> variances, WeightFunction g,
                                            std::vector<double> grid);
    static LimitProcessSpec bridge(double sigma, std::size_t H, WeightFunction g, std::vector<double> grid);

    /// Throws std::invalid_argument on shape errors, NonPsdError when a
    /// covariance has an eigenvalue below -1e-8 trace or is asymmetric.
    void validate() const;
};

/// x_k = pi k / K, k = 0..K.
std::vector<double> uniform_pi_grid(std::size_t K);

/**
 * Prepared sampler for one LimitProcessSpec: holds the Cholesky factor and,
 * when affordable, the psi basis. For g = 1 on a uniform_pi_grid the sine
 * series is summed with one FFT of length 2K per path.
 */
class LimitSimulator {
public:
    explicit LimitSimulator(LimitProcessSpec spec);

    /// Per-thread scratch space.
    class Workspace {
    public:
        Workspace() = default;

    private:
        friend class LimitSimulator;
        std::unique_ptr<RealDft> dft;
        std::vector<double> buffer;
        std::vector<double> coefficients;
        std::vector<double> normals;
    };

    Workspace make_workspace() const;

    /// One path; consumes normals from `stream` in lag order.
    std::vector<double> path(RandomStream& stream, Workspace& ws) const;

    /// Exact Var of the truncated series at every grid point.
    std::vector<double> pointwise_variance() const;

    const LimitProcessSpec& spec() const { return spec_; }
    const std::vector<std::size_t>& lags() const { return lags_; }

private:
    void draw_coefficients(RandomStream& stream, Workspace& ws) const;

    LimitProcessSpec spec_;
    std::vector<std::size_t> lags_;     // lag carried by each coefficient
    std::vector<double> weights_;       // 1 for lag 0, 2 otherwise
    std::vector<double> scale_;         // sd of independent coefficients
    Eigen::MatrixXd factor_;            // Cholesky factor for correlated kinds
    bool fft_path_ = false;
    std::vector<double> basis_;         // lags x grid, row-major; empty if on-the-fly
};

/// One path from the (seed, replicate, LimitProcess) stream.
std::vector<double> simulate_limit(const LimitProcessSpec& spec, std::uint64_t seed, std::uint32_t replicate = 0);

/// sup |path| (GR) or trapezoid integral of path^2 (CvM) for `reps` paths.
std::vector<double> limit_functional_sample(const LimitProcessSpec& spec, TestKind kind, std::size_t reps,
                                            std::uint64_t seed, unsigned workers = 0);

/// Kolmogorov distribution function K(x) = 1 - 2 sum (-1)^{j-1} exp(-2 j^2 x^2).
double kolmogorov_cdf(double x);

/// K^{-1}(p) by bisection to 1e-12.
double kolmogorov_quantile(double p);

/// sigma pi sqrt(2) K^{-1}(p): quantile of sup |bridge series| with Var Z_h = sigma^2.
double bridge_sup_quantile(double p, double sigma);

/// Density of sup |bridge| as printed in the literature,
/// 4 pi^-2 sum_j (-1)^{j+1} x exp(-j^2 x^2 / pi^2). Kept only for comparison:
/// it integrates to pi^2 / 6, not 1.
double printed_sup_density(double x);

enum class CvmMethod { SeriesMC, ChiSqSeriesMC };

std::string to_string(CvmMethod m);

struct CvmOptions {
    std::size_t reps = 20000;
    std::size_t H = 10000;
    std::size_t grid_intervals = 1024;  // SeriesMC integration grid
    std::uint64_t seed = 0;
    unsigned workers = 0;
    /// Weights 2 / j^2 instead of the series-derived 2 pi sigma^2 / j^2.
    bool printed_coefficients = false;
};

/// Draws of int_0^pi bridge^2 (SeriesMC) or sum_{j<=H} c_j N_j^2.
std::vector<double> cvm_limit_sample(double sigma, CvmMethod method, const CvmOptions& options = {});

/// Empirical p-quantile of cvm_limit_sample.
double cvm_limit_quantile(double p, double sigma, CvmMethod method, const CvmOptions& options = {});

/// Diagonal gamma0^2 I_H: the eta-dependent covariance for iid data.
Eigen::MatrixXd eta_null_covariance_iid(double gamma0, std::size_t H);

/**
 * Plug-in covariance for the lags eta+1..eta+H:
 *   sigma_ij = gamma(0) gamma(j-i) + sum_{t=1}^{eta-(j-i)} [gbar(t,i,t+j) + gbar(t,j,t+i)],
 * with i <= j actual lags, gamma the empirically centered sample extremogram
 * and gbar the fourth-order extremogram. The plug-in need not be positive
 * semidefinite when extremes cluster (gbar then has no finite limit).
 */
Eigen::MatrixXd eta_bar_covariance(const IndicatorSeries& ind, std::size_t eta, std::size_t H);

/// v_h = m * gamma_uncentered(h), h = 1..H: plug-in for lim m^2 p_h.
std::vector<double> independent_hat_variances(const IndicatorSeries& ind, std::size_t H);

/// Row of an exported quantile table.
struct QuantileRow {
    double p = 0.95;
    double quantile = 0.0;
    std::string method;
    std::size_t H = 0;
    std::size_t reps = 0;
    std::uint64_t seed = 0;
};

}  // namespace xgram
