#include "xgram/limits.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "xgram/error.hpp"
#include "xgram/parallel.hpp"
#include "xgram/quantile.hpp"

namespace xgram {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kBasisBudget = 4'000'000;  // doubles kept for a precomputed psi basis
constexpr std::size_t kChunk = 64;

void check_covariance(const Eigen::MatrixXd& sigma) {
    if (sigma.rows() == 0 || sigma.rows() != sigma.cols()) {
        throw std::invalid_argument("covariance must be a non-empty square matrix");
    }
    if (!sigma.allFinite()) {
        throw NonPsdError("covariance has non-finite entries");
    }
    const double scale = std::max(1.0, sigma.cwiseAbs().maxCoeff());
    if ((sigma - sigma.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw NonPsdError("covariance is not symmetric");
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sigma, Eigen::EigenvaluesOnly);
    const double floor = -1e-8 * std::abs(sigma.trace());
    if (eig.eigenvalues().minCoeff() < floor) {
        throw NonPsdError("covariance is not positive semidefinite (smallest eigenvalue " +
                          std::to_string(eig.eigenvalues().minCoeff()) + ")");
    }
}

// Lower factor L with L L^T = sigma. Falls back to pivoted LDL^T (negative
// rounding pivots clamped to 0) for semidefinite input, so that exactly
// degenerate directions stay exactly degenerate.
Eigen::MatrixXd factorize(const Eigen::MatrixXd& sigma) {
    Eigen::LLT<Eigen::MatrixXd> llt(sigma);
    if (llt.info() == Eigen::Success) {
        return llt.matrixL();
    }
    Eigen::LDLT<Eigen::MatrixXd> ldlt(sigma);
    if (ldlt.info() != Eigen::Success) {
        throw NonPsdError("covariance factorization failed");
    }
    const Eigen::VectorXd d = ldlt.vectorD().cwiseMax(0.0).cwiseSqrt();
    Eigen::MatrixXd l = ldlt.matrixL();
    l = l * d.asDiagonal();
    return ldlt.transpositionsP().transpose() * l;
}

bool is_uniform_pi_grid(const std::vector<double>& grid) {
    if (grid.size() < 2) {
        return false;
    }
    const auto k_max = static_cast<double>(grid.size() - 1);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (std::abs(grid[k] - kPi * static_cast<double>(k) / k_max) > 1e-12) {
            return false;
        }
    }
    return true;
}

}  // namespace

LimitProcessSpec LimitProcessSpec::general(Eigen::MatrixXd sigma_h, WeightFunction g, std::vector<double> grid) {
    LimitProcessSpec s;
    s.kind = Kind::GeneralG;
    s.H = sigma_h.rows() > 0 ? static_cast<std::size_t>(sigma_h.rows() - 1) : 0;
    s.covariance = std::move(sigma_h);
    s.g = std::move(g);
    s.grid = std::move(grid);
    return s;
}

LimitProcessSpec LimitProcessSpec::eta_bar(std::size_t eta, Eigen::MatrixXd sigma_bar, WeightFunction g,
                                           std::vector<double> grid) {
    LimitProcessSpec s;
    s.kind = Kind::EtaBar;
    s.eta = eta;
    s.H = static_cast<std::size_t>(sigma_bar.rows());
    s.covariance = std::move(sigma_bar);
    s.g = std::move(g);
    s.grid = std::move(grid);
    return s;
}

LimitProcessSpec LimitProcessSpec::independent_hat(std::vector<double> variances, WeightFunction g,
                                                   std::vector<double> grid) {
    LimitProcessSpec s;
    s.kind = Kind::IndependentHat;
    s.H = variances.size();
    s.variances = std::move(variances);
    s.g = std::move(g);
    s.grid = std::move(grid);
    return s;
}

LimitProcessSpec LimitProcessSpec::bridge(double sigma, std::size_t H, WeightFunction g, std::vector<double> grid) {
    LimitProcessSpec s;
    s.kind = Kind::Bridge;
    s.sigma = sigma;
    s.H = H;
    s.g = std::move(g);
    s.grid = std::move(grid);
    return s;
}

void LimitProcessSpec::validate() const {
    if (grid.empty()) {
        throw std::invalid_argument("limit process: empty grid");
    }
    for (double x : grid) {
        if (!(x >= 0.0 && x <= kPi + 1e-12)) {
            throw std::invalid_argument("limit process: grid points must lie in [0, pi]");
        }
    }
    if (H < 1) {
        throw std::invalid_argument("limit process: truncation H must be at least 1");
    }
    switch (kind) {
        case Kind::GeneralG:
            check_covariance(covariance);
            if (static_cast<std::size_t>(covariance.rows()) != H + 1) {
                throw std::invalid_argument("limit process: GeneralG covariance must be (H+1) x (H+1)");
            }
            break;
        case Kind::EtaBar:
            check_covariance(covariance);
            if (static_cast<std::size_t>(covariance.rows()) != H) {
                throw std::invalid_argument("limit process: EtaBar covariance must be H x H");
            }
            break;
        case Kind::IndependentHat:
            if (variances.size() != H) {
                throw std::invalid_argument("limit process: need one variance per lag 1..H");
            }
            for (double v : variances) {
                if (!(v >= 0.0) || !std::isfinite(v)) {
                    throw std::invalid_argument("limit process: variances must be finite and nonnegative");
                }
            }
            break;
        case Kind::Bridge:
            if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
                throw std::invalid_argument("limit process: sigma must be finite and nonnegative");
            }
            break;
    }
}

std::vector<double> uniform_pi_grid(std::size_t K) {
    if (K < 1) {
        throw std::invalid_argument("uniform_pi_grid: need at least one interval");
    }
    std::vector<double> grid(K + 1);
    for (std::size_t k = 0; k <= K; ++k) {
        grid[k] = kPi * static_cast<double>(k) / static_cast<double>(K);
    }
    grid[K] = kPi;
    return grid;
}

LimitSimulator::LimitSimulator(LimitProcessSpec spec) : spec_(std::move(spec)) {
    spec_.validate();
    const std::size_t H = spec_.H;
    switch (spec_.kind) {
        case LimitProcessSpec::Kind::GeneralG:
            for (std::size_t h = 0; h <= H; ++h) lags_.push_back(h);
            factor_ = factorize(spec_.covariance);
            break;
        case LimitProcessSpec::Kind::EtaBar:
            for (std::size_t h = 1; h <= H; ++h) lags_.push_back(spec_.eta + h);
            factor_ = factorize(spec_.covariance);
            break;
        case LimitProcessSpec::Kind::IndependentHat:
            for (std::size_t h = 1; h <= H; ++h) lags_.push_back(h);
            for (double v : spec_.variances) scale_.push_back(std::sqrt(v));
            break;
        case LimitProcessSpec::Kind::Bridge:
            for (std::size_t h = 1; h <= H; ++h) lags_.push_back(h);
            scale_.assign(H, spec_.sigma);
            break;
    }
    weights_.resize(lags_.size());
    for (std::size_t j = 0; j < lags_.size(); ++j) {
        weights_[j] = lags_[j] == 0 ? 1.0 : 2.0;
    }

    fft_path_ = spec_.g.is_one() && is_uniform_pi_grid(spec_.grid);
    if (!fft_path_ && lags_.size() * spec_.grid.size() <= kBasisBudget) {
        basis_.resize(lags_.size() * spec_.grid.size());
        for (std::size_t j = 0; j < lags_.size(); ++j) {
            const auto p = psi_on_grid(spec_.g, lags_[j], spec_.grid);
            std::copy(p.begin(), p.end(), basis_.begin() + static_cast<std::ptrdiff_t>(j * spec_.grid.size()));
        }
    }
}

LimitSimulator::Workspace LimitSimulator::make_workspace() const {
    Workspace ws;
    if (fft_path_) {
        const std::size_t N = 2 * (spec_.grid.size() - 1);
        ws.dft = std::make_unique<RealDft>(N);
        ws.buffer.assign(N, 0.0);
    }
    ws.coefficients.assign(lags_.size(), 0.0);
    ws.normals.assign(lags_.size(), 0.0);
    return ws;
}

void LimitSimulator::draw_coefficients(RandomStream& stream, Workspace& ws) const {
    for (double& z : ws.normals) {
        z = stream.normal();
    }
    if (factor_.size() > 0) {
        const Eigen::Map<const Eigen::VectorXd> n(ws.normals.data(), static_cast<Eigen::Index>(ws.normals.size()));
        const Eigen::VectorXd z = factor_ * n;
        for (std::size_t j = 0; j < lags_.size(); ++j) {
            ws.coefficients[j] = weights_[j] * z(static_cast<Eigen::Index>(j));
        }
    } else {
        for (std::size_t j = 0; j < lags_.size(); ++j) {
            ws.coefficients[j] = weights_[j] * scale_[j] * ws.normals[j];
        }
    }
}

std::vector<double> LimitSimulator::path(RandomStream& stream, Workspace& ws) const {
    if (ws.coefficients.size() != lags_.size()) {
        ws = make_workspace();
    }
    draw_coefficients(stream, ws);
    const auto& grid = spec_.grid;
    std::vector<double> out(grid.size(), 0.0);

    if (fft_path_) {
        // sin(h pi k / K) depends on h only modulo N = 2K.
        const std::size_t N = ws.buffer.size();
        std::fill(ws.buffer.begin(), ws.buffer.end(), 0.0);
        double linear = 0.0;
        for (std::size_t j = 0; j < lags_.size(); ++j) {
            const std::size_t h = lags_[j];
            if (h == 0) {
                linear = ws.coefficients[j];
            } else {
                ws.buffer[h % N] += ws.coefficients[j] / static_cast<double>(h);
            }
        }
        const auto spec = ws.dft->forward(ws.buffer);
        for (std::size_t k = 0; k < grid.size(); ++k) {
            out[k] = linear * grid[k] - spec[k].imag();
        }
        return out;
    }

    const std::size_t G = grid.size();
    for (std::size_t j = 0; j < lags_.size(); ++j) {
        const double c = ws.coefficients[j];
        if (c == 0.0) continue;
        if (!basis_.empty()) {
            const double* row = basis_.data() + j * G;
            for (std::size_t k = 0; k < G; ++k) out[k] += c * row[k];
        } else {
            const auto p = psi_on_grid(spec_.g, lags_[j], grid);
            for (std::size_t k = 0; k < G; ++k) out[k] += c * p[k];
        }
    }
    return out;
}

std::vector<double> LimitSimulator::pointwise_variance() const {
    const std::size_t G = spec_.grid.size();
    const auto J = static_cast<Eigen::Index>(lags_.size());
    Eigen::MatrixXd u(J, static_cast<Eigen::Index>(G));
    for (Eigen::Index j = 0; j < J; ++j) {
        const auto p = psi_on_grid(spec_.g, lags_[static_cast<std::size_t>(j)], spec_.grid);
        for (std::size_t k = 0; k < G; ++k) {
            u(j, static_cast<Eigen::Index>(k)) = weights_[static_cast<std::size_t>(j)] * p[k];
        }
    }
    std::vector<double> var(G, 0.0);
    if (factor_.size() > 0) {
        const Eigen::MatrixXd su = spec_.covariance * u;
        for (std::size_t k = 0; k < G; ++k) {
            const auto kk = static_cast<Eigen::Index>(k);
            var[k] = u.col(kk).dot(su.col(kk));
        }
        return var;
    }
    for (std::size_t k = 0; k < G; ++k) {
        double s = 0.0;
        for (Eigen::Index j = 0; j < J; ++j) {
            const double sd = scale_[static_cast<std::size_t>(j)];
            const double t = sd * u(j, static_cast<Eigen::Index>(k));
            s += t * t;
        }
        var[k] = s;
    }
    return var;
}

std::vector<double> simulate_limit(const LimitProcessSpec& spec, std::uint64_t seed, std::uint32_t replicate) {
    const LimitSimulator sim(spec);
    auto ws = sim.make_workspace();
    RandomStream stream({seed, replicate, StreamPurpose::LimitProcess});
    return sim.path(stream, ws);
}

std::vector<double> limit_functional_sample(const LimitProcessSpec& spec, TestKind kind, std::size_t reps,
                                            std::uint64_t seed, unsigned workers) {
    const LimitSimulator sim(spec);
    const auto& grid = sim.spec().grid;
    const std::vector<double> zero(grid.size(), 0.0);
    std::vector<double> out(reps);
    const std::size_t chunks = (reps + kChunk - 1) / kChunk;
    parallel_for(chunks, workers == 0 ? default_workers() : workers, [&](std::size_t c) {
        auto ws = sim.make_workspace();
        const std::size_t end = std::min(reps, (c + 1) * kChunk);
        for (std::size_t r = c * kChunk; r < end; ++r) {
            RandomStream stream({seed, static_cast<std::uint32_t>(r), StreamPurpose::LimitProcess});
            const auto p = sim.path(stream, ws);
            out[r] = deviation_statistic(p, zero, grid, kind, 1.0);
        }
    });
    return out;
}

double kolmogorov_cdf(double x) {
    if (!(x > 0.0)) {
        return 0.0;
    }
    double sum = 0.0;
    if (x < 1.0) {
        // Jacobi-transformed series; the alternating one converges slowly here.
        for (int j = 1;; ++j) {
            const double odd = 2.0 * j - 1.0;
            const double term = std::exp(-odd * odd * kPi * kPi / (8.0 * x * x));
            sum += term;
            if (term < 1e-12 * std::max(sum, 1e-300) || term == 0.0) break;
        }
        return std::clamp(std::sqrt(2.0 * kPi) / x * sum, 0.0, 1.0);
    }
    for (int j = 1;; ++j) {
        const double term = std::exp(-2.0 * j * j * x * x);
        sum += (j % 2 == 1 ? term : -term);
        if (term < 1e-12) break;
    }
    return std::clamp(1.0 - 2.0 * sum, 0.0, 1.0);
}

double kolmogorov_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::invalid_argument("kolmogorov_quantile: p must lie in (0, 1)");
    }
    double lo = 0.0;
    double hi = 10.0;
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        (kolmogorov_cdf(mid) < p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double bridge_sup_quantile(double p, double sigma) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::invalid_argument("bridge_sup_quantile: p must lie in (0, 1)");
    }
    if (!(sigma >= 0.0)) {
        throw std::invalid_argument("bridge_sup_quantile: sigma must be nonnegative");
    }
    return sigma * kPi * std::sqrt(2.0) * kolmogorov_quantile(p);
}

double printed_sup_density(double x) {
    if (!(x > 0.0)) {
        return 0.0;
    }
    // Alternating series with decreasing terms: average the last two partial
    // sums once the terms are negligible.
    double sum = 0.0;
    double previous = 0.0;
    for (int j = 1; j < 1'000'000; ++j) {
        const double term = x * std::exp(-static_cast<double>(j) * j * x * x / (kPi * kPi));
        previous = sum;
        sum += (j % 2 == 1 ? term : -term);
        if (term < 1e-17) break;
    }
    return 4.0 / (kPi * kPi) * 0.5 * (sum + previous);
}

std::string to_string(CvmMethod m) { return m == CvmMethod::SeriesMC ? "series-mc" : "chisq-series-mc"; }

std::vector<double> cvm_limit_sample(double sigma, CvmMethod method, const CvmOptions& options) {
    if (!(sigma >= 0.0)) {
        throw std::invalid_argument("cvm limit: sigma must be nonnegative");
    }
    if (options.reps < 1 || options.H < 1) {
        throw std::invalid_argument("cvm limit: reps and H must be positive");
    }
    const unsigned workers = options.workers == 0 ? default_workers() : options.workers;
    if (method == CvmMethod::SeriesMC) {
        const auto spec = LimitProcessSpec::bridge(sigma, options.H, WeightFunction::one(),
                                                   uniform_pi_grid(options.grid_intervals));
        return limit_functional_sample(spec, TestKind::CvM, options.reps, options.seed, workers);
    }
    const double c = options.printed_coefficients ? 2.0 : 2.0 * kPi * sigma * sigma;
    std::vector<double> out(options.reps);
    parallel_for(options.reps, workers, [&](std::size_t r) {
        RandomStream stream({options.seed, static_cast<std::uint32_t>(r), StreamPurpose::ChiSquareSeries});
        double s = 0.0;
        for (std::size_t j = 1; j <= options.H; ++j) {
            const double z = stream.normal();
            s += z * z / (static_cast<double>(j) * static_cast<double>(j));
        }
        out[r] = c * s;
    });
    return out;
}

double cvm_limit_quantile(double p, double sigma, CvmMethod method, const CvmOptions& options) {
    const auto sample = cvm_limit_sample(sigma, method, options);
    return order_statistic_quantile(sample, p);
}

Eigen::MatrixXd eta_null_covariance_iid(double gamma0, std::size_t H) {
    if (!(gamma0 > 0.0)) {
        throw std::invalid_argument("eta_null_covariance_iid: gamma0 must be positive");
    }
    if (H < 1) {
        throw std::invalid_argument("eta_null_covariance_iid: H must be at least 1");
    }
    const auto h = static_cast<Eigen::Index>(H);
    return Eigen::MatrixXd::Identity(h, h) * (gamma0 * gamma0);
}

Eigen::MatrixXd eta_bar_covariance(const IndicatorSeries& ind, std::size_t eta, std::size_t H) {
    if (H < 1) {
        throw std::invalid_argument("eta_bar_covariance: H must be at least 1");
    }
    const std::size_t n = ind.size();
    if (2 * eta + H >= n) {
        throw std::invalid_argument("eta_bar_covariance: series too short for the requested lags");
    }
    // Centered second-order part: the uncentered m p0^2 bias would add a
    // spurious common factor across all lags.
    const auto gamma = sample_extremogram(ind.with_centering(Centering::Empirical), H - 1).gamma;
    const auto dim = static_cast<Eigen::Index>(H);
    Eigen::MatrixXd sigma(dim, dim);
    for (std::size_t a = 1; a <= H; ++a) {
        for (std::size_t b = a; b <= H; ++b) {
            const std::size_t i = eta + a;
            const std::size_t j = eta + b;
            const std::size_t d = b - a;
            double v = gamma[0] * gamma[d];
            for (std::size_t t = 1; t + d <= eta; ++t) {
                v += fourth_order_extremogram(ind, t, i, t + j) + fourth_order_extremogram(ind, t, j, t + i);
            }
            sigma(static_cast<Eigen::Index>(a - 1), static_cast<Eigen::Index>(b - 1)) = v;
            sigma(static_cast<Eigen::Index>(b - 1), static_cast<Eigen::Index>(a - 1)) = v;
        }
    }
    return sigma;
}

std::vector<double> independent_hat_variances(const IndicatorSeries& ind, std::size_t H) {
    if (H < 1 || H >= ind.size()) {
        throw std::invalid_argument("independent_hat_variances: need 1 <= H < n");
    }
    const auto gamma = sample_extremogram(ind.with_centering(Centering::None), H).gamma;
    std::vector<double> v(H);
    for (std::size_t h = 1; h <= H; ++h) {
        v[h - 1] = ind.m() * gamma[h];
    }
    return v;
}

}  // namespace xgram
