#include "xgram/models.hpp"

#include <cmath>
#include <stdexcept>

#include "xgram/error.hpp"
#include "xgram/rng.hpp"

namespace xgram {

void ModelSpec::validate() const {
    if (!(df > 0.0) || !std::isfinite(df)) {
        throw std::invalid_argument("model: df must be positive and finite");
    }
    if (unit_variance_noise && !(df > 2.0)) {
        throw std::invalid_argument("model: unit_variance_noise requires df > 2 (set it to false for heavier noise)");
    }
    switch (kind) {
        case ModelKind::IidT:
            break;
        case ModelKind::Arma11:
            if (!(std::abs(phi) < 1.0)) {
                throw std::invalid_argument("model: Arma11 requires |phi| < 1");
            }
            if (!std::isfinite(theta_ma)) {
                throw std::invalid_argument("model: theta_ma must be finite");
            }
            break;
        case ModelKind::Garch11:
            if (!(omega > 0.0) || !std::isfinite(omega)) {
                throw std::invalid_argument("model: Garch11 requires omega > 0");
            }
            if (!(alpha1 >= 0.0) || !(beta1 >= 0.0) || !std::isfinite(alpha1) || !std::isfinite(beta1)) {
                throw std::invalid_argument("model: Garch11 requires alpha1, beta1 >= 0");
            }
            break;
        case ModelKind::SvLogNormal:
            if (!(std::abs(ar_vol) < 1.0)) {
                throw std::invalid_argument("model: SvLogNormal requires |ar_vol| < 1");
            }
            if (!(vol_sd >= 0.0) || !std::isfinite(vol_sd)) {
                throw std::invalid_argument("model: vol_sd must be nonnegative");
            }
            break;
    }
    if (tail_index_alpha && !(*tail_index_alpha > 0.0)) {
        throw std::invalid_argument("model: tail_index_alpha must be positive");
    }
}

bool ModelSpec::second_order_stationary() const {
    return kind != ModelKind::Garch11 || alpha1 + beta1 < 1.0;
}

namespace presets {

ModelSpec iid_t(double df) {
    ModelSpec s;
    s.kind = ModelKind::IidT;
    s.df = df;
    s.tail_index_alpha = df;
    return s;
}

ModelSpec arma_fig3() {
    ModelSpec s;
    s.kind = ModelKind::Arma11;
    s.df = 3.0;
    s.phi = 0.8;
    s.theta_ma = 0.1;
    s.tail_index_alpha = 3.0;
    return s;
}

ModelSpec garch_fig3() {
    ModelSpec s;
    s.kind = ModelKind::Garch11;
    s.df = 4.0;
    s.omega = 0.1;
    s.alpha1 = 0.1;
    s.beta1 = 0.84;
    s.tail_index_alpha = 3.49;
    return s;
}

ModelSpec sv_fig5() {
    ModelSpec s;
    s.kind = ModelKind::SvLogNormal;
    s.df = 3.6;
    s.ar_vol = 0.9;
    s.vol_sd = 1.0;
    s.tail_index_alpha = 3.6;
    return s;
}

}  // namespace presets

std::optional<ModelSpec> preset_by_name(const std::string& name) {
    if (name == "iid-t3" || name == "iid") {
        return presets::iid_t(3.0);
    }
    if (name == "arma") {
        return presets::arma_fig3();
    }
    if (name == "garch") {
        return presets::garch_fig3();
    }
    if (name == "sv") {
        return presets::sv_fig5();
    }
    return std::nullopt;
}

std::string to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::IidT:
            return "IidT";
        case ModelKind::Arma11:
            return "Arma11";
        case ModelKind::Garch11:
            return "Garch11";
        case ModelKind::SvLogNormal:
            return "SvLogNormal";
    }
    return "unknown";
}

ModelKind model_kind_from_string(const std::string& name) {
    if (name == "IidT") return ModelKind::IidT;
    if (name == "Arma11") return ModelKind::Arma11;
    if (name == "Garch11") return ModelKind::Garch11;
    if (name == "SvLogNormal") return ModelKind::SvLogNormal;
    throw std::invalid_argument("unknown model kind '" + name + "'");
}

Series::Series(std::vector<double> values, Origin origin, std::vector<std::string> warnings)
    : values_(std::move(values)), origin_(std::move(origin)), warnings_(std::move(warnings)) {
    if (values_.size() < 2) {
        throw std::invalid_argument("series: at least 2 values required");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw DataError("series: non-finite value at index " + std::to_string(i));
        }
    }
}

std::vector<double> noise_stream(const ModelSpec& spec, std::size_t length, std::uint64_t seed,
                                 std::uint32_t replicate) {
    RandomStream rng({seed, replicate, StreamPurpose::Noise});
    const double scale = spec.unit_variance_noise ? std::sqrt((spec.df - 2.0) / spec.df) : 1.0;
    std::vector<double> z(length);
    for (double& v : z) {
        v = scale * rng.student_t(spec.df);
    }
    return z;
}

Series simulate(const ModelSpec& spec, std::size_t n, std::uint64_t seed, std::uint32_t replicate) {
    spec.validate();
    if (n < 2) {
        throw std::invalid_argument("simulate: n must be at least 2");
    }
    const std::size_t total = spec.burn_in + n;
    const std::vector<double> z = noise_stream(spec, total, seed, replicate);
    std::vector<double> x(total);
    std::vector<std::string> warnings;

    switch (spec.kind) {
        case ModelKind::IidT:
            x = z;
            break;
        case ModelKind::Arma11: {
            double prev_x = 0.0;
            double prev_z = 0.0;
            for (std::size_t t = 0; t < total; ++t) {
                x[t] = spec.phi * prev_x + spec.theta_ma * prev_z + z[t];
                prev_x = x[t];
                prev_z = z[t];
            }
            break;
        }
        case ModelKind::Garch11: {
            const double persistence = spec.alpha1 + spec.beta1;
            double sigma2 = spec.omega;
            if (persistence < 1.0) {
                sigma2 = spec.omega / (1.0 - persistence);
            } else {
                warnings.push_back("Garch11: alpha1 + beta1 >= 1, process is not second-order stationary");
            }
            double prev_x = 0.0;
            for (std::size_t t = 0; t < total; ++t) {
                sigma2 = spec.omega + spec.alpha1 * prev_x * prev_x + spec.beta1 * sigma2;
                x[t] = std::sqrt(sigma2) * z[t];
                prev_x = x[t];
            }
            break;
        }
        case ModelKind::SvLogNormal: {
            RandomStream vol({seed, replicate, StreamPurpose::Volatility});
            double log_sigma = 0.0;
            for (std::size_t t = 0; t < total; ++t) {
                log_sigma = spec.ar_vol * log_sigma + spec.vol_sd * vol.normal();
                x[t] = std::exp(log_sigma) * z[t];
            }
            break;
        }
    }

    for (std::size_t t = 0; t < total; ++t) {
        if (!std::isfinite(x[t])) {
            throw SimulationError(t, "simulate: non-finite state in " + to_string(spec.kind) + " recursion");
        }
    }
    x.erase(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(spec.burn_in));
    return Series(std::move(x), SimulatedOrigin{spec, seed, replicate}, std::move(warnings));
}

}  // namespace xgram
