#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace xgram {

enum class ModelKind { IidT, Arma11, Garch11, SvLogNormal };

/**
 * Regularly varying benchmark model.
 *
 * Recursions, with Z_t the Student-t noise:
 *   IidT         X_t = Z_t
 *   Arma11       X_t = phi X_{t-1} + theta_ma Z_{t-1} + Z_t
 *   Garch11      X_t = sigma_t Z_t,  sigma_t^2 = omega + alpha1 X_{t-1}^2 + beta1 sigma_{t-1}^2
 *   SvLogNormal  X_t = sigma_t Z_t,  log sigma_t = ar_vol log sigma_{t-1} + vol_sd eps_t
 *
 * With unit_variance_noise the t draws are scaled to unit variance (needs
 * df > 2); this is the GARCH convention under which the tail index of the
 * (0.1, 0.1, 0.84), t_4 model is 3.49. Every extremogram-based statistic is
 * invariant to this scale for the other models.
 */
struct ModelSpec {
    ModelKind kind = ModelKind::IidT;
    double df = 3.0;
    double phi = 0.0;
    double theta_ma = 0.0;
    double omega = 1.0;
    double alpha1 = 0.0;
    double beta1 = 0.0;
    double ar_vol = 0.0;
    double vol_sd = 1.0;
    std::size_t burn_in = 1000;
    bool unit_variance_noise = true;
    std::optional<double> tail_index_alpha;

    /// Throws std::invalid_argument when the spec cannot be simulated.
    void validate() const;

    /// alpha1 + beta1 < 1 for GARCH; always true otherwise.
    bool second_order_stationary() const;

    friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

/// Models used in the simulation study: iid t_3, ARMA(1,1) and GARCH(1,1)
/// of the bootstrap illustration, and the log-normal SV model.
namespace presets {
ModelSpec iid_t(double df = 3.0);
ModelSpec arma_fig3();
ModelSpec garch_fig3();
ModelSpec sv_fig5();
}  // namespace presets

/// Resolve a preset name ("iid-t3", "arma", "garch", "sv") or return nullopt.
std::optional<ModelSpec> preset_by_name(const std::string& name);

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);

struct SimulatedOrigin {
    ModelSpec spec;
    std::uint64_t seed = 0;
    std::uint32_t replicate = 0;
};

struct IngestedOrigin {
    std::string path;
};

/// A finite real-valued series (length >= 2, all values finite).
class Series {
public:
    using Origin = std::variant<SimulatedOrigin, IngestedOrigin>;

    Series(std::vector<double> values, Origin origin, std::vector<std::string> warnings = {});

    const std::vector<double>& values() const { return values_; }
    std::size_t size() const { return values_.size(); }
    const Origin& origin() const { return origin_; }

    /// Non-fatal conditions raised while producing the series, e.g. a GARCH
    /// spec outside the second-order stationary region.
    const std::vector<std::string>& warnings() const { return warnings_; }

private:
    std::vector<double> values_;
    Origin origin_;
    std::vector<std::string> warnings_;
};

/// Deterministic in (spec, n, seed, replicate). Draws burn_in + n steps from
/// the stream (seed, replicate, Noise) and keeps the last n; the SV model
/// reads its volatility shocks from the (seed, replicate, Volatility) stream.
Series simulate(const ModelSpec& spec, std::size_t n, std::uint64_t seed, std::uint32_t replicate = 0);

/// The raw noise stream Z_1..Z_{burn_in+n} the simulator consumes.
std::vector<double> noise_stream(const ModelSpec& spec, std::size_t length, std::uint64_t seed,
                                 std::uint32_t replicate = 0);

}  // namespace xgram
