#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <set>

#include "oracles.hpp"
#include "xgram/error.hpp"
#include "xgram/models.hpp"
#include "xgram/rng.hpp"
#include "xgram/serialize.hpp"

using namespace xgram;
using Catch::Approx;

TEST_CASE("Philox4x32-10 known-answer vectors", "[rng]") {
    using B = Philox4x32::Block;
    CHECK(Philox4x32::bijection(B{0, 0, 0, 0}, {0, 0}) == B{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
    CHECK(Philox4x32::bijection(B{0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu}) ==
          B{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
    CHECK(Philox4x32::bijection(B{0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}) ==
          B{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("streams are reproducible and distinct", "[rng]") {
    RandomStream a({42, 0, StreamPurpose::Noise});
    RandomStream b({42, 0, StreamPurpose::Noise});
    RandomStream c({42, 1, StreamPurpose::Noise});
    RandomStream d({42, 0, StreamPurpose::Volatility});
    std::set<double> seen;
    for (int i = 0; i < 100; ++i) {
        const double x = a.uniform();
        CHECK(x == b.uniform());
        CHECK(x >= 0.0);
        CHECK(x < 1.0);
        seen.insert(x);
        seen.insert(c.uniform());
        seen.insert(d.uniform());
    }
    CHECK(seen.size() == 300);
    CHECK(derive_seed(1, StreamPurpose::NullModel) != derive_seed(1, StreamPurpose::LimitProcess));
    CHECK(derive_seed(1, StreamPurpose::NullModel) != derive_seed(2, StreamPurpose::NullModel));
}

TEST_CASE("geometric block lengths have mean 1/theta", "[rng]") {
    RandomStream s({7, 0, StreamPurpose::BootstrapIndex});
    const double theta = 0.1;
    std::vector<double> draws(100000);
    for (double& v : draws) v = static_cast<double>(s.geometric(theta));
    CHECK(*std::min_element(draws.begin(), draws.end()) >= 1.0);
    const double se = oracle::sd(draws) / std::sqrt(static_cast<double>(draws.size()));
    CHECK(std::abs(oracle::mean(draws) - 1.0 / theta) < 3.0 * se);
}

TEST_CASE("simulate is deterministic in (spec, n, seed)", "[models]") {
    for (const auto& spec : {presets::iid_t(), presets::arma_fig3(), presets::garch_fig3(), presets::sv_fig5()}) {
        const auto a = simulate(spec, 500, 11);
        const auto b = simulate(spec, 500, 11);
        const auto c = simulate(spec, 500, 12);
        REQUIRE(a.size() == 500);
        CHECK(a.values() == b.values());
        CHECK(a.values() != c.values());
        CHECK(simulate(spec, 500, 11, 3).values() != a.values());
    }
}

TEST_CASE("degenerate recursions reduce to the iid noise stream", "[models]") {
    const std::size_t n = 300;
    const std::uint64_t seed = 5;
    const auto base = presets::iid_t(3.0);
    const auto noise = noise_stream(base, base.burn_in + n, seed);
    const std::vector<double> tail(noise.begin() + static_cast<std::ptrdiff_t>(base.burn_in), noise.end());
    CHECK(simulate(base, n, seed).values() == tail);

    ModelSpec arma = base;
    arma.kind = ModelKind::Arma11;
    CHECK(simulate(arma, n, seed).values() == tail);

    ModelSpec garch = base;
    garch.kind = ModelKind::Garch11;
    garch.omega = 1.0;
    CHECK(simulate(garch, n, seed).values() == tail);

    ModelSpec sv = base;
    sv.kind = ModelKind::SvLogNormal;
    sv.ar_vol = 0.0;
    sv.vol_sd = 0.0;
    CHECK(simulate(sv, n, seed).values() == tail);
}

TEST_CASE("noise has unit variance when requested", "[models]") {
    const auto z = noise_stream(presets::iid_t(5.0), 200000, 3);
    double s2 = 0.0;
    for (double v : z) s2 += v * v;
    CHECK(s2 / static_cast<double>(z.size()) == Approx(1.0).margin(0.03));
}

TEST_CASE("GARCH(1,1) t4 tail index near 3.49", "[models][slow]") {
    const auto series = simulate(presets::garch_fig3(), 1000000, 2024);
    std::vector<double> a(series.values());
    for (double& v : a) v = std::abs(v);
    const std::size_t k = 2000;
    std::nth_element(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(k), a.end(), std::greater<>());
    std::sort(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(k + 1), std::greater<>());
    double s = 0.0;
    for (std::size_t i = 0; i < k; ++i) s += std::log(a[i] / a[k]);
    const double hill = static_cast<double>(k) / s;
    INFO("Hill estimate " << hill);
    CHECK(std::abs(hill - 3.49) <= 0.3);
}

TEST_CASE("model validation", "[models]") {
    ModelSpec arma = presets::arma_fig3();
    arma.phi = 1.0;
    CHECK_THROWS_AS(arma.validate(), std::invalid_argument);
    ModelSpec sv = presets::sv_fig5();
    sv.ar_vol = -1.2;
    CHECK_THROWS_AS(sv.validate(), std::invalid_argument);
    ModelSpec garch = presets::garch_fig3();
    garch.omega = 0.0;
    CHECK_THROWS_AS(garch.validate(), std::invalid_argument);
    CHECK_THROWS_AS(simulate(presets::iid_t(), 1, 0), std::invalid_argument);
}

TEST_CASE("non-stationary GARCH still runs but warns", "[models]") {
    ModelSpec garch = presets::garch_fig3();
    garch.alpha1 = 0.3;
    garch.beta1 = 0.8;
    CHECK_FALSE(garch.second_order_stationary());
    garch.burn_in = 10;
    const auto s = simulate(garch, 50, 1);
    CHECK_FALSE(s.warnings().empty());
}

TEST_CASE("exploding recursion names the first bad index", "[models]") {
    ModelSpec garch = presets::garch_fig3();
    garch.alpha1 = 1e200;
    garch.beta1 = 0.0;
    try {
        simulate(garch, 100, 1);
        FAIL("expected a simulation error");
    } catch (const SimulationError& e) {
        CHECK(e.index() < garch.burn_in + 100);
        CHECK(std::string(e.what()).find("first bad index") != std::string::npos);
    }
}

TEST_CASE("series rejects non-finite values", "[models]") {
    CHECK_THROWS_AS(Series({1.0, std::nan("")}, IngestedOrigin{"x"}), DataError);
    CHECK_THROWS_AS(Series({1.0}, IngestedOrigin{"x"}), std::invalid_argument);
}

TEST_CASE("model specs round-trip through JSON", "[models][json]") {
    for (const auto& spec : {presets::iid_t(), presets::arma_fig3(), presets::garch_fig3(), presets::sv_fig5()}) {
        const auto j = model_to_json(spec);
        CHECK(j.contains("theta_ma"));
        CHECK(j.contains("burn_in"));
        CHECK(model_from_json(j) == spec);
    }
    CHECK(parse_model_argument("garch") == presets::garch_fig3());
    CHECK(parse_model_argument(R"({"kind":"Arma11","phi":0.5})").phi == 0.5);
    CHECK_THROWS_AS(model_from_json(nlohmann::json{{"kind", "IidT"}, {"bogus", 1}}), std::invalid_argument);
    CHECK_THROWS_AS(parse_model_argument("no-such-model"), std::invalid_argument);
}
