#include "xgram/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "xgram/bootstrap.hpp"
#include "xgram/error.hpp"
#include "xgram/extremal.hpp"
#include "xgram/igram.hpp"
#include "xgram/io.hpp"
#include "xgram/limits.hpp"
#include "xgram/quantile.hpp"
#include "xgram/rng.hpp"
#include "xgram/serialize.hpp"
#include "xgram/spectral.hpp"

namespace xgram::cli {

namespace {

using json = nlohmann::json;

const std::set<std::string> kCommands = {"simulate", "extremogram", "periodogram", "igram",
                                         "grtest",   "cvmtest",     "bootstrap",   "limits"};
const std::set<std::string> kSources = {"bootstrap", "null-model", "bridge", "limit-series"};

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::uint64_t parse_seed(const std::string& text, const std::string& what) {
    try {
        std::size_t used = 0;
        const auto v = std::stoull(text, &used);
        if (used != text.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument(what + ": '" + text + "' is not an unsigned 64-bit integer");
    }
}

// ----------------------------------------------------------------------------
// Output

std::string config_comment(const RunConfig& cfg) { return "config: " + to_json(cfg).dump(); }

void emit(const RunConfig& cfg, const std::string& file, const std::string& content, std::ostream& out) {
    if (cfg.out.empty()) {
        out << content;
        return;
    }
    std::filesystem::create_directories(cfg.out);
    const auto path = std::filesystem::path(cfg.out) / file;
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw DataError("cannot write '" + path.string() + "'");
    }
    f << content;
}

std::string csv_preamble(const RunConfig& cfg) {
    std::ostringstream s;
    CsvWriter w(s);
    w.comment("xgram " + cfg.command);
    w.comment(config_comment(cfg));
    return s.str();
}

// ----------------------------------------------------------------------------
// Shared pipeline pieces

Series load_series(const RunConfig& cfg) {
    if (cfg.input) {
        return ingest_csv(*cfg.input);
    }
    return simulate(*cfg.model, cfg.n, cfg.seed);
}

std::vector<double> make_grid(const RunConfig& cfg, std::size_t n) {
    return cfg.grid_size == 0 ? fourier_grid(n) : uniform_pi_grid(cfg.grid_size);
}

IgramCurve make_curve(const IndicatorSeries& ind, const WeightFunction& g, std::span<const double> grid,
                      IgramVariant variant) {
    if (variant == IgramVariant::Discretized) {
        return igram_discretized(ind, g, grid);
    }
    return igram_continuous(full_extremogram(ind), g, grid);
}

struct Analysis {
    std::vector<double> values;
    std::size_t n = 0;
    ExtremeSet set;
    WeightFunction g;
    IgramVariant variant = IgramVariant::Discretized;
    Centering centering = Centering::Theoretical;
    std::vector<double> grid;
    ThresholdSpec thr;
    std::optional<IndicatorSeries> ind;
    IgramCurve curve;
    CenteringCurve center;
    Rate rate = Rate::SqrtN;
    bool eta_mode = true;
    std::size_t eta = 0;
    bool self_centered = false;
    std::optional<ModelSpec> null_model;
    std::uint64_t centering_seed = 0;
    double gamma0 = 0.0;  // empirical-centering gamma(0) of the data
};

Analysis analyse(const RunConfig& cfg) {
    Analysis a;
    const auto series = load_series(cfg);
    a.values = series.values();
    a.n = series.size();
    a.set = parse_extreme_set(cfg.set);
    a.g = WeightFunction::parse(cfg.g);
    a.variant = igram_variant_from_string(cfg.variant);
    a.centering = centering_from_string(cfg.centering);
    a.grid = make_grid(cfg, a.n);
    a.null_model = cfg.null_model ? cfg.null_model : cfg.model;
    a.eta_mode = cfg.eta.has_value() || cfg.self_center || !a.null_model;
    a.eta = cfg.eta.value_or(0);

    if (a.eta_mode) {
        a.thr = threshold_from_p0(a.values, a.set, cfg.p0);
        a.rate = Rate::SqrtN;
    } else {
        a.centering_seed = derive_seed(cfg.seed, StreamPurpose::NullModel);
        MonteCarloOptions opts{a.variant, a.centering, cfg.workers};
        a.center = centering_monte_carlo(*a.null_model, a.n, cfg.p0, a.set, a.g, a.grid, cfg.centering_reps,
                                         a.centering_seed, opts);
        a.thr = ThresholdSpec{cfg.p0, a.center.a_m, 1.0 / cfg.p0, 0};
        a.rate = Rate::SqrtNoverM;
    }
    a.ind = indicators(a.values, a.thr, a.set, a.centering);
    a.thr.exceedances = a.ind->count();
    a.curve = make_curve(*a.ind, a.g, a.grid, a.variant);

    const auto empirical = a.ind->with_centering(Centering::Empirical);
    if (a.eta >= a.n) {
        throw std::invalid_argument("eta must be below n");
    }
    const auto ext = sample_extremogram(empirical, a.eta);
    a.gamma0 = ext.gamma[0];
    if (cfg.self_center) {
        a.self_centered = true;
        a.center.grid = a.curve.grid;
        a.center.values = a.curve.values;
        a.center.provenance.kind = CenteringProvenance::Kind::EtaPartialSum;
        a.center.provenance.eta = a.n - 1;
    } else if (a.eta_mode) {
        a.center = eta_null_center(ext, a.g, a.grid, a.eta, a.variant);
    }
    return a;
}

json provenance_json(const Analysis& a) {
    json j;
    if (a.self_centered) {
        j["provenance"] = "self";
        return j;
    }
    const auto& p = a.center.provenance;
    j["provenance"] = to_string(p.kind);
    if (p.kind == CenteringProvenance::Kind::MonteCarlo) {
        j["model"] = model_to_json(*p.model);
        j["replicates"] = p.replicates;
        j["seed"] = p.seed;
        j["a_m"] = a.center.a_m;
    } else {
        j["eta"] = p.eta;
    }
    return j;
}

std::size_t eta_bar_truncation(const RunConfig& cfg, const Analysis& a) {
    std::size_t H = cfg.H == 0 ? 200 : cfg.H;
    const std::size_t cap = a.n > 2 * a.eta + 2 ? a.n - 2 * a.eta - 2 : 0;
    H = std::min(H, cap);
    if (H < 1) {
        throw std::invalid_argument("limit-series: series too short for the eta-dependent limit");
    }
    return H;
}

struct CriticalValue {
    std::string source;
    double value = 0.0;
    json details;
};

CriticalValue critical_value(const RunConfig& cfg, const Analysis& a, const std::string& source, TestKind kind) {
    const double p = 1.0 - cfg.level;
    CriticalValue cv;
    cv.source = source;
    if (source == "bridge") {
        if (!a.eta_mode || a.eta != 0) {
            throw std::invalid_argument("quantile source 'bridge' applies to the eta = 0 null only");
        }
        cv.details["sigma"] = a.gamma0;
        if (kind == TestKind::GR) {
            cv.value = bridge_sup_quantile(p, a.gamma0);
            cv.details["method"] = "closed-form";
        } else {
            CvmOptions opts;
            opts.reps = cfg.limit_reps;
            opts.H = cfg.H == 0 ? 10000 : cfg.H;
            opts.seed = derive_seed(cfg.seed, StreamPurpose::ChiSquareSeries);
            opts.workers = cfg.workers;
            cv.value = cvm_limit_quantile(p, a.gamma0, CvmMethod::ChiSqSeriesMC, opts);
            cv.details["method"] = to_string(CvmMethod::ChiSqSeriesMC);
            cv.details["H"] = opts.H;
            cv.details["reps"] = opts.reps;
            cv.details["seed"] = opts.seed;
        }
        return cv;
    }
    if (source == "limit-series") {
        if (!a.eta_mode) {
            throw std::invalid_argument(
                "quantile source 'limit-series' needs the eta-dependent null (--eta); use bootstrap or "
                "null-model for the general null");
        }
        const std::size_t H = eta_bar_truncation(cfg, a);
        const auto sigma = eta_bar_covariance(*a.ind, a.eta, H);
        const auto spec = LimitProcessSpec::eta_bar(a.eta, sigma, a.g, a.grid);
        try {
            spec.validate();
        } catch (const NonPsdError& e) {
            throw NonPsdError(std::string(e.what()) +
                              "; the eta-dependent plug-in fails when extremes cluster, use --quantiles bootstrap");
        }
        const std::uint64_t seed = derive_seed(cfg.seed, StreamPurpose::LimitProcess);
        const auto sample = limit_functional_sample(spec, kind, cfg.limit_reps, seed, cfg.workers);
        cv.value = order_statistic_quantile(sample, p);
        cv.details["H"] = H;
        cv.details["reps"] = cfg.limit_reps;
        cv.details["seed"] = seed;
        return cv;
    }
    if (source == "null-model") {
        if (a.eta_mode || !a.null_model) {
            throw std::invalid_argument("quantile source 'null-model' needs a null model and no --eta");
        }
        MonteCarloOptions opts{a.variant, a.centering, cfg.workers};
        const auto stats = null_model_statistics(*a.null_model, a.n, cfg.p0, a.set, a.g, a.center, kind, cfg.reps,
                                                 a.centering_seed, opts);
        cv.value = order_statistic_quantile(stats, p);
        cv.details["reps"] = cfg.reps;
        return cv;
    }
    // bootstrap: replicates at sqrt(n/m), rescaled to the rate of the test
    const BootstrapPlan plan{cfg.theta, cfg.reps, cfg.seed, a.n};
    const auto dist = bootstrap_igram_distribution(*a.ind, a.g, a.grid, plan, kind, cfg.workers);
    const double ratio = rate_value(a.rate, a.n, a.thr.m) / dist.rate;
    const double factor = kind == TestKind::GR ? ratio : ratio * ratio;
    auto stats = dist.statistics;
    for (double& s : stats) s *= factor;
    cv.value = order_statistic_quantile(stats, p);
    cv.details["theta"] = cfg.theta;
    cv.details["B"] = cfg.reps;
    cv.details["seed"] = cfg.seed;
    cv.details["centering"] = "E*";
    return cv;
}

// ----------------------------------------------------------------------------
// Commands

void cmd_simulate(const RunConfig& cfg, std::ostream& out) {
    if (!cfg.model) {
        throw std::invalid_argument("simulate needs --model");
    }
    const auto series = simulate(*cfg.model, cfg.n, cfg.seed);
    std::ostringstream s;
    s << csv_preamble(cfg);
    CsvWriter w(s);
    for (const auto& warning : series.warnings()) w.comment("warning: " + warning);
    w.header({"x"});
    for (double v : series.values()) w.row(v);
    emit(cfg, "series.csv", s.str(), out);
}

void cmd_extremogram(const RunConfig& cfg, std::ostream& out) {
    const auto series = load_series(cfg);
    const auto set = parse_extreme_set(cfg.set);
    const auto thr = threshold_from_p0(series, set, cfg.p0);
    const auto ind = indicators(series, thr, set, centering_from_string(cfg.centering));
    const std::size_t max_lag = std::min(cfg.max_lag.value_or(default_max_lag(series.size())), series.size() - 1);
    const auto est = sample_extremogram(ind, max_lag);
    std::ostringstream s;
    s << csv_preamble(cfg);
    CsvWriter w(s);
    w.comment("a_m: " + format_double(thr.a_m) + ", exceedances: " + std::to_string(thr.exceedances));
    w.header({"lag", "gamma", "rho"});
    for (std::size_t h = 0; h <= max_lag; ++h) {
        if (est.rho_defined) {
            w.row(h, est.gamma[h], est.rho[h]);
        } else {
            w.row(h, est.gamma[h], "nan");
        }
    }
    emit(cfg, "extremogram.csv", s.str(), out);
}

void cmd_periodogram(const RunConfig& cfg, std::ostream& out) {
    const auto series = load_series(cfg);
    const auto set = parse_extreme_set(cfg.set);
    const auto thr = threshold_from_p0(series, set, cfg.p0);
    const auto ind = indicators(series, thr, set, centering_from_string(cfg.centering));
    const auto est = periodogram_fourier(ind);
    std::ostringstream s;
    s << csv_preamble(cfg);
    CsvWriter w(s);
    w.header({"frequency", "value"});
    for (std::size_t j = 0; j < est.values.size(); ++j) w.row(est.frequencies[j], est.values[j]);
    emit(cfg, "periodogram.csv", s.str(), out);
}

void cmd_igram(const RunConfig& cfg, std::ostream& out) {
    const auto a = analyse(cfg);
    std::ostringstream s;
    s << csv_preamble(cfg);
    CsvWriter w(s);
    w.comment("centering: " + provenance_json(a).dump());
    w.header({"x", "J", "EJ"});
    for (std::size_t k = 0; k < a.grid.size(); ++k) w.row(a.grid[k], a.curve.values[k], a.center.values[k]);
    emit(cfg, "igram.csv", s.str(), out);
}

void cmd_test(const RunConfig& cfg, TestKind kind, std::ostream& out) {
    const auto a = analyse(cfg);
    TestResult result = kind == TestKind::GR ? grs(a.curve, a.center, a.rate) : cvm(a.curve, a.center, a.rate);

    std::vector<std::string> sources = cfg.quantiles;
    if (sources.empty()) {
        if (a.eta_mode) {
            sources = {a.eta == 0 ? "bridge" : "limit-series"};
        } else {
            sources = {"null-model", "bootstrap"};
        }
    }
    json report;
    report["command"] = cfg.command;
    report["config"] = to_json(cfg);
    report["kind"] = to_string(kind);
    report["statistic"] = result.statistic;
    report["rate"] = to_string(result.rate);
    report["rate_value"] = result.rate_value;
    report["grid_size"] = a.grid.size();
    report["variant"] = to_string(a.variant);
    report["threshold"] = {{"p0", a.thr.p0}, {"a_m", a.thr.a_m}, {"m", a.thr.m}, {"exceedances", a.thr.exceedances}};
    report["centering"] = provenance_json(a);
    report["level"] = cfg.level;
    report["seeds"] = {{"seed", cfg.seed}, {"centering", a.centering_seed}};
    json cvs = json::array();
    bool first = true;
    for (const auto& source : sources) {
        const auto cv = critical_value(cfg, a, source, kind);
        const bool reject = result.statistic > cv.value;
        if (first) {
            const auto q = source == "bootstrap"      ? QuantileSource::Bootstrap
                           : source == "null-model"   ? QuantileSource::NullModelMC
                           : source == "bridge"       ? QuantileSource::BridgeClosedForm
                                                      : QuantileSource::LimitSeries;
            result = with_critical_value(result, cv.value, q, cfg.level);
            first = false;
        }
        json entry = {{"source", source}, {"value", cv.value}, {"reject", reject}};
        entry["details"] = cv.details;
        cvs.push_back(entry);
    }
    report["critical_values"] = cvs;
    report["critical_value"] = result.critical_value;
    report["reject"] = result.reject;
    emit(cfg, cfg.command + ".json", report.dump(2) + "\n", out);
}

void cmd_bootstrap(const RunConfig& cfg, std::ostream& out) {
    const auto series = load_series(cfg);
    const auto set = parse_extreme_set(cfg.set);
    const auto g = WeightFunction::parse(cfg.g);
    const auto kind = test_kind_from_string(cfg.kind);
    const auto thr = threshold_from_p0(series, set, cfg.p0);
    const auto ind = indicators(series, thr, set, centering_from_string(cfg.centering));
    const auto grid = make_grid(cfg, series.size());
    const BootstrapPlan plan{cfg.theta, cfg.reps, cfg.seed, series.size()};
    const auto dist = bootstrap_igram_distribution(ind, g, grid, plan, kind, cfg.workers);
    const double quantile = order_statistic_quantile(dist.statistics, 1.0 - cfg.level);

    std::ostringstream s;
    s << csv_preamble(cfg);
    CsvWriter w(s);
    w.header({"replicate", "statistic"});
    for (std::size_t b = 0; b < dist.statistics.size(); ++b) w.row(b, dist.statistics[b]);

    json report;
    report["command"] = cfg.command;
    report["config"] = to_json(cfg);
    report["kind"] = to_string(kind);
    report["rate"] = to_string(Rate::SqrtNoverM);
    report["rate_value"] = dist.rate;
    report["centering"] = "E*";
    report["p"] = 1.0 - cfg.level;
    report["quantile"] = quantile;
    report["threshold"] = {{"p0", thr.p0}, {"a_m", thr.a_m}, {"m", thr.m}, {"exceedances", thr.exceedances}};
    report["grid_size"] = grid.size();
    if (cfg.out.empty()) {
        out << report.dump(2) << "\n";
        return;
    }
    emit(cfg, "bootstrap.csv", s.str(), out);
    emit(cfg, "bootstrap.json", report.dump(2) + "\n", out);
}

void cmd_limits(const RunConfig& cfg, std::ostream& out) {
    const std::vector<double> ps = {0.90, 0.95, 0.99};
    const std::size_t H = cfg.H == 0 ? 10000 : cfg.H;
    const std::uint64_t seed = derive_seed(cfg.seed, StreamPurpose::LimitProcess);
    std::vector<QuantileRow> rows;
    for (double p : ps) {
        rows.push_back({p, bridge_sup_quantile(p, cfg.sigma), "gr-bridge-closed-form", 0, 0, 0});
    }
    const auto bridge = LimitProcessSpec::bridge(cfg.sigma, H, WeightFunction::one(), uniform_pi_grid(4096));
    const auto sup = limit_functional_sample(bridge, TestKind::GR, cfg.limit_reps, seed, cfg.workers);
    for (double p : ps) {
        rows.push_back({p, order_statistic_quantile(sup, p), "gr-series-mc", H, cfg.limit_reps, seed});
    }
    for (const auto method : {CvmMethod::SeriesMC, CvmMethod::ChiSqSeriesMC}) {
        CvmOptions opts;
        opts.reps = cfg.limit_reps;
        opts.H = H;
        opts.seed = seed;
        opts.workers = cfg.workers;
        const auto sample = cvm_limit_sample(cfg.sigma, method, opts);
        for (double p : ps) {
            rows.push_back({p, order_statistic_quantile(sample, p), "cvm-" + to_string(method), H, opts.reps, seed});
        }
    }
    std::ostringstream s;
    s << csv_preamble(cfg);
    CsvWriter w(s);
    w.comment("sigma: " + format_double(cfg.sigma));
    w.header({"p", "quantile", "method", "H", "reps", "seed"});
    for (const auto& r : rows) w.row(r.p, r.quantile, r.method, r.H, r.reps, r.seed);
    emit(cfg, "limits.csv", s.str(), out);
}

}  // namespace

// ----------------------------------------------------------------------------
// Config

void RunConfig::validate() const {
    if (!kCommands.count(command)) {
        throw std::invalid_argument("unknown command '" + command + "'");
    }
    const bool needs_data = command != "limits" && command != "simulate";
    if (needs_data && input.has_value() == model.has_value()) {
        throw std::invalid_argument("exactly one of --input and --model is required");
    }
    if (command == "simulate" && !model) {
        throw std::invalid_argument("simulate needs --model");
    }
    if (!(level > 0.0 && level < 1.0)) {
        throw std::invalid_argument("level must lie in (0, 1)");
    }
    if (!(p0 > 0.0 && p0 <= 0.5)) {
        throw std::invalid_argument("p0 must lie in (0, 0.5]");
    }
    if (!(theta > 0.0 && theta < 1.0)) {
        throw std::invalid_argument("theta must lie in (0, 1)");
    }
    if (n < 2) {
        throw std::invalid_argument("n must be at least 2");
    }
    if (reps < 1 || centering_reps < 1 || limit_reps < 1) {
        throw std::invalid_argument("replication counts must be positive");
    }
    if (!(sigma >= 0.0)) {
        throw std::invalid_argument("sigma must be nonnegative");
    }
    for (const auto& q : quantiles) {
        if (!kSources.count(q)) {
            throw std::invalid_argument("unknown quantile source '" + q +
                                        "' (expected bootstrap, null-model, bridge or limit-series)");
        }
    }
    parse_extreme_set(set);
    centering_from_string(centering);
    igram_variant_from_string(variant);
    test_kind_from_string(kind);
    if (model) model->validate();
    if (null_model) null_model->validate();
}

json to_json(const RunConfig& cfg) {
    json j;
    j["command"] = cfg.command;
    j["input"] = cfg.input ? json(*cfg.input) : json(nullptr);
    j["model"] = cfg.model ? model_to_json(*cfg.model) : json(nullptr);
    j["null"] = cfg.null_model ? model_to_json(*cfg.null_model) : json(nullptr);
    j["n"] = cfg.n;
    j["p0"] = cfg.p0;
    j["set"] = cfg.set;
    j["g"] = cfg.g;
    j["variant"] = cfg.variant;
    j["centering"] = cfg.centering;
    j["grid_size"] = cfg.grid_size;
    j["eta"] = cfg.eta ? json(*cfg.eta) : json(nullptr);
    j["self_center"] = cfg.self_center;
    j["max_lag"] = cfg.max_lag ? json(*cfg.max_lag) : json(nullptr);
    j["theta"] = cfg.theta;
    j["reps"] = cfg.reps;
    j["centering_reps"] = cfg.centering_reps;
    j["limit_reps"] = cfg.limit_reps;
    j["H"] = cfg.H;
    j["level"] = cfg.level;
    j["sigma"] = cfg.sigma;
    j["kind"] = cfg.kind;
    j["quantiles"] = cfg.quantiles;
    j["seed"] = cfg.seed;
    return j;
}

RunConfig config_from_json(const json& j) {
    if (!j.is_object()) {
        throw std::invalid_argument("config must be a JSON object");
    }
    RunConfig cfg;
    try {
        for (const auto& [key, v] : j.items()) {
            if (v.is_null()) continue;
            if (key == "command") cfg.command = v.get<std::string>();
            else if (key == "input") cfg.input = v.get<std::string>();
            else if (key == "model") cfg.model = v.is_string() ? parse_model_argument(v.get<std::string>()) : model_from_json(v);
            else if (key == "null") cfg.null_model = v.is_string() ? parse_model_argument(v.get<std::string>()) : model_from_json(v);
            else if (key == "n") cfg.n = v.get<std::size_t>();
            else if (key == "p0") cfg.p0 = v.get<double>();
            else if (key == "set") cfg.set = v.get<std::string>();
            else if (key == "g") cfg.g = v.get<std::string>();
            else if (key == "variant") cfg.variant = v.get<std::string>();
            else if (key == "centering") cfg.centering = v.get<std::string>();
            else if (key == "grid_size") cfg.grid_size = v.get<std::size_t>();
            else if (key == "eta") cfg.eta = v.get<std::size_t>();
            else if (key == "self_center") cfg.self_center = v.get<bool>();
            else if (key == "max_lag") cfg.max_lag = v.get<std::size_t>();
            else if (key == "theta") cfg.theta = v.get<double>();
            else if (key == "reps") cfg.reps = v.get<std::size_t>();
            else if (key == "centering_reps") cfg.centering_reps = v.get<std::size_t>();
            else if (key == "limit_reps") cfg.limit_reps = v.get<std::size_t>();
            else if (key == "H") cfg.H = v.get<std::size_t>();
            else if (key == "level") cfg.level = v.get<double>();
            else if (key == "sigma") cfg.sigma = v.get<double>();
            else if (key == "kind") cfg.kind = v.get<std::string>();
            else if (key == "quantiles") cfg.quantiles = v.get<std::vector<std::string>>();
            else if (key == "seed") cfg.seed = v.get<std::uint64_t>();
            else if (key == "workers") cfg.workers = v.get<unsigned>();
            else if (key == "out") cfg.out = v.get<std::string>();
            else throw std::invalid_argument("config: unknown field '" + key + "'");
        }
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
    return cfg;
}

// ----------------------------------------------------------------------------
// Entry point

namespace {

int dispatch(const std::vector<std::string>& args, std::ostream& out) {
    CLI::App app{"Integrated periodograms of extreme events: estimation, tests and bootstrap", "xgram"};
    app.require_subcommand(1, 1);

    std::string input, model, null_model, set, g, variant, centering, config_path, out_dir, kind, quantiles, seed_text;
    std::size_t n = 0, eta = 0, grid_size = 0, max_lag = 0, reps = 0, centering_reps = 0, limit_reps = 0, H = 0;
    double p0 = 0, theta = 0, level = 0, sigma = 0;
    unsigned workers = 0;
    bool self_center = false;

    std::map<std::string, CLI::Option*> opt;
    opt["input"] = app.add_option("--input", input, "Single-column CSV series");
    opt["model"] = app.add_option("--model", model, "Model: preset (iid-t3, iid, arma, garch, sv), inline JSON or file");
    opt["null"] = app.add_option("--null", null_model, "Null model for Monte Carlo centering (default: --model)");
    opt["n"] = app.add_option("--n", n, "Series length when simulating");
    opt["p0"] = app.add_option("--p0", p0, "Exceedance probability 1/m");
    opt["set"] = app.add_option("--set", set, "Extreme set: upper, lower, abs, interval:a:b");
    opt["g"] = app.add_option("--g", g, "Weight function: one, linear, table:<csv>");
    opt["variant"] = app.add_option("--variant", variant, "igram variant: discretized or continuous");
    opt["centering"] = app.add_option("--centering", centering, "Indicator centering: none, theoretical, empirical");
    opt["grid_size"] = app.add_option("--grid-size", grid_size, "0: Fourier grid; K: uniform grid pi k / K");
    opt["eta"] = app.add_option("--eta", eta, "Use the eta-dependent null centering");
    opt["self_center"] = app.add_flag("--self-center", self_center, "Center the curve at itself (smoke test)");
    opt["max_lag"] = app.add_option("--max-lag", max_lag, "Largest reported extremogram lag");
    opt["theta"] = app.add_option("--theta", theta, "Stationary bootstrap geometric parameter");
    opt["reps"] = app.add_option("--reps", reps, "Bootstrap / null-model replications");
    opt["centering_reps"] = app.add_option("--centering-reps", centering_reps, "Monte Carlo centering replications");
    opt["limit_reps"] = app.add_option("--limit-reps", limit_reps, "Limit-process simulations");
    opt["H"] = app.add_option("--H", H, "Series truncation of limit processes");
    opt["level"] = app.add_option("--level", level, "Test level");
    opt["sigma"] = app.add_option("--sigma", sigma, "Bridge scale for the limits table");
    opt["kind"] = app.add_option("--kind", kind, "Statistic for bootstrap: gr or cvm");
    opt["quantiles"] = app.add_option("--quantiles", quantiles, "Critical value sources: bootstrap,null-model,bridge,limit-series");
    opt["seed"] = app.add_option("--seed", seed_text, "Master seed (fallback: XGRAM_SEED)");
    opt["workers"] = app.add_option("--workers", workers, "Worker threads (0: all cores)");
    opt["out"] = app.add_option("--out", out_dir, "Output directory (default: standard output)");
    app.add_option("--config", config_path, "JSON config file; flags override its fields");

    const std::map<std::string, std::string> descriptions = {
        {"simulate", "Simulate a model series (series.csv)"},
        {"extremogram", "Sample extremogram (lag, gamma, rho)"},
        {"periodogram", "Extremal periodogram at the Fourier frequencies"},
        {"igram", "Integrated periodogram J and its centering EJ"},
        {"grtest", "Grenander-Rosenblatt (sup) test report"},
        {"cvmtest", "Cramer-von Mises (integral) test report"},
        {"bootstrap", "Stationary-bootstrap distribution of the test statistic"},
        {"limits", "Quantile table of the limit laws"},
    };
    for (const auto& name : kCommands) {
        app.add_subcommand(name, descriptions.at(name))->fallthrough();
    }

    std::vector<const char*> argv{"xgram"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        throw std::invalid_argument(e.what());
    }

    RunConfig cfg;
    bool seed_from_config = false;
    if (!config_path.empty()) {
        const auto j = read_json_file(config_path);
        cfg = config_from_json(j);
        seed_from_config = j.contains("seed") && !j.at("seed").is_null();
    }
    cfg.command = app.get_subcommands().front()->get_name();
    const auto given = [&](const char* name) { return opt.at(name)->count() > 0; };
    if (given("input")) { cfg.input = input; cfg.model.reset(); }
    if (given("model")) { cfg.model = parse_model_argument(model); if (!given("input")) cfg.input.reset(); }
    if (given("null")) cfg.null_model = parse_model_argument(null_model);
    if (given("n")) cfg.n = n;
    if (given("p0")) cfg.p0 = p0;
    if (given("set")) cfg.set = set;
    if (given("g")) cfg.g = g;
    if (given("variant")) cfg.variant = variant;
    if (given("centering")) cfg.centering = centering;
    if (given("grid_size")) cfg.grid_size = grid_size;
    if (given("eta")) cfg.eta = eta;
    if (given("self_center")) cfg.self_center = self_center;
    if (given("max_lag")) cfg.max_lag = max_lag;
    if (given("theta")) cfg.theta = theta;
    if (given("reps")) cfg.reps = reps;
    if (given("centering_reps")) cfg.centering_reps = centering_reps;
    if (given("limit_reps")) cfg.limit_reps = limit_reps;
    if (given("H")) cfg.H = H;
    if (given("level")) cfg.level = level;
    if (given("sigma")) cfg.sigma = sigma;
    if (given("kind")) cfg.kind = kind;
    if (given("quantiles")) cfg.quantiles = split_list(quantiles);
    if (given("workers")) cfg.workers = workers;
    if (given("out")) cfg.out = out_dir;
    if (given("seed")) {
        cfg.seed = parse_seed(seed_text, "--seed");
    } else if (!seed_from_config) {
        if (const char* env = std::getenv("XGRAM_SEED"); env != nullptr && *env != '\0') {
            cfg.seed = parse_seed(env, "XGRAM_SEED");
        }
    }
    cfg.validate();

    const std::map<std::string, std::function<void()>> commands = {
        {"simulate", [&] { cmd_simulate(cfg, out); }},
        {"extremogram", [&] { cmd_extremogram(cfg, out); }},
        {"periodogram", [&] { cmd_periodogram(cfg, out); }},
        {"igram", [&] { cmd_igram(cfg, out); }},
        {"grtest", [&] { cmd_test(cfg, TestKind::GR, out); }},
        {"cvmtest", [&] { cmd_test(cfg, TestKind::CvM, out); }},
        {"bootstrap", [&] { cmd_bootstrap(cfg, out); }},
        {"limits", [&] { cmd_limits(cfg, out); }},
    };
    commands.at(cfg.command)();
    return 0;
}

std::string one_line(std::string text) {
    std::replace(text.begin(), text.end(), '\n', ' ');
    return text;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        return dispatch(args, out);
    } catch (const DataError& e) {
        err << "xgram: data error: " << one_line(e.what()) << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "xgram: usage error: " << one_line(e.what()) << '\n';
        return 1;
    } catch (const NumericalError& e) {
        err << "xgram: numerical error: " << one_line(e.what()) << '\n';
        return 3;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "xgram: data error: " << one_line(e.what()) << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "xgram: numerical error: " << one_line(e.what()) << '\n';
        return 3;
    }
}

}  // namespace xgram::cli
