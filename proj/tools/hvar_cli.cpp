// Command-line front end: simulate | fit | forecast | cv | evaluate.
// Exit codes: 0 success, 1 runtime failure, 2 usage/config failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "hvar/hvar.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

constexpr const char* kVersion = "0.1.0";

struct CommonOptions {
    std::string input;
    std::string output_dir = ".";
    int p = 1;
    int threads = 0;  // 0: all cores
    std::string standardize = "none";
    int n_lambda = 25;
    double lambda_ratio = 1e-4;
    double tune_frac = 1.0 / 3.0;
    double eval_frac = 1.0 / 3.0;
    int refit_every = 1;
    bool one_se_rule = false;
    bool relaxed_ridge = false;
    std::vector<double> alpha_grid = {0.0, 0.25, 0.5, 0.75, 1.0};
    double epsilon = 1e-4;
    int max_iter = 1000;
};

void add_grid_flags(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--n-lambda", opt.n_lambda, "number of lambda grid points");
    cmd->add_option("--lambda-ratio", opt.lambda_ratio, "smallest/largest grid lambda");
    cmd->add_option("--epsilon", opt.epsilon, "solver stopping tolerance");
    cmd->add_option("--max-iter", opt.max_iter, "solver iteration cap");
}

void add_window_flags(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--tune-frac", opt.tune_frac, "fraction of the sample used for tuning");
    cmd->add_option("--eval-frac", opt.eval_frac, "fraction of the sample used for evaluation");
    cmd->add_option("--refit-every", opt.refit_every, "refit cadence across forecast origins");
    cmd->add_flag("--one-se-rule", opt.one_se_rule, "choose lambda by the one-standard-error rule");
    cmd->add_flag("--relaxed-ridge", opt.relaxed_ridge,
                  "ridge-refit the selected support before forecasting");
    cmd->add_option("--alpha-grid", opt.alpha_grid, "lag-weighted lasso alpha candidates");
}

fs::path ensure_output_dir(const std::string& dir) {
    fs::path path(dir);
    std::error_code ec;
    fs::create_directories(path, ec);
    if (ec) throw std::runtime_error("cannot create output directory '" + dir + "'");
    return path;
}

hvar::FitConfig fit_config(const CommonOptions& opt) {
    hvar::FitConfig cfg;
    cfg.epsilon = opt.epsilon;
    cfg.max_iter = opt.max_iter;
    cfg.threads = 1;  // row/candidate parallelism is orchestrated one level up
    return cfg;
}

hvar::CvOptions cv_options(const CommonOptions& opt) {
    hvar::CvOptions cv;
    cv.refit_every = opt.refit_every;
    cv.relaxed_ridge = opt.relaxed_ridge;
    cv.one_se = opt.one_se_rule;
    cv.alpha_grid = opt.alpha_grid;
    cv.fit = fit_config(opt);
    cv.standardize = hvar::parse_standardize_mode(opt.standardize);
    cv.threads = hvar::resolve_threads(opt.threads);
    return cv;
}

void write_manifest(const fs::path& dir, const std::string& command, const json& config) {
    json manifest;
    manifest["artifact_version"] = kVersion;
    manifest["command"] = command;
    manifest["config"] = config;
    hvar::write_json(manifest, (dir / "manifest.json").string());
}

json common_config_json(const CommonOptions& opt) {
    json j;
    j["input"] = opt.input;
    j["output_dir"] = opt.output_dir;
    j["p"] = opt.p;
    j["threads"] = opt.threads;
    j["standardize"] = opt.standardize;
    j["n_lambda"] = opt.n_lambda;
    j["lambda_ratio"] = opt.lambda_ratio;
    j["tune_frac"] = opt.tune_frac;
    j["eval_frac"] = opt.eval_frac;
    j["refit_every"] = opt.refit_every;
    j["one_se_rule"] = opt.one_se_rule;
    j["relaxed_ridge"] = opt.relaxed_ridge;
    j["alpha_grid"] = opt.alpha_grid;
    j["epsilon"] = opt.epsilon;
    j["max_iter"] = opt.max_iter;
    return j;
}

// ---------------------------------------------------------------- simulate

struct SimulateOptions {
    int scenario = 1;
    int k = 60;
    int p = 12;
    int T = 100;
    std::uint64_t seed = 1;
    double sigma_u = 0.1;
    double spectral_radius = 0.8;
    double own_boost = 3.0;
    bool s2_own_lag2 = false;
    std::string output_dir = ".";
};

int run_simulate(const SimulateOptions& opt) {
    hvar::ScenarioSpec spec;
    switch (opt.scenario) {
        case 1: spec.kind = hvar::ScenarioKind::S1_Componentwise; break;
        case 2: spec.kind = hvar::ScenarioKind::S2_OwnOther; break;
        case 3: spec.kind = hvar::ScenarioKind::S3_Elementwise; break;
        default: throw UsageError("simulate: --scenario must be 1, 2 or 3");
    }
    spec.k = opt.k;
    spec.p = opt.p;
    spec.T = opt.T;
    spec.seed = opt.seed;
    spec.sigma_u = opt.sigma_u;
    spec.target_spectral_radius = opt.spectral_radius;
    spec.own_boost = opt.own_boost;
    spec.s2_block1_own_lag2 = opt.s2_own_lag2;
    try {
        hvar::scenario_maxlag(spec);  // validates divisibility before any work
        if (spec.p < 1 || spec.T < 1) throw std::invalid_argument("simulate: need p, T >= 1");
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }

    const auto dir = ensure_output_dir(opt.output_dir);
    const hvar::SimulatedDataset ds = hvar::simulate_dataset(spec);
    hvar::write_panel_csv(ds.panel, (dir / "panel.csv").string());
    hvar::write_json(hvar::dataset_sidecar(ds, spec), (dir / "truth.json").string());
    json config;
    config["scenario"] = opt.scenario;
    config["k"] = opt.k;
    config["p"] = opt.p;
    config["T"] = opt.T;
    config["seed"] = opt.seed;
    config["sigma_u"] = opt.sigma_u;
    config["spectral_radius"] = opt.spectral_radius;
    config["own_boost"] = opt.own_boost;
    config["s2_own_lag2"] = opt.s2_own_lag2;
    config["output_dir"] = opt.output_dir;
    write_manifest(dir, "simulate", config);
    std::cout << "wrote " << (dir / "panel.csv").string() << " (" << ds.panel.k() << " x "
              << ds.panel.total_length() << ") and truth.json\n";
    return 0;
}

// --------------------------------------------------------------------- fit

struct FitOptions {
    CommonOptions common;
    std::string method = "hvar-c";
    double lambda = -1.0;  // < 0: fit the full grid
};

int run_fit(const FitOptions& opt) {
    hvar::PenaltyKind kind;
    hvar::StandardizeMode mode;
    try {
        kind = hvar::parse_penalty_kind(opt.method);
        mode = hvar::parse_standardize_mode(opt.common.standardize);
        if (mode == hvar::StandardizeMode::Rolling)
            throw std::invalid_argument("fit: rolling standardization applies to cv/evaluate only");
        if (opt.common.p < 1) throw std::invalid_argument("fit: --p must be >= 1");
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }

    const auto dir = ensure_output_dir(opt.common.output_dir);
    hvar::TimeSeriesPanel panel = hvar::read_panel_csv(opt.common.input);
    std::optional<hvar::ScaleRecord> scale;
    if (mode == hvar::StandardizeMode::FullSample) {
        auto sp = hvar::standardize(panel);
        panel = std::move(sp.panel);
        scale = std::move(sp.scale);
    }
    const hvar::LagDesign design = hvar::center(hvar::build_lag_design(panel, opt.common.p));
    hvar::FitConfig cfg = fit_config(opt.common);
    cfg.threads = hvar::resolve_threads(opt.common.threads);

    std::vector<double> grid;
    if (opt.lambda >= 0.0)
        grid = {opt.lambda};
    else
        grid = hvar::lambda_grid(design, kind, opt.common.n_lambda, opt.common.lambda_ratio);
    const hvar::FitResult result = hvar::fit(design, kind, grid, cfg);

    if (scale) {
        std::ofstream out((dir / "scale.csv").string());
        out << "component,mean,sdev\n";
        for (int i = 0; i < panel.k(); ++i)
            out << panel.component_names[static_cast<std::size_t>(i)] << ","
                << hvar::detail::format_double(scale->mean(i)) << ","
                << hvar::detail::format_double(scale->sdev(i)) << "\n";
    }

    if (grid.size() == 1) {
        hvar::write_coefficients_csv(result.models.front(), (dir / "coefficients.csv").string());
        hvar::write_intercept_csv(result.models.front(), (dir / "intercept.csv").string());
        hvar::write_maxlag_csv(hvar::maxlag_of(result.models.front()), panel.component_names,
                               (dir / "maxlag.csv").string());
    } else {
        std::ofstream lam((dir / "lambda_grid.csv").string());
        lam << "lambda_index,lambda,objective\n";
        for (std::size_t g = 0; g < grid.size(); ++g)
            lam << g + 1 << "," << hvar::detail::format_double(grid[g]) << ","
                << hvar::detail::format_double(result.objective[g]) << "\n";
        std::ofstream path((dir / "coefficients_path.csv").string());
        path << "lambda_index,i,j,ell,value\n";
        for (std::size_t g = 0; g < grid.size(); ++g) {
            const auto& B = result.models[g];
            for (int i = 0; i < B.k(); ++i)
                for (int j = 0; j < B.k(); ++j)
                    for (int ell = 1; ell <= B.p; ++ell)
                        path << g + 1 << "," << i + 1 << "," << j + 1 << "," << ell << ","
                             << hvar::detail::format_double(B.at(i, j, ell)) << "\n";
        }
        hvar::write_maxlag_csv(hvar::maxlag_of(result.models.back()), panel.component_names,
                               (dir / "maxlag.csv").string());
    }
    json config = common_config_json(opt.common);
    config["method"] = opt.method;
    config["lambda"] = opt.lambda;
    write_manifest(dir, "fit", config);
    std::cout << "fit " << opt.method << " at " << grid.size() << " lambda value(s); outputs in "
              << dir.string() << "\n";
    return 0;
}

// ---------------------------------------------------------------- forecast

struct ForecastOptions {
    std::string input;
    std::string model_dir;
    std::string output_dir = ".";
    int origin = 0;  // 0: last column
};

int run_forecast(const ForecastOptions& opt) {
    const auto dir = ensure_output_dir(opt.output_dir);
    const hvar::TimeSeriesPanel panel = hvar::read_panel_csv(opt.input);
    const fs::path model_dir(opt.model_dir);
    hvar::CoefficientTensor model =
        hvar::read_coefficients_csv((model_dir / "coefficients.csv").string(),
                                    (model_dir / "intercept.csv").string());
    const int origin = opt.origin > 0 ? opt.origin : panel.total_length();

    hvar::Vector forecast;
    const fs::path scale_path = model_dir / "scale.csv";
    if (fs::exists(scale_path)) {
        std::ifstream in(scale_path.string());
        std::string line;
        std::getline(in, line);
        hvar::ScaleRecord scale;
        scale.mean.resize(panel.k());
        scale.sdev.resize(panel.k());
        int i = 0;
        while (std::getline(in, line) && i < panel.k()) {
            const auto f = hvar::detail::split_csv_line(line);
            if (f.size() != 3) throw std::runtime_error("scale.csv: bad row");
            scale.mean(i) = hvar::detail::parse_double(f[1], "scale.csv");
            scale.sdev(i) = hvar::detail::parse_double(f[2], "scale.csv");
            ++i;
        }
        if (i != panel.k()) throw std::runtime_error("scale.csv: wrong number of components");
        hvar::detail::FittedModel fm{std::move(model), std::move(scale)};
        forecast = hvar::detail::forecast_with(fm, panel, origin);
    } else {
        forecast = hvar::one_step_forecast(model, panel, origin);
    }

    std::ofstream out((dir / "forecast.csv").string());
    out << "component,value\n";
    for (int i = 0; i < panel.k(); ++i)
        out << panel.component_names[static_cast<std::size_t>(i)] << ","
            << hvar::detail::format_double(forecast(i)) << "\n";
    json config;
    config["input"] = opt.input;
    config["model_dir"] = opt.model_dir;
    config["origin"] = origin;
    config["output_dir"] = opt.output_dir;
    write_manifest(dir, "forecast", config);
    std::cout << "forecast for origin " << origin << " written to "
              << (dir / "forecast.csv").string() << "\n";
    return 0;
}

// ---------------------------------------------------------------------- cv

struct CvCliOptions {
    CommonOptions common;
    std::string method = "hvar-c";
};

void write_cv_curve(std::ofstream& out, const std::string& method,
                    const std::vector<hvar::CvPoint>& curve) {
    for (const auto& pt : curve) {
        out << method << ",";
        if (std::isnan(pt.alpha))
            out << "";
        else
            out << hvar::detail::format_double(pt.alpha);
        out << "," << hvar::detail::format_double(pt.lambda) << ","
            << hvar::detail::format_double(pt.msfe) << "," << hvar::detail::format_double(pt.se)
            << "\n";
    }
}

int run_cv(const CvCliOptions& opt) {
    hvar::Method method;
    hvar::CvOptions cv_opts;
    try {
        method = hvar::parse_method(opt.method);
        if (method.family != hvar::Method::Family::Penalized)
            throw std::invalid_argument("cv: method '" + opt.method + "' has no tuning parameter");
        if (opt.common.p < 1) throw std::invalid_argument("cv: --p must be >= 1");
        cv_opts = cv_options(opt.common);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }

    const auto dir = ensure_output_dir(opt.common.output_dir);
    hvar::TimeSeriesPanel panel = hvar::read_panel_csv(opt.common.input);
    if (cv_opts.standardize == hvar::StandardizeMode::FullSample)
        panel = hvar::standardize(panel).panel;

    const auto windows = hvar::EvaluationWindows::from_fractions(
        panel.total_length(), opt.common.tune_frac, opt.common.eval_frac);
    try {
        windows.validate(opt.common.p, panel.total_length());
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }

    hvar::TimeSeriesPanel grid_window{
        hvar::Matrix(panel.values.leftCols(windows.tune_start - 1)), panel.component_names};
    if (cv_opts.standardize == hvar::StandardizeMode::Rolling)
        grid_window = hvar::standardize(grid_window).panel;
    const auto grid =
        hvar::lambda_grid(hvar::center(hvar::build_lag_design(grid_window, opt.common.p)),
                          method.penalty, opt.common.n_lambda, opt.common.lambda_ratio);
    if (!method.tune_alpha && method.penalty.family == hvar::PenaltyFamily::LagWeightedLasso)
        cv_opts.alpha_grid = {method.penalty.alpha};
    const hvar::CvResult result =
        hvar::rolling_cv(panel, method.penalty, opt.common.p, grid, windows, cv_opts);

    std::ofstream curve((dir / "cv_curve.csv").string());
    curve << "method,alpha,lambda,msfe,se\n";
    write_cv_curve(curve, opt.method, result.curve);
    json chosen;
    chosen["method"] = opt.method;
    chosen["lambda"] = result.lambda();
    if (!std::isnan(result.alpha())) chosen["alpha"] = result.alpha();
    chosen["index"] = result.chosen;
    chosen["msfe"] = result.curve[static_cast<std::size_t>(result.chosen)].msfe;
    hvar::write_json(chosen, (dir / "chosen.json").string());
    json config = common_config_json(opt.common);
    config["method"] = opt.method;
    write_manifest(dir, "cv", config);
    std::cout << "chosen lambda " << hvar::detail::format_double(result.lambda()) << " for "
              << opt.method << "\n";
    return 0;
}

// ---------------------------------------------------------------- evaluate

struct EvaluateOptions {
    CommonOptions common;
    std::string methods = "hvar-c,hvar-o,hvar-e,lasso,lwlasso,ls,mean,rw";
    std::string truth;  // optional truth.json sidecar
};

int run_evaluate(const EvaluateOptions& opt) {
    std::vector<hvar::Method> methods;
    hvar::CvOptions cv_opts;
    try {
        std::stringstream ss(opt.methods);
        std::string token;
        while (std::getline(ss, token, ','))
            if (!token.empty()) methods.push_back(hvar::parse_method(token));
        if (methods.empty()) throw std::invalid_argument("evaluate: --methods list is empty");
        if (opt.common.p < 1) throw std::invalid_argument("evaluate: --p must be >= 1");
        cv_opts = cv_options(opt.common);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }

    const auto dir = ensure_output_dir(opt.common.output_dir);
    const hvar::TimeSeriesPanel panel = hvar::read_panel_csv(opt.common.input);
    hvar::SuiteConfig config;
    config.windows = hvar::EvaluationWindows::from_fractions(
        panel.total_length(), opt.common.tune_frac, opt.common.eval_frac);
    try {
        config.windows.validate(opt.common.p, panel.total_length());
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    config.p = opt.common.p;
    config.n_lambda = opt.common.n_lambda;
    config.lambda_ratio = opt.common.lambda_ratio;
    config.cv = cv_opts;

    std::optional<hvar::DatasetTruth> truth;
    if (!opt.truth.empty()) {
        truth = hvar::read_truth_json(opt.truth);
        config.lag_scoring = true;
    }
    const auto reports = hvar::evaluate_suite(panel, methods, config,
                                              truth ? &truth->L : nullptr);

    std::ofstream table((dir / "results.csv").string());
    table << "method,status,msfe,se,lambda,alpha,chosen_ell,lag_rel_error,error\n";
    json jreports = json::array();
    std::ofstream curves((dir / "cv_curves.csv").string());
    curves << "method,alpha,lambda,msfe,se\n";
    for (const auto& r : reports) {
        table << r.method << "," << (r.ok ? "ok" : "error") << ","
              << hvar::detail::format_double(r.msfe) << "," << hvar::detail::format_double(r.se)
              << ",";
        if (!std::isnan(r.lambda)) table << hvar::detail::format_double(r.lambda);
        table << ",";
        if (!std::isnan(r.alpha)) table << hvar::detail::format_double(r.alpha);
        table << ",";
        if (r.chosen_ell >= 0) table << r.chosen_ell;
        table << ",";
        if (!std::isnan(r.lag_rel_error)) table << hvar::detail::format_double(r.lag_rel_error);
        table << "," << r.error << "\n";

        json jr;
        jr["method"] = r.method;
        jr["ok"] = r.ok;
        if (!r.ok) jr["error"] = r.error;
        if (!std::isnan(r.msfe)) jr["msfe"] = r.msfe;
        if (!std::isnan(r.se)) jr["se"] = r.se;
        if (!std::isnan(r.lambda)) jr["lambda"] = r.lambda;
        if (!std::isnan(r.alpha)) jr["alpha"] = r.alpha;
        if (r.chosen_ell >= 0) jr["chosen_ell"] = r.chosen_ell;
        if (!std::isnan(r.lag_rel_error)) jr["lag_rel_error"] = r.lag_rel_error;
        if (r.maxlag_hat.size() > 0) jr["maxlag_hat"] = hvar::maxlag_to_json(r.maxlag_hat);
        jreports.push_back(std::move(jr));
        write_cv_curve(curves, r.method, r.cv_curve);
    }
    hvar::write_json(jreports, (dir / "results.json").string());
    json cfg_json = common_config_json(opt.common);
    cfg_json["methods"] = opt.methods;
    cfg_json["truth"] = opt.truth;
    write_manifest(dir, "evaluate", cfg_json);
    std::cout << "evaluated " << reports.size() << " method(s); outputs in " << dir.string()
              << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hierarchical lag-penalized VAR estimation, simulation and forecast evaluation"};
    app.require_subcommand(1);

    SimulateOptions sim;
    auto* sim_cmd = app.add_subcommand("simulate", "generate a sparse-VAR scenario dataset");
    sim_cmd->add_option("--scenario", sim.scenario, "scenario (1, 2 or 3)")->required();
    sim_cmd->add_option("--k", sim.k, "number of components");
    sim_cmd->add_option("--p", sim.p, "lag order offered to estimators");
    sim_cmd->add_option("--T", sim.T, "effective series length (panel has T+p columns)");
    sim_cmd->add_option("--seed", sim.seed, "random seed");
    sim_cmd->add_option("--sigma-u", sim.sigma_u, "innovation standard deviation");
    sim_cmd->add_option("--spectral-radius", sim.spectral_radius, "companion spectral radius");
    sim_cmd->add_option("--own-boost", sim.own_boost, "scenario 2 diagonal magnitude");
    sim_cmd->add_flag("--s2-own-lag2", sim.s2_own_lag2, "scenario 2 block 1 uses own lag 2");
    sim_cmd->add_option("--output-dir", sim.output_dir, "output directory");

    FitOptions fit_opt;
    auto* fit_cmd = app.add_subcommand("fit", "fit one penalized VAR on a CSV panel");
    fit_cmd->add_option("--input", fit_opt.common.input, "panel CSV")->required();
    fit_cmd->add_option("--output-dir", fit_opt.common.output_dir, "output directory");
    fit_cmd->add_option("--method", fit_opt.method, "hvar-c|hvar-o|hvar-e|lasso|lwlasso:<alpha>");
    fit_cmd->add_option("--p", fit_opt.common.p, "lag order")->required();
    fit_cmd->add_option("--lambda", fit_opt.lambda, "single penalty value (otherwise a grid is fit)");
    fit_cmd->add_option("--standardize", fit_opt.common.standardize, "none|full");
    fit_cmd->add_option("--threads", fit_opt.common.threads, "worker threads (0: all cores)");
    add_grid_flags(fit_cmd, fit_opt.common);

    ForecastOptions fc;
    auto* fc_cmd = app.add_subcommand("forecast", "one-step forecast from a fitted model");
    fc_cmd->add_option("--input", fc.input, "panel CSV")->required();
    fc_cmd->add_option("--model-dir", fc.model_dir, "directory written by fit")->required();
    fc_cmd->add_option("--origin", fc.origin, "forecast origin (1-based, default: last column)");
    fc_cmd->add_option("--output-dir", fc.output_dir, "output directory");

    CvCliOptions cv_opt;
    auto* cv_cmd = app.add_subcommand("cv", "rolling cross-validation for one method");
    cv_cmd->add_option("--input", cv_opt.common.input, "panel CSV")->required();
    cv_cmd->add_option("--method", cv_opt.method, "penalized method to tune");
    cv_cmd->add_option("--p", cv_opt.common.p, "lag order")->required();
    cv_cmd->add_option("--output-dir", cv_opt.common.output_dir, "output directory");
    cv_cmd->add_option("--standardize", cv_opt.common.standardize, "none|full|rolling");
    cv_cmd->add_option("--threads", cv_opt.common.threads, "worker threads (0: all cores)");
    add_grid_flags(cv_cmd, cv_opt.common);
    add_window_flags(cv_cmd, cv_opt.common);

    EvaluateOptions ev;
    auto* ev_cmd = app.add_subcommand("evaluate", "tune and compare methods on one panel");
    ev_cmd->add_option("--input", ev.common.input, "panel CSV")->required();
    ev_cmd->add_option("--methods", ev.methods, "comma-separated method list");
    ev_cmd->add_option("--p", ev.common.p, "lag order for regularized methods")->required();
    ev_cmd->add_option("--truth", ev.truth, "truth.json sidecar for lag-selection scoring");
    ev_cmd->add_option("--output-dir", ev.common.output_dir, "output directory");
    ev_cmd->add_option("--standardize", ev.common.standardize, "none|full|rolling");
    ev_cmd->add_option("--threads", ev.common.threads, "worker threads (0: all cores)");
    add_grid_flags(ev_cmd, ev.common);
    add_window_flags(ev_cmd, ev.common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (sim_cmd->parsed()) return run_simulate(sim);
        if (fit_cmd->parsed()) return run_fit(fit_opt);
        if (fc_cmd->parsed()) return run_forecast(fc);
        if (cv_cmd->parsed()) return run_cv(cv_opt);
        if (ev_cmd->parsed()) return run_evaluate(ev);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
