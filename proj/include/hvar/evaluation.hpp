#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hvar/baselines.hpp"
#include "hvar/parallel.hpp"
#include "hvar/penalty.hpp"
#include "hvar/solver.hpp"
#include "hvar/timeseries.hpp"
#include "hvar/types.hpp"

namespace hvar {

enum class StandardizeMode { None, FullSample, Rolling };

inline StandardizeMode parse_standardize_mode(const std::string& s) {
    if (s == "none") return StandardizeMode::None;
    if (s == "full") return StandardizeMode::FullSample;
    if (s == "rolling") return StandardizeMode::Rolling;
    throw std::invalid_argument("unknown standardize mode '" + s + "' (none|full|rolling)");
}

/// Forecast-target ranges (1-based column indices, inclusive) for tuning and
/// evaluation; a target tau is forecast from origin tau-1. In the MSFE(T1,T2)
/// notation a range [a,b] is the window (T1,T2] = (a-1, b].
struct EvaluationWindows {
    int tune_start = 0;
    int tune_end = 0;
    int eval_start = 0;
    int eval_end = 0;

    void validate(int p, int n) const {
        if (!(p < tune_start && tune_start <= tune_end && tune_end < eval_start &&
              eval_start <= eval_end && eval_end <= n))
            throw std::invalid_argument(
                "evaluation windows: need p < tune_start <= tune_end < eval_start <= eval_end <= "
                "T+p");
        if (tune_start - 1 <= p + 1)
            throw std::invalid_argument(
                "evaluation windows: first tuning origin leaves no room to fit a lag-" +
                std::to_string(p) + " design");
    }

    /// Paper split: middle stretch of the sample tunes, the tail evaluates
    /// (thirds by default).
    static EvaluationWindows from_fractions(int n, double tune_frac = 1.0 / 3.0,
                                            double eval_frac = 1.0 / 3.0) {
        if (tune_frac <= 0.0 || eval_frac <= 0.0 || tune_frac + eval_frac >= 1.0)
            throw std::invalid_argument("evaluation windows: fractions must be positive and sum below 1");
        EvaluationWindows w;
        w.tune_start = static_cast<int>(std::llround(n * (1.0 - tune_frac - eval_frac))) + 1;
        w.tune_end = static_cast<int>(std::llround(n * (1.0 - eval_frac)));
        w.eval_start = w.tune_end + 1;
        w.eval_end = n;
        return w;
    }
};

/// y_hat_{t+1} = nu + sum_ell B^(ell) y_{t+1-ell}, from 1-based origin t.
inline Vector one_step_forecast(const CoefficientTensor& model, const TimeSeriesPanel& panel,
                                int t) {
    if (t < model.p)
        throw std::invalid_argument("one_step_forecast: insufficient history at origin " +
                                    std::to_string(t));
    if (t > panel.total_length())
        throw std::invalid_argument("one_step_forecast: origin beyond end of panel");
    if (model.k() != panel.k())
        throw std::invalid_argument("one_step_forecast: model and panel dimensions differ");
    Vector y = model.intercept;
    for (int ell = 1; ell <= model.p; ++ell) y += model.lag(ell) * panel.values.col(t - ell);
    return y;
}

/// MSFE(T1,T2) over column-aligned forecast/actual matrices covering targets
/// T1+1..T2.
inline double msfe(const Matrix& forecasts, const Matrix& actuals, int T1, int T2) {
    if (T2 <= T1) throw std::invalid_argument("msfe: empty evaluation range");
    const Eigen::Index m = T2 - T1;
    if (forecasts.cols() != m || actuals.cols() != m || forecasts.rows() != actuals.rows())
        throw std::invalid_argument("msfe: forecast/actual shapes do not match the range");
    return (forecasts - actuals).squaredNorm() /
           (static_cast<double>(forecasts.rows()) * static_cast<double>(m));
}

/// One tuning-curve point: a (lambda, alpha) candidate with its rolling MSFE,
/// standard error across forecast origins, and the per-origin mean squared
/// errors behind them.
struct CvPoint {
    double lambda = std::numeric_limits<double>::quiet_NaN();
    double alpha = std::numeric_limits<double>::quiet_NaN();
    double msfe = std::numeric_limits<double>::quiet_NaN();
    double se = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> per_time;
};

struct CvResult {
    int chosen = -1;  // index into curve
    std::vector<CvPoint> curve;

    double lambda() const { return curve[static_cast<std::size_t>(chosen)].lambda; }
    double alpha() const { return curve[static_cast<std::size_t>(chosen)].alpha; }
};

struct CvOptions {
    int refit_every = 1;
    bool relaxed_ridge = false;  // ridge-refit the support before forecasting (lag selection mode)
    bool one_se = false;         // apply the one-standard-error rule to the chosen candidate
    std::vector<double> alpha_grid = {0.0, 0.25, 0.5, 0.75, 1.0};
    double ridge_penalty = -1.0;  // < 0: 1e-2 * T
    FitConfig fit;
    StandardizeMode standardize = StandardizeMode::None;
    int threads = 1;
};

namespace detail {

struct FittedModel {
    CoefficientTensor model;
    std::optional<ScaleRecord> scale;  // set in rolling standardize mode
};

inline Vector forecast_with(const FittedModel& fm, const TimeSeriesPanel& panel, int t) {
    if (!fm.scale) return one_step_forecast(fm.model, panel, t);
    Vector y = fm.model.intercept;
    for (int ell = 1; ell <= fm.model.p; ++ell) {
        const Vector col = (panel.values.col(t - ell) - fm.scale->mean).cwiseQuotient(fm.scale->sdev);
        y += fm.model.lag(ell) * col;
    }
    return destandardize(y, *fm.scale);
}

/// Expanding-window one-step forecasts at one fixed candidate over 1-based
/// targets [first_target, last_target]; refits on columns 1..origin every
/// `refit_every` origins, warm-starting rows across refits. Returns the
/// per-target mean squared error (averaged over components).
struct RollingRunner {
    const TimeSeriesPanel& panel;
    int p;
    const PenaltyKind& kind;
    int refit_every = 1;
    bool relaxed_ridge = false;
    double ridge_penalty = -1.0;
    FitConfig fit_config;
    StandardizeMode standardize = StandardizeMode::None;

    std::vector<double> run(double lambda, int first_target, int last_target,
                            FittedModel* final_model = nullptr) const {
        const int k = panel.k();
        std::vector<RowPenalty> penalties;
        penalties.reserve(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) penalties.push_back(make_row_penalty(kind, i, k, p));

        std::vector<RowVector> warm(static_cast<std::size_t>(k),
                                    RowVector::Zero(static_cast<Eigen::Index>(k) * p));
        FittedModel current;
        std::vector<double> errors;
        errors.reserve(static_cast<std::size_t>(last_target - first_target + 1));
        for (int target = first_target; target <= last_target; ++target) {
            const int origin = target - 1;
            if ((target - first_target) % refit_every == 0) {
                TimeSeriesPanel window{Matrix(panel.values.leftCols(origin)),
                                       panel.component_names};
                std::optional<ScaleRecord> scale;
                if (standardize == StandardizeMode::Rolling) {
                    auto std_panel = hvar::standardize(window);
                    window = std::move(std_panel.panel);
                    scale = std::move(std_panel.scale);
                }
                const LagDesign design = center(build_lag_design(window, p));
                const Matrix S = design.Z * design.Z.transpose();
                const double step = 1.0 / largest_eigenvalue_psd(S);
                CoefficientTensor tensor = CoefficientTensor::zero(k, p);
                for (int i = 0; i < k; ++i) {
                    RowProblem prob = make_row_problem(design, i, S, step);
                    fit_row_gram(prob, lambda, penalties[static_cast<std::size_t>(i)], fit_config,
                                 warm[static_cast<std::size_t>(i)]);
                    tensor.coef.row(i) = warm[static_cast<std::size_t>(i)];
                }
                if (relaxed_ridge)
                    tensor = ridge_refit(design, support_of(tensor.coef), ridge_penalty);
                else
                    tensor.intercept = recover_intercept(tensor.coef, design);
                current = FittedModel{std::move(tensor), std::move(scale)};
            }
            const Vector forecast = forecast_with(current, panel, origin);
            errors.push_back((forecast - panel.values.col(target - 1)).squaredNorm() / k);
        }
        if (final_model) *final_model = current;
        return errors;
    }
};

inline double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

/// Standard error of an MSFE: sample stdev of the per-origin mean squared
/// errors over sqrt(#origins).
inline double se_of(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = mean_of(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    const double sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
    return sd / std::sqrt(static_cast<double>(v.size()));
}

}  // namespace detail

/// One-standard-error rule over a tuning curve whose candidates are ordered
/// by descending lambda: the first (largest-lambda) candidate whose MSFE is
/// within one standard error of the best one.
inline int one_se_rule(const std::vector<CvPoint>& curve) {
    if (curve.empty()) throw std::invalid_argument("one_se_rule: empty curve");
    int best = 0;
    for (int c = 1; c < static_cast<int>(curve.size()); ++c)
        if (curve[static_cast<std::size_t>(c)].msfe < curve[static_cast<std::size_t>(best)].msfe)
            best = c;
    const double cutoff =
        curve[static_cast<std::size_t>(best)].msfe + curve[static_cast<std::size_t>(best)].se;
    for (int c = 0; c < static_cast<int>(curve.size()); ++c)
        if (curve[static_cast<std::size_t>(c)].msfe <= cutoff) return c;
    return best;
}

/// Rolling cross-validation of a penalized method over a (lambda, alpha)
/// candidate grid: expanding-window one-step forecasts over the tuning
/// targets, candidate with the smallest MSFE wins, ties broken toward larger
/// lambda. Candidates run independently (and in parallel); origins within a
/// candidate are sequential so warm starts stay meaningful.
inline CvResult rolling_cv(const TimeSeriesPanel& panel, const PenaltyKind& kind, int p,
                           const std::vector<double>& grid, const EvaluationWindows& windows,
                           const CvOptions& options = {}) {
    if (grid.empty()) throw std::invalid_argument("rolling_cv: empty lambda grid");
    windows.validate(p, panel.total_length());
    std::vector<double> alphas{std::numeric_limits<double>::quiet_NaN()};
    if (kind.family == PenaltyFamily::LagWeightedLasso) {
        alphas = options.alpha_grid;
        if (alphas.empty()) throw std::invalid_argument("rolling_cv: empty alpha grid");
    }

    CvResult result;
    for (double lambda : grid)
        for (double alpha : alphas) {
            CvPoint pt;
            pt.lambda = lambda;
            pt.alpha = alpha;
            result.curve.push_back(pt);
        }

    parallel_for(static_cast<int>(result.curve.size()), options.threads, [&](int c) {
        CvPoint& pt = result.curve[static_cast<std::size_t>(c)];
        PenaltyKind candidate_kind = kind;
        if (kind.family == PenaltyFamily::LagWeightedLasso)
            candidate_kind = PenaltyKind::lag_weighted_lasso(pt.alpha);
        detail::RollingRunner runner{panel,
                                     p,
                                     candidate_kind,
                                     options.refit_every,
                                     options.relaxed_ridge,
                                     options.ridge_penalty,
                                     options.fit,
                                     options.standardize};
        pt.per_time = runner.run(pt.lambda, windows.tune_start, windows.tune_end);
        pt.msfe = detail::mean_of(pt.per_time);
        pt.se = detail::se_of(pt.per_time);
    });

    int best = 0;
    for (int c = 1; c < static_cast<int>(result.curve.size()); ++c)
        if (result.curve[static_cast<std::size_t>(c)].msfe <
            result.curve[static_cast<std::size_t>(best)].msfe)
            best = c;
    result.chosen = options.one_se ? one_se_rule(result.curve) : best;
    return result;
}

/// ||L_hat - L||_1 / ||L||_1, the lag-selection error relative to the
/// all-zero (sample mean) estimate.
inline double lag_selection_score(const MaxlagMatrix& L_hat, const MaxlagMatrix& L_true) {
    if (L_hat.rows() != L_true.rows() || L_hat.cols() != L_true.cols())
        throw std::invalid_argument("lag_selection_score: shape mismatch");
    const double denom = L_true.cwiseAbs().sum();
    if (denom == 0.0) throw std::invalid_argument("lag_selection_score: true maxlag matrix is zero");
    return (L_hat - L_true).cwiseAbs().sum() / denom;
}

/// A method entry of the comparison suite.
struct Method {
    enum class Family { Penalized, LeastSquares, Aic, SampleMean, RandomWalk };
    Family family = Family::SampleMean;
    PenaltyKind penalty;      // Penalized only
    bool tune_alpha = false;  // lag-weighted lasso with alpha chosen by CV
    int ell = 1;              // LeastSquares order / Aic search bound
    std::string name;
};

inline std::string valid_method_names() {
    return "hvar-c, hvar-o, hvar-e, lasso, lwlasso, lwlasso:<alpha>, ls, ls:<ell>, aic:<ell_max>, "
           "mean, rw";
}

inline Method parse_method(const std::string& s) {
    Method m;
    m.name = s;
    if (s == "mean") {
        m.family = Method::Family::SampleMean;
        return m;
    }
    if (s == "rw") {
        m.family = Method::Family::RandomWalk;
        return m;
    }
    const auto int_suffix = [&](const std::string& prefix) {
        const std::string arg = s.substr(prefix.size());
        std::size_t pos = 0;
        int value = 0;
        try {
            value = std::stoi(arg, &pos);
        } catch (const std::exception&) {
            throw std::invalid_argument("unknown method '" + s + "' (valid: " +
                                        valid_method_names() + ")");
        }
        if (pos != arg.size() || value < 0)
            throw std::invalid_argument("unknown method '" + s + "' (valid: " +
                                        valid_method_names() + ")");
        return value;
    };
    if (s == "ls" || s.rfind("ls:", 0) == 0) {
        m.family = Method::Family::LeastSquares;
        m.ell = s == "ls" ? 1 : int_suffix("ls:");
        return m;
    }
    if (s.rfind("aic:", 0) == 0) {
        m.family = Method::Family::Aic;
        m.ell = int_suffix("aic:");
        return m;
    }
    if (s == "lwlasso") {
        m.family = Method::Family::Penalized;
        m.penalty = PenaltyKind::lag_weighted_lasso(0.0);
        m.tune_alpha = true;
        return m;
    }
    try {
        m.penalty = parse_penalty_kind(s);
    } catch (const std::exception&) {
        throw std::invalid_argument("unknown method '" + s + "' (valid: " + valid_method_names() +
                                    ")");
    }
    m.family = Method::Family::Penalized;
    return m;
}

struct ForecastReport {
    std::string method;
    bool ok = true;
    std::string error;
    double msfe = std::numeric_limits<double>::quiet_NaN();
    double se = std::numeric_limits<double>::quiet_NaN();
    double lambda = std::numeric_limits<double>::quiet_NaN();
    double alpha = std::numeric_limits<double>::quiet_NaN();
    int chosen_ell = -1;  // Aic methods
    std::vector<double> per_time;
    std::vector<CvPoint> cv_curve;
    MaxlagMatrix maxlag_hat;
    double lag_rel_error = std::numeric_limits<double>::quiet_NaN();
};

struct SuiteConfig {
    EvaluationWindows windows;
    int p = 1;  // lag order offered to the regularized methods
    int n_lambda = 25;
    double lambda_ratio = 1e-4;
    CvOptions cv;
    bool lag_scoring = false;  // fill maxlag_hat / lag_rel_error (needs truth for the score)
};

namespace detail {

inline TimeSeriesPanel left_window(const TimeSeriesPanel& panel, int cols) {
    return TimeSeriesPanel{Matrix(panel.values.leftCols(cols)), panel.component_names};
}

/// Baseline expanding-window forecasts over 1-based targets [a, b].
template <typename RefitModel>
std::vector<double> rolling_baseline_errors(const TimeSeriesPanel& panel, int a, int b,
                                            int refit_every, StandardizeMode mode,
                                            const RefitModel& refit, FittedModel* final_model) {
    std::vector<double> errors;
    FittedModel current;
    for (int target = a; target <= b; ++target) {
        const int origin = target - 1;
        if ((target - a) % refit_every == 0) {
            TimeSeriesPanel window = left_window(panel, origin);
            std::optional<ScaleRecord> scale;
            if (mode == StandardizeMode::Rolling) {
                auto sp = standardize(window);
                window = std::move(sp.panel);
                scale = std::move(sp.scale);
            }
            current = FittedModel{refit(window), std::move(scale)};
        }
        const Vector forecast = forecast_with(current, panel, origin);
        errors.push_back((forecast - panel.values.col(target - 1)).squaredNorm() / panel.k());
    }
    if (final_model) *final_model = current;
    return errors;
}

}  // namespace detail

/// Runs the full comparison protocol on one panel: tune each regularized
/// method on the tuning window, forecast the evaluation window with expanding
/// refits, and report MSFE with its standard error across forecast origins.
/// Per-method failures are recorded in the report and do not stop the suite.
/// When `true_L` is given and lag scoring is on, each method also reports the
/// maxlag estimate of its final model and its relative selection error.
inline std::vector<ForecastReport> evaluate_suite(const TimeSeriesPanel& raw_panel,
                                                  const std::vector<Method>& methods,
                                                  const SuiteConfig& config,
                                                  const MaxlagMatrix* true_L = nullptr) {
    const int n = raw_panel.total_length();
    TimeSeriesPanel working = raw_panel;
    if (config.cv.standardize == StandardizeMode::FullSample)
        working = standardize(raw_panel).panel;

    std::vector<ForecastReport> reports;
    for (const Method& method : methods) {
        ForecastReport report;
        report.method = method.name;
        try {
            const EvaluationWindows& w = config.windows;
            w.validate(0, n);
            CoefficientTensor final_model;  // model whose support scores lag selection
            bool have_final = false;

            switch (method.family) {
                case Method::Family::Penalized: {
                    const int p = config.p;
                    // grid from the initial training window, in fitting units
                    TimeSeriesPanel grid_window = detail::left_window(working, w.tune_start - 1);
                    if (config.cv.standardize == StandardizeMode::Rolling)
                        grid_window = standardize(grid_window).panel;
                    const std::vector<double> grid =
                        lambda_grid(center(build_lag_design(grid_window, p)), method.penalty,
                                    config.n_lambda, config.lambda_ratio);
                    CvOptions cv_options = config.cv;
                    if (!method.tune_alpha && method.penalty.family == PenaltyFamily::LagWeightedLasso)
                        cv_options.alpha_grid = {method.penalty.alpha};
                    const CvResult cv = rolling_cv(working, method.penalty, p, grid, w, cv_options);
                    report.cv_curve = cv.curve;
                    report.lambda = cv.lambda();
                    report.alpha = cv.alpha();
                    PenaltyKind chosen_kind = method.penalty;
                    if (method.penalty.family == PenaltyFamily::LagWeightedLasso)
                        chosen_kind = PenaltyKind::lag_weighted_lasso(cv.alpha());
                    detail::RollingRunner runner{working,
                                                 p,
                                                 chosen_kind,
                                                 config.cv.refit_every,
                                                 config.cv.relaxed_ridge,
                                                 config.cv.ridge_penalty,
                                                 config.cv.fit,
                                                 config.cv.standardize};
                    report.per_time = runner.run(cv.lambda(), w.eval_start, w.eval_end);
                    if (config.lag_scoring) {
                        TimeSeriesPanel full = working;
                        if (config.cv.standardize == StandardizeMode::Rolling)
                            full = standardize(working).panel;
                        const LagDesign design = center(build_lag_design(full, p));
                        const FitResult path =
                            fit(design, chosen_kind, {cv.lambda()}, config.cv.fit);
                        final_model = path.models.front();
                        have_final = true;
                    }
                    break;
                }
                case Method::Family::LeastSquares:
                case Method::Family::Aic: {
                    detail::FittedModel last;
                    report.per_time = detail::rolling_baseline_errors(
                        working, w.eval_start, w.eval_end, config.cv.refit_every,
                        config.cv.standardize,
                        [&](const TimeSeriesPanel& window) {
                            if (method.family == Method::Family::LeastSquares)
                                return least_squares_var(window, method.ell);
                            const AicSelection sel = aic_select_var(window, method.ell);
                            report.chosen_ell = sel.ell;
                            return sel.model;
                        },
                        &last);
                    if (config.lag_scoring) {
                        final_model = last.model;
                        have_final = true;
                    }
                    break;
                }
                case Method::Family::SampleMean:
                case Method::Family::RandomWalk: {
                    for (int target = w.eval_start; target <= w.eval_end; ++target) {
                        const int origin = target - 1;
                        const Vector forecast = method.family == Method::Family::SampleMean
                                                    ? forecast_sample_mean(working, origin)
                                                    : forecast_random_walk(working, origin);
                        report.per_time.push_back(
                            (forecast - working.values.col(target - 1)).squaredNorm() /
                            working.k());
                    }
                    if (config.lag_scoring) {
                        final_model = CoefficientTensor::zero(working.k(), 1);
                        if (method.family == Method::Family::RandomWalk)
                            final_model.coef = Matrix::Identity(working.k(), working.k());
                        have_final = true;
                    }
                    break;
                }
            }
            report.msfe = detail::mean_of(report.per_time);
            report.se = detail::se_of(report.per_time);
            if (have_final) {
                report.maxlag_hat = maxlag_of(final_model, 0.0);
                if (true_L) report.lag_rel_error = lag_selection_score(report.maxlag_hat, *true_L);
            }
        } catch (const std::exception& e) {
            report.ok = false;
            report.error = e.what();
        }
        reports.push_back(std::move(report));
    }
    return reports;
}

}  // namespace hvar
