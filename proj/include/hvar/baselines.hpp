#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "hvar/solver.hpp"
#include "hvar/timeseries.hpp"
#include "hvar/types.hpp"

namespace hvar {

struct BaselineKind {
    enum class Type { LeastSquaresVAR, AicSelectedVAR, SampleMean, RandomWalk };
    Type type = Type::SampleMean;
    int ell = 1;  // lag order (LeastSquaresVAR) or search bound (AicSelectedVAR)
};

namespace detail {

// Least squares on an already-centered design restricted to the first
// k*ell regressor rows; rows share one factorization.
inline Matrix solve_ls_rows(const Matrix& Y, const Matrix& Z) {
    const Matrix S = Z * Z.transpose();
    Eigen::FullPivLU<Matrix> lu(S);
    lu.setThreshold(1e-10);
    if (!lu.isInvertible())
        throw std::runtime_error(
            "least squares: singular Gram matrix (collinear regressors); consider a regularized "
            "estimator instead");
    return lu.solve(Z * Y.transpose()).transpose();
}

}  // namespace detail

/// Least squares VAR_k(ell) via normal equations on centered data; lags above
/// ell are zero. ell = 0 yields the intercept-only model whose intercept is
/// the panel mean.
inline CoefficientTensor least_squares_var(const TimeSeriesPanel& panel, int ell) {
    if (ell < 0) throw std::invalid_argument("least_squares_var: ell must be >= 0");
    const int k = panel.k();
    if (ell == 0) {
        CoefficientTensor B = CoefficientTensor::zero(k, 1);
        B.intercept = panel.values.rowwise().mean();
        return B;
    }
    const LagDesign design = center(build_lag_design(panel, ell));
    if (k * ell > design.T())
        throw std::invalid_argument("least_squares_var: k*ell = " + std::to_string(k * ell) +
                                    " exceeds T = " + std::to_string(design.T()) +
                                    "; least squares is not well-defined");
    CoefficientTensor B(detail::solve_ls_rows(design.Y, design.Z), Vector::Zero(k), ell);
    B.intercept = recover_intercept(B.coef, design);
    return B;
}

/// AIC(ell) = log det(Sigma_hat) + 2 k^2 ell / T with the ML residual
/// covariance (denominator T).
inline double aic(const Matrix& residual_cov, int ell, int k, int T) {
    Eigen::LLT<Matrix> llt(residual_cov);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("aic: residual covariance is not positive definite");
    double log_det = 0.0;
    for (Eigen::Index i = 0; i < residual_cov.rows(); ++i)
        log_det += 2.0 * std::log(llt.matrixL()(i, i));
    return log_det + 2.0 * static_cast<double>(k) * k * ell / T;
}

struct AicSelection {
    int ell = 0;
    CoefficientTensor model;         // refit on all usable data at the chosen order
    std::vector<double> aic_values;  // index = candidate ell
};

/// Universal lag order search: fit VAR_k(ell) for ell = 0..ell_max on the
/// common sample conditioned on ell_max presample columns, pick the AIC
/// minimizer. Candidates with k*ell > T are skipped.
inline AicSelection aic_select_var(const TimeSeriesPanel& panel, int ell_max) {
    if (ell_max < 0) throw std::invalid_argument("aic_select_var: ell_max must be >= 0");
    const int k = panel.k();
    const int n = panel.total_length();
    if (n <= ell_max + 1)
        throw std::invalid_argument("aic_select_var: series too short for ell_max");
    const int T = n - std::max(ell_max, 1);
    LagDesign common = center(build_lag_design(panel, std::max(ell_max, 1)));

    AicSelection sel;
    double best = std::numeric_limits<double>::infinity();
    int best_ell = -1;
    for (int ell = 0; ell <= ell_max; ++ell) {
        double value = std::numeric_limits<double>::quiet_NaN();
        if (k * ell <= T) {
            Matrix resid;
            if (ell == 0) {
                resid = common.Y;
            } else {
                const Matrix Zl = common.Z.topRows(static_cast<Eigen::Index>(k) * ell);
                const Matrix B = detail::solve_ls_rows(common.Y, Zl);
                resid = common.Y - B * Zl;
            }
            const Matrix sigma = resid * resid.transpose() / T;
            value = aic(sigma, ell, k, T);
            if (value < best) {
                best = value;
                best_ell = ell;
            }
        }
        sel.aic_values.push_back(value);
    }
    if (best_ell < 0) throw std::runtime_error("aic_select_var: no feasible lag order");
    sel.ell = best_ell;
    sel.model = least_squares_var(panel, best_ell);
    return sel;
}

/// Lasso path on a centered design (singleton groups through the shared
/// FISTA engine).
inline FitResult lasso_fit(const LagDesign& design, const std::vector<double>& grid,
                           const FitConfig& config = {}) {
    return fit(design, PenaltyKind::lasso(), grid, config);
}

/// Lag-weighted lasso path: the lag-ell coordinate threshold scales by ell^alpha.
inline FitResult lag_weighted_lasso_fit(const LagDesign& design, const std::vector<double>& grid,
                                        double alpha, const FitConfig& config = {}) {
    return fit(design, PenaltyKind::lag_weighted_lasso(alpha), grid, config);
}

/// Unconditional sample mean of the first t columns (1-based origin t),
/// forecasting y_{t+1}.
inline Vector forecast_sample_mean(const TimeSeriesPanel& panel, int t) {
    if (t < 1 || t > panel.total_length())
        throw std::invalid_argument("forecast_sample_mean: origin out of range");
    return panel.values.leftCols(t).rowwise().mean();
}

/// Vector random walk forecast: y_hat_{t+1} = y_t.
inline Vector forecast_random_walk(const TimeSeriesPanel& panel, int t) {
    if (t < 1 || t > panel.total_length())
        throw std::invalid_argument("forecast_random_walk: origin out of range");
    return panel.values.col(t - 1);
}

/// Ridge regression restricted to the masked-in coordinates of each row;
/// masked-out coordinates stay exactly zero. Used by the relaxed refit of the
/// lag-selection protocol. Default penalty when `ridge_penalty < 0`: 1e-2 * T.
inline CoefficientTensor ridge_refit(const LagDesign& design,
                                     const std::vector<std::vector<char>>& support,
                                     double ridge_penalty = -1.0) {
    if (!design.centered) throw std::invalid_argument("ridge_refit: design must be centered");
    const int k = design.k();
    const int kp = static_cast<int>(design.Z.rows());
    if (static_cast<int>(support.size()) != k)
        throw std::invalid_argument("ridge_refit: support mask must have k rows");
    const double gamma = ridge_penalty < 0.0 ? 1e-2 * design.T() : ridge_penalty;
    CoefficientTensor B = CoefficientTensor::zero(k, design.p);
    for (int i = 0; i < k; ++i) {
        if (static_cast<int>(support[static_cast<std::size_t>(i)].size()) != kp)
            throw std::invalid_argument("ridge_refit: support mask must have kp columns");
        std::vector<int> active;
        for (int c = 0; c < kp; ++c)
            if (support[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)]) active.push_back(c);
        if (active.empty()) continue;
        const auto m = static_cast<Eigen::Index>(active.size());
        Matrix Za(m, design.T());
        for (Eigen::Index a = 0; a < m; ++a) Za.row(a) = design.Z.row(active[static_cast<std::size_t>(a)]);
        Matrix A = Za * Za.transpose();
        A.diagonal().array() += gamma;
        const Vector beta = Eigen::LLT<Matrix>(A).solve(Za * design.Y.row(i).transpose());
        for (Eigen::Index a = 0; a < m; ++a) B.coef(i, active[static_cast<std::size_t>(a)]) = beta(a);
    }
    B.intercept = recover_intercept(B.coef, design);
    return B;
}

/// Support mask (exact nonzeros) of a coefficient matrix.
inline std::vector<std::vector<char>> support_of(const Matrix& coef) {
    std::vector<std::vector<char>> mask(static_cast<std::size_t>(coef.rows()),
                                        std::vector<char>(static_cast<std::size_t>(coef.cols()), 0));
    for (Eigen::Index i = 0; i < coef.rows(); ++i)
        for (Eigen::Index c = 0; c < coef.cols(); ++c)
            if (coef(i, c) != 0.0) mask[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)] = 1;
    return mask;
}

}  // namespace hvar
