#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "hvar/parallel.hpp"
#include "hvar/penalty.hpp"
#include "hvar/prox.hpp"
#include "hvar/timeseries.hpp"
#include "hvar/types.hpp"

namespace hvar {

struct FitConfig {
    double epsilon = 1e-4;  // sup-norm iterate-change stopping rule
    int max_iter = 1000;
    enum class StepRule { FixedLipschitz, Backtracking };
    StepRule step_rule = StepRule::FixedLipschitz;
    int threads = 1;
};

/// Path fit over a descending lambda grid.
struct FitResult {
    std::vector<double> lambda;
    std::vector<CoefficientTensor> models;    // per lambda
    std::vector<double> objective;            // per lambda, summed over rows
    std::vector<std::vector<int>> iterations; // [lambda][row]
    std::vector<std::vector<char>> converged; // [lambda][row]
};

namespace detail {

/// Largest eigenvalue of a symmetric PSD matrix by power iteration
/// (deterministic seeded start, relative tolerance 1e-10, max 1000 rounds).
inline double largest_eigenvalue_psd(const Matrix& S) {
    const Eigen::Index n = S.rows();
    std::mt19937_64 rng(0x9e3779b97f4a7c15ull);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = unif(rng);
    v.normalize();
    double eig = 0.0;
    for (int it = 0; it < 1000; ++it) {
        Vector w = S * v;
        const double norm = w.norm();
        if (norm == 0.0) return 0.0;  // v in the null space of a PSD matrix => restart is moot only if S=0
        v = w / norm;
        const double next = v.dot(S * v);
        if (std::abs(next - eig) <= 1e-10 * std::max(next, 1.0e-300)) return next;
        eig = next;
    }
    return eig;
}

}  // namespace detail

/// Fixed FISTA step 1/sigma_1(Z)^2, the Lipschitz constant of the row
/// gradient. The singular value comes from power iteration on the smaller of
/// the two Gram matrices of Z.
inline double spectral_step(const Matrix& Z) {
    if (Z.size() == 0 || Z.isZero(0.0))
        throw std::invalid_argument("spectral_step: Z must be nonzero");
    const Matrix S = Z.rows() <= Z.cols() ? Matrix(Z * Z.transpose()) : Matrix(Z.transpose() * Z);
    const double eig = detail::largest_eigenvalue_psd(S);
    if (eig <= 0.0) throw std::invalid_argument("spectral_step: Z must be nonzero");
    return 1.0 / eig;
}

namespace detail {

/// One row subproblem in Gram form: the smooth part is
/// (1/2)||Y_i - B Z||^2 = half_y_sq - B g' + (1/2) B S B' with S = Z Z' and
/// g = Y_i Z', so each FISTA iteration costs O((kp)^2) independent of T.
struct RowProblem {
    const Matrix& S;       // kp x kp
    RowVector g;           // Y_i Z'
    double half_y_sq = 0;  // (1/2)||Y_i||^2
    double step = 0;       // 1/sigma_1(Z)^2

    double smooth_value(const RowVector& b) const {
        return half_y_sq - b.dot(g) + 0.5 * b.dot(b * S);
    }
    double objective(const RowVector& b, double lambda, const RowPenalty& penalty) const {
        return smooth_value(b) + lambda * penalty_value(b, penalty);
    }
};

struct RowFitStats {
    int iterations = 0;
    bool converged = false;
    double objective = 0.0;
};

/// FISTA on one row (Tseng's accelerated variant): momentum extrapolation
/// with coefficient (m-2)/(m+1), proximal step on the gradient update, stop
/// when the sup-norm change falls below epsilon. Returns the prox output, so
/// zero patterns are exact. If the start point scores a better objective than
/// the final iterate (possible since FISTA is non-monotone), the start is
/// returned instead.
inline RowFitStats fit_row_gram(const RowProblem& prob, double lambda, const RowPenalty& penalty,
                                const FitConfig& config, RowVector& b) {
    RowFitStats stats;
    const RowVector b_start = b;
    RowVector b_prev = b;
    RowVector b_prev2 = b;
    RowVector extrap(b.size()), candidate(b.size());
    std::vector<double> factor_buf;
    double step = prob.step;
    if (config.step_rule == FitConfig::StepRule::Backtracking)
        step = static_cast<double>(prob.S.rows()) / std::max(prob.S.trace(), 1e-300);
    for (int m = 1; m <= config.max_iter; ++m) {
        const double momentum = static_cast<double>(m - 2) / static_cast<double>(m + 1);
        extrap = b_prev + momentum * (b_prev - b_prev2);
        const RowVector grad = extrap * prob.S - prob.g;
        if (config.step_rule == FitConfig::StepRule::Backtracking) {
            const double f_extrap = prob.smooth_value(extrap);
            for (;;) {
                candidate = extrap - step * grad;
                prox_row_inplace(candidate, step * lambda, penalty, factor_buf);
                const RowVector diff = candidate - extrap;
                const double model =
                    f_extrap + diff.dot(grad) + diff.squaredNorm() / (2.0 * step);
                if (prob.smooth_value(candidate) <= model + 1e-12 * std::abs(model)) break;
                step *= 0.5;
                if (step < 1e-300)
                    throw std::runtime_error("fit_row: backtracking step underflow at row " +
                                             std::to_string(penalty.row_index + 1));
            }
        } else {
            candidate = extrap - step * grad;
            prox_row_inplace(candidate, step * lambda, penalty, factor_buf);
        }
        if (!candidate.allFinite())
            throw std::runtime_error("fit_row: objective diverged (non-finite iterate) at row " +
                                     std::to_string(penalty.row_index + 1) + ", lambda " +
                                     std::to_string(lambda));
        stats.iterations = m;
        const double change = (extrap - candidate).lpNorm<Eigen::Infinity>();
        b_prev2 = b_prev;
        b_prev = candidate;
        if (change <= config.epsilon) {
            stats.converged = true;
            break;
        }
    }
    b = b_prev;
    stats.objective = prob.objective(b, lambda, penalty);
    const double start_objective = prob.objective(b_start, lambda, penalty);
    if (start_objective < stats.objective) {
        b = b_start;
        stats.objective = start_objective;
    }
    return stats;
}

inline RowProblem make_row_problem(const LagDesign& design, int i, const Matrix& S, double step) {
    RowProblem prob{S, design.Y.row(i) * design.Z.transpose(),
                    0.5 * design.Y.row(i).squaredNorm(), step};
    return prob;
}

}  // namespace detail

/// Solves one row subproblem
///   min_b (1/2)||Y_i - b Z||^2 + lambda * Omega_i(b)
/// by FISTA with the fixed Lipschitz step. `start` seeds the iteration
/// (zero by default; pass the previous grid point's row for warm starts).
inline RowVector fit_row(const Eigen::Ref<const RowVector>& Y_i, const Matrix& Z, double lambda,
                         const RowPenalty& penalty, const FitConfig& config = {},
                         const RowVector* start = nullptr) {
    if (Z.rows() != penalty.dim)
        throw std::invalid_argument("fit_row: Z row count must equal the penalty dimension kp");
    if (Y_i.size() != Z.cols()) throw std::invalid_argument("fit_row: Y_i and Z length mismatch");
    validate_row_penalty(penalty);
    const Matrix S = Z * Z.transpose();
    detail::RowProblem prob{S, Y_i * Z.transpose(), 0.5 * Y_i.squaredNorm(),
                            1.0 / detail::largest_eigenvalue_psd(S)};
    RowVector b = start ? *start : RowVector::Zero(penalty.dim);
    detail::fit_row_gram(prob, lambda, penalty, config, b);
    return b;
}

/// Full path fit: every row is solved independently over the descending
/// lambda grid, warm-starting each lambda from the previous one. Rows are
/// distributed across config.threads workers; per-row work is identical
/// either way, so results do not depend on the thread count.
inline FitResult fit(const LagDesign& design, const PenaltyKind& kind,
                     const std::vector<double>& lambda_grid, const FitConfig& config = {}) {
    if (!design.centered) throw std::invalid_argument("fit: design must be centered");
    if (lambda_grid.empty()) throw std::invalid_argument("fit: lambda grid is empty");
    for (std::size_t g = 0; g + 1 < lambda_grid.size(); ++g)
        if (!(lambda_grid[g] > lambda_grid[g + 1]))
            throw std::invalid_argument("fit: lambda grid must be strictly descending");
    if (lambda_grid.front() < 0.0) throw std::invalid_argument("fit: lambda must be >= 0");

    const int k = design.k();
    const int p = design.p;
    const int n_lambda = static_cast<int>(lambda_grid.size());
    const Matrix S = design.Z * design.Z.transpose();
    const double step = 1.0 / detail::largest_eigenvalue_psd(S);

    std::vector<RowPenalty> penalties;
    penalties.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        penalties.push_back(make_row_penalty(kind, i, k, p));
        validate_row_penalty(penalties.back());
    }

    FitResult result;
    result.lambda = lambda_grid;
    result.models.assign(static_cast<std::size_t>(n_lambda), CoefficientTensor::zero(k, p));
    result.objective.assign(static_cast<std::size_t>(n_lambda), 0.0);
    result.iterations.assign(static_cast<std::size_t>(n_lambda), std::vector<int>(k, 0));
    result.converged.assign(static_cast<std::size_t>(n_lambda), std::vector<char>(k, 0));
    std::vector<std::vector<double>> row_objective(static_cast<std::size_t>(n_lambda),
                                                   std::vector<double>(k, 0.0));

    parallel_for(k, config.threads, [&](int i) {
        detail::RowProblem prob = detail::make_row_problem(design, i, S, step);
        RowVector b = RowVector::Zero(static_cast<Eigen::Index>(k) * p);
        for (int g = 0; g < n_lambda; ++g) {
            const auto stats =
                detail::fit_row_gram(prob, lambda_grid[static_cast<std::size_t>(g)],
                                     penalties[static_cast<std::size_t>(i)], config, b);
            result.models[static_cast<std::size_t>(g)].coef.row(i) = b;
            result.iterations[static_cast<std::size_t>(g)][static_cast<std::size_t>(i)] =
                stats.iterations;
            result.converged[static_cast<std::size_t>(g)][static_cast<std::size_t>(i)] =
                stats.converged ? 1 : 0;
            row_objective[static_cast<std::size_t>(g)][static_cast<std::size_t>(i)] =
                stats.objective;
        }
    });

    for (int g = 0; g < n_lambda; ++g) {
        auto& model = result.models[static_cast<std::size_t>(g)];
        model.intercept = recover_intercept(model.coef, design);
        double total = 0.0;
        for (int i = 0; i < k; ++i) total += row_objective[static_cast<std::size_t>(g)][static_cast<std::size_t>(i)];
        result.objective[static_cast<std::size_t>(g)] = total;
    }
    return result;
}

/// Smallest lambda at which every row fits to exactly zero, located by
/// bisection on the prox-of-one-gradient-step certificate (zero is a fixed
/// point of the proximal gradient map iff it is optimal), then a log-spaced
/// descending grid of n_lambda points down to ratio * lambda_max.
inline std::vector<double> lambda_grid(const LagDesign& design, const PenaltyKind& kind,
                                       int n_lambda = 25, double ratio = 1e-4) {
    if (!design.centered) throw std::invalid_argument("lambda_grid: design must be centered");
    if (n_lambda < 1) throw std::invalid_argument("lambda_grid: n_lambda must be >= 1");
    if (ratio <= 0.0 || ratio >= 1.0)
        throw std::invalid_argument("lambda_grid: ratio must lie in (0,1)");
    const int k = design.k();
    const int p = design.p;

    const double step = spectral_step(design.Z);
    Matrix G = design.Y * design.Z.transpose();  // k x kp
    std::vector<RowPenalty> penalties;
    for (int i = 0; i < k; ++i) penalties.push_back(make_row_penalty(kind, i, k, p));

    std::vector<double> factor_buf;
    RowVector scratch;
    const auto all_rows_zero = [&](double lambda) {
        for (int i = 0; i < k; ++i) {
            scratch = step * G.row(i);
            prox_row_inplace(scratch, step * lambda, penalties[static_cast<std::size_t>(i)],
                             factor_buf);
            if (!scratch.isZero(0.0)) return false;
        }
        return true;
    };

    double hi = G.rowwise().norm().maxCoeff();
    if (hi <= 0.0)
        throw std::invalid_argument("lambda_grid: degenerate design (all response rows zero)");
    while (!all_rows_zero(hi)) hi *= 2.0;
    double lo = hi;
    int guard = 0;
    while (all_rows_zero(lo) && guard++ < 200) lo *= 0.5;
    for (int it = 0; it < 200 && (hi - lo) > 1e-12 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (all_rows_zero(mid))
            hi = mid;
        else
            lo = mid;
    }
    const double lambda_max = hi;

    std::vector<double> grid(static_cast<std::size_t>(n_lambda));
    if (n_lambda == 1) {
        grid[0] = lambda_max;
        return grid;
    }
    const double log_ratio = std::log(ratio);
    for (int g = 0; g < n_lambda; ++g)
        grid[static_cast<std::size_t>(g)] =
            lambda_max * std::exp(log_ratio * static_cast<double>(g) / (n_lambda - 1));
    return grid;
}

}  // namespace hvar
