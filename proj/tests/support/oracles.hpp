// Test-only reference implementations, independent of the library's solver
// path: a certified dual oracle for the nested-group prox, a projected
// subgradient minimizer for row objectives, and small random-instance
// helpers.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "hvar/penalty.hpp"
#include "hvar/solver.hpp"
#include "hvar/types.hpp"

namespace oracles {

using hvar::Matrix;
using hvar::RowVector;
using hvar::Vector;

struct FlatGroup {
    std::vector<int> indices;
    double weight;
};

inline std::vector<FlatGroup> flatten_groups(const hvar::RowPenalty& penalty) {
    std::vector<FlatGroup> groups;
    for (const auto& chain : penalty.chains)
        for (int h = 1; h <= chain.levels(); ++h)
            groups.push_back({chain.group(h), chain.weights[static_cast<std::size_t>(h - 1)]});
    return groups;
}

struct ProxOracleResult {
    RowVector x;
    double objective = 0.0;
    double gap = 0.0;  // certified duality gap at x
};

inline double prox_objective(const RowVector& x, const RowVector& x_tilde, double lambda,
                             const hvar::RowPenalty& penalty) {
    return 0.5 * (x - x_tilde).squaredNorm() + lambda * hvar::penalty_value(x, penalty);
}

/// Solves min_x (1/2)||x - x_tilde||^2 + lambda * sum_g w_g ||x_g|| by
/// multi-pass randomized projected block-coordinate ascent on the Fenchel
/// dual max_{||xi_g|| <= lambda w_g} -(1/2)||x_tilde - sum_g xi_g||^2 + const.
/// The primal candidate is the dual residual itself and every result carries
/// a computable duality-gap certificate, so correctness does not rest on
/// trusting convergence.
inline ProxOracleResult prox_oracle(const RowVector& x_tilde, double lambda,
                                    const hvar::RowPenalty& penalty, int max_passes = 200000,
                                    double tol = 1e-13) {
    const auto groups = flatten_groups(penalty);
    const auto n_groups = groups.size();
    std::vector<RowVector> xi(n_groups, RowVector::Zero(x_tilde.size()));
    RowVector r = x_tilde;
    std::vector<std::size_t> order(n_groups);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(12345);

    ProxOracleResult result;
    for (int pass = 0; pass < max_passes; ++pass) {
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t gi : order) {
            const auto& g = groups[gi];
            RowVector& x_g = xi[gi];
            double sq = 0.0;
            for (int idx : g.indices) {
                r(idx) += x_g(idx);
                sq += r(idx) * r(idx);
            }
            const double cap = lambda * g.weight;
            const double nrm = std::sqrt(sq);
            const double scale = nrm > cap && nrm > 0.0 ? cap / nrm : 1.0;
            for (int idx : g.indices) {
                x_g(idx) = scale * r(idx);
                r(idx) -= x_g(idx);
            }
        }
        const double primal = prox_objective(r, x_tilde, lambda, penalty);
        // gap = lambda * Omega(r) - <x_tilde - r, r>; strong convexity (mu = 1)
        // turns it into the argument bound ||r - x*|| <= sqrt(2 * gap)
        const double gap =
            lambda * hvar::penalty_value(r, penalty) - (x_tilde - r).dot(r);
        if (gap <= tol || pass + 1 == max_passes) {
            result.x = r;
            result.objective = primal;
            result.gap = gap;
            break;
        }
    }
    return result;
}

/// Objective of the one-row problem (1/2)||Y_i - b Z||^2 + lambda * Omega(b).
inline double row_objective(const RowVector& b, const RowVector& Y_i, const Matrix& Z,
                            double lambda, const hvar::RowPenalty& penalty) {
    return 0.5 * (Y_i - b * Z).squaredNorm() + lambda * hvar::penalty_value(b, penalty);
}

/// Best objective found by a long projected-subgradient run with 1/sqrt(m)
/// steps from both the zero and the (min-norm) least-squares start.
inline double subgradient_best_objective(const RowVector& Y_i, const Matrix& Z, double lambda,
                                         const hvar::RowPenalty& penalty, int iterations = 60000) {
    const Matrix S = Z * Z.transpose();
    const RowVector g = Y_i * Z.transpose();
    const auto groups = flatten_groups(penalty);
    const double lip = hvar::detail::largest_eigenvalue_psd(S);
    const double alpha0 = 1.0 / (1.0 + lip);

    const Eigen::BDCSVD<Matrix> svd(Z.transpose(), Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RowVector b_ls = svd.solve(Y_i.transpose()).transpose();

    double best = std::numeric_limits<double>::infinity();
    for (const RowVector& start : {RowVector(RowVector::Zero(Z.rows())), b_ls}) {
        RowVector b = start;
        best = std::min(best, row_objective(b, Y_i, Z, lambda, penalty));
        for (int m = 1; m <= iterations; ++m) {
            RowVector sub = b * S - g;
            for (const auto& grp : groups) {
                double sq = 0.0;
                for (int idx : grp.indices) sq += b(idx) * b(idx);
                if (sq > 0.0) {
                    const double inv = lambda * grp.weight / std::sqrt(sq);
                    for (int idx : grp.indices) sub(idx) += inv * b(idx);
                }
            }
            b -= (alpha0 / std::sqrt(static_cast<double>(m))) * sub;
            const double f = row_objective(b, Y_i, Z, lambda, penalty);
            if (f < best) best = f;
        }
    }
    return best;
}

inline std::mt19937_64 seeded_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline Matrix random_matrix(int rows, int cols, std::mt19937_64& rng, double scale = 1.0) {
    std::normal_distribution<double> normal(0.0, scale);
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = normal(rng);
    return m;
}

inline RowVector random_row(int n, std::mt19937_64& rng, double scale = 1.0) {
    std::normal_distribution<double> normal(0.0, scale);
    RowVector v(n);
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = normal(rng);
    return v;
}

}  // namespace oracles
