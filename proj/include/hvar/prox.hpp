#pragma once

#include <cmath>
#include <vector>

#include "hvar/penalty.hpp"
#include "hvar/types.hpp"

namespace hvar {

/// sign(x) * max(|x| - t, 0).
inline double soft_threshold(double x, double t) {
    if (x > t) return x - t;
    if (x < -t) return x + t;
    return 0.0;
}

namespace detail {

// Single dual pass for one nested chain, in place. Levels run innermost to
// outermost; each level rescales its whole group, so a coordinate entering at
// level h ends up multiplied by the product of the factors of levels h..H.
// Group norms are tracked incrementally: after level h shrinks by f_h, the
// next group's norm^2 is f_h^2 * (previous) + (newly added coordinates)^2.
inline void prox_chain_inplace(Eigen::Ref<RowVector> x, double lambda,
                               const NestedGroupChain& chain, std::vector<double>& factor_buf) {
    const int H = chain.levels();
    factor_buf.resize(static_cast<std::size_t>(H));
    double sq = 0.0;
    for (int h = 0; h < H; ++h) {
        for (int idx : chain.added[static_cast<std::size_t>(h)]) sq += x(idx) * x(idx);
        const double thr = lambda * chain.weights[static_cast<std::size_t>(h)];
        double f = 1.0;
        if (thr > 0.0) {
            const double norm = std::sqrt(sq);
            f = norm > thr ? 1.0 - thr / norm : 0.0;  // zero-norm group stays zero
        }
        factor_buf[static_cast<std::size_t>(h)] = f;
        sq *= f * f;
    }
    double cum = 1.0;
    for (int h = H - 1; h >= 0; --h) {
        cum *= factor_buf[static_cast<std::size_t>(h)];
        if (cum == 1.0) continue;
        for (int idx : chain.added[static_cast<std::size_t>(h)])
            x(idx) = cum == 0.0 ? 0.0 : x(idx) * cum;
    }
}

}  // namespace detail

/// Exact minimizer of (1/2)||x - x_tilde||^2 + lambda * sum_h w_h ||x_{g_h}||_2
/// for one nested chain, by a single innermost-to-outermost pass of groupwise
/// soft-thresholding. lambda = 0 returns x_tilde unchanged.
inline RowVector prox_chain(const Eigen::Ref<const RowVector>& x_tilde, double lambda,
                            const NestedGroupChain& chain) {
    RowVector x = x_tilde;
    std::vector<double> buf;
    detail::prox_chain_inplace(x, lambda, chain, buf);
    return x;
}

/// Row prox: the penalty is a separable sum over chains with disjoint top
/// groups, so each chain is solved independently.
inline void prox_row_inplace(Eigen::Ref<RowVector> x, double lambda, const RowPenalty& penalty,
                             std::vector<double>& factor_buf) {
    for (const auto& chain : penalty.chains)
        detail::prox_chain_inplace(x, lambda, chain, factor_buf);
}

inline RowVector prox_row(const Eigen::Ref<const RowVector>& x_tilde, double lambda,
                          const RowPenalty& penalty) {
    if (x_tilde.size() != penalty.dim)
        throw std::invalid_argument("prox_row: vector length must equal kp");
    RowVector x = x_tilde;
    std::vector<double> buf;
    prox_row_inplace(x, lambda, penalty, buf);
    return x;
}

}  // namespace hvar
