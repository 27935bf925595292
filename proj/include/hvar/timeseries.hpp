#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "hvar/types.hpp"

namespace hvar {

/// Builds the (Y, Z) regression pair of lag order p from a panel. Column t of
/// Z is [y_{t-1}' ... y_{t-p}']' relative to the response column t of Y; the
/// first p panel columns are consumed as presample.
inline LagDesign build_lag_design(const TimeSeriesPanel& panel, int p) {
    if (p < 1) throw std::invalid_argument("build_lag_design: p must be >= 1");
    const int k = panel.k();
    const int n = panel.total_length();
    if (n <= p)
        throw std::invalid_argument("build_lag_design: series too short, need more than p=" +
                                    std::to_string(p) + " observations, got " +
                                    std::to_string(n));
    const int T = n - p;
    LagDesign d;
    d.p = p;
    d.Y = panel.values.rightCols(T);
    d.Z.resize(static_cast<Eigen::Index>(k) * p, T);
    for (int t = 0; t < T; ++t)
        for (int ell = 1; ell <= p; ++ell)
            d.Z.col(t).segment(static_cast<Eigen::Index>(ell - 1) * k, k) =
                panel.values.col(p + t - ell);
    return d;
}

/// Removes row means from Y and Z, storing them for intercept recovery.
/// Idempotent: a centered design is returned unchanged.
inline LagDesign center(const LagDesign& design) {
    if (design.centered) return design;
    LagDesign d = design;
    d.row_means_Y = d.Y.rowwise().mean();
    d.row_means_Z = d.Z.rowwise().mean();
    d.Y.colwise() -= d.row_means_Y;
    d.Z.colwise() -= d.row_means_Z;
    d.centered = true;
    return d;
}

/// Per-component affine transform recorded by standardize().
struct ScaleRecord {
    Vector mean;
    Vector sdev;  // sample standard deviation, n-1 denominator
};

struct StandardizedPanel {
    TimeSeriesPanel panel;
    ScaleRecord scale;
};

/// Rescales every component to sample mean 0 and sample variance 1
/// (unbiased n-1 denominator, so destandardize() round-trips exactly).
inline StandardizedPanel standardize(const TimeSeriesPanel& panel) {
    const int n = panel.total_length();
    if (n < 2) throw std::invalid_argument("standardize: need at least 2 time points");
    StandardizedPanel out;
    out.panel = panel;
    out.scale.mean = panel.values.rowwise().mean();
    out.scale.sdev.resize(panel.k());
    for (int i = 0; i < panel.k(); ++i) {
        const double ss = (panel.values.row(i).array() - out.scale.mean(i)).square().sum();
        const double var = ss / (n - 1);
        if (var <= 0.0)
            throw std::invalid_argument("standardize: component '" + panel.component_names[i] +
                                        "' has zero sample variance");
        out.scale.sdev(i) = std::sqrt(var);
        out.panel.values.row(i) =
            (panel.values.row(i).array() - out.scale.mean(i)) / out.scale.sdev(i);
    }
    return out;
}

inline TimeSeriesPanel destandardize(const TimeSeriesPanel& panel, const ScaleRecord& scale) {
    TimeSeriesPanel out = panel;
    for (int i = 0; i < panel.k(); ++i)
        out.values.row(i) = panel.values.row(i).array() * scale.sdev(i) + scale.mean(i);
    return out;
}

inline Vector destandardize(const Vector& y, const ScaleRecord& scale) {
    return (y.array() * scale.sdev.array() + scale.mean.array()).matrix();
}

/// Intercept implied by a coefficient matrix fit on centered data:
/// nu = mean(Y rows) - B * mean(Z rows). Forecasts with (nu, B) on raw data
/// then match forecasts computed entirely in centered coordinates.
inline Vector recover_intercept(const Matrix& coef, const LagDesign& design) {
    if (!design.centered)
        throw std::invalid_argument("recover_intercept: design carries no stored row means");
    if (coef.rows() != design.Y.rows() || coef.cols() != design.Z.rows())
        throw std::invalid_argument("recover_intercept: coefficient dimensions do not match design");
    return design.row_means_Y - coef * design.row_means_Z;
}

/// L_ij = largest ell with |B_ij^(ell)| > zero_tol, 0 if none. The proximal
/// solver produces exact zeros, so the default tolerance is 0.
inline MaxlagMatrix maxlag_of(const CoefficientTensor& B, double zero_tol = 0.0) {
    if (zero_tol < 0.0) throw std::invalid_argument("maxlag_of: zero_tol must be >= 0");
    const int k = B.k();
    MaxlagMatrix L = MaxlagMatrix::Zero(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            for (int ell = B.p; ell >= 1; --ell)
                if (std::abs(B.at(i, j, ell)) > zero_tol) {
                    L(i, j) = ell;
                    break;
                }
    return L;
}

}  // namespace hvar
