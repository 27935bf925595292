#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hvar {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

/// k x k integer matrix of elementwise maximal lags; L(i,j) = 0 means the
/// (i,j) coefficient vector is identically zero.
using MaxlagMatrix = Eigen::MatrixXi;

/// Multivariate series: column t of `values` is the observation y_t.
/// The first p columns act as presample when a lag design of order p is built.
struct TimeSeriesPanel {
    Matrix values;  // k x total_length
    std::vector<std::string> component_names;

    TimeSeriesPanel() = default;
    explicit TimeSeriesPanel(Matrix v) : values(std::move(v)) {
        component_names.reserve(static_cast<std::size_t>(values.rows()));
        for (Eigen::Index i = 0; i < values.rows(); ++i)
            component_names.push_back("y" + std::to_string(i + 1));
    }
    TimeSeriesPanel(Matrix v, std::vector<std::string> names)
        : values(std::move(v)), component_names(std::move(names)) {
        if (static_cast<Eigen::Index>(component_names.size()) != values.rows())
            throw std::invalid_argument("TimeSeriesPanel: need one name per component");
    }

    int k() const { return static_cast<int>(values.rows()); }
    int total_length() const { return static_cast<int>(values.cols()); }
};

/// Response/regressor pair of a VAR regression. Column t of Z stacks the p
/// lags of the response column t, newest lag first.
struct LagDesign {
    Matrix Y;  // k x T
    Matrix Z;  // kp x T
    int p = 0;
    Vector row_means_Y;  // k, filled by center()
    Vector row_means_Z;  // kp
    bool centered = false;

    int k() const { return static_cast<int>(Y.rows()); }
    int T() const { return static_cast<int>(Y.cols()); }
};

/// Coefficient index layout shared by LagDesign::Z, CoefficientTensor rows and
/// all penalty groups: coordinate (ell-1)*k + j holds B_ij^(ell) for 0-based
/// component j and 1-based lag ell.
inline int lag_coord(int j, int ell, int k) { return (ell - 1) * k + j; }

/// VAR coefficients B (k x k x p, stored as the k x kp matrix acting on a
/// stacked-lag vector) together with the intercept.
struct CoefficientTensor {
    Matrix coef;       // k x kp, row i = B_i
    Vector intercept;  // k
    int p = 0;

    CoefficientTensor() = default;
    CoefficientTensor(Matrix c, Vector nu, int lag_order)
        : coef(std::move(c)), intercept(std::move(nu)), p(lag_order) {
        if (p < 1) throw std::invalid_argument("CoefficientTensor: p must be >= 1");
        if (coef.cols() != static_cast<Eigen::Index>(coef.rows()) * p)
            throw std::invalid_argument("CoefficientTensor: coef must be k x k*p");
        if (intercept.size() != coef.rows())
            throw std::invalid_argument("CoefficientTensor: intercept size mismatch");
    }

    static CoefficientTensor zero(int k, int p) {
        return CoefficientTensor(Matrix::Zero(k, static_cast<Eigen::Index>(k) * p),
                                 Vector::Zero(k), p);
    }

    int k() const { return static_cast<int>(coef.rows()); }

    double at(int i, int j, int ell) const { return coef(i, lag_coord(j, ell, k())); }
    double& at(int i, int j, int ell) { return coef(i, lag_coord(j, ell, k())); }

    /// The k x k matrix B^(ell).
    Eigen::Block<const Matrix> lag(int ell) const {
        return coef.block(0, static_cast<Eigen::Index>(ell - 1) * k(), k(), k());
    }
};

}  // namespace hvar
