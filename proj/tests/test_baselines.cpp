#include <catch2/catch_amalgamated.hpp>

#include "hvar/baselines.hpp"
#include "hvar/simulation.hpp"
#include "support/oracles.hpp"

using namespace hvar;

TEST_CASE("least squares VAR") {
    SECTION("ell = 0 is the intercept-only model") {
        auto rng = oracles::seeded_rng(61);
        const TimeSeriesPanel panel(oracles::random_matrix(3, 25, rng));
        const CoefficientTensor B = least_squares_var(panel, 0);
        REQUIRE(B.coef.isZero(0.0));
        REQUIRE((B.intercept - panel.values.rowwise().mean()).cwiseAbs().maxCoeff() < 1e-14);
    }
    SECTION("univariate AR(1) consistency") {
        CoefficientTensor truth = CoefficientTensor::zero(1, 1);
        truth.coef(0, 0) = 0.5;
        const TimeSeriesPanel panel = simulate_var(truth, 0.1, 10000, 500, 99);
        const CoefficientTensor B = least_squares_var(panel, 1);
        REQUIRE(B.coef(0, 0) > 0.45);
        REQUIRE(B.coef(0, 0) < 0.55);
    }
    SECTION("residuals are orthogonal to the regressors") {
        auto rng = oracles::seeded_rng(62);
        const TimeSeriesPanel panel(oracles::random_matrix(2, 40, rng));
        const CoefficientTensor B = least_squares_var(panel, 2);
        const LagDesign d = build_lag_design(panel, 2);
        const Matrix resid =
            d.Y - B.intercept * Matrix::Ones(1, d.T()) - B.coef * d.Z;
        REQUIRE((resid * d.Z.transpose()).cwiseAbs().maxCoeff() < 1e-8);
    }
    SECTION("k*ell > T is rejected") {
        auto rng = oracles::seeded_rng(63);
        const TimeSeriesPanel panel(oracles::random_matrix(4, 10, rng));
        REQUIRE_THROWS_AS(least_squares_var(panel, 3), std::invalid_argument);
    }
    SECTION("collinear components give a singular-Gram error") {
        auto rng = oracles::seeded_rng(64);
        Matrix v = oracles::random_matrix(2, 30, rng);
        v.row(1) = 2.0 * v.row(0);
        REQUIRE_THROWS_WITH(least_squares_var(TimeSeriesPanel(v), 1),
                            Catch::Matchers::ContainsSubstring("singular"));
    }
}

TEST_CASE("aic") {
    SECTION("plug-in values") {
        REQUIRE(aic(Matrix::Identity(1, 1), 0, 1, 50) == 0.0);
        REQUIRE(aic(Matrix::Identity(2, 2), 3, 2, 100) == Catch::Approx(0.24));
    }
    SECTION("non positive definite covariance is rejected") {
        Matrix bad(2, 2);
        bad << 1, 2, 2, 1;
        REQUIRE_THROWS_AS(aic(bad, 1, 2, 50), std::runtime_error);
    }
    SECTION("recovers the true order of a strong VAR(2) signal") {
        int hits = 0;
        const int reps = 50;
        for (int rep = 0; rep < reps; ++rep) {
            MaxlagMatrix L = MaxlagMatrix::Constant(2, 2, 2);
            const CoefficientTensor truth =
                generate_coefficients(L, 1000 + rep, 0.9, 0.0);
            const TimeSeriesPanel panel =
                simulate_var(truth, 0.1, 2000, 500, 2000 + rep);
            const AicSelection sel = aic_select_var(panel, 4);
            if (sel.ell == 2) ++hits;
            REQUIRE(sel.ell <= 4);
            REQUIRE(2 * sel.ell <= panel.total_length() - 4);
        }
        REQUIRE(hits >= 45);
    }
}

TEST_CASE("lasso family") {
    const auto make_design = [](std::uint64_t seed) {
        auto rng = oracles::seeded_rng(seed);
        return center(build_lag_design(TimeSeriesPanel(oracles::random_matrix(2, 34, rng)), 2));
    };
    FitConfig tight;
    tight.epsilon = 1e-12;
    tight.max_iter = 100000;

    SECTION("alpha = 0 lag weighting equals the plain lasso everywhere") {
        const LagDesign design = make_design(71);
        const auto grid = lambda_grid(design, PenaltyKind::lasso(), 6, 1e-3);
        const FitResult plain = lasso_fit(design, grid, tight);
        const FitResult weighted = lag_weighted_lasso_fit(design, grid, 0.0, tight);
        for (std::size_t g = 0; g < grid.size(); ++g)
            REQUIRE(plain.models[g].coef == weighted.models[g].coef);
    }
    SECTION("lambda = 0 recovers least squares") {
        const LagDesign design = make_design(72);
        const Matrix S = design.Z * design.Z.transpose();
        const Matrix ls = S.ldlt().solve(design.Z * design.Y.transpose()).transpose();
        const FitResult res = lasso_fit(design, {0.0}, tight);
        REQUIRE((res.models.front().coef - ls).cwiseAbs().maxCoeff() < 1e-6);
    }
    SECTION("univariate closed form: soft-thresholded regression") {
        auto rng = oracles::seeded_rng(73);
        const LagDesign design =
            center(build_lag_design(TimeSeriesPanel(oracles::random_matrix(1, 41, rng)), 1));
        const double zz = design.Z.row(0).squaredNorm();
        const double zy = design.Z.row(0).dot(design.Y.row(0));
        for (double lambda : {0.1, 1.0, 5.0, std::abs(zy) * 1.01}) {
            const FitResult res = lasso_fit(design, {lambda}, tight);
            const double expected = soft_threshold(zy, lambda) / zz;
            REQUIRE(res.models.front().coef(0, 0) == Catch::Approx(expected).margin(1e-8));
        }
    }
    SECTION("KKT conditions at the solution") {
        const LagDesign design = make_design(74);
        for (double alpha : {0.0, 0.5}) {
            const PenaltyKind kind =
                alpha == 0.0 ? PenaltyKind::lasso() : PenaltyKind::lag_weighted_lasso(alpha);
            const auto grid = lambda_grid(design, kind, 5, 1e-2);
            const double lambda = grid[2];
            const FitResult res = fit(design, kind, {lambda}, tight);
            const Matrix& coef = res.models.front().coef;
            const Matrix grad = coef * (design.Z * design.Z.transpose()) -
                                design.Y * design.Z.transpose();
            for (int i = 0; i < 2; ++i)
                for (int c = 0; c < 4; ++c) {
                    const int ell = c / 2 + 1;
                    const double w = std::pow(static_cast<double>(ell), alpha);
                    if (coef(i, c) == 0.0)
                        REQUIRE(std::abs(grad(i, c)) <= lambda * w + 1e-6);
                    else
                        REQUIRE(grad(i, c) + lambda * w * (coef(i, c) > 0 ? 1.0 : -1.0) ==
                                Catch::Approx(0.0).margin(1e-6));
                }
        }
    }
}

TEST_CASE("naive forecasts") {
    SECTION("constant series") {
        const TimeSeriesPanel panel(Matrix::Constant(2, 10, 3.25));
        REQUIRE(forecast_sample_mean(panel, 7)(0) == 3.25);
        REQUIRE(forecast_random_walk(panel, 7)(1) == 3.25);
    }
    SECTION("1,2,3 example") {
        Matrix v(1, 3);
        v << 1, 2, 3;
        const TimeSeriesPanel panel(v);
        REQUIRE(forecast_sample_mean(panel, 3)(0) == 2.0);
        REQUIRE(forecast_random_walk(panel, 3)(0) == 3.0);
    }
    SECTION("random-walk error on iid data has MSFE near 2 sigma^2") {
        const double sigma = 0.3;
        CoefficientTensor zero = CoefficientTensor::zero(1, 1);
        const TimeSeriesPanel panel = simulate_var(zero, sigma, 10000, 10, 7);
        double total = 0.0;
        int count = 0;
        for (int t = 1; t < panel.total_length(); ++t) {
            const double err = panel.values(0, t) - forecast_random_walk(panel, t)(0);
            total += err * err;
            ++count;
        }
        REQUIRE(total / count == Catch::Approx(2 * sigma * sigma).epsilon(0.10));
    }
}

TEST_CASE("ridge refit") {
    auto rng = oracles::seeded_rng(81);
    const LagDesign design =
        center(build_lag_design(TimeSeriesPanel(oracles::random_matrix(2, 44, rng)), 2));

    SECTION("empty support stays zero") {
        const std::vector<std::vector<char>> mask(2, std::vector<char>(4, 0));
        const CoefficientTensor B = ridge_refit(design, mask);
        REQUIRE(B.coef.isZero(0.0));
    }
    SECTION("full support with vanishing penalty approaches least squares") {
        const std::vector<std::vector<char>> mask(2, std::vector<char>(4, 1));
        const Matrix S = design.Z * design.Z.transpose();
        const Matrix ls = S.ldlt().solve(design.Z * design.Y.transpose()).transpose();
        const CoefficientTensor B = ridge_refit(design, mask, 1e-8);
        REQUIRE((B.coef - ls).cwiseAbs().maxCoeff() < 1e-4);
    }
    SECTION("support and maxlag pattern are preserved exactly") {
        std::vector<std::vector<char>> mask(2, std::vector<char>(4, 0));
        mask[0][0] = mask[0][3] = mask[1][1] = 1;
        const CoefficientTensor B = ridge_refit(design, mask);
        for (int i = 0; i < 2; ++i)
            for (int c = 0; c < 4; ++c) {
                if (!mask[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)])
                    REQUIRE(B.coef(i, c) == 0.0);
                else
                    REQUIRE(B.coef(i, c) != 0.0);
            }
    }
}
