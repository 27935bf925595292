#include <catch2/catch_amalgamated.hpp>

#include "hvar/prox.hpp"
#include "support/oracles.hpp"

using namespace hvar;

namespace {

const std::vector<PenaltyKind> kAllKinds = {
    PenaltyKind::componentwise(), PenaltyKind::own_other(), PenaltyKind::elementwise(),
    PenaltyKind::lasso(), PenaltyKind::lag_weighted_lasso(0.5)};

}  // namespace

TEST_CASE("soft threshold") {
    REQUIRE(soft_threshold(5, 2) == 3.0);
    REQUIRE(soft_threshold(-1, 2) == 0.0);
    REQUIRE(soft_threshold(-3.5, 2) == -1.5);
    REQUIRE(soft_threshold(0.7, 0) == 0.7);
}

TEST_CASE("prox_chain closed forms") {
    NestedGroupChain single;
    single.added = {{0, 1}};
    single.weights = {1.0};

    SECTION("lambda = 0 is the identity") {
        RowVector x(2);
        x << 3, 4;
        REQUIRE(prox_chain(x, 0.0, single) == x);
    }
    SECTION("one group, interior shrink") {
        RowVector x(2);
        x << 3, 4;
        const RowVector out = prox_chain(x, 2.5, single);
        REQUIRE(out(0) == Catch::Approx(1.5));
        REQUIRE(out(1) == Catch::Approx(2.0));
        // subgradient optimality: x - out = lambda * out/||out||
        const RowVector residual = x - out;
        const RowVector expected = 2.5 * out / out.norm();
        REQUIRE((residual - expected).norm() < 1e-12);
    }
    SECTION("threshold equal to the norm zeroes the group") {
        RowVector x(2);
        x << 3, 4;
        REQUIRE(prox_chain(x, 5.0, single).isZero(0.0));
    }
    SECTION("two nested groups match the spec walk-through") {
        NestedGroupChain chain;
        chain.added = {{1}, {0}};
        chain.weights = {1.0, 1.0};
        RowVector x(2);
        x << 3, 4;
        const RowVector out = prox_chain(x, 1.0, chain);
        const double expected = 3.0 * (1.0 - 1.0 / std::sqrt(18.0));
        REQUIRE(out(0) == Catch::Approx(expected).margin(1e-12));
        REQUIRE(out(1) == Catch::Approx(expected).margin(1e-12));
        // independent certificate
        RowPenalty rp;
        rp.dim = 2;
        rp.chains = {chain};
        const auto oracle = oracles::prox_oracle(x, 1.0, rp);
        REQUIRE(oracle.gap < 1e-10);
        REQUIRE((out - oracle.x).norm() < 1e-8);
    }
    SECTION("zero-norm group with positive threshold stays zero without dividing") {
        NestedGroupChain chain;
        chain.added = {{0}, {1}};
        chain.weights = {1.0, 1.0};
        RowVector x(2);
        x << 0, 2;
        const RowVector out = prox_chain(x, 0.5, chain);
        REQUIRE(out(0) == 0.0);
        REQUIRE(std::isfinite(out(1)));
    }
}

TEST_CASE("prox_row separates across chains and is certified optimal") {
    auto rng = oracles::seeded_rng(31);
    SECTION("lambda = 0 identity") {
        const RowPenalty rp = make_row_penalty(PenaltyKind::own_other(), 0, 2, 2);
        const RowVector x = oracles::random_row(4, rng);
        REQUIRE(prox_row(x, 0.0, rp) == x);
    }
    SECTION("elementwise output equals per-chain prox") {
        const int k = 3, p = 2;
        const RowPenalty rp = make_row_penalty(PenaltyKind::elementwise(), 0, k, p);
        const RowVector x = oracles::random_row(k * p, rng);
        const RowVector out = prox_row(x, 0.8, rp);
        for (const auto& chain : rp.chains) {
            const RowVector solo = prox_chain(x, 0.8, chain);
            for (const auto& level : chain.added)
                for (int idx : level) REQUIRE(out(idx) == solo(idx));
        }
    }
    SECTION("output beats random perturbations and carries a dual certificate") {
        const int k = 2, p = 2;
        std::normal_distribution<double> noise(0.0, 1e-3);
        for (const auto& kind : kAllKinds) {
            const RowPenalty rp = make_row_penalty(kind, 1, k, p);
            const RowVector x = oracles::random_row(k * p, rng, 2.0);
            const double lambda = 0.6;
            const RowVector out = prox_row(x, lambda, rp);
            const double f_out = oracles::prox_objective(out, x, lambda, rp);
            for (int trial = 0; trial < 10000; ++trial) {
                RowVector perturbed = out;
                for (Eigen::Index c = 0; c < perturbed.size(); ++c) perturbed(c) += noise(rng);
                REQUIRE(oracles::prox_objective(perturbed, x, lambda, rp) >= f_out - 1e-12);
            }
            const auto oracle = oracles::prox_oracle(x, lambda, rp);
            REQUIRE(oracle.gap < 1e-10);
            REQUIRE(f_out <= oracle.objective + 1e-8);
        }
    }
}

TEST_CASE("prox properties") {
    auto rng = oracles::seeded_rng(32);
    SECTION("non-expansiveness") {
        const int k = 3, p = 3;
        for (const auto& kind : kAllKinds) {
            const RowPenalty rp = make_row_penalty(kind, 2, k, p);
            for (int trial = 0; trial < 50; ++trial) {
                const RowVector u = oracles::random_row(k * p, rng, 2.0);
                const RowVector v = oracles::random_row(k * p, rng, 2.0);
                const double lambda = 0.1 + 0.5 * trial / 50.0;
                const double lhs = (prox_row(u, lambda, rp) - prox_row(v, lambda, rp)).norm();
                REQUIRE(lhs <= (u - v).norm() + 1e-12);
            }
        }
    }
    SECTION("zero lag block forces all later lag blocks to zero") {
        const int k = 2, p = 4;
        for (const auto& kind :
             {PenaltyKind::componentwise(), PenaltyKind::own_other(), PenaltyKind::elementwise()}) {
            const RowPenalty rp = make_row_penalty(kind, 0, k, p);
            for (int trial = 0; trial < 200; ++trial) {
                const RowVector x = oracles::random_row(k * p, rng, 1.5);
                const double lambda = 0.05 * trial;
                const RowVector out = prox_row(x, lambda, rp);
                if (kind.family == PenaltyFamily::Elementwise) {
                    for (int j = 0; j < k; ++j)
                        for (int ell = 1; ell < p; ++ell)
                            if (out(lag_coord(j, ell, k)) == 0.0)
                                for (int later = ell + 1; later <= p; ++later)
                                    REQUIRE(out(lag_coord(j, later, k)) == 0.0);
                } else {
                    for (int ell = 1; ell < p; ++ell) {
                        bool block_zero = true;
                        for (int j = 0; j < k; ++j)
                            if (out(lag_coord(j, ell, k)) != 0.0) block_zero = false;
                        if (block_zero)
                            for (int later = ell + 1; later <= p; ++later)
                                for (int j = 0; j < k; ++j)
                                    REQUIRE(out(lag_coord(j, later, k)) == 0.0);
                    }
                }
            }
        }
    }
    SECTION("exactness against the certified oracle on small instances") {
        for (const auto& kind : kAllKinds) {
            for (int trial = 0; trial < 60; ++trial) {
                const int k = 1 + static_cast<int>(rng() % 3);
                const int p = 1 + static_cast<int>(rng() % 2);
                const RowPenalty rp = make_row_penalty(kind, k - 1, k, p);
                const RowVector x = oracles::random_row(k * p, rng);
                const double lambda = 0.05 + 1.5 * (trial / 60.0);
                const RowVector out = prox_row(x, lambda, rp);
                const auto oracle = oracles::prox_oracle(x, lambda, rp);
                REQUIRE(oracle.gap < 1e-12);
                REQUIRE((out - oracle.x).norm() < 1e-6);
            }
        }
    }
    SECTION("support is non-increasing along a growing lambda grid") {
        const int k = 2, p = 3;
        for (const auto& kind : kAllKinds) {
            const RowPenalty rp = make_row_penalty(kind, 0, k, p);
            const RowVector x = oracles::random_row(k * p, rng, 2.0);
            std::vector<char> prev_zero(static_cast<std::size_t>(k * p), 0);
            for (double lambda = 0.0; lambda < 4.0; lambda += 0.1) {
                const RowVector out = prox_row(x, lambda, rp);
                for (int c = 0; c < k * p; ++c) {
                    if (prev_zero[static_cast<std::size_t>(c)])
                        REQUIRE(out(c) == 0.0);
                    if (out(c) == 0.0) prev_zero[static_cast<std::size_t>(c)] = 1;
                }
            }
        }
    }
}
