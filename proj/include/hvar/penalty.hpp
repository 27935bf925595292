#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "hvar/types.hpp"

namespace hvar {

enum class PenaltyFamily { Componentwise, OwnOther, Elementwise, Lasso, LagWeightedLasso };

struct PenaltyKind {
    PenaltyFamily family = PenaltyFamily::Componentwise;
    double alpha = 0.0;  // lag-weighted lasso exponent, in [0,1]

    static PenaltyKind componentwise() { return {PenaltyFamily::Componentwise, 0.0}; }
    static PenaltyKind own_other() { return {PenaltyFamily::OwnOther, 0.0}; }
    static PenaltyKind elementwise() { return {PenaltyFamily::Elementwise, 0.0}; }
    static PenaltyKind lasso() { return {PenaltyFamily::Lasso, 0.0}; }
    static PenaltyKind lag_weighted_lasso(double alpha) {
        if (alpha < 0.0 || alpha > 1.0)
            throw std::invalid_argument("lag-weighted lasso: alpha must lie in [0,1]");
        return {PenaltyFamily::LagWeightedLasso, alpha};
    }

    bool hierarchical() const {
        return family == PenaltyFamily::Componentwise || family == PenaltyFamily::OwnOther ||
               family == PenaltyFamily::Elementwise;
    }

    std::string name() const {
        switch (family) {
            case PenaltyFamily::Componentwise: return "hvar-c";
            case PenaltyFamily::OwnOther: return "hvar-o";
            case PenaltyFamily::Elementwise: return "hvar-e";
            case PenaltyFamily::Lasso: return "lasso";
            case PenaltyFamily::LagWeightedLasso: return "lwlasso";
        }
        return "?";
    }
};

/// Parses the CLI penalty names: hvar-c | hvar-o | hvar-e | lasso | lwlasso:<alpha>.
inline PenaltyKind parse_penalty_kind(const std::string& s) {
    if (s == "hvar-c") return PenaltyKind::componentwise();
    if (s == "hvar-o") return PenaltyKind::own_other();
    if (s == "hvar-e") return PenaltyKind::elementwise();
    if (s == "lasso") return PenaltyKind::lasso();
    if (s.rfind("lwlasso:", 0) == 0) {
        std::size_t pos = 0;
        const std::string arg = s.substr(8);
        double alpha = 0.0;
        try {
            alpha = std::stod(arg, &pos);
        } catch (const std::exception&) {
            throw std::invalid_argument("unknown penalty '" + s + "'");
        }
        if (pos != arg.size()) throw std::invalid_argument("unknown penalty '" + s + "'");
        return PenaltyKind::lag_weighted_lasso(alpha);
    }
    throw std::invalid_argument("unknown penalty '" + s +
                                "' (expected hvar-c, hvar-o, hvar-e, lasso or lwlasso:<alpha>)");
}

/// One nested chain g_1 c g_2 c ... c g_H of coordinate groups, innermost
/// first, stored as the per-level increments g_h \ g_{h-1}. The single-pass
/// prox and penalty evaluation both walk levels in this order.
struct NestedGroupChain {
    std::vector<std::vector<int>> added;  // added[h] = g_{h+1} \ g_h, h 0-based
    std::vector<double> weights;          // w_1..w_H, all > 0

    int levels() const { return static_cast<int>(added.size()); }

    /// Materializes g_h (h 1-based) as a sorted index list.
    std::vector<int> group(int h) const {
        std::vector<int> g;
        for (int l = 0; l < h; ++l) g.insert(g.end(), added[l].begin(), added[l].end());
        std::sort(g.begin(), g.end());
        return g;
    }
};

/// All chains penalizing one row of B. Top-level groups are pairwise disjoint
/// and jointly cover the penalized coordinates, so the row prox separates.
struct RowPenalty {
    std::vector<NestedGroupChain> chains;
    PenaltyKind kind;
    int row_index = 0;  // 0-based i
    int dim = 0;        // kp
};

namespace detail {

inline void check_chain(const NestedGroupChain& c, int dim) {
    if (c.levels() < 1) throw std::invalid_argument("nested chain: needs at least one group");
    if (c.weights.size() != c.added.size())
        throw std::invalid_argument("nested chain: one weight per group required");
    std::vector<char> seen(static_cast<std::size_t>(dim), 0);
    for (int h = 0; h < c.levels(); ++h) {
        if (c.added[h].empty())
            throw std::invalid_argument("nested chain: nesting must be strict");
        if (c.weights[h] <= 0.0)
            throw std::invalid_argument("nested chain: weights must be positive");
        for (int idx : c.added[h]) {
            if (idx < 0 || idx >= dim) throw std::invalid_argument("nested chain: index out of range");
            if (seen[static_cast<std::size_t>(idx)])
                throw std::invalid_argument("nested chain: repeated index breaks nesting");
            seen[static_cast<std::size_t>(idx)] = 1;
        }
    }
}

}  // namespace detail

/// Validates nesting, index ranges and top-group disjointness across chains.
inline void validate_row_penalty(const RowPenalty& rp) {
    std::vector<char> used(static_cast<std::size_t>(rp.dim), 0);
    for (const auto& c : rp.chains) {
        detail::check_chain(c, rp.dim);
        for (const auto& level : c.added)
            for (int idx : level) {
                if (used[static_cast<std::size_t>(idx)])
                    throw std::invalid_argument("row penalty: chains overlap at coordinate " +
                                                std::to_string(idx));
                used[static_cast<std::size_t>(idx)] = 1;
            }
    }
}

/// HVAR-C penalty for row i: one chain with g_h = coordinates of
/// B_i^((p-h+1):p), unit weights. Innermost group is the lag-p block.
inline RowPenalty chain_componentwise(int i, int k, int p) {
    if (i < 0 || i >= k) throw std::invalid_argument("chain_componentwise: row index out of range");
    RowPenalty rp;
    rp.kind = PenaltyKind::componentwise();
    rp.row_index = i;
    rp.dim = k * p;
    NestedGroupChain c;
    for (int ell = p; ell >= 1; --ell) {
        std::vector<int> block(static_cast<std::size_t>(k));
        for (int j = 0; j < k; ++j) block[static_cast<std::size_t>(j)] = lag_coord(j, ell, k);
        c.added.push_back(std::move(block));
        c.weights.push_back(1.0);
    }
    rp.chains.push_back(std::move(c));
    return rp;
}

/// HVAR-O penalty for row i: one chain of 2p alternating groups. Walking
/// outward from lag p: {off-diagonal coords of lag ell, all later lags}, then
/// {all coords of lags >= ell}. Zeroing the group whose outermost new element
/// is B_ii^(ell) therefore forces B_{i,-i}^(ell+1) to zero, the own-other
/// hierarchy.
inline RowPenalty chain_own_other(int i, int k, int p) {
    if (i < 0 || i >= k) throw std::invalid_argument("chain_own_other: row index out of range");
    RowPenalty rp;
    rp.kind = PenaltyKind::own_other();
    rp.row_index = i;
    rp.dim = k * p;
    NestedGroupChain c;
    for (int ell = p; ell >= 1; --ell) {
        std::vector<int> off;
        off.reserve(static_cast<std::size_t>(k - 1));
        for (int j = 0; j < k; ++j)
            if (j != i) off.push_back(lag_coord(j, ell, k));
        if (!off.empty()) {
            c.added.push_back(std::move(off));
            c.weights.push_back(1.0);
        }
        c.added.push_back({lag_coord(i, ell, k)});
        c.weights.push_back(1.0);
    }
    rp.chains.push_back(std::move(c));
    return rp;
}

/// HVAR-E penalty for row i: k disjoint chains, one per source component j,
/// each with scalar suffix groups {B_ij^((p-h+1):p)}.
inline RowPenalty chains_elementwise(int i, int k, int p) {
    if (i < 0 || i >= k) throw std::invalid_argument("chains_elementwise: row index out of range");
    RowPenalty rp;
    rp.kind = PenaltyKind::elementwise();
    rp.row_index = i;
    rp.dim = k * p;
    for (int j = 0; j < k; ++j) {
        NestedGroupChain c;
        for (int ell = p; ell >= 1; --ell) {
            c.added.push_back({lag_coord(j, ell, k)});
            c.weights.push_back(1.0);
        }
        rp.chains.push_back(std::move(c));
    }
    return rp;
}

/// Lasso-family penalties as kp singleton chains; the lag-weighted variant
/// weights the lag-ell coordinate by ell^alpha. Unifies all five penalties
/// under the one chain-prox code path.
inline RowPenalty chains_lasso(int i, int k, int p, const PenaltyKind& kind) {
    RowPenalty rp;
    rp.kind = kind;
    rp.row_index = i;
    rp.dim = k * p;
    for (int ell = 1; ell <= p; ++ell) {
        const double w = kind.family == PenaltyFamily::LagWeightedLasso
                             ? std::pow(static_cast<double>(ell), kind.alpha)
                             : 1.0;
        for (int j = 0; j < k; ++j) {
            NestedGroupChain c;
            c.added.push_back({lag_coord(j, ell, k)});
            c.weights.push_back(w);
            rp.chains.push_back(std::move(c));
        }
    }
    return rp;
}

/// Penalty chains for row i under any PenaltyKind.
inline RowPenalty make_row_penalty(const PenaltyKind& kind, int i, int k, int p) {
    switch (kind.family) {
        case PenaltyFamily::Componentwise: return chain_componentwise(i, k, p);
        case PenaltyFamily::OwnOther: return chain_own_other(i, k, p);
        case PenaltyFamily::Elementwise: return chains_elementwise(i, k, p);
        case PenaltyFamily::Lasso:
        case PenaltyFamily::LagWeightedLasso: return chains_lasso(i, k, p, kind);
    }
    throw std::logic_error("make_row_penalty: unreachable");
}

/// Sum over chains and levels of w_h * ||x_{g_h}||_2.
inline double penalty_value(const Eigen::Ref<const RowVector>& x, const RowPenalty& penalty) {
    if (x.size() != penalty.dim)
        throw std::invalid_argument("penalty_value: vector length must equal kp");
    double total = 0.0;
    for (const auto& c : penalty.chains) {
        double sq = 0.0;
        for (int h = 0; h < c.levels(); ++h) {
            for (int idx : c.added[static_cast<std::size_t>(h)]) sq += x(idx) * x(idx);
            total += c.weights[static_cast<std::size_t>(h)] * std::sqrt(sq);
        }
    }
    return total;
}

}  // namespace hvar
