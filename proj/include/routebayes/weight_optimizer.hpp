#pragma once
// Maximizes P(A) = sum_i w_i L_i over the box-constrained simplex
//   { w : lower_i <= w_i <= upper_i, sum_i w_i = 1 }.
//
// The objective is linear, so the optimum sits at a vertex and a greedy fill
// in descending likelihood order is exact.

#include "routebayes/bayes_core.hpp"
#include "routebayes/error.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string_view>
#include <vector>

namespace routebayes {

// Slack allowed when checking sum(lower) <= 1 <= sum(upper).
inline constexpr double kFeasibilityTolerance = 1e-12;

struct BoxConstraints {
    std::vector<double> lower;
    std::vector<double> upper;

    static BoxConstraints unbounded(std::size_t n) { return {std::vector<double>(n, 0.0), std::vector<double>(n, 1.0)}; }

    std::size_t size() const noexcept { return lower.size(); }

    void validate() const {
        if (lower.size() != upper.size())
            throw Error(Errc::LengthMismatch, "lower and upper bounds differ in length");
        if (lower.empty()) throw Error(Errc::EmptyVector, "constraints are empty");
        double lo = 0.0;
        double hi = 0.0;
        for (std::size_t i = 0; i < lower.size(); ++i) {
            if (!(lower[i] >= 0.0 && lower[i] <= upper[i] && upper[i] <= 1.0))
                throw Error(Errc::InvalidBounds, "bounds for hypothesis " + std::to_string(i) + " violate 0 <= lower <= upper <= 1")
                    .at_index(i);
            lo += lower[i];
            hi += upper[i];
        }
        if (lo > 1.0 + kFeasibilityTolerance)
            throw Error(Errc::InfeasibleConstraints, "sum of lower bounds exceeds 1").with_value(lo);
        if (hi < 1.0 - kFeasibilityTolerance)
            throw Error(Errc::InfeasibleConstraints, "sum of upper bounds is below 1").with_value(hi);
    }

    bool operator==(const BoxConstraints&) const = default;
};

enum class BoundState : std::uint8_t { AtLower, AtUpper, Interior };

constexpr std::string_view to_string(BoundState s) noexcept {
    switch (s) {
        case BoundState::AtLower: return "at_lower";
        case BoundState::AtUpper: return "at_upper";
        case BoundState::Interior: return "interior";
    }
    return "interior";
}

struct OptimizationResult {
    WeightVector weights;
    double objective = 0.0;
    std::vector<BoundState> active_bounds;
};

inline OptimizationResult optimize_weights(const LikelihoodVector& likelihoods, const BoxConstraints& constraints) {
    constraints.validate();
    const std::size_t n = likelihoods.size();
    if (constraints.size() != n)
        throw Error(Errc::LengthMismatch, "constraints have " + std::to_string(constraints.size()) +
                                              " entries, likelihoods " + std::to_string(n));

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return likelihoods[a] > likelihoods[b]; });

    std::vector<double> w(constraints.lower);
    double remaining = 1.0;
    for (double lo : constraints.lower) remaining -= lo;

    std::vector<BoundState> state(n, BoundState::AtLower);
    for (std::size_t i : order) {
        if (remaining <= 0.0) break;
        const double room = constraints.upper[i] - constraints.lower[i];
        if (room <= 0.0) continue;
        if (room <= remaining) {
            w[i] = constraints.upper[i];
            state[i] = BoundState::AtUpper;
            remaining -= room;
        } else {
            w[i] += remaining;
            state[i] = BoundState::Interior;
            remaining = 0.0;
        }
    }

    // Absorbs the round-off left by the greedy fill (bounded by kFeasibilityTolerance).
    WeightVector weights = WeightVector::from_simplex(w, kSimplexTolerance);
    const double objective = total_probability(weights, likelihoods);
    return {std::move(weights), objective, std::move(state)};
}

// Gradient of P(A) with respect to the weights. Because the objective is
// linear, moving mass eps from hypothesis j to hypothesis i changes P(A) by
// exactly eps * (L_i - L_j); see transfer_gain().
inline std::vector<double> sensitivity(const WeightVector& weights, const LikelihoodVector& likelihoods) {
    detail::require_same_length(weights.size(), likelihoods.size());
    return {likelihoods.values().begin(), likelihoods.values().end()};
}

// Change in P(A) per unit of mass moved from hypothesis `from` to hypothesis `to`.
inline double transfer_gain(std::span<const double> gradient, std::size_t from, std::size_t to) {
    return gradient[to] - gradient[from];
}

}  // namespace routebayes
