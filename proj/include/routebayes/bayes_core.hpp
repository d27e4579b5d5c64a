#pragma once
// Total probability of an outcome over a hypothesis partition, and posterior
// attribution of that outcome back to each hypothesis.
//
//   P(A)      = sum_i P(H_i) * P(A | H_i)
//   P(H_i|A)  = P(H_i) * P(A | H_i) / P(A)
//
// Every reduction runs in hypothesis order so results are bit-reproducible.

#include "routebayes/error.hpp"

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

namespace routebayes {

inline constexpr double kSimplexTolerance = 1e-9;

struct Hypothesis {
    std::string id;
    std::string label;
    std::string description;

    bool operator==(const Hypothesis&) const = default;
};

// Ordered partition of profitability drivers. The hypotheses are assumed to
// be pairwise disjoint and exhaustive; only id uniqueness can be checked.
class HypothesisSet {
public:
    explicit HypothesisSet(std::vector<Hypothesis> hypotheses) : items_(std::move(hypotheses)) {
        if (items_.empty()) throw Error(Errc::EmptyHypothesisSet, "hypothesis set must contain at least one hypothesis");
        std::unordered_set<std::string> seen;
        for (std::size_t i = 0; i < items_.size(); ++i) {
            if (items_[i].id.empty())
                throw Error(Errc::EmptyHypothesisId, "hypothesis id is empty").at_index(i);
            if (!seen.insert(items_[i].id).second)
                throw Error(Errc::DuplicateHypothesisId, "duplicate hypothesis id '" + items_[i].id + "'").at_index(i);
        }
    }

    std::size_t size() const noexcept { return items_.size(); }
    const Hypothesis& operator[](std::size_t i) const { return items_[i]; }
    const std::vector<Hypothesis>& items() const noexcept { return items_; }
    auto begin() const noexcept { return items_.begin(); }
    auto end() const noexcept { return items_.end(); }

    bool operator==(const HypothesisSet&) const = default;

private:
    std::vector<Hypothesis> items_;
};

// The three profitability components: customer service, capital that is tied
// up and therefore unavailable, and costs.
inline HypothesisSet default_hypotheses() {
    return HypothesisSet({
        {"customer_service", "Customer service", "Service quality offered on the route"},
        {"unavailable_capital", "Unavailable capital", "Capital tied up by operating the route"},
        {"costs", "Costs", "Operating cost position of the route"},
    });
}

// Prior weights P(H_i): a point on the probability simplex.
class WeightVector {
public:
    // Accepts raw nonnegative weights whose sum is within `tolerance` of 1 and
    // renormalizes them to sum to 1. Order is preserved.
    static WeightVector from_simplex(std::span<const double> raw, double tolerance = kSimplexTolerance) {
        if (raw.empty()) throw Error(Errc::EmptyVector, "weight vector is empty");
        double sum = 0.0;
        for (std::size_t i = 0; i < raw.size(); ++i) {
            if (!std::isfinite(raw[i]))
                throw Error(Errc::NonFiniteEntry, "weight " + std::to_string(i) + " is not finite").at_index(i);
            if (raw[i] < 0.0)
                throw Error(Errc::NegativeEntry, "weight " + std::to_string(i) + " is negative").at_index(i).with_value(raw[i]);
            sum += raw[i];
        }
        if (!(std::abs(sum - 1.0) <= tolerance))
            throw Error(Errc::SumOutOfTolerance, "weights sum to " + std::to_string(sum) + ", expected 1").with_value(sum);
        std::vector<double> values(raw.begin(), raw.end());
        if (sum != 1.0)
            for (double& v : values) v /= sum;
        return WeightVector(std::move(values));
    }

    static WeightVector uniform(std::size_t n) {
        if (n == 0) throw Error(Errc::EmptyVector, "weight vector is empty");
        const std::vector<double> raw(n, 1.0 / static_cast<double>(n));
        return from_simplex(raw);
    }

    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    std::span<const double> values() const noexcept { return values_; }
    bool operator==(const WeightVector&) const = default;

private:
    explicit WeightVector(std::vector<double> v) : values_(std::move(v)) {}
    std::vector<double> values_;
};

inline WeightVector validate_simplex(std::span<const double> raw, double tolerance = kSimplexTolerance) {
    return WeightVector::from_simplex(raw, tolerance);
}

// Conditional probabilities P(A | H_i). Each value lies in [0,1]; there is no
// sum constraint.
class LikelihoodVector {
public:
    explicit LikelihoodVector(std::vector<double> values) : values_(std::move(values)) {
        if (values_.empty()) throw Error(Errc::EmptyVector, "likelihood vector is empty");
        for (std::size_t i = 0; i < values_.size(); ++i) {
            const double v = values_[i];
            if (!std::isfinite(v))
                throw Error(Errc::NonFiniteEntry, "likelihood " + std::to_string(i) + " is not finite").at_index(i);
            if (v < 0.0 || v > 1.0)
                throw Error(Errc::LikelihoodOutOfRange, "likelihood " + std::to_string(i) + " outside [0,1]")
                    .at_index(i)
                    .with_value(v);
        }
    }
    LikelihoodVector(std::initializer_list<double> values) : LikelihoodVector(std::vector<double>(values)) {}

    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    std::span<const double> values() const noexcept { return values_; }
    bool operator==(const LikelihoodVector&) const = default;

private:
    std::vector<double> values_;
};

struct Evaluation {
    double total_probability = 0.0;     // P(A)
    std::vector<double> contributions;  // P(H_i) * P(A|H_i)
    std::vector<double> posterior;      // P(H_i | A)

    bool operator==(const Evaluation&) const = default;
};

namespace detail {
inline void require_same_length(std::size_t weights, std::size_t likelihoods) {
    if (weights != likelihoods)
        throw Error(Errc::LengthMismatch,
                    "weights have " + std::to_string(weights) + " entries, likelihoods " + std::to_string(likelihoods));
}
}  // namespace detail

inline double total_probability(const WeightVector& weights, const LikelihoodVector& likelihoods) {
    detail::require_same_length(weights.size(), likelihoods.size());
    double total = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) total += weights[i] * likelihoods[i];
    return total;
}

inline Evaluation posterior(const WeightVector& weights, const LikelihoodVector& likelihoods) {
    detail::require_same_length(weights.size(), likelihoods.size());
    Evaluation out;
    out.contributions.resize(weights.size());
    for (std::size_t i = 0; i < weights.size(); ++i) {
        out.contributions[i] = weights[i] * likelihoods[i];
        out.total_probability += out.contributions[i];
    }
    if (out.total_probability <= 0.0)
        throw Error(Errc::ZeroEvidence, "total probability is zero; posterior is undefined");
    out.posterior.resize(weights.size());
    for (std::size_t i = 0; i < weights.size(); ++i) out.posterior[i] = out.contributions[i] / out.total_probability;
    return out;
}

// Evaluation with the hypothesis labels attached, for reporting.
struct LabeledEvaluation {
    HypothesisSet hypotheses;
    Evaluation evaluation;

    // Index of the hypothesis with the largest posterior; lowest index wins ties.
    std::size_t top_contributor() const {
        std::size_t best = 0;
        for (std::size_t i = 1; i < evaluation.posterior.size(); ++i)
            if (evaluation.posterior[i] > evaluation.posterior[best]) best = i;
        return best;
    }
};

inline LabeledEvaluation evaluate(const HypothesisSet& set, const WeightVector& weights,
                                  const LikelihoodVector& likelihoods) {
    detail::require_same_length(set.size(), weights.size());
    detail::require_same_length(set.size(), likelihoods.size());
    return LabeledEvaluation{set, posterior(weights, likelihoods)};
}

}  // namespace routebayes
