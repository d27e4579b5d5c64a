#pragma once
// Single-leg revenue management with two fare classes.
//
// Booking protocol (used by both the exact expectation and the simulator):
//   1. low-fare requests arrive first and are accepted up to
//      booking_limit - protection_level;
//   2. high-fare requests are accepted up to the remaining booking_limit;
//   3. each booked passenger shows up independently with show_up_prob;
//   4. fares are collected from passengers who show up (no-shows are
//      refunded), and every survivor beyond capacity is denied boarding at
//      denied_cost per passenger.
//
// Demand distributions are truncated where the upper tail mass drops below
// kDemandTailMass and renormalized, so the exact expectation and the
// simulator draw from the same distribution.

#include "routebayes/error.hpp"
#include "routebayes/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace routebayes {

inline constexpr double kDemandTailMass = 1e-9;

class DemandModel {
public:
    enum class Kind : std::uint8_t { Poisson, Discrete };

    static DemandModel poisson(double mean) {
        if (!(mean >= 0.0) || !std::isfinite(mean))
            throw Error(Errc::InvalidDemandModel, "poisson mean must be finite and nonnegative").with_value(mean);
        DemandModel m;
        m.kind_ = Kind::Poisson;
        m.mean_ = mean;
        double cdf = 0.0;
        for (std::int64_t k = 0;; ++k) {
            const double p = mean == 0.0 ? (k == 0 ? 1.0 : 0.0)
                                         : std::exp(static_cast<double>(k) * std::log(mean) - mean -
                                                    std::lgamma(static_cast<double>(k) + 1.0));
            m.pmf_.push_back(p);
            cdf += p;
            if (1.0 - cdf < kDemandTailMass && static_cast<double>(k) >= mean) break;
        }
        m.normalize();
        return m;
    }

    static DemandModel discrete(std::vector<double> pmf) {
        if (pmf.empty()) throw Error(Errc::InvalidDemandModel, "pmf is empty");
        double sum = 0.0;
        for (std::size_t i = 0; i < pmf.size(); ++i) {
            if (!(pmf[i] >= 0.0) || !std::isfinite(pmf[i]))
                throw Error(Errc::InvalidDemandModel, "pmf entry " + std::to_string(i) + " is negative or not finite")
                    .at_index(i);
            sum += pmf[i];
        }
        if (!(std::abs(sum - 1.0) <= 1e-9))
            throw Error(Errc::InvalidDemandModel, "pmf sums to " + std::to_string(sum)).with_value(sum);
        DemandModel m;
        m.kind_ = Kind::Discrete;
        m.declared_ = pmf;
        m.pmf_ = std::move(pmf);
        m.normalize();
        return m;
    }

    static DemandModel degenerate(std::int64_t value) {
        if (value < 0) throw Error(Errc::InvalidDemandModel, "demand must be nonnegative");
        std::vector<double> pmf(static_cast<std::size_t>(value) + 1, 0.0);
        pmf.back() = 1.0;
        return discrete(std::move(pmf));
    }

    static DemandModel uniform(std::int64_t lo, std::int64_t hi) {
        if (lo < 0 || hi < lo) throw Error(Errc::InvalidDemandModel, "uniform support must satisfy 0 <= lo <= hi");
        std::vector<double> pmf(static_cast<std::size_t>(hi) + 1, 0.0);
        for (std::int64_t k = lo; k <= hi; ++k) pmf[static_cast<std::size_t>(k)] = 1.0 / static_cast<double>(hi - lo + 1);
        return discrete(std::move(pmf));
    }

    Kind kind() const noexcept { return kind_; }
    double mean_parameter() const noexcept { return mean_; }
    // The pmf as declared (discrete models only).
    const std::vector<double>& declared_pmf() const noexcept { return declared_; }

    // Truncated, renormalized pmf over {0, ..., truncation()}.
    std::span<const double> pmf() const noexcept { return pmf_; }
    std::int64_t truncation() const noexcept { return static_cast<std::int64_t>(pmf_.size()) - 1; }

    // P(D > y) on the truncated distribution.
    double tail(std::int64_t y) const {
        if (y < 0) return 1.0;
        double t = 0.0;
        for (std::int64_t k = truncation(); k > y; --k) t += pmf_[static_cast<std::size_t>(k)];
        return t;
    }

    template <class Rng>
    std::int64_t sample(Rng& rng) const {
        const double u = rng.uniform();
        const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
        return static_cast<std::int64_t>(std::min<std::ptrdiff_t>(it - cdf_.begin(), truncation()));
    }

    bool operator==(const DemandModel& o) const {
        return kind_ == o.kind_ && mean_ == o.mean_ && declared_ == o.declared_ && pmf_ == o.pmf_;
    }

private:
    DemandModel() = default;

    void normalize() {
        double sum = 0.0;
        for (double p : pmf_) sum += p;
        for (double& p : pmf_) p /= sum;
        cdf_.resize(pmf_.size());
        double c = 0.0;
        for (std::size_t k = 0; k < pmf_.size(); ++k) cdf_[k] = (c += pmf_[k]);
        cdf_.back() = 1.0;
    }

    Kind kind_ = Kind::Discrete;
    double mean_ = 0.0;
    std::vector<double> declared_;
    std::vector<double> pmf_;
    std::vector<double> cdf_;
};

struct LegRMProblem {
    std::string id;
    std::int64_t capacity = 1;
    double fare_high = 0.0;
    double fare_low = 0.0;
    DemandModel demand_high = DemandModel::degenerate(0);
    DemandModel demand_low = DemandModel::degenerate(0);
    double show_up_prob = 1.0;
    double denied_cost = 0.0;

    void validate() const {
        if (capacity < 1) throw Error(Errc::InvalidProblem, "capacity must be at least 1");
        if (!(fare_low > 0.0 && fare_low <= fare_high) || !std::isfinite(fare_high))
            throw Error(Errc::InvalidProblem, "fares must satisfy 0 < fare_low <= fare_high");
        if (!(show_up_prob > 0.0 && show_up_prob <= 1.0))
            throw Error(Errc::InvalidProblem, "show_up_prob must lie in (0,1]").with_value(show_up_prob);
        if (!(denied_cost >= 0.0) || !std::isfinite(denied_cost))
            throw Error(Errc::InvalidProblem, "denied_cost must be finite and nonnegative").with_value(denied_cost);
    }

    bool operator==(const LegRMProblem&) const = default;
};

struct RMPolicy {
    std::int64_t protection_level = 0;
    std::int64_t booking_limit = 0;

    void validate(const LegRMProblem& problem) const {
        if (!(protection_level >= 0 && protection_level <= problem.capacity && problem.capacity <= booking_limit))
            throw Error(Errc::InvalidPolicy, "policy must satisfy 0 <= protection_level <= capacity <= booking_limit");
    }

    bool operator==(const RMPolicy&) const = default;
};

// Binomial(m, p) pmf over {0, ..., m}.
inline std::vector<double> binomial_pmf(std::int64_t m, double p) {
    std::vector<double> pmf(static_cast<std::size_t>(m) + 1, 0.0);
    if (p >= 1.0) {
        pmf.back() = 1.0;
        return pmf;
    }
    const double lp = std::log(p);
    const double lq = std::log1p(-p);
    const double lm = std::lgamma(static_cast<double>(m) + 1.0);
    for (std::int64_t k = 0; k <= m; ++k) {
        const auto kd = static_cast<double>(k);
        pmf[static_cast<std::size_t>(k)] = std::exp(lm - std::lgamma(kd + 1.0) - std::lgamma(static_cast<double>(m - k) + 1.0) +
                                                    kd * lp + static_cast<double>(m - k) * lq);
    }
    return pmf;
}

// P(Binomial(m, p) >= threshold).
inline double binomial_upper_tail(std::int64_t m, double p, std::int64_t threshold) {
    if (threshold <= 0) return 1.0;
    if (threshold > m) return 0.0;
    const auto pmf = binomial_pmf(m, p);
    double t = 0.0;
    for (std::int64_t k = m; k >= threshold; --k) t += pmf[static_cast<std::size_t>(k)];
    return t;
}

// y* = min { y >= 0 : P(D_high > y) <= fare_low / fare_high }. Not capped at
// capacity; see optimal_protection().
inline std::int64_t littlewood_protection(const LegRMProblem& problem) {
    problem.validate();
    const double ratio = problem.fare_low / problem.fare_high;
    // Tail sums of pmfs like {0.1, ...} carry round-off; 1e-12 sits far below
    // the truncation error.
    for (std::int64_t y = 0; y <= problem.demand_high.truncation(); ++y)
        if (problem.demand_high.tail(y) <= ratio + 1e-12) return y;
    return problem.demand_high.truncation();
}

inline std::int64_t optimal_protection(const LegRMProblem& problem) {
    return std::min(littlewood_protection(problem), problem.capacity);
}

inline double expected_revenue(const LegRMProblem& problem, const RMPolicy& policy) {
    problem.validate();
    policy.validate(problem);
    const std::int64_t b = policy.booking_limit;
    const std::int64_t cap = problem.capacity;
    const double p = problem.show_up_prob;

    // overflow[m] = E[max(0, Binomial(m, p) - capacity)]
    std::vector<double> overflow(static_cast<std::size_t>(b) + 1, 0.0);
    for (std::int64_t m = cap + 1; m <= b; ++m) {
        const auto pmf = binomial_pmf(m, p);
        double e = 0.0;
        for (std::int64_t k = cap + 1; k <= m; ++k) e += static_cast<double>(k - cap) * pmf[static_cast<std::size_t>(k)];
        overflow[static_cast<std::size_t>(m)] = e;
    }

    const auto low = problem.demand_low.pmf();
    const auto high = problem.demand_high.pmf();
    const std::int64_t low_limit = b - policy.protection_level;
    double total = 0.0;
    for (std::size_t dl = 0; dl < low.size(); ++dl) {
        if (low[dl] == 0.0) continue;
        const std::int64_t al = std::min<std::int64_t>(static_cast<std::int64_t>(dl), low_limit);
        double inner = 0.0;
        for (std::size_t dh = 0; dh < high.size(); ++dh) {
            if (high[dh] == 0.0) continue;
            const std::int64_t ah = std::min<std::int64_t>(static_cast<std::int64_t>(dh), b - al);
            const double fares = p * (static_cast<double>(al) * problem.fare_low + static_cast<double>(ah) * problem.fare_high);
            inner += high[dh] * (fares - problem.denied_cost * overflow[static_cast<std::size_t>(al + ah)]);
        }
        total += low[dl] * inner;
    }
    return total;
}

inline std::int64_t overbooking_search_cap(const LegRMProblem& problem) { return 3 * problem.capacity; }

// Largest b >= capacity whose marginal low-fare booking still pays:
//   fare_low - denied_cost * P(Binomial(b - 1, p) >= capacity) > 0.
// The search stops at 3 * capacity.
inline std::int64_t overbooking_limit(const LegRMProblem& problem) {
    problem.validate();
    std::int64_t limit = problem.capacity;
    for (std::int64_t b = problem.capacity + 1; b <= overbooking_search_cap(problem); ++b) {
        const double risk = binomial_upper_tail(b - 1, problem.show_up_prob, problem.capacity);
        if (problem.fare_low - problem.denied_cost * risk > 0.0) limit = b;
    }
    return limit;
}

inline double fcfs_baseline(const LegRMProblem& problem) {
    return expected_revenue(problem, RMPolicy{0, problem.capacity});
}

struct TrialOutcome {
    std::int64_t demand_low = 0;
    std::int64_t demand_high = 0;
    std::int64_t accepted_low = 0;
    std::int64_t accepted_high = 0;
    std::int64_t survivors = 0;
    std::int64_t boarded = 0;
    std::int64_t denied = 0;
    double revenue = 0.0;
};

template <class Rng>
TrialOutcome simulate_trial(const LegRMProblem& problem, const RMPolicy& policy, Rng& rng) {
    TrialOutcome t;
    t.demand_low = problem.demand_low.sample(rng);
    t.demand_high = problem.demand_high.sample(rng);
    t.accepted_low = std::min(t.demand_low, policy.booking_limit - policy.protection_level);
    t.accepted_high = std::min(t.demand_high, policy.booking_limit - t.accepted_low);
    std::int64_t shows_low = 0;
    std::int64_t shows_high = 0;
    for (std::int64_t i = 0; i < t.accepted_low; ++i) shows_low += rng.uniform() < problem.show_up_prob ? 1 : 0;
    for (std::int64_t i = 0; i < t.accepted_high; ++i) shows_high += rng.uniform() < problem.show_up_prob ? 1 : 0;
    t.survivors = shows_low + shows_high;
    t.denied = std::max<std::int64_t>(0, t.survivors - problem.capacity);
    t.boarded = t.survivors - t.denied;
    t.revenue = static_cast<double>(shows_low) * problem.fare_low + static_cast<double>(shows_high) * problem.fare_high -
                static_cast<double>(t.denied) * problem.denied_cost;
    return t;
}

struct SimulationSummary {
    std::int64_t trials = 0;
    double mean_revenue = 0.0;
    double revenue_std_error = 0.0;
    double mean_load_factor = 0.0;
    double denied_rate = 0.0;  // denied / survivors
    double spill_rate = 0.0;   // rejected requests / requests

    bool operator==(const SimulationSummary&) const = default;
};

// Monte Carlo estimate under `policy`. Trial t draws from
// Xoshiro256::stream(seed, t); statistics are accumulated in trial order.
inline SimulationSummary simulate_leg(const LegRMProblem& problem, const RMPolicy& policy, std::int64_t trials,
                                      std::uint64_t seed) {
    problem.validate();
    policy.validate(problem);
    if (trials < 1) throw Error(Errc::InvalidArgument, "trials must be at least 1");

    SimulationSummary s;
    s.trials = trials;
    double m2 = 0.0;
    double load = 0.0;
    std::int64_t denied = 0;
    std::int64_t survivors = 0;
    std::int64_t requests = 0;
    std::int64_t spilled = 0;
    for (std::int64_t i = 0; i < trials; ++i) {
        auto rng = Xoshiro256::stream(seed, static_cast<std::uint64_t>(i));
        const TrialOutcome t = simulate_trial(problem, policy, rng);
        const auto k = static_cast<double>(i + 1);
        const double delta = t.revenue - s.mean_revenue;
        s.mean_revenue += delta / k;
        m2 += delta * (t.revenue - s.mean_revenue);
        load += static_cast<double>(t.boarded) / static_cast<double>(problem.capacity);
        denied += t.denied;
        survivors += t.survivors;
        requests += t.demand_low + t.demand_high;
        spilled += (t.demand_low - t.accepted_low) + (t.demand_high - t.accepted_high);
    }
    const auto n = static_cast<double>(trials);
    s.revenue_std_error = trials > 1 ? std::sqrt(m2 / (n - 1.0) / n) : 0.0;
    s.mean_load_factor = load / n;
    s.denied_rate = survivors > 0 ? static_cast<double>(denied) / static_cast<double>(survivors) : 0.0;
    s.spill_rate = requests > 0 ? static_cast<double>(spilled) / static_cast<double>(requests) : 0.0;
    return s;
}

}  // namespace routebayes
