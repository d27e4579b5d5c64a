#pragma once
// Weekly route economics: frequency and fleet sizing, route profit, and the
// scoring that turns route KPIs into the likelihood vector
// (customer_service, unavailable_capital, costs).

#include "routebayes/bayes_core.hpp"
#include "routebayes/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

namespace routebayes {

using Count = std::int64_t;

struct Route {
    std::string id;
    std::string origin;
    std::string destination;
    double distance_km = 0.0;
    double demand_pax_per_week = 0.0;
    double average_fare = 0.0;
    double block_hours_per_flight = 0.0;
    double cost_per_block_hour = 0.0;
    double fixed_cost_per_flight = 0.0;
    double service_score = 0.0;  // [0,1]
    double tied_capital = 0.0;

    bool operator==(const Route&) const = default;
};

struct FleetType {
    std::string name;
    Count seats = 0;
    double range_km = 0.0;
    double utilization_block_hours_per_week = 0.0;
    double target_load_factor = 0.8;

    bool operator==(const FleetType&) const = default;
};

struct FleetRequirement {
    Count flights_per_week = 0;
    Count aircraft_count = 0;
    double achieved_load_factor = 0.0;

    bool operator==(const FleetRequirement&) const = default;
};

struct Anchor {
    double worst = 0.0;
    double best = 1.0;

    bool operator==(const Anchor&) const = default;
};

struct ScoringAnchors {
    Anchor service{0.0, 1.0};
    Anchor capital;  // tied-up capital: worst is the larger amount
    Anchor cost;     // weekly profit: worst is the lower amount
    double epsilon = 0.01;

    void validate() const {
        if (service.worst == service.best) throw Error(Errc::DegenerateAnchors, "service anchors coincide");
        if (capital.worst == capital.best) throw Error(Errc::DegenerateAnchors, "capital anchors coincide");
        if (cost.worst == cost.best) throw Error(Errc::DegenerateAnchors, "cost anchors coincide");
        if (!(epsilon > 0.0 && epsilon < 0.5))
            throw Error(Errc::InvalidEpsilon, "epsilon must lie in (0, 0.5)").with_value(epsilon);
    }

    bool operator==(const ScoringAnchors&) const = default;
};

namespace detail {

// Smallest k >= 0 with k * unit >= amount, evaluated with the same product the
// callers use, so the floating ceiling never lands one off.
inline Count ceil_units(double amount, double unit) {
    if (amount <= 0.0) return 0;
    auto k = static_cast<Count>(std::ceil(amount / unit));
    while (k > 0 && static_cast<double>(k - 1) * unit >= amount) --k;
    while (static_cast<double>(k) * unit < amount) ++k;
    return k;
}

}  // namespace detail

inline Count required_frequency(double demand_pax_per_week, Count seats, double target_load_factor) {
    if (!(target_load_factor > 0.0 && target_load_factor <= 1.0))
        throw Error(Errc::InvalidLoadFactor, "target load factor must lie in (0,1]").with_value(target_load_factor);
    if (seats < 1) throw Error(Errc::InvalidArgument, "seats must be at least 1");
    if (!(demand_pax_per_week >= 0.0) || !std::isfinite(demand_pax_per_week))
        throw Error(Errc::InvalidArgument, "demand must be a finite nonnegative number");
    return detail::ceil_units(demand_pax_per_week, static_cast<double>(seats) * target_load_factor);
}

inline Count aircraft_required(Count flights_per_week, double block_hours_per_flight, double utilization) {
    if (!(utilization > 0.0)) throw Error(Errc::NonpositiveUtilization, "utilization must be positive").with_value(utilization);
    if (flights_per_week < 0) throw Error(Errc::InvalidArgument, "flights per week must be nonnegative");
    if (!(block_hours_per_flight > 0.0)) throw Error(Errc::InvalidArgument, "block hours per flight must be positive");
    if (flights_per_week == 0) return 0;
    return detail::ceil_units(static_cast<double>(flights_per_week) * block_hours_per_flight, utilization);
}

inline bool range_feasible(const Route& route, const FleetType& fleet) noexcept {
    return route.distance_km <= fleet.range_km;
}

inline double achieved_load_factor(double demand, Count flights, Count seats) {
    if (flights <= 0) return 0.0;
    return std::clamp(demand / (static_cast<double>(flights) * static_cast<double>(seats)), 0.0, 1.0);
}

inline FleetRequirement fleet_requirement(const Route& route, const FleetType& fleet) {
    FleetRequirement req;
    req.flights_per_week = required_frequency(route.demand_pax_per_week, fleet.seats, fleet.target_load_factor);
    req.aircraft_count =
        aircraft_required(req.flights_per_week, route.block_hours_per_flight, fleet.utilization_block_hours_per_week);
    req.achieved_load_factor = achieved_load_factor(route.demand_pax_per_week, req.flights_per_week, fleet.seats);
    return req;
}

inline double carried_passengers(const Route& route, const FleetType& fleet, Count flights_per_week) {
    return std::min(route.demand_pax_per_week, static_cast<double>(flights_per_week) * static_cast<double>(fleet.seats));
}

// Weekly profit of flying the route `flights_per_week` times. May be negative.
inline double route_profit(const Route& route, const FleetType& fleet, Count flights_per_week) {
    if (flights_per_week < 0) throw Error(Errc::InvalidArgument, "flights per week must be nonnegative");
    if (flights_per_week == 0) return 0.0;
    if (!range_feasible(route, fleet))
        throw Error(Errc::RangeInfeasible, "route " + route.id + " (" + std::to_string(route.distance_km) +
                                               " km) exceeds range of fleet " + fleet.name);
    const double revenue = carried_passengers(route, fleet, flights_per_week) * route.average_fare;
    const double cost_per_flight = route.block_hours_per_flight * route.cost_per_block_hour + route.fixed_cost_per_flight;
    return revenue - static_cast<double>(flights_per_week) * cost_per_flight;
}

// Min-max score of `value` between the anchors, clamped to [epsilon, 1 - epsilon].
inline double anchor_score(double value, const Anchor& anchor, double epsilon) {
    if (anchor.worst == anchor.best) throw Error(Errc::DegenerateAnchors, "anchors coincide");
    const double raw = (value - anchor.worst) / (anchor.best - anchor.worst);
    return std::clamp(raw, epsilon, 1.0 - epsilon);
}

inline LikelihoodVector component_likelihoods(const Route& route, double profit, const ScoringAnchors& anchors) {
    anchors.validate();
    return LikelihoodVector({
        anchor_score(route.service_score, anchors.service, anchors.epsilon),
        anchor_score(route.tied_capital, anchors.capital, anchors.epsilon),
        anchor_score(profit, anchors.cost, anchors.epsilon),
    });
}

}  // namespace routebayes
