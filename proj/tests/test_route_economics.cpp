#include "routebayes/route_economics.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace routebayes;

namespace {

Route sample_route() {
    Route r;
    r.id = "LHR-MAD";
    r.origin = "LHR";
    r.destination = "MAD";
    r.distance_km = 1250;
    r.demand_pax_per_week = 1400;
    r.average_fare = 120;
    r.block_hours_per_flight = 5.0;
    r.cost_per_block_hour = 4000;
    r.fixed_cost_per_flight = 2000;
    r.service_score = 0.9;
    r.tied_capital = 500000;
    return r;
}

FleetType narrowbody() { return {"A320", 180, 3000, 70, 0.8}; }

}  // namespace

TEST(RequiredFrequency, Examples) {
    EXPECT_EQ(required_frequency(0, 180, 0.8), 0);
    EXPECT_EQ(required_frequency(1400, 180, 0.8), 10);
    EXPECT_EQ(required_frequency(144, 180, 0.8), 1);
}

TEST(RequiredFrequency, InvalidLoadFactor) {
    for (double lf : {0.0, -0.1, 1.01}) {
        try {
            required_frequency(100, 180, lf);
            FAIL() << lf;
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), Errc::InvalidLoadFactor);
        }
    }
    EXPECT_EQ(required_frequency(180, 180, 1.0), 1);
}

TEST(AircraftRequired, Examples) {
    EXPECT_EQ(aircraft_required(0, 5.0, 70), 0);
    EXPECT_EQ(aircraft_required(10, 5.0, 70), 1);
    EXPECT_EQ(aircraft_required(30, 5.0, 70), 3);
    EXPECT_EQ(aircraft_required(14, 5.0, 70), 1);  // exactly full utilization
    try {
        aircraft_required(10, 5.0, 0.0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::NonpositiveUtilization);
    }
}

TEST(RouteProfit, Examples) {
    const Route r = sample_route();
    EXPECT_EQ(route_profit(r, narrowbody(), 0), 0.0);
    EXPECT_DOUBLE_EQ(route_profit(r, narrowbody(), 10), -52000.0);
    Route pricier = r;
    pricier.average_fare = 200;
    EXPECT_DOUBLE_EQ(route_profit(pricier, narrowbody(), 10), 60000.0);
}

TEST(RouteProfit, CarriedCappedBySeats) {
    Route r = sample_route();
    r.demand_pax_per_week = 5000;
    // 2 flights x 180 seats carry 360 of 5000.
    EXPECT_DOUBLE_EQ(carried_passengers(r, narrowbody(), 2), 360.0);
    EXPECT_DOUBLE_EQ(route_profit(r, narrowbody(), 2), 360.0 * 120 - 2 * 22000.0);
}

TEST(RouteProfit, RangeInfeasible) {
    Route r = sample_route();
    r.distance_km = 3001;
    try {
        route_profit(r, narrowbody(), 1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::RangeInfeasible);
    }
    EXPECT_EQ(route_profit(r, narrowbody(), 0), 0.0);
}

TEST(RangeFeasible, BoundaryInclusive) {
    Route r = sample_route();
    r.distance_km = 500;
    EXPECT_TRUE(range_feasible(r, narrowbody()));
    r.distance_km = 3000;
    EXPECT_TRUE(range_feasible(r, narrowbody()));
    r.distance_km = 3001;
    EXPECT_FALSE(range_feasible(r, narrowbody()));
}

TEST(FleetRequirementTest, SizingChain) {
    const auto req = fleet_requirement(sample_route(), narrowbody());
    EXPECT_EQ(req.flights_per_week, 10);
    EXPECT_EQ(req.aircraft_count, 1);
    EXPECT_DOUBLE_EQ(req.achieved_load_factor, 1400.0 / 1800.0);
    Route none = sample_route();
    none.demand_pax_per_week = 0;
    const auto zero = fleet_requirement(none, narrowbody());
    EXPECT_EQ(zero.flights_per_week, 0);
    EXPECT_EQ(zero.aircraft_count, 0);
    EXPECT_EQ(zero.achieved_load_factor, 0.0);
}

TEST(ComponentLikelihoods, Examples) {
    ScoringAnchors a;
    a.service = {0.0, 1.0};
    a.capital = {1e6, 0.0};
    a.cost = {-100000, 100000};
    Route r = sample_route();
    r.service_score = 0.9;
    r.tied_capital = 500000;  // midway
    auto l = component_likelihoods(r, 100000, a);
    EXPECT_DOUBLE_EQ(l[0], 0.9);
    EXPECT_DOUBLE_EQ(l[1], 0.5);
    EXPECT_DOUBLE_EQ(l[2], 0.99);  // at the best anchor
    r.service_score = 0.0;
    l = component_likelihoods(r, -250000, a);
    EXPECT_DOUBLE_EQ(l[0], 0.01);
    EXPECT_DOUBLE_EQ(l[2], 0.01);
}

TEST(ComponentLikelihoods, CapitalOrientation) {
    ScoringAnchors a;
    a.capital = {1e6, 0.0};
    a.cost = {-1, 1};
    Route r = sample_route();
    r.tied_capital = 600000;
    EXPECT_DOUBLE_EQ(component_likelihoods(r, 0, a)[1], 0.4);
    r.tied_capital = 200000;
    EXPECT_DOUBLE_EQ(component_likelihoods(r, 0, a)[1], 0.8);
}

TEST(ComponentLikelihoods, DegenerateAnchorsAndEpsilon) {
    ScoringAnchors a;
    a.capital = {5, 5};
    a.cost = {-1, 1};
    try {
        component_likelihoods(sample_route(), 0, a);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::DegenerateAnchors);
    }
    a.capital = {1, 0};
    a.epsilon = 0.5;
    try {
        component_likelihoods(sample_route(), 0, a);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::InvalidEpsilon);
    }
}

TEST(RouteEconomicsProperties, SizingInvariants) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> demand(0.0, 20000.0);
    std::uniform_int_distribution<Count> seats(1, 400);
    std::uniform_real_distribution<double> lf(0.05, 1.0);
    std::uniform_real_distribution<double> hours(0.5, 16.0);
    std::uniform_real_distribution<double> util(10.0, 120.0);
    for (int trial = 0; trial < 5000; ++trial) {
        const double d = trial % 50 == 0 ? 0.0 : demand(rng);
        const Count s = seats(rng);
        const double target = lf(rng);
        const Count f = required_frequency(d, s, target);
        const double unit = static_cast<double>(s) * target;
        if (d > 0) {
            EXPECT_LT(static_cast<double>(f - 1) * unit, d);
            EXPECT_LE(d, static_cast<double>(f) * unit);
            const double achieved = achieved_load_factor(d, f, s);
            EXPECT_LE(achieved, 1.0);
            EXPECT_DOUBLE_EQ(achieved, d / (static_cast<double>(f) * static_cast<double>(s)));
        } else {
            EXPECT_EQ(f, 0);
        }
        EXPECT_GE(required_frequency(d * 1.1 + 1, s, target), f);

        const double h = hours(rng);
        const double u = util(rng);
        const Count ac = aircraft_required(f, h, u);
        EXPECT_EQ(ac == 0, f == 0);
        EXPECT_GE(aircraft_required(f + 3, h, u), ac);
        EXPECT_LE(aircraft_required(f, h, u * 1.5), ac);

        // Conservation of carried passengers.
        Route r = sample_route();
        r.demand_pax_per_week = d;
        const FleetType ft{"X", s, 1e5, u, target};
        const double carried = carried_passengers(r, ft, f);
        EXPECT_LE(carried, d);
        EXPECT_LE(carried, static_cast<double>(f) * static_cast<double>(s));
    }
}

TEST(RouteEconomicsProperties, LikelihoodRangeAndMonotonicity) {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    ScoringAnchors a;
    a.capital = {2e6, 1e5};
    a.cost = {-2e5, 3e5};
    for (int trial = 0; trial < 2000; ++trial) {
        Route r = sample_route();
        r.service_score = u(rng);
        r.tied_capital = 3e6 * u(rng);
        const double profit = -5e5 + 1e6 * u(rng);
        const auto l = component_likelihoods(r, profit, a);
        for (double x : l.values()) {
            EXPECT_GE(x, a.epsilon);
            EXPECT_LE(x, 1.0 - a.epsilon);
        }
        Route better = r;
        better.service_score = std::min(1.0, r.service_score + 0.1 * u(rng));
        better.tied_capital = r.tied_capital * u(rng);
        const auto lb = component_likelihoods(better, profit + 1e4 * u(rng), a);
        EXPECT_GE(lb[0], l[0]);
        EXPECT_GE(lb[1], l[1]);
        EXPECT_GE(lb[2], l[2]);
    }
}
