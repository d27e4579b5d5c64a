#include "routebayes/network_planner.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace routebayes;

namespace {

RouteCandidate cand(std::string id, std::string fleet, double profit, double p, Count need) {
    return {std::move(id), std::move(fleet), profit, p, need};
}

}  // namespace

TEST(ScoreCandidate, Examples) {
    EXPECT_EQ(score_candidate(cand("a", "F", 60000, 1.0, 1)), 60000.0);
    EXPECT_EQ(score_candidate(cand("a", "F", 60000, 0.0, 1)), 0.0);
    EXPECT_NEAR(score_candidate(cand("a", "F", 60000, 0.54, 1)), 32400.0, 1e-9);
}

TEST(RankRoutes, OrderAndTies) {
    const auto ranked = rank_routes({cand("a", "F", 5, 1, 1), cand("b", "F", 9, 1, 1), cand("c", "F", 1, 1, 1)});
    EXPECT_EQ(ranked[0].route_id, "b");
    EXPECT_EQ(ranked[1].route_id, "a");
    EXPECT_EQ(ranked[2].route_id, "c");
    const auto tied = rank_routes({cand("z", "F", 5, 1, 1), cand("m", "F", 5, 1, 1), cand("a", "F", 5, 1, 1)});
    EXPECT_EQ(tied[0].route_id, "a");
    EXPECT_EQ(tied[1].route_id, "m");
    EXPECT_EQ(tied[2].route_id, "z");
    const auto single = rank_routes({cand("x", "F", -1, 1, 1)});
    ASSERT_EQ(single.size(), 1u);
    EXPECT_EQ(single[0].route_id, "x");
}

TEST(SelectRoutes, AmpleAvailabilitySelectsAllPositive) {
    const std::vector<RouteCandidate> cs = {cand("a", "F", 100, 0.5, 2), cand("b", "F", -100, 0.5, 1),
                                            cand("c", "G", 50, 0.0, 1), cand("d", "G", 10, 1.0, 3)};
    const auto plan = select_routes(cs, {{"F", 10}, {"G", 10}});
    EXPECT_EQ(plan.selected, (std::vector<std::string>{"a", "d"}));
    EXPECT_EQ(plan.total_score, 50.0 + 10.0);
    EXPECT_EQ(plan.used.at("F"), 2);
    EXPECT_EQ(plan.used.at("G"), 3);
    EXPECT_FALSE(plan.heuristic);
}

TEST(SelectRoutes, NoAvailability) {
    const auto plan = select_routes({cand("a", "F", 100, 0.5, 1), cand("b", "F", 100, 0.5, 2)}, {{"F", 0}});
    EXPECT_TRUE(plan.selected.empty());
    EXPECT_EQ(plan.total_score, 0.0);
}

TEST(SelectRoutes, ZeroNeedAlwaysFits) {
    const auto plan = select_routes({cand("a", "F", 100, 0.5, 0)}, {{"F", 0}});
    EXPECT_EQ(plan.selected, std::vector<std::string>{"a"});
}

TEST(SelectRoutes, PrefersBetterCombination) {
    // One big route vs two small ones that together beat it.
    const std::vector<RouteCandidate> cs = {cand("big", "F", 100, 1, 4), cand("s1", "F", 60, 1, 2),
                                            cand("s2", "F", 60, 1, 2)};
    const auto plan = select_routes(cs, {{"F", 4}});
    EXPECT_EQ(plan.selected, (std::vector<std::string>{"s1", "s2"}));
    EXPECT_EQ(plan.total_score, 120.0);
}

TEST(SelectRoutes, TieGoesToSmallestIdSet) {
    const std::vector<RouteCandidate> cs = {cand("d", "F", 10, 1, 1), cand("b", "F", 10, 1, 1), cand("c", "F", 10, 1, 1)};
    const auto plan = select_routes(cs, {{"F", 2}});
    ASSERT_EQ(plan.selected.size(), 2u);
    EXPECT_EQ(plan.selected, (std::vector<std::string>{"b", "c"}));
}

TEST(SelectRoutes, UnknownFleet) {
    try {
        select_routes({cand("a", "X", 1, 1, 1)}, {{"F", 1}});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::UnknownFleet);
    }
}

TEST(SelectRoutes, HeuristicAboveThreshold) {
    std::vector<RouteCandidate> cs;
    for (int i = 0; i < 30; ++i) cs.push_back(cand("R" + std::to_string(10 + i), "F", 100 + i, 1, 1 + i % 3));
    const auto plan = select_routes(cs, {{"F", 12}});
    EXPECT_TRUE(plan.heuristic);
    EXPECT_LE(plan.used.at("F"), 12);
    double total = 0.0;
    for (const auto& id : plan.selected) total += plan.per_route_scores.at(id);
    EXPECT_EQ(total, plan.total_score);
}

TEST(SelectRoutes, TenCandidatesMatchEnumeration) {
    std::mt19937_64 rng(10);
    for (int trial = 0; trial < 50; ++trial) {
        const auto inst = oracle::random_knapsack(10, 2, rng);
        const auto plan = select_routes(inst.candidates, inst.availability);
        EXPECT_EQ(plan.total_score, oracle::best_subset_score(inst));
    }
}

TEST(SelectRoutesProperties, FeasibleExactMonotoneDeterministic) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 1 + trial % 14;
        const std::size_t fleets = 1 + trial % 3;
        auto inst = oracle::random_knapsack(n, fleets, rng);
        const auto plan = select_routes(inst.candidates, inst.availability);
        for (const auto& [f, used] : plan.used) EXPECT_LE(used, inst.availability.at(f));
        EXPECT_EQ(plan.total_score, oracle::best_subset_score(inst));
        for (const auto& id : plan.selected) EXPECT_GT(plan.per_route_scores.at(id), 0.0);
        EXPECT_EQ(select_routes(inst.candidates, inst.availability), plan);

        auto more = inst;
        more.availability.begin()->second += 2;
        EXPECT_GE(select_routes(more.candidates, more.availability).total_score, plan.total_score);
    }
}
