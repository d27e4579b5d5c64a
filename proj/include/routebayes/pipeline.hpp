#pragma once
// Scenario pipeline: evaluate -> optimize -> plan -> rm, always in that order.
//
// Every number stored in a Report is rounded to 12 significant digits when
// the report is built, so the JSON form re-parses to an identical Report.

#include "routebayes/bayes_core.hpp"
#include "routebayes/error.hpp"
#include "routebayes/network_planner.hpp"
#include "routebayes/rm_sim.hpp"
#include "routebayes/route_economics.hpp"
#include "routebayes/scenario.hpp"
#include "routebayes/weight_optimizer.hpp"

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace routebayes {

inline constexpr std::string_view kToolVersion = "1.0.0";
inline constexpr std::int64_t kDefaultRmTrials = 10000;

inline double round_sig12(double x) {
    if (!std::isfinite(x) || x == 0.0) return x == 0.0 ? 0.0 : x;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return std::strtod(buf, nullptr);
}

inline std::vector<double> round_sig12(std::vector<double> xs) {
    for (double& x : xs) x = round_sig12(x);
    return xs;
}

struct Stages {
    bool evaluate = false;
    bool optimize = false;
    bool plan = false;
    bool rm = false;

    static Stages all() { return {true, true, true, true}; }

    // A plan needs per-route evaluations.
    Stages normalized() const {
        Stages s = *this;
        if (s.plan || s.optimize) s.evaluate = true;
        return s;
    }

    std::vector<std::string> names() const {
        std::vector<std::string> out;
        if (evaluate) out.emplace_back("evaluate");
        if (optimize) out.emplace_back("optimize");
        if (plan) out.emplace_back("plan");
        if (rm) out.emplace_back("rm");
        return out;
    }

    bool operator==(const Stages&) const = default;
};

struct RunOptions {
    std::int64_t rm_trials = kDefaultRmTrials;
    std::optional<std::uint64_t> seed;  // overrides the scenario seed
    bool timestamp = true;
};

struct RouteRow {
    std::string route_id;
    std::string fleet;
    Count flights_per_week = 0;
    Count aircraft = 0;
    double achieved_load_factor = 0.0;
    double profit = 0.0;
    std::vector<double> likelihoods;
    double total_probability = 0.0;
    std::vector<double> contributions;
    std::vector<double> posterior;
    std::string top_contributor;
    double score = 0.0;

    bool operator==(const RouteRow&) const = default;
};

struct InfeasibleRoute {
    std::string route_id;
    std::string reason;

    bool operator==(const InfeasibleRoute&) const = default;
};

struct EvaluationSection {
    std::vector<RouteRow> routes;
    std::vector<InfeasibleRoute> infeasible;

    bool operator==(const EvaluationSection&) const = default;
};

struct OptimizationSection {
    std::vector<double> network_likelihoods;  // mean route likelihood per hypothesis
    std::vector<double> prior_weights;
    double prior_objective = 0.0;
    std::vector<double> weights;
    double objective = 0.0;
    std::vector<std::string> active_bounds;
    std::vector<double> sensitivity;
    std::map<std::string, double> route_total_probability;  // under the optimized weights

    bool operator==(const OptimizationSection&) const = default;
};

struct PlanSection {
    std::string weights_source;  // "prior" or "optimized"
    std::vector<std::string> selected;
    std::map<std::string, Count> available;
    std::map<std::string, Count> used;
    std::map<std::string, double> per_route_scores;
    double total_score = 0.0;
    bool heuristic = false;

    bool operator==(const PlanSection&) const = default;
};

struct RmRow {
    std::string leg_id;
    std::int64_t littlewood_protection = 0;
    std::int64_t protection_level = 0;
    std::int64_t booking_limit = 0;
    bool overbooking_capped = false;
    double expected_revenue = 0.0;
    double protection_only_revenue = 0.0;
    double fcfs_revenue = 0.0;
    double uplift = 0.0;
    double uplift_pct = 0.0;
    std::uint64_t sim_seed = 0;
    SimulationSummary simulation;

    bool operator==(const RmRow&) const = default;
};

struct ReportMetadata {
    std::string tool = "routebayes";
    std::string version{kToolVersion};
    std::string schema_version;
    std::uint64_t seed = 0;
    std::vector<std::string> stages;
    std::vector<std::string> hypotheses;
    std::int64_t rm_trials = 0;
    std::string timestamp;  // excluded from determinism checks

    bool operator==(const ReportMetadata&) const = default;
};

struct Report {
    ReportMetadata metadata;
    std::optional<EvaluationSection> evaluation;
    std::optional<OptimizationSection> optimization;
    std::optional<PlanSection> plan;
    std::optional<std::vector<RmRow>> rm;

    bool operator==(const Report&) const = default;
};

namespace detail {

struct ScoredRoute {
    const RouteSpec* spec = nullptr;
    const FleetType* fleet = nullptr;
    FleetRequirement requirement;
    double profit = 0.0;
    LikelihoodVector likelihoods{0.0};
};

inline std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// Fleet assignment: the pinned fleet, or the range-feasible fleet with the
// highest weekly profit (ties to the lexicographically smallest name).
inline std::optional<ScoredRoute> score_route(const Scenario& s, const RouteSpec& spec, std::string& reason) {
    std::vector<const FleetType*> options;
    if (!spec.fleet.empty()) {
        const FleetType* f = s.find_fleet(spec.fleet);
        if (!range_feasible(spec.route, *f)) {
            reason = "distance exceeds range of fleet " + f->name;
            return std::nullopt;
        }
        options.push_back(f);
    } else {
        for (const auto& f : s.fleets)
            if (range_feasible(spec.route, f)) options.push_back(&f);
        if (options.empty()) {
            reason = "no fleet type has sufficient range";
            return std::nullopt;
        }
    }

    std::optional<ScoredRoute> best;
    for (const FleetType* f : options) {
        ScoredRoute sr;
        sr.spec = &spec;
        sr.fleet = f;
        sr.requirement = fleet_requirement(spec.route, *f);
        sr.profit = route_profit(spec.route, *f, sr.requirement.flights_per_week);
        if (!best || sr.profit > best->profit || (sr.profit == best->profit && f->name < best->fleet->name))
            best = std::move(sr);
    }
    best->likelihoods = spec.likelihoods ? *spec.likelihoods : component_likelihoods(spec.route, best->profit, s.anchors);
    return best;
}

}  // namespace detail

// Runs the requested stages. Module errors propagate with the stage name
// prepended; their codes are preserved.
inline Report run_pipeline(const Scenario& scenario, Stages requested, const RunOptions& options = {}) {
    const Stages stages = requested.normalized();
    Report report;
    report.metadata.schema_version = scenario.schema_version;
    report.metadata.seed = options.seed.value_or(scenario.seed);
    report.metadata.stages = stages.names();
    for (const auto& h : scenario.hypotheses) report.metadata.hypotheses.push_back(h.id);
    report.metadata.rm_trials = stages.rm ? options.rm_trials : 0;
    if (options.timestamp) report.metadata.timestamp = detail::utc_timestamp();

    auto in_stage = [](const char* stage, auto&& fn) {
        try {
            return fn();
        } catch (const Error& e) {
            Error wrapped(e.code(), std::string(stage) + " stage: " + e.message());
            wrapped.at_path(e.path());
            if (e.index()) wrapped.at_index(*e.index());
            if (e.value()) wrapped.with_value(*e.value());
            throw wrapped;
        }
    };

    std::vector<detail::ScoredRoute> scored;
    if (stages.evaluate) {
        in_stage("evaluate", [&] {
            EvaluationSection section;
            for (const auto& spec : scenario.routes) {
                std::string reason;
                auto sr = detail::score_route(scenario, spec, reason);
                if (!sr) {
                    section.infeasible.push_back({spec.route.id, reason});
                    continue;
                }
                const LabeledEvaluation ev = evaluate(scenario.hypotheses, scenario.weights, sr->likelihoods);
                RouteRow row;
                row.route_id = spec.route.id;
                row.fleet = sr->fleet->name;
                row.flights_per_week = sr->requirement.flights_per_week;
                row.aircraft = sr->requirement.aircraft_count;
                row.achieved_load_factor = round_sig12(sr->requirement.achieved_load_factor);
                row.profit = round_sig12(sr->profit);
                row.likelihoods = round_sig12({sr->likelihoods.values().begin(), sr->likelihoods.values().end()});
                row.total_probability = round_sig12(ev.evaluation.total_probability);
                row.contributions = round_sig12(ev.evaluation.contributions);
                row.posterior = round_sig12(ev.evaluation.posterior);
                row.top_contributor = scenario.hypotheses[ev.top_contributor()].id;
                row.score = round_sig12(ev.evaluation.total_probability * sr->profit);
                section.routes.push_back(std::move(row));
                scored.push_back(std::move(*sr));
            }
            report.evaluation = std::move(section);
        });
    }

    std::optional<WeightVector> optimized;
    if (stages.optimize) {
        in_stage("optimize", [&] {
            if (scored.empty()) throw Error(Errc::InvalidArgument, "no range-feasible routes to optimize over");
            const std::size_t n = scenario.hypotheses.size();
            std::vector<double> mean(n, 0.0);
            for (const auto& sr : scored)
                for (std::size_t i = 0; i < n; ++i) mean[i] += sr.likelihoods[i];
            for (double& m : mean) m /= static_cast<double>(scored.size());
            const LikelihoodVector network(mean);
            const OptimizationResult result = optimize_weights(network, scenario.effective_constraints());

            OptimizationSection section;
            section.network_likelihoods = round_sig12(mean);
            section.prior_weights = round_sig12({scenario.weights.values().begin(), scenario.weights.values().end()});
            section.prior_objective = round_sig12(total_probability(scenario.weights, network));
            section.weights = round_sig12({result.weights.values().begin(), result.weights.values().end()});
            section.objective = round_sig12(result.objective);
            for (BoundState b : result.active_bounds) section.active_bounds.emplace_back(to_string(b));
            section.sensitivity = round_sig12(sensitivity(result.weights, network));
            for (const auto& sr : scored)
                section.route_total_probability[sr.spec->route.id] =
                    round_sig12(total_probability(result.weights, sr.likelihoods));
            report.optimization = std::move(section);
            optimized = result.weights;
        });
    }

    if (stages.plan) {
        in_stage("plan", [&] {
            const WeightVector& w = optimized ? *optimized : scenario.weights;
            std::vector<RouteCandidate> candidates;
            for (const auto& sr : scored)
                candidates.push_back({sr.spec->route.id, sr.fleet->name, sr.profit, total_probability(w, sr.likelihoods),
                                      sr.requirement.aircraft_count});
            const NetworkPlan plan = select_routes(candidates, scenario.availability);
            PlanSection section;
            section.weights_source = optimized ? "optimized" : "prior";
            section.selected = plan.selected;
            section.available = scenario.availability;
            section.used = plan.used;
            for (const auto& [id, score] : plan.per_route_scores) section.per_route_scores[id] = round_sig12(score);
            section.total_score = round_sig12(plan.total_score);
            section.heuristic = plan.heuristic;
            report.plan = std::move(section);
        });
    }

    if (stages.rm) {
        in_stage("rm", [&] {
            std::vector<RmRow> rows;
            for (std::size_t i = 0; i < scenario.rm_legs.size(); ++i) {
                const LegRMProblem& leg = scenario.rm_legs[i];
                RmRow row;
                row.leg_id = leg.id;
                row.littlewood_protection = littlewood_protection(leg);
                row.protection_level = std::min(row.littlewood_protection, leg.capacity);
                row.booking_limit = overbooking_limit(leg);
                row.overbooking_capped = row.booking_limit == overbooking_search_cap(leg) && row.booking_limit > leg.capacity;
                const RMPolicy policy{row.protection_level, row.booking_limit};
                const double revenue = expected_revenue(leg, policy);
                const double fcfs = fcfs_baseline(leg);
                row.expected_revenue = round_sig12(revenue);
                row.protection_only_revenue = round_sig12(expected_revenue(leg, RMPolicy{row.protection_level, leg.capacity}));
                row.fcfs_revenue = round_sig12(fcfs);
                row.uplift = round_sig12(revenue - fcfs);
                row.uplift_pct = round_sig12(fcfs > 0.0 ? 100.0 * (revenue - fcfs) / fcfs : 0.0);
                auto seeder = Xoshiro256::stream(report.metadata.seed, i);
                row.sim_seed = seeder();
                SimulationSummary sim = simulate_leg(leg, policy, options.rm_trials, row.sim_seed);
                sim.mean_revenue = round_sig12(sim.mean_revenue);
                sim.revenue_std_error = round_sig12(sim.revenue_std_error);
                sim.mean_load_factor = round_sig12(sim.mean_load_factor);
                sim.denied_rate = round_sig12(sim.denied_rate);
                sim.spill_rate = round_sig12(sim.spill_rate);
                row.simulation = sim;
                rows.push_back(std::move(row));
            }
            report.rm = std::move(rows);
        });
    }
    return report;
}

}  // namespace routebayes
