#pragma once
// Route selection under fleet availability: a multidimensional 0/1 knapsack
// with one integer capacity per fleet type.
//
// Up to kExactCandidateLimit positive-score candidates are solved exactly by
// depth-first branch and bound. Larger inputs fall back to a greedy ratio
// rule and the plan is flagged heuristic.

#include "routebayes/error.hpp"
#include "routebayes/route_economics.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

namespace routebayes {

inline constexpr std::size_t kExactCandidateLimit = 24;

struct RouteCandidate {
    std::string route_id;
    std::string fleet_name;
    double profit_per_week = 0.0;
    double total_probability = 0.0;
    Count aircraft_needed = 0;

    bool operator==(const RouteCandidate&) const = default;
};

using FleetAvailability = std::map<std::string, Count>;

struct NetworkPlan {
    std::vector<std::string> selected;          // candidate input order
    std::map<std::string, Count> used;          // every fleet in the availability map
    double total_score = 0.0;                   // sum of per_route_scores in `selected` order
    std::map<std::string, double> per_route_scores;
    bool heuristic = false;

    bool operator==(const NetworkPlan&) const = default;
};

// Probability-weighted expected weekly profit.
inline double score_candidate(const RouteCandidate& candidate) {
    return candidate.total_probability * candidate.profit_per_week;
}

inline std::vector<RouteCandidate> rank_routes(std::vector<RouteCandidate> candidates) {
    std::stable_sort(candidates.begin(), candidates.end(), [](const RouteCandidate& a, const RouteCandidate& b) {
        const double sa = score_candidate(a);
        const double sb = score_candidate(b);
        if (sa != sb) return sa > sb;
        return a.route_id < b.route_id;
    });
    return candidates;
}

namespace detail {

struct KnapsackItem {
    std::size_t candidate;  // index into the caller's candidate list
    std::size_t fleet;      // index into the fleet dimension list
    Count need;
    double score;
};

class BranchAndBound {
public:
    BranchAndBound(const std::vector<KnapsackItem>& items, const std::vector<std::string>& ids, std::vector<Count> capacity)
        : items_(items), ids_(ids), remaining_(std::move(capacity)) {
        suffix_.assign(items_.size() + 1, 0.0);
        for (std::size_t i = items_.size(); i-- > 0;) suffix_[i] = suffix_[i + 1] + items_[i].score;
    }

    std::vector<std::size_t> solve() {
        best_score_ = 0.0;
        best_.clear();
        current_.clear();
        descend(0, 0.0);
        return best_;
    }

private:
    void descend(std::size_t depth, double score) {
        if (depth == items_.size()) {
            consider(score);
            return;
        }
        // The suffix bound is computed in a different order than the path sum;
        // the slack keeps round-off from pruning a tying or optimal branch.
        const double bound = score + suffix_[depth];
        const double slack = 1e-9 * (1.0 + std::abs(bound));
        if (bound + slack < best_score_) return;

        const KnapsackItem& item = items_[depth];
        if (item.need <= remaining_[item.fleet]) {
            remaining_[item.fleet] -= item.need;
            current_.push_back(depth);
            descend(depth + 1, score + item.score);
            current_.pop_back();
            remaining_[item.fleet] += item.need;
        }
        descend(depth + 1, score);
    }

    void consider(double score) {
        if (score > best_score_ || (score == best_score_ && smaller_id_set(current_, best_))) {
            best_score_ = score;
            best_ = current_;
        }
    }

    bool smaller_id_set(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) const {
        return sorted_ids(a) < sorted_ids(b);
    }

    std::vector<std::string> sorted_ids(const std::vector<std::size_t>& picks) const {
        std::vector<std::string> out;
        out.reserve(picks.size());
        for (std::size_t p : picks) out.push_back(ids_[items_[p].candidate]);
        std::sort(out.begin(), out.end());
        return out;
    }

    const std::vector<KnapsackItem>& items_;
    const std::vector<std::string>& ids_;
    std::vector<Count> remaining_;
    std::vector<double> suffix_;
    std::vector<std::size_t> current_;
    std::vector<std::size_t> best_;
    double best_score_ = 0.0;
};

}  // namespace detail

inline NetworkPlan select_routes(const std::vector<RouteCandidate>& candidates, const FleetAvailability& availability) {
    std::vector<std::string> fleets;
    std::vector<Count> capacity;
    for (const auto& [name, count] : availability) {
        if (count < 0) throw Error(Errc::InvalidArgument, "availability of fleet " + name + " is negative");
        fleets.push_back(name);
        capacity.push_back(count);
    }

    std::vector<std::string> ids;
    std::set<std::string> seen;
    std::vector<detail::KnapsackItem> items;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        const RouteCandidate& cand = candidates[c];
        ids.push_back(cand.route_id);
        if (!seen.insert(cand.route_id).second)
            throw Error(Errc::DuplicateCandidate, "route " + cand.route_id + " appears more than once").at_index(c);
        const auto it = std::lower_bound(fleets.begin(), fleets.end(), cand.fleet_name);
        if (it == fleets.end() || *it != cand.fleet_name)
            throw Error(Errc::UnknownFleet, "candidate " + cand.route_id + " uses unknown fleet " + cand.fleet_name).at_index(c);
        if (cand.aircraft_needed < 0)
            throw Error(Errc::InvalidArgument, "candidate " + cand.route_id + " needs a negative aircraft count").at_index(c);
        const double score = score_candidate(cand);
        if (score > 0.0)
            items.push_back({c, static_cast<std::size_t>(it - fleets.begin()), cand.aircraft_needed, score});
    }

    NetworkPlan plan;
    for (const auto& name : fleets) plan.used[name] = 0;

    std::vector<std::size_t> picks;  // indices into `items`
    if (items.size() <= kExactCandidateLimit) {
        picks = detail::BranchAndBound(items, ids, capacity).solve();
    } else {
        plan.heuristic = true;
        std::vector<std::size_t> order(items.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        auto ratio = [&](std::size_t i) {
            return items[i].need == 0 ? std::numeric_limits<double>::infinity()
                                      : items[i].score / static_cast<double>(items[i].need);
        };
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            const double ra = ratio(a);
            const double rb = ratio(b);
            if (ra != rb) return ra > rb;
            return ids[items[a].candidate] < ids[items[b].candidate];
        });
        std::vector<Count> remaining = capacity;
        for (std::size_t i : order) {
            if (items[i].need <= remaining[items[i].fleet]) {
                remaining[items[i].fleet] -= items[i].need;
                picks.push_back(i);
            }
        }
        std::sort(picks.begin(), picks.end());
    }

    for (std::size_t p : picks) {
        const detail::KnapsackItem& item = items[p];
        const std::string& id = ids[item.candidate];
        plan.selected.push_back(id);
        plan.used[fleets[item.fleet]] += item.need;
        plan.per_route_scores[id] = item.score;
        plan.total_score += item.score;
    }
    return plan;
}

}  // namespace routebayes
