#pragma once
// Scenario documents: JSON parsing with field-path validation, and the
// lossless inverse used for round-tripping.
//
// Top-level keys: schema_version, hypotheses, weights, constraints, anchors,
// fleets, availability, routes, rm_legs, seed. See docs/scenario_format.md.

#include "routebayes/bayes_core.hpp"
#include "routebayes/error.hpp"
#include "routebayes/network_planner.hpp"
#include "routebayes/rm_sim.hpp"
#include "routebayes/route_economics.hpp"
#include "routebayes/weight_optimizer.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace routebayes {

inline constexpr std::string_view kSchemaVersion = "1.0";

using json = nlohmann::json;

struct RouteSpec {
    Route route;
    std::string fleet;  // pinned fleet type; empty selects the most profitable feasible one
    std::optional<LikelihoodVector> likelihoods;  // overrides KPI scoring when present

    bool operator==(const RouteSpec&) const = default;
};

struct Scenario {
    std::string schema_version{kSchemaVersion};
    HypothesisSet hypotheses = default_hypotheses();
    std::vector<double> declared_weights{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
    WeightVector weights = WeightVector::uniform(3);
    std::optional<BoxConstraints> constraints;
    ScoringAnchors anchors;
    std::vector<FleetType> fleets;
    FleetAvailability availability;
    std::vector<RouteSpec> routes;
    std::vector<LegRMProblem> rm_legs;
    std::uint64_t seed = 0;

    const FleetType* find_fleet(std::string_view name) const {
        for (const auto& f : fleets)
            if (f.name == name) return &f;
        return nullptr;
    }

    // Box constraints in force for the optimize stage.
    BoxConstraints effective_constraints() const {
        return constraints ? *constraints : BoxConstraints::unbounded(hypotheses.size());
    }

    bool operator==(const Scenario&) const = default;
};

namespace detail {

inline Error invalid(const std::string& path, const std::string& reason) {
    return Error(Errc::ValidationError, path + ": " + reason).at_path(path);
}

inline std::string join_path(const std::string& parent, std::string_view key) {
    return parent.empty() ? std::string(key) : parent + "." + std::string(key);
}

inline std::string index_path(const std::string& parent, std::size_t i) {
    return parent + "[" + std::to_string(i) + "]";
}

// Field access on one JSON object, with every failure tagged by field path.
class ObjectReader {
public:
    ObjectReader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
        if (!obj_.is_object()) throw invalid(path_.empty() ? "<root>" : path_, "expected an object");
    }

    void allow_only(std::initializer_list<std::string_view> keys) const {
        for (const auto& [key, _] : obj_.items()) {
            bool known = false;
            for (auto k : keys) known = known || key == k;
            if (!known) throw invalid(join_path(path_, key), "unknown field");
        }
    }

    bool has(std::string_view key) const { return obj_.contains(key); }
    std::string path(std::string_view key) const { return join_path(path_, key); }

    const json& require(std::string_view key) const {
        const auto it = obj_.find(key);
        if (it == obj_.end()) throw invalid(path(key), "missing required field");
        return *it;
    }

    double number(std::string_view key) const { return as_number(require(key), path(key)); }
    double number_or(std::string_view key, double fallback) const { return has(key) ? number(key) : fallback; }

    std::int64_t integer(std::string_view key) const { return as_integer(require(key), path(key)); }

    std::string string(std::string_view key) const {
        const json& v = require(key);
        if (!v.is_string()) throw invalid(path(key), "expected a string");
        return v.get<std::string>();
    }
    std::string string_or(std::string_view key, std::string fallback) const {
        return has(key) ? string(key) : std::move(fallback);
    }

    static double as_number(const json& v, const std::string& path) {
        if (!v.is_number()) throw invalid(path, "expected a number");
        const double d = v.get<double>();
        if (!std::isfinite(d)) throw invalid(path, "expected a finite number");
        return d;
    }

    static std::int64_t as_integer(const json& v, const std::string& path) {
        if (!v.is_number_integer()) throw invalid(path, "expected an integer");
        if (v.is_number_unsigned() && v.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX))
            throw invalid(path, "integer out of range");
        return v.get<std::int64_t>();
    }

    static std::vector<double> as_number_array(const json& v, const std::string& path) {
        if (!v.is_array()) throw invalid(path, "expected an array of numbers");
        std::vector<double> out;
        for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_number(v[i], index_path(path, i)));
        return out;
    }

private:
    const json& obj_;
    std::string path_;
};

// Runs `fn`, turning any module error into a ValidationError at `path`.
template <class Fn>
auto at_field(const std::string& path, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const Error& e) {
        if (e.code() == Errc::ValidationError || e.code() == Errc::DanglingReference) throw;
        throw invalid(path, e.what());
    }
}

inline void require_nonnegative(double v, const std::string& path) {
    if (v < 0.0) throw invalid(path, "must be nonnegative");
}

inline void require_positive(double v, const std::string& path) {
    if (!(v > 0.0)) throw invalid(path, "must be positive");
}

inline DemandModel parse_demand(const json& j, const std::string& path) {
    ObjectReader r(j, path);
    r.allow_only({"poisson", "pmf"});
    if (r.has("poisson") == r.has("pmf")) throw invalid(path, "specify exactly one of 'poisson' or 'pmf'");
    if (r.has("poisson")) {
        const double mean = r.number("poisson");
        return at_field(r.path("poisson"), [&] { return DemandModel::poisson(mean); });
    }
    auto pmf = ObjectReader::as_number_array(r.require("pmf"), r.path("pmf"));
    return at_field(r.path("pmf"), [&] { return DemandModel::discrete(std::move(pmf)); });
}

inline json demand_to_json(const DemandModel& d) {
    if (d.kind() == DemandModel::Kind::Poisson) return json{{"poisson", d.mean_parameter()}};
    return json{{"pmf", d.declared_pmf()}};
}

inline Anchor parse_anchor(const json& j, const std::string& path) {
    ObjectReader r(j, path);
    r.allow_only({"worst", "best"});
    Anchor a{r.number("worst"), r.number("best")};
    if (a.worst == a.best) throw invalid(path, "worst and best anchors coincide");
    return a;
}

inline std::size_t line_of(std::string_view text, std::size_t byte, std::size_t& column) {
    std::size_t line = 1;
    column = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return line;
}

}  // namespace detail

inline Scenario scenario_from_json(const json& doc) {
    using detail::invalid;
    using detail::ObjectReader;

    ObjectReader root(doc, "");
    root.allow_only({"schema_version", "hypotheses", "weights", "constraints", "anchors", "fleets", "availability",
                     "routes", "rm_legs", "seed"});

    Scenario s;
    s.schema_version = root.string("schema_version");
    if (s.schema_version != kSchemaVersion)
        throw Error(Errc::SchemaVersionUnsupported,
                    "schema_version '" + s.schema_version + "' is not supported (expected " + std::string(kSchemaVersion) + ")")
            .at_path("schema_version");

    if (root.has("hypotheses")) {
        const json& hs = root.require("hypotheses");
        if (!hs.is_array()) throw invalid("hypotheses", "expected an array");
        std::vector<Hypothesis> items;
        for (std::size_t i = 0; i < hs.size(); ++i) {
            const std::string path = detail::index_path("hypotheses", i);
            ObjectReader h(hs[i], path);
            h.allow_only({"id", "label", "description"});
            Hypothesis hyp{h.string("id"), "", h.string_or("description", "")};
            hyp.label = h.string_or("label", hyp.id);
            items.push_back(std::move(hyp));
        }
        s.hypotheses = detail::at_field("hypotheses", [&] { return HypothesisSet(std::move(items)); });
    }
    const std::size_t n = s.hypotheses.size();

    if (root.has("weights")) {
        s.declared_weights = ObjectReader::as_number_array(root.require("weights"), "weights");
        if (s.declared_weights.size() != n)
            throw invalid("weights", "expected " + std::to_string(n) + " entries, got " + std::to_string(s.declared_weights.size()));
    } else {
        s.declared_weights.assign(n, 1.0 / static_cast<double>(n));
    }
    s.weights = detail::at_field("weights", [&] { return WeightVector::from_simplex(s.declared_weights); });

    if (root.has("constraints")) {
        ObjectReader c(root.require("constraints"), "constraints");
        c.allow_only({"lower", "upper"});
        BoxConstraints box;
        box.lower = c.has("lower") ? ObjectReader::as_number_array(c.require("lower"), "constraints.lower")
                                   : std::vector<double>(n, 0.0);
        box.upper = c.has("upper") ? ObjectReader::as_number_array(c.require("upper"), "constraints.upper")
                                   : std::vector<double>(n, 1.0);
        if (box.lower.size() != n) throw invalid("constraints.lower", "expected " + std::to_string(n) + " entries");
        if (box.upper.size() != n) throw invalid("constraints.upper", "expected " + std::to_string(n) + " entries");
        for (std::size_t i = 0; i < n; ++i)
            if (!(box.lower[i] >= 0.0 && box.lower[i] <= box.upper[i] && box.upper[i] <= 1.0))
                throw invalid(detail::index_path("constraints", i), "bounds must satisfy 0 <= lower <= upper <= 1");
        // Feasibility of the slice (sum lower <= 1 <= sum upper) is checked by
        // the optimize stage, which reports it as InfeasibleConstraints.
        s.constraints = std::move(box);
    }

    {
        ObjectReader a(root.require("anchors"), "anchors");
        a.allow_only({"service", "capital", "cost", "epsilon"});
        if (a.has("service")) s.anchors.service = detail::parse_anchor(a.require("service"), "anchors.service");
        s.anchors.capital = detail::parse_anchor(a.require("capital"), "anchors.capital");
        s.anchors.cost = detail::parse_anchor(a.require("cost"), "anchors.cost");
        s.anchors.epsilon = a.number_or("epsilon", 0.01);
        detail::at_field("anchors.epsilon", [&] { s.anchors.validate(); });
    }

    {
        const json& fs = root.require("fleets");
        if (!fs.is_array()) throw invalid("fleets", "expected an array");
        std::set<std::string> names;
        for (std::size_t i = 0; i < fs.size(); ++i) {
            const std::string path = detail::index_path("fleets", i);
            ObjectReader f(fs[i], path);
            f.allow_only({"name", "seats", "range_km", "utilization_block_hours_per_week", "target_load_factor"});
            FleetType ft;
            ft.name = f.string("name");
            if (ft.name.empty()) throw invalid(f.path("name"), "must not be empty");
            if (!names.insert(ft.name).second) throw invalid(f.path("name"), "duplicate fleet name '" + ft.name + "'");
            ft.seats = f.integer("seats");
            if (ft.seats < 1) throw invalid(f.path("seats"), "must be at least 1");
            ft.range_km = f.number("range_km");
            detail::require_positive(ft.range_km, f.path("range_km"));
            ft.utilization_block_hours_per_week = f.number("utilization_block_hours_per_week");
            detail::require_positive(ft.utilization_block_hours_per_week, f.path("utilization_block_hours_per_week"));
            ft.target_load_factor = f.number_or("target_load_factor", 0.8);
            if (!(ft.target_load_factor > 0.0 && ft.target_load_factor <= 1.0))
                throw invalid(f.path("target_load_factor"), "must lie in (0,1]");
            s.fleets.push_back(std::move(ft));
        }
    }

    if (root.has("availability")) {
        const json& av = root.require("availability");
        if (!av.is_object()) throw invalid("availability", "expected an object of fleet name -> aircraft count");
        for (const auto& [name, count] : av.items()) {
            const std::string path = "availability." + name;
            if (!s.find_fleet(name))
                throw Error(Errc::DanglingReference, path + ": unknown fleet '" + name + "'").at_path(path);
            const std::int64_t c = ObjectReader::as_integer(count, path);
            if (c < 0) throw invalid(path, "must be nonnegative");
            s.availability[name] = c;
        }
    }
    for (const auto& f : s.fleets) s.availability.try_emplace(f.name, 0);

    {
        const json& rs = root.require("routes");
        if (!rs.is_array()) throw invalid("routes", "expected an array");
        std::set<std::string> ids;
        for (std::size_t i = 0; i < rs.size(); ++i) {
            const std::string path = detail::index_path("routes", i);
            ObjectReader r(rs[i], path);
            r.allow_only({"id", "origin", "destination", "distance_km", "demand_pax_per_week", "average_fare",
                          "block_hours_per_flight", "cost_per_block_hour", "fixed_cost_per_flight", "service_score",
                          "tied_capital", "fleet", "likelihoods"});
            RouteSpec spec;
            Route& rt = spec.route;
            rt.id = r.string("id");
            if (rt.id.empty()) throw invalid(r.path("id"), "must not be empty");
            if (!ids.insert(rt.id).second) throw invalid(r.path("id"), "duplicate route id '" + rt.id + "'");
            rt.origin = r.string("origin");
            rt.destination = r.string("destination");
            rt.distance_km = r.number("distance_km");
            detail::require_positive(rt.distance_km, r.path("distance_km"));
            rt.demand_pax_per_week = r.number("demand_pax_per_week");
            detail::require_nonnegative(rt.demand_pax_per_week, r.path("demand_pax_per_week"));
            rt.average_fare = r.number("average_fare");
            detail::require_nonnegative(rt.average_fare, r.path("average_fare"));
            rt.block_hours_per_flight = r.number("block_hours_per_flight");
            detail::require_positive(rt.block_hours_per_flight, r.path("block_hours_per_flight"));
            rt.cost_per_block_hour = r.number("cost_per_block_hour");
            detail::require_nonnegative(rt.cost_per_block_hour, r.path("cost_per_block_hour"));
            rt.fixed_cost_per_flight = r.number("fixed_cost_per_flight");
            detail::require_nonnegative(rt.fixed_cost_per_flight, r.path("fixed_cost_per_flight"));
            rt.service_score = r.number("service_score");
            if (!(rt.service_score >= 0.0 && rt.service_score <= 1.0))
                throw invalid(r.path("service_score"), "must lie in [0,1]");
            rt.tied_capital = r.number("tied_capital");
            detail::require_nonnegative(rt.tied_capital, r.path("tied_capital"));

            spec.fleet = r.string_or("fleet", "");
            if (r.has("fleet") && !s.find_fleet(spec.fleet))
                throw Error(Errc::DanglingReference, r.path("fleet") + ": unknown fleet '" + spec.fleet + "'")
                    .at_path(r.path("fleet"));

            if (r.has("likelihoods")) {
                auto values = ObjectReader::as_number_array(r.require("likelihoods"), r.path("likelihoods"));
                if (values.size() != n)
                    throw invalid(r.path("likelihoods"), "expected " + std::to_string(n) + " entries");
                spec.likelihoods = detail::at_field(r.path("likelihoods"), [&] { return LikelihoodVector(std::move(values)); });
            } else if (n != 3) {
                throw invalid(r.path("likelihoods"),
                              "required when the hypothesis set does not have the three scored components");
            }
            s.routes.push_back(std::move(spec));
        }
    }

    if (root.has("rm_legs")) {
        const json& legs = root.require("rm_legs");
        if (!legs.is_array()) throw invalid("rm_legs", "expected an array");
        std::set<std::string> ids;
        for (std::size_t i = 0; i < legs.size(); ++i) {
            const std::string path = detail::index_path("rm_legs", i);
            ObjectReader l(legs[i], path);
            l.allow_only({"id", "capacity", "fare_high", "fare_low", "demand_high", "demand_low", "show_up_prob",
                          "denied_cost"});
            LegRMProblem leg;
            leg.id = l.string("id");
            if (!ids.insert(leg.id).second) throw invalid(l.path("id"), "duplicate leg id '" + leg.id + "'");
            leg.capacity = l.integer("capacity");
            if (leg.capacity < 1) throw invalid(l.path("capacity"), "must be at least 1");
            leg.fare_high = l.number("fare_high");
            leg.fare_low = l.number("fare_low");
            if (!(leg.fare_low > 0.0)) throw invalid(l.path("fare_low"), "must be positive");
            if (leg.fare_low > leg.fare_high) throw invalid(l.path("fare_high"), "must be at least fare_low");
            leg.demand_high = detail::parse_demand(l.require("demand_high"), l.path("demand_high"));
            leg.demand_low = detail::parse_demand(l.require("demand_low"), l.path("demand_low"));
            leg.show_up_prob = l.number_or("show_up_prob", 1.0);
            if (!(leg.show_up_prob > 0.0 && leg.show_up_prob <= 1.0))
                throw invalid(l.path("show_up_prob"), "must lie in (0,1]");
            leg.denied_cost = l.number_or("denied_cost", 0.0);
            detail::require_nonnegative(leg.denied_cost, l.path("denied_cost"));
            s.rm_legs.push_back(std::move(leg));
        }
    }

    if (root.has("seed")) {
        const json& seed = root.require("seed");
        if (!seed.is_number_integer() || (!seed.is_number_unsigned() && seed.get<std::int64_t>() < 0))
            throw invalid("seed", "expected a nonnegative 64-bit integer");
        s.seed = seed.get<std::uint64_t>();
    }
    return s;
}

inline Scenario parse_scenario(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        std::size_t column = 0;
        const std::size_t line = detail::line_of(text, e.byte == 0 ? 0 : e.byte - 1, column);
        throw Error(Errc::ParseError, "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + e.what())
            .at_index(e.byte);
    }
    return scenario_from_json(doc);
}

inline Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::IoError, "cannot open scenario file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw Error(Errc::IoError, "cannot read scenario file " + path.string());
    return parse_scenario(buf.str());
}

// Lossless JSON form of a resolved scenario; defaults are written out.
inline json scenario_to_json(const Scenario& s) {
    json doc;
    doc["schema_version"] = s.schema_version;
    json hs = json::array();
    for (const auto& h : s.hypotheses) hs.push_back({{"id", h.id}, {"label", h.label}, {"description", h.description}});
    doc["hypotheses"] = std::move(hs);
    doc["weights"] = s.declared_weights;
    if (s.constraints) doc["constraints"] = {{"lower", s.constraints->lower}, {"upper", s.constraints->upper}};
    doc["anchors"] = {
        {"service", {{"worst", s.anchors.service.worst}, {"best", s.anchors.service.best}}},
        {"capital", {{"worst", s.anchors.capital.worst}, {"best", s.anchors.capital.best}}},
        {"cost", {{"worst", s.anchors.cost.worst}, {"best", s.anchors.cost.best}}},
        {"epsilon", s.anchors.epsilon},
    };
    json fleets = json::array();
    for (const auto& f : s.fleets)
        fleets.push_back({{"name", f.name},
                          {"seats", f.seats},
                          {"range_km", f.range_km},
                          {"utilization_block_hours_per_week", f.utilization_block_hours_per_week},
                          {"target_load_factor", f.target_load_factor}});
    doc["fleets"] = std::move(fleets);
    json av = json::object();
    for (const auto& [name, count] : s.availability) av[name] = count;
    doc["availability"] = std::move(av);
    json routes = json::array();
    for (const auto& spec : s.routes) {
        const Route& r = spec.route;
        json jr = {{"id", r.id},
                   {"origin", r.origin},
                   {"destination", r.destination},
                   {"distance_km", r.distance_km},
                   {"demand_pax_per_week", r.demand_pax_per_week},
                   {"average_fare", r.average_fare},
                   {"block_hours_per_flight", r.block_hours_per_flight},
                   {"cost_per_block_hour", r.cost_per_block_hour},
                   {"fixed_cost_per_flight", r.fixed_cost_per_flight},
                   {"service_score", r.service_score},
                   {"tied_capital", r.tied_capital}};
        if (!spec.fleet.empty()) jr["fleet"] = spec.fleet;
        if (spec.likelihoods)
            jr["likelihoods"] = std::vector<double>(spec.likelihoods->values().begin(), spec.likelihoods->values().end());
        routes.push_back(std::move(jr));
    }
    doc["routes"] = std::move(routes);
    json legs = json::array();
    for (const auto& l : s.rm_legs)
        legs.push_back({{"id", l.id},
                        {"capacity", l.capacity},
                        {"fare_high", l.fare_high},
                        {"fare_low", l.fare_low},
                        {"demand_high", detail::demand_to_json(l.demand_high)},
                        {"demand_low", detail::demand_to_json(l.demand_low)},
                        {"show_up_prob", l.show_up_prob},
                        {"denied_cost", l.denied_cost}});
    doc["rm_legs"] = std::move(legs);
    doc["seed"] = s.seed;
    return doc;
}

}  // namespace routebayes
