#pragma once
// Report serialization: canonical JSON (lossless, sorted keys), CSV (one
// file per section) and a fixed-width text table.

#include "routebayes/error.hpp"
#include "routebayes/pipeline.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace routebayes {

enum class ReportFormat { Json, Csv, Table };

inline ReportFormat parse_report_format(std::string_view name) {
    if (name == "json") return ReportFormat::Json;
    if (name == "csv") return ReportFormat::Csv;
    if (name == "table") return ReportFormat::Table;
    throw Error(Errc::InvalidArgument, "unknown report format '" + std::string(name) + "'");
}

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(RouteRow, route_id, fleet, flights_per_week, aircraft, achieved_load_factor, profit,
                                   likelihoods, total_probability, contributions, posterior, top_contributor, score)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(InfeasibleRoute, route_id, reason)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(EvaluationSection, routes, infeasible)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(OptimizationSection, network_likelihoods, prior_weights, prior_objective, weights,
                                   objective, active_bounds, sensitivity, route_total_probability)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(PlanSection, weights_source, selected, available, used, per_route_scores, total_score,
                                   heuristic)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(SimulationSummary, trials, mean_revenue, revenue_std_error, mean_load_factor,
                                   denied_rate, spill_rate)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(RmRow, leg_id, littlewood_protection, protection_level, booking_limit,
                                   overbooking_capped, expected_revenue, protection_only_revenue, fcfs_revenue, uplift,
                                   uplift_pct, sim_seed, simulation)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ReportMetadata, tool, version, schema_version, seed, stages, hypotheses, rm_trials,
                                   timestamp)

inline json report_to_json(const Report& r) {
    json doc;
    doc["metadata"] = r.metadata;
    if (r.evaluation) doc["evaluation"] = *r.evaluation;
    if (r.optimization) doc["optimization"] = *r.optimization;
    if (r.plan) doc["plan"] = *r.plan;
    if (r.rm) doc["rm"] = *r.rm;
    return doc;
}

inline Report report_from_json(const json& doc) {
    try {
        Report r;
        r.metadata = doc.at("metadata").get<ReportMetadata>();
        if (doc.contains("evaluation")) r.evaluation = doc.at("evaluation").get<EvaluationSection>();
        if (doc.contains("optimization")) r.optimization = doc.at("optimization").get<OptimizationSection>();
        if (doc.contains("plan")) r.plan = doc.at("plan").get<PlanSection>();
        if (doc.contains("rm")) r.rm = doc.at("rm").get<std::vector<RmRow>>();
        return r;
    } catch (const json::exception& e) {
        throw Error(Errc::ParseError, std::string("malformed report: ") + e.what());
    }
}

namespace detail {

inline std::string fmt12(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

// Short column names for the default components; other ids are used as is.
inline std::string posterior_column(const std::string& id) {
    if (id == "customer_service") return "post_service";
    if (id == "unavailable_capital") return "post_capital";
    if (id == "costs") return "post_costs";
    return "post_" + id;
}

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

// Ordered (section name, CSV body) pairs for every section present.
inline std::vector<std::pair<std::string, std::string>> csv_sections(const Report& r) {
    std::vector<std::pair<std::string, std::string>> out;
    if (r.evaluation) {
        std::ostringstream os;
        os << "route_id,fleet,flights_per_week,aircraft,profit,total_probability";
        for (const auto& id : r.metadata.hypotheses) os << ',' << posterior_column(id);
        os << ",score\n";
        for (const auto& row : r.evaluation->routes) {
            os << csv_field(row.route_id) << ',' << csv_field(row.fleet) << ',' << row.flights_per_week << ','
               << row.aircraft << ',' << fmt12(row.profit) << ',' << fmt12(row.total_probability);
            for (double p : row.posterior) os << ',' << fmt12(p);
            os << ',' << fmt12(row.score) << '\n';
        }
        out.emplace_back("routes", os.str());

        std::ostringstream inf;
        inf << "route_id,reason\n";
        for (const auto& row : r.evaluation->infeasible) inf << csv_field(row.route_id) << ',' << csv_field(row.reason) << '\n';
        out.emplace_back("infeasible_routes", inf.str());
    }
    if (r.optimization) {
        const auto& o = *r.optimization;
        std::ostringstream os;
        os << "hypothesis,network_likelihood,prior_weight,optimized_weight,active_bound,sensitivity\n";
        for (std::size_t i = 0; i < o.weights.size(); ++i)
            os << csv_field(r.metadata.hypotheses[i]) << ',' << fmt12(o.network_likelihoods[i]) << ','
               << fmt12(o.prior_weights[i]) << ',' << fmt12(o.weights[i]) << ',' << o.active_bounds[i] << ','
               << fmt12(o.sensitivity[i]) << '\n';
        out.emplace_back("optimization", os.str());
    }
    if (r.plan) {
        const auto& p = *r.plan;
        std::ostringstream os;
        os << "route_id,score\n";
        for (const auto& id : p.selected) os << csv_field(id) << ',' << fmt12(p.per_route_scores.at(id)) << '\n';
        out.emplace_back("plan", os.str());

        std::ostringstream fl;
        fl << "fleet,available,used\n";
        for (const auto& [name, avail] : p.available) fl << csv_field(name) << ',' << avail << ',' << p.used.at(name) << '\n';
        out.emplace_back("plan_fleets", fl.str());
    }
    if (r.rm) {
        std::ostringstream os;
        os << "leg_id,protection_level,booking_limit,expected_revenue,fcfs_revenue,uplift,uplift_pct,"
              "sim_mean_revenue,sim_std_error,sim_load_factor,sim_denied_rate,sim_spill_rate\n";
        for (const auto& row : *r.rm)
            os << csv_field(row.leg_id) << ',' << row.protection_level << ',' << row.booking_limit << ','
               << fmt12(row.expected_revenue) << ',' << fmt12(row.fcfs_revenue) << ',' << fmt12(row.uplift) << ','
               << fmt12(row.uplift_pct) << ',' << fmt12(row.simulation.mean_revenue) << ','
               << fmt12(row.simulation.revenue_std_error) << ',' << fmt12(row.simulation.mean_load_factor) << ','
               << fmt12(row.simulation.denied_rate) << ',' << fmt12(row.simulation.spill_rate) << '\n';
        out.emplace_back("rm", os.str());
    }
    return out;
}

inline std::string render_table(const Report& r) {
    std::ostringstream os;
    const auto& m = r.metadata;
    os << m.tool << ' ' << m.version << "  schema " << m.schema_version << "  seed " << m.seed;
    if (!m.timestamp.empty()) os << "  " << m.timestamp;
    os << '\n';

    if (r.evaluation) {
        os << "\nRoute evaluation\n";
        os << std::left << std::setw(12) << "route" << std::setw(10) << "fleet" << std::right << std::setw(8) << "flights"
           << std::setw(9) << "aircraft" << std::setw(14) << "profit" << std::setw(10) << "P(A)";
        for (const auto& id : m.hypotheses) os << std::setw(14) << posterior_column(id);
        os << std::setw(14) << "score" << '\n';
        for (const auto& row : r.evaluation->routes) {
            os << std::left << std::setw(12) << row.route_id << std::setw(10) << row.fleet << std::right << std::setw(8)
               << row.flights_per_week << std::setw(9) << row.aircraft << std::setw(14) << std::fixed
               << std::setprecision(2) << row.profit << std::setw(10) << std::setprecision(4) << row.total_probability;
            for (double p : row.posterior) os << std::setw(14) << std::setprecision(4) << p;
            os << std::setw(14) << std::setprecision(2) << row.score << '\n';
            os.unsetf(std::ios::fixed);
        }
        if (r.evaluation->routes.empty()) os << "no feasible routes\n";
        for (const auto& row : r.evaluation->infeasible)
            os << std::left << std::setw(12) << row.route_id << "infeasible: " << row.reason << std::right << '\n';
    }

    if (r.optimization) {
        const auto& o = *r.optimization;
        os << "\nWeight optimization\n";
        os << std::left << std::setw(22) << "hypothesis" << std::right << std::setw(12) << "likelihood" << std::setw(10)
           << "prior" << std::setw(11) << "optimized" << std::setw(11) << "bound" << '\n';
        for (std::size_t i = 0; i < o.weights.size(); ++i)
            os << std::left << std::setw(22) << m.hypotheses[i] << std::right << std::fixed << std::setprecision(4)
               << std::setw(12) << o.network_likelihoods[i] << std::setw(10) << o.prior_weights[i] << std::setw(11)
               << o.weights[i] << std::setw(11) << o.active_bounds[i] << '\n';
        os << "objective " << std::setprecision(6) << o.prior_objective << " -> " << o.objective << '\n';
        os.unsetf(std::ios::fixed);
    }

    if (r.plan) {
        const auto& p = *r.plan;
        os << "\nNetwork plan (" << p.weights_source << " weights" << (p.heuristic ? ", heuristic" : "") << ")\n";
        os << std::left << std::setw(12) << "route" << std::right << std::setw(16) << "score" << '\n';
        if (p.selected.empty()) os << std::left << std::setw(12) << "-" << "no routes selected" << std::right << '\n';
        for (const auto& id : p.selected)
            os << std::left << std::setw(12) << id << std::right << std::setw(16) << std::fixed << std::setprecision(2)
               << p.per_route_scores.at(id) << '\n';
        os << std::left << std::setw(12) << "total" << std::right << std::setw(16) << std::fixed << std::setprecision(2)
           << p.total_score << '\n';
        os.unsetf(std::ios::fixed);
        for (const auto& [name, avail] : p.available)
            os << "fleet " << name << ": " << p.used.at(name) << " of " << avail << " aircraft used\n";
    }

    if (r.rm) {
        os << "\nRevenue management\n";
        os << std::left << std::setw(10) << "leg" << std::right << std::setw(8) << "protect" << std::setw(8) << "limit"
           << std::setw(14) << "E[revenue]" << std::setw(14) << "FCFS" << std::setw(10) << "uplift%" << std::setw(14)
           << "sim mean" << std::setw(12) << "sim SE" << '\n';
        if (r.rm->empty()) os << "no legs\n";
        for (const auto& row : *r.rm)
            os << std::left << std::setw(10) << row.leg_id << std::right << std::setw(8) << row.protection_level
               << std::setw(8) << row.booking_limit << std::fixed << std::setprecision(2) << std::setw(14)
               << row.expected_revenue << std::setw(14) << row.fcfs_revenue << std::setw(10) << row.uplift_pct
               << std::setw(14) << row.simulation.mean_revenue << std::setw(12) << row.simulation.revenue_std_error
               << (row.overbooking_capped ? "  (overbooking search cap reached)" : "") << '\n';
        os.unsetf(std::ios::fixed);
    }
    return os.str();
}

}  // namespace detail

// Writes `content` to a sibling temporary file and renames it into place.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    std::random_device rd;
    fs::path tmp = path;
    tmp += ".tmp." + std::to_string(rd());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(Errc::IoError, "cannot open " + tmp.string() + " for writing");
        out << content;
        out.flush();
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw Error(Errc::IoError, "failed writing " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw Error(Errc::IoError, "cannot move report into place at " + path.string());
    }
}

inline std::string render_report(const Report& r, ReportFormat format) {
    switch (format) {
        case ReportFormat::Json: return report_to_json(r).dump(2) + "\n";
        case ReportFormat::Table: return detail::render_table(r);
        case ReportFormat::Csv: {
            std::string out;
            for (const auto& [name, body] : detail::csv_sections(r)) {
                if (!out.empty()) out += '\n';
                out += "# " + name + "\n" + body;
            }
            return out;
        }
    }
    return {};
}

// CSV file name for `section` given the --out destination: inside it when it
// is a directory, otherwise `<stem>_<section>.csv` next to it.
inline std::filesystem::path csv_section_path(const std::filesystem::path& destination, const std::string& section) {
    namespace fs = std::filesystem;
    if (fs::is_directory(destination)) return destination / (section + ".csv");
    fs::path p = destination;
    p.replace_filename(destination.stem().string() + "_" + section + ".csv");
    return p;
}

// Emits the report. An empty destination (or "-") means standard output.
// Returns the files written.
inline std::vector<std::filesystem::path> emit_report(const Report& r, ReportFormat format,
                                                      const std::filesystem::path& destination, std::ostream& stdout_stream = std::cout) {
    if (destination.empty() || destination == "-") {
        stdout_stream << render_report(r, format);
        stdout_stream.flush();
        if (!stdout_stream) throw Error(Errc::IoError, "failed writing report to standard output");
        return {};
    }
    if (format == ReportFormat::Csv) {
        std::vector<std::filesystem::path> written;
        for (const auto& [name, body] : detail::csv_sections(r)) {
            auto path = csv_section_path(destination, name);
            write_file_atomic(path, body);
            written.push_back(std::move(path));
        }
        return written;
    }
    write_file_atomic(destination, render_report(r, format));
    return {destination};
}

}  // namespace routebayes
