// routebayes command line: evaluate | optimize | plan | rm | validate.
//
// Exit codes: 0 success, 1 validation/parse error, 2 infeasible constraints,
// 3 I/O error.

#include "routebayes/routebayes.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <future>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace routebayes;

namespace {

enum ExitCode : int { kOk = 0, kInvalid = 1, kInfeasible = 2, kIo = 3 };

int exit_code_for(Errc code) {
    switch (code) {
        case Errc::InfeasibleConstraints: return kInfeasible;
        case Errc::IoError: return kIo;
        default: return kInvalid;
    }
}

struct Options {
    std::vector<std::string> scenarios;
    std::string format = "table";
    std::string out;
    std::int64_t trials = kDefaultRmTrials;
    std::optional<std::uint64_t> seed;
    bool no_optimize = false;
    bool no_timestamp = false;
};

struct FileResult {
    int code = kOk;
    std::string output;  // rendered report when writing to stdout
    std::string message;
};

fs::path output_path_for(const Options& opt, const std::string& scenario, ReportFormat format) {
    if (opt.out.empty() || opt.out == "-") return {};
    if (opt.scenarios.size() == 1) return opt.out;
    const char* ext = format == ReportFormat::Json ? ".json" : format == ReportFormat::Csv ? ".csv" : ".txt";
    return fs::path(opt.out) / (fs::path(scenario).stem().string() + ext);
}

FileResult run_one(const std::string& scenario_path, const Stages& stages, const Options& opt, bool validate_only) {
    FileResult result;
    try {
        Scenario scenario = load_scenario(scenario_path);
        if (validate_only) {
            scenario.effective_constraints().validate();
            result.message = "ok: " + scenario_path;
            return result;
        }
        RunOptions run;
        run.rm_trials = opt.trials;
        run.seed = opt.seed;
        run.timestamp = !opt.no_timestamp;
        const Report report = run_pipeline(scenario, stages, run);
        const ReportFormat format = parse_report_format(opt.format);
        const fs::path dest = output_path_for(opt, scenario_path, format);
        if (dest.empty()) {
            result.output = render_report(report, format);
        } else {
            for (const auto& p : emit_report(report, format, dest)) result.message += "wrote " + p.string() + "\n";
        }
    } catch (const Error& e) {
        result.code = exit_code_for(e.code());
        result.message = scenario_path + ": " + e.what();
    } catch (const std::exception& e) {
        result.code = kInvalid;
        result.message = scenario_path + ": " + e.what();
    }
    return result;
}

int run_all(const Stages& stages, const Options& opt, bool validate_only) {
    if (opt.scenarios.size() > 1 && !opt.out.empty() && opt.out != "-") {
        std::error_code ec;
        fs::create_directories(opt.out, ec);
        if (ec || !fs::is_directory(opt.out)) {
            std::cerr << "error: --out must be a directory when several scenarios are given\n";
            return kIo;
        }
    }
    // Scenarios are independent; each run owns its data.
    std::vector<std::future<FileResult>> jobs;
    for (const auto& path : opt.scenarios)
        jobs.push_back(std::async(std::launch::async, run_one, path, stages, opt, validate_only));

    int code = kOk;
    for (auto& job : jobs) {
        const FileResult r = job.get();
        std::cout << r.output;
        if (r.code == kOk) {
            if (!r.message.empty()) std::cerr << r.message << (r.message.back() == '\n' ? "" : "\n");
        } else {
            std::cerr << "error: " << r.message << '\n';
            if (code == kOk) code = r.code;
        }
    }
    std::cout.flush();
    if (!std::cout) return kIo;
    return code;
}

void add_common(CLI::App* cmd, Options& opt, bool with_output) {
    cmd->add_option("--scenario", opt.scenarios, "Scenario file(s)")->required();
    if (with_output) {
        cmd->add_option("--format", opt.format, "Report format")->check(CLI::IsMember({"json", "csv", "table"}));
        cmd->add_option("--out", opt.out, "Output path (directory when several scenarios); default stdout");
        cmd->add_flag("--no-timestamp", opt.no_timestamp, "Omit the generation timestamp from the report");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"routebayes: Bayesian profitability evaluation for airline route planning"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolVersion));

    Options opt;
    std::uint64_t seed = 0;

    auto* evaluate = app.add_subcommand("evaluate", "Per-route total probability and posterior attribution");
    add_common(evaluate, opt, true);

    auto* optimize = app.add_subcommand("optimize", "Evaluate, then optimize weights and report sensitivities");
    add_common(optimize, opt, true);

    auto* plan = app.add_subcommand("plan", "Full pipeline through the network plan");
    add_common(plan, opt, true);
    plan->add_flag("--no-optimize", opt.no_optimize, "Score candidates with the prior weights");

    auto* rm = app.add_subcommand("rm", "Leg revenue management: protection, overbooking, simulation");
    add_common(rm, opt, true);
    rm->add_option("--trials", opt.trials, "Simulation trials per leg")->check(CLI::PositiveNumber);
    auto* seed_opt = rm->add_option("--seed", seed, "Simulation seed (overrides the scenario seed)");

    auto* validate = app.add_subcommand("validate", "Schema and consistency check only");
    add_common(validate, opt, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kInvalid;
    }
    if (seed_opt->count() > 0) opt.seed = seed;

    Stages stages;
    if (evaluate->parsed()) stages.evaluate = true;
    if (optimize->parsed()) stages = {true, true, false, false};
    if (plan->parsed()) stages = {true, !opt.no_optimize, true, false};
    if (rm->parsed()) stages.rm = true;
    return run_all(stages, opt, validate->parsed());
}
