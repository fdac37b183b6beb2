// Experiment CLI: evaluates rate regions, outer bounds, asymptotics, and
// chain-schedule transcripts for half-duplex bi-directional relaying, and
// writes CSV/JSON tables for plotting.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "bdrelay/scenarios.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir = "out";
    std::string format = "csv";
    bool hull = false;
    bool power_grid = false;
    int lambda_steps = 0;  // 0 = keep config/default
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "Scenario config file (key = value lines)");
    cmd->add_option("--out", args.out_dir, "Output directory")->capture_default_str();
    cmd->add_option("--format", args.format, "Output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    cmd->add_flag("--hull", args.hull, "Close frontiers under time sharing (convex hull)");
    cmd->add_flag("--power-grid", args.power_grid,
                  "Scan relay power splits beyond the proportional default");
    cmd->add_option("--lambda-steps", args.lambda_steps, "Number of weights in the sweep");
}

bdrelay::ScenarioConfig load_config(const CommonArgs& args, const std::string& scenario) {
    bdrelay::ScenarioConfig cfg;
    if (!args.config_path.empty()) cfg = bdrelay::parse_config_file(args.config_path);
    if (!cfg.scenario.empty() && cfg.scenario != scenario)
        throw bdrelay::ConfigError("config is for scenario '" + cfg.scenario +
                                   "' but subcommand is '" + scenario + "'");
    cfg.scenario = scenario;
    if (args.hull) cfg.hull = true;
    if (args.power_grid) cfg.power_grid = true;
    if (args.lambda_steps > 0) cfg.lambda_steps = args.lambda_steps;
    return cfg;
}

int fail(const std::exception& e) {
    nlohmann::json j{{"error", e.what()}};
    std::cerr << j.dump() << "\n";
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bi-directional multi-relay protocol evaluator"};
    app.require_subcommand(1);

    CommonArgs args;
    auto* regions = app.add_subcommand("regions", "Achievable-region tables per protocol");
    auto* line = app.add_subcommand("line", "Relays on a line: regions and sum rates");
    auto* relay_count = app.add_subcommand("relay-count", "Sum rate against the relay count");
    auto* two_grid = app.add_subcommand("two-relay-grid", "Sum rate over two-relay placements");
    auto* schedule = app.add_subcommand("schedule", "Chain-schedule transcript and phase count");
    auto* asym = app.add_subcommand("asymptotics", "Gap reports and pre-log estimates");
    for (auto* cmd : {regions, line, relay_count, two_grid, schedule, asym})
        add_common(cmd, args);

    CLI11_PARSE(app, argc, argv);

    try {
        if (regions->parsed()) {
            auto cfg = load_config(args, "regions");
            bdrelay::emit_regions(bdrelay::scenario_regions(cfg), "regions", args.out_dir,
                                  args.format);
        } else if (line->parsed()) {
            auto cfg = load_config(args, "line");
            auto res = bdrelay::scenario_line(cfg);
            bdrelay::emit_regions(res.regions, "line", args.out_dir, args.format);
            bdrelay::emit_sum_rows(res.sums, "line_sumrate", /*with_m=*/false, args.out_dir,
                                   args.format);
        } else if (relay_count->parsed()) {
            auto cfg = load_config(args, "relay-count");
            auto res = bdrelay::scenario_relay_count(cfg);
            bdrelay::emit_sum_rows(res.rows, "relay-count", /*with_m=*/true, args.out_dir,
                                   args.format);
        } else if (two_grid->parsed()) {
            auto cfg = load_config(args, "two-relay-grid");
            if (args.config_path.empty()) cfg.p_db = {0.0};
            bdrelay::emit_two_relay_grid(bdrelay::scenario_two_relay_grid(cfg), args.out_dir,
                                         args.format);
        } else if (schedule->parsed()) {
            auto cfg = load_config(args, "schedule");
            auto res = bdrelay::scenario_schedule(cfg);
            bdrelay::emit_schedule(res, args.out_dir);
            if (!res.transmission_count_ok || !res.delivery_ok)
                throw std::runtime_error("schedule self-check failed");
        } else if (asym->parsed()) {
            auto cfg = load_config(args, "asymptotics");
            bdrelay::emit_asymptotics(bdrelay::scenario_asymptotics(cfg), args.out_dir,
                                      args.format);
        }
    } catch (const std::exception& e) {
        return fail(e);
    }
    return 0;
}
