// Batch front door: loads a scenario config, runs simulations, sweeps and
// validations, and emits JSON/CSV tables.  Data goes to stdout (or --out),
// diagnostics to stderr.  Exit codes: 0 ok, 2 config error, 3 physics error.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dfsnet/scenario.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitPhysics = 3;

void emit(const std::string& data, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << data;
        if (!data.empty() && data.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw dfsnet::SchemaError("cannot open output file: " + out_path);
    out << data;
}

dfsnet::Scenario load(const std::string& config_path, std::optional<uint64_t> seed_flag,
                      std::optional<int> trials_flag, bool exact_flag) {
    dfsnet::Scenario sc = dfsnet::scenario_from_file(config_path);
    if (seed_flag) sc.seed = *seed_flag;
    if (trials_flag) sc.trials = *trials_flag;
    if (exact_flag) sc.exact = true;
    return sc;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"heralded conditional-phase network simulator"};
    app.require_subcommand(1);

    std::string config_path, out_path, format = "json", sweep_param;
    std::optional<uint64_t> seed_flag;
    std::optional<int> trials_flag;
    bool exact_flag = false;
    std::vector<double> sweep_values;
    int nodes = 3;
    std::vector<int> participants;
    std::optional<int> entry;

    auto add_common = [&](CLI::App* cmd, bool needs_config) {
        auto* opt = cmd->add_option("--config", config_path, "scenario config file (JSON)");
        if (needs_config) opt->required();
        cmd->add_option("--seed", seed_flag, "override the scenario seed");
        cmd->add_option("--trials", trials_flag, "override the scenario trial count");
        cmd->add_flag("--exact", exact_flag, "force exact-amplitude mode");
        cmd->add_option("--out", out_path, "write results to a file instead of stdout");
        cmd->add_option("--format", format, "json|csv output format where applicable");
    };

    auto* sim = app.add_subcommand("simulate", "run one protocol scenario");
    add_common(sim, true);
    auto* tt = app.add_subcommand("truth-table", "conditioned truth table over basis inputs");
    add_common(tt, true);
    auto* sweep = app.add_subcommand("sweep", "Monte Carlo sweep over one noise parameter");
    add_common(sweep, true);
    sweep->add_option("--parameter", sweep_param, "noise parameter to sweep")->required();
    sweep->add_option("--values", sweep_values, "parameter values")->required()->expected(-1);
    auto* timing = app.add_subcommand("timing", "gate durations and regime warnings");
    add_common(timing, false);
    auto* validate = app.add_subcommand("validate", "equal-arrival and regime validation");
    add_common(validate, true);
    auto* oracle = app.add_subcommand("oracle-check", "engine vs brute-force reference maps");
    add_common(oracle, false);
    oracle->add_option("--nodes", nodes, "ring size (checks all subsets unless --participants)");
    oracle->add_option("--participants", participants, "specific participant set");
    oracle->add_option("--entry", entry, "entry node for --participants");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (sim->parsed()) {
            auto sc = load(config_path, seed_flag, trials_flag, exact_flag);
            emit(dfsnet::run_simulate(sc).dump(2), out_path);
        } else if (tt->parsed()) {
            auto sc = load(config_path, seed_flag, trials_flag, exact_flag);
            emit(dfsnet::run_truth_table(sc), out_path);
        } else if (sweep->parsed()) {
            auto sc = load(config_path, seed_flag, trials_flag, exact_flag);
            emit(dfsnet::run_sweep(sc, sweep_param, sweep_values), out_path);
        } else if (timing->parsed()) {
            dfsnet::TimingParams t;
            if (!config_path.empty()) t = load(config_path, seed_flag, trials_flag, true).timing;
            auto j = dfsnet::run_timing(t);
            if (format == "csv") {
                std::string csv = "quantity,seconds\n";
                for (const auto& [k, v] : j.items())
                    if (v.is_number()) csv += k + "," + std::to_string(v.get<double>()) + "\n";
                emit(csv, out_path);
            } else {
                emit(j.dump(2), out_path);
            }
        } else if (validate->parsed()) {
            auto sc = load(config_path, seed_flag, trials_flag, true);
            auto j = dfsnet::run_validate(sc);
            emit(j.dump(2), out_path);
            if (!j["equal_arrival"].get<bool>()) return kExitPhysics;
        } else if (oracle->parsed()) {
            std::optional<std::vector<int>> parts;
            if (!participants.empty()) parts = participants;
            auto j = dfsnet::run_oracle_check(nodes, parts, entry);
            emit(j.dump(2), out_path);
            if (!j["all_ok"].get<bool>()) return kExitPhysics;
        }
    } catch (const dfsnet::SchemaError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const dfsnet::PhysicsError& e) {
        std::cerr << "physics error: " << e.what() << "\n";
        return kExitPhysics;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitPhysics;
    }
    return 0;
}
