#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dfsnet/montecarlo.hpp"

namespace dfsnet {

using njson = nlohmann::json;

enum class ScenarioOp : uint8_t { Cpz, Toffoli, Hadamard, Readout };

struct AtomInit {
    // Either a literal two-atom configuration or an encoded amplitude pair.
    std::optional<std::pair<int, int>> bits;
    std::optional<std::pair<cplx, cplx>> encoded;
};

// Parsed and validated run description; see README for the file format.
struct Scenario {
    int nodes = 0;
    ScenarioOp op = ScenarioOp::Cpz;
    std::vector<int> participants;
    int entry = -1;
    std::vector<int> controls;  // toffoli
    int target = -1;            // toffoli
    int node = -1;              // hadamard / readout
    cplx photon_h{0.0, 0.0}, photon_v{0.0, 0.0};
    bool photon_given = false;
    std::map<int, AtomInit> atom_init;
    std::map<std::string, std::string> schedule_overrides;
    NoiseParams noise;
    TimingParams timing;
    bool exact = true;
    std::optional<uint64_t> seed;
    int trials = 0;
    int max_attempts = 64;
};

Scenario parse_scenario(const njson& j);
Scenario scenario_from_file(const std::string& path);  // SchemaError has line/column info

// Register input described by the scenario (photon not yet injected).
JointState build_input_state(const Scenario& sc, const NetworkGraph& g);
SwitchSchedule build_schedule(const Scenario& sc, const NetworkGraph& g);

njson run_simulate(const Scenario& sc);
std::string run_truth_table(const Scenario& sc);  // CSV
std::string run_sweep(const Scenario& sc, const std::string& parameter,
                      const std::vector<double>& values);  // CSV
njson run_timing(const TimingParams& timing);
njson run_validate(const Scenario& sc);
njson run_oracle_check(int nodes, const std::optional<std::vector<int>>& participants,
                       std::optional<int> entry, double tol = 1e-10);

// Checks an emitted simulate result against the published shape.
bool validate_result_json(const njson& j, std::string* why = nullptr);

std::vector<std::string> sweepable_parameters();

}  // namespace dfsnet
