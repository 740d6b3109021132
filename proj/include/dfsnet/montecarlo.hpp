#pragma once

#include <functional>
#include <map>
#include <vector>

#include "dfsnet/protocols.hpp"

namespace dfsnet {

enum class ProtocolOp : uint8_t { ConditionalPhase, Toffoli };

// One stochastic experiment: prepare the given register, run the heralded
// protocol under a fresh noise realization, compare against the ideal gate.
struct McScenario {
    const NetworkGraph* graph = nullptr;
    ProtocolOp op = ProtocolOp::ConditionalPhase;
    std::vector<int> participants;  // CP subset, or {i, j, k} for the Toffoli
    int entry = -1;                 // defaults to the smallest participant
    int toffoli_target = -1;
    JointState input;  // register-only state (photon NoPhoton)
    int max_attempts = 64;
    // When set, replaces the encoded register with one bare atom per node
    // (atom 1 carries the qubit, atom 2 idles in |0>) for noise comparisons;
    // the protocol step is skipped and only dephasing is scored.
    bool bare_comparison = false;
};

struct TrialRecord {
    Herald which = Herald::NoClickLoss;
    int attempts = 0;
    bool success = false;
    double fidelity = 0.0;
    friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

struct McSummary {
    int trials = 0;
    double success_prob = 0.0;
    double mean_attempts = 0.0;
    double fidelity_mean = 0.0;   // over heralded-success trials
    double fidelity_stderr = 0.0;
    std::map<int, int> attempt_histogram;
    std::vector<TrialRecord> records;
};

TrialRecord run_trial(const McScenario& sc, const NoiseParams& params, uint64_t seed,
                      uint64_t trial_index);

// OpenMP-parallel trial loop.  Each trial derives its own generator from
// (seed, index) and writes its own slot, so the result is identical to the
// serial reference for any thread count.
McSummary monte_carlo_fidelity(const McScenario& sc, const NoiseParams& params, int trials,
                               uint64_t seed);

// Serial reference implementation, kept for testing and benchmarking.
McSummary monte_carlo_fidelity_serial(const McScenario& sc, const NoiseParams& params, int trials,
                                      uint64_t seed);

McSummary summarize(std::vector<TrialRecord> records);

}  // namespace dfsnet
