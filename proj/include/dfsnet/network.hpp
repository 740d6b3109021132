#pragma once

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "dfsnet/optics.hpp"
#include "dfsnet/qstate.hpp"

namespace dfsnet {

struct NoiseRealization;  // noise.hpp

struct Element {
    ElementKind kind;
    std::string name;
    int node = -1;           // owning ring node, when applicable
    double theta_deg = 0.0;  // HWP angle
    int fan_in = 1;          // Combiner
    int detector_id = -1;    // DetectorSink
};

struct GraphEdge {
    uint32_t from_elem = 0;
    int from_port = 0;
    uint32_t to_elem = 0;
    int to_port = 0;
};

// One radial route from the ring to the central detection stage.  `branch`
// paths carry the V output of a ring branch PBS; `final` paths carry the
// H output extracted after the last participating node.
struct CenterPath {
    std::string label;
    int node = -1;
    bool is_final = false;
    uint32_t first_elem = 0;  // element whose transfer marks entry to the path
};

// Ring network of N cavity nodes with per-node internals, branch optics, and
// a central detection stage.  Immutable during propagation.
struct NetworkGraph {
    int n_nodes = 0;
    std::vector<Element> elements;
    std::vector<GraphEdge> edges;
    std::vector<std::map<int, uint32_t>> out_edge;  // element -> out_port -> edge id
    std::vector<std::string> detector_names;        // detector id -> name

    // designated element ids, one per node
    std::vector<uint32_t> source, str, circ, node_pbs, cavity, tr0, pol45, node_det;
    std::vector<uint32_t> hwp45, exit_comb, tr_i, hwp_pre, branch_pbs, tr_ii, hwp_post;
    // central stage
    uint32_t center_comb = 0, pbs_d = 0;
    int det_dh = -1, det_dv = -1;  // detector ids
    std::vector<CenterPath> center_paths;
    std::unordered_map<uint32_t, int> path_entry;  // element id -> center path index

    std::unordered_map<std::string, uint32_t> by_name;

    ModeRegistry registry() const {
        return ModeRegistry{static_cast<uint32_t>(edges.size()), detector_names};
    }
    uint32_t element_named(const std::string& n) const;
    uint32_t out_edge_of(uint32_t elem, int port) const;
};

// Static switch settings plus the local atom operations fired when the photon
// reaches a participating cavity.
struct SwitchSchedule {
    struct Hooks {
        std::vector<std::pair<int, Mat2>> pre;   // (atom index, unitary) before scattering
        std::vector<std::pair<int, Mat2>> post;  // after scattering
    };
    std::unordered_map<uint32_t, TRState> tr;
    std::unordered_map<uint32_t, STRConfig> str;
    std::unordered_map<int, Hooks> node_hooks;
    std::vector<int> participants;
    int entry = -1;

    ElementConfig config_for(const NetworkGraph& g, uint32_t elem) const;
};

struct TraceTick {
    int tick = 0;
    std::vector<std::pair<uint64_t, cplx>> occupancy;  // sorted (state key, amplitude)
    friend bool operator==(const TraceTick&, const TraceTick&) = default;
};

struct PropagationResult {
    JointState state;
    int ticks = 0;
    std::vector<TraceTick> trace;
    std::vector<std::pair<uint32_t, double>> polarizer_events;  // (element, success prob)

    double detector_prob(int detector_id) const {
        return state.mode_norm2(PhotonMode::detector(static_cast<uint32_t>(detector_id)));
    }
};

struct PropagateOptions {
    bool record_trace = false;
    int tick_budget = 100000;
};

// Builds the N-node ring.  Every edge is one delay unit; alternative routes
// between the same pair of elements are padded to identical length, and every
// radial path is padded so that all source->detector routes arrive on the
// same tick regardless of the compiled schedule.
NetworkGraph build_ring_network(int n_nodes);

// Switch settings for a run visiting `participants` (ascending ring order,
// first one is the entry) with the conditional-phase hook sandwich at each.
// Throws if entry is not in S or if the visit order would cross the ring seam
// (fixed path padding cannot equalize such routes).
SwitchSchedule compile_schedule(const NetworkGraph& g, const std::vector<int>& participants,
                                int entry);

// Places the photon on the port-0 source edge of `node`.
void inject_photon(JointState& state, const NetworkGraph& g, int node, cplx amp_h, cplx amp_v);

// Synchronous unit-delay propagation until all amplitude is terminal.
PropagationResult propagate(JointState state, const NetworkGraph& g, const SwitchSchedule& sched,
                            const NoiseRealization* noise = nullptr,
                            const PropagateOptions& opts = {});

struct ArrivalReport {
    bool ok = true;
    // (center path label, total source->final-PBS length in ticks)
    std::vector<std::pair<std::string, int>> path_lengths;
    std::vector<std::pair<std::string, std::string>> unequal_pairs;
};

// Enumerates every source->final-PBS route legal under the schedule and
// compares total delays.
ArrivalReport validate_equal_arrival(const NetworkGraph& g, const SwitchSchedule& sched);

}  // namespace dfsnet
