#pragma once

#include <optional>
#include <vector>

#include "dfsnet/network.hpp"
#include "dfsnet/noise.hpp"
#include "dfsnet/oracle.hpp"

namespace dfsnet {

enum class Herald : uint8_t {
    DvSuccess,   // conditional phase applied
    DhIdentity,  // register untouched; retry is free
    NoClickLoss, // photon lost
    DarkFalse,   // dark count reported a click that never happened
};

std::string herald_name(Herald h);

struct HeraldedOutcome {
    Herald which = Herald::NoClickLoss;
    int detector_id = -1;  // reported detector for real or dark clicks
    double probability = 0.0;
    JointState post_state;  // photon relabeled NoPhoton
    int attempts_used = 1;
};

// Sets one node's atoms to alpha|10> + beta|01>.  The node must currently be
// in a definite product basis state.
void encode_logical(JointState& state, int node, cplx alpha, cplx beta);

// Encoded-basis Hadamard on span{|10>,|01>}, identity on |00>,|11>.
// Requires negligible leakage on the node.
void logical_hadamard(JointState& state, int node);

// Projective readout of one node in the {|10>,|01>,|00>,|11>} basis.
enum class ReadoutValue : uint8_t { Zero, One, Leak00, Leak11 };
struct ReadoutResult {
    ReadoutValue value;
    double prob;
    JointState collapsed;
};
ReadoutResult readout_logical(const JointState& state, int node, Rng& rng);

// Ideal diagonal conditional phase on the encoded basis: -1 exactly when all
// participants read 1.  Used as the fidelity target.
void apply_cpz_logical(JointState& state, const std::vector<int>& participants);

// Amplitude over the no-click/leak-free encoded subspace outside the logical
// span (diagnostic).
double leakage_mass(const JointState& state, const std::vector<int>& nodes);

// One heralded network pass: inject (|h>+|v>)/sqrt(2) at the entry port 0,
// propagate, sample the central detectors.
HeraldedOutcome u_cp_subset(const JointState& state, const NetworkGraph& g,
                            const std::vector<int>& participants, int entry, Rng& rng,
                            const NoiseRealization* noise = nullptr);

// Exact-amplitude variant: both herald branches with probabilities.
std::vector<HeraldedOutcome> enumerate_cp_branches(const JointState& state, const NetworkGraph& g,
                                                   const std::vector<int>& participants, int entry,
                                                   const NoiseRealization* noise = nullptr);

// Same passes with a caller-supplied (possibly overridden) schedule.
HeraldedOutcome u_cp_subset_with(const JointState& state, const NetworkGraph& g,
                                 const SwitchSchedule& sched, Rng& rng,
                                 const NoiseRealization* noise = nullptr);
std::vector<HeraldedOutcome> enumerate_cp_branches_with(const JointState& state,
                                                        const NetworkGraph& g,
                                                        const SwitchSchedule& sched,
                                                        const NoiseRealization* noise = nullptr);

// Reruns the heralded pass after identity or loss outcomes (both leave the
// register usable) until the phase herald fires or attempts run out.
HeraldedOutcome repeat_until_success(const JointState& state, const NetworkGraph& g,
                                     const std::vector<int>& participants, int entry,
                                     int max_attempts, Rng& rng,
                                     const NoiseRealization* noise = nullptr);

// Encoded Toffoli: Hadamard on the target, heralded three-node conditional
// phase, Hadamard on the target.
HeraldedOutcome toffoli(const JointState& state, const NetworkGraph& g, int control_i,
                        int control_j, int target_k, int max_attempts, Rng& rng,
                        const NoiseRealization* noise = nullptr);

// Engine-side conditioned maps over the participant logical basis, for
// cross-checks against the recursive reference.
LogicalMap engine_conditioned_map(const NetworkGraph& g, const std::vector<int>& participants,
                                  int entry);

}  // namespace dfsnet
