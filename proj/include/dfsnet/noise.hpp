#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dfsnet/qstate.hpp"

namespace dfsnet {

enum class DephasingScope : uint8_t { PerNode, Global };
enum class DephasingTiming : uint8_t { BoundariesOnly, IncludeSandwichWindow };

struct NoiseParams {
    double dephasing_sigma = 0.0;  // rad, std of the collective phase per draw
    DephasingScope dephasing_scope = DephasingScope::PerNode;
    DephasingTiming dephasing_timing = DephasingTiming::BoundariesOnly;
    double loss_per_element = 0.0;  // probability per element traversal
    // Attenuation (default) removes sqrt(1-p) of the amplitude at every
    // element, which keeps the heralded branch exact.  Trajectory sampling
    // instead kills whole elements per realization.
    bool loss_trajectory = false;
    double path_jitter_sigma = 0.0;  // rad, per radial path
    double dark_rate_hz = 0.0;
    double detection_window_s = 1e-6;
    double scattering_phase_error = 0.0;  // rad; cavity phase becomes pi + err

    bool is_zero() const {
        return dephasing_sigma == 0.0 && loss_per_element == 0.0 && path_jitter_sigma == 0.0 &&
               dark_rate_hz == 0.0 && scattering_phase_error == 0.0;
    }
    void validate() const;
};

struct TimingParams {
    double kappa_over_2pi = 4.0e6;  // Hz
    double g_over_2pi = 30.0e6;     // Hz
    double gamma_over_2pi = 2.6e6;  // Hz
    double kappa_t = 100.0;         // pulse duration in units of 1/kappa

    void validate() const;
};

// One sampled draw of every noise knob; deterministic in (params, seed).
struct NoiseRealization {
    double scattering_phase = 0.0;    // 0 selects the exact ideal flip
    std::vector<double> boundary_phi;  // per node
    std::vector<double> sandwich_phi;  // per node; zeros unless enabled
    std::vector<double> path_phi;      // per radial path
    double survival = 1.0;             // amplitude factor per element traversal
    std::vector<uint8_t> element_alive;  // trajectory mode only
    std::vector<uint8_t> dark_flag;      // per detector id

    cplx survival_amp(uint32_t elem) const {
        if (!element_alive.empty())
            return elem < element_alive.size() && !element_alive[elem] ? cplx{0.0, 0.0}
                                                                       : cplx{1.0, 0.0};
        return {survival, 0.0};
    }
    cplx path_phase_factor(int path) const {
        if (path < 0 || path >= static_cast<int>(path_phi.size()) || path_phi[path] == 0.0)
            return {1.0, 0.0};
        return std::exp(cplx{0.0, 1.0} * path_phi[path]);
    }
    bool dark(int detector_id) const {
        return detector_id >= 0 && detector_id < static_cast<int>(dark_flag.size()) &&
               dark_flag[detector_id] != 0;
    }
};

struct RealizationShape {
    int node_count = 0;
    int path_count = 0;
    int element_count = 0;
    int detector_count = 0;
};

NoiseRealization sample_realization(const NoiseParams& params, const RealizationShape& shape,
                                    uint64_t seed);

// Probability of at least one dark count in the window: 1 - exp(-rate * window).
double dark_count_penalty(double rate_hz, double window_s);

enum class GateKind { CPF, Hadamard, CPN };

// Gate durations from the pulse figure of merit: T = kappa_t / kappa.
// CPF takes T, the encoded-qubit Hadamard 2T, and an N-node conditional
// phase N*T.
double gate_time(GateKind kind, const TimingParams& timing, int n_nodes = 0);

// Warnings when the parameters leave the regime where the cavity phase flip
// is a good approximation (short pulses or weak coupling).
std::vector<std::string> validate_regime(const TimingParams& timing);

}  // namespace dfsnet
