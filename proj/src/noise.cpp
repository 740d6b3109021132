#include "dfsnet/noise.hpp"

#include <cmath>
#include <numbers>

#include "dfsnet/rng.hpp"

namespace dfsnet {

void NoiseParams::validate() const {
    if (loss_per_element < 0.0 || loss_per_element >= 1.0)
        throw PhysicsError("loss_per_element must be in [0, 1)");
    if (dephasing_sigma < 0.0 || path_jitter_sigma < 0.0)
        throw PhysicsError("noise sigmas must be non-negative");
    if (dark_rate_hz < 0.0 || detection_window_s < 0.0)
        throw PhysicsError("dark rate and detection window must be non-negative");
}

void TimingParams::validate() const {
    if (kappa_over_2pi <= 0.0 || g_over_2pi <= 0.0 || gamma_over_2pi <= 0.0 || kappa_t <= 0.0)
        throw PhysicsError("timing parameters must be positive");
}

NoiseRealization sample_realization(const NoiseParams& params, const RealizationShape& shape,
                                    uint64_t seed) {
    params.validate();
    NoiseRealization r;
    r.scattering_phase =
        params.scattering_phase_error == 0.0 ? 0.0 : std::numbers::pi + params.scattering_phase_error;

    Rng rng(derive_seed(seed, /*stream=*/0xda7a));
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> uni(0.0, 1.0);

    r.boundary_phi.assign(shape.node_count, 0.0);
    r.sandwich_phi.assign(shape.node_count, 0.0);
    if (params.dephasing_sigma > 0.0) {
        if (params.dephasing_scope == DephasingScope::Global) {
            double phi = params.dephasing_sigma * gauss(rng);
            for (auto& v : r.boundary_phi) v = phi;
        } else {
            for (auto& v : r.boundary_phi) v = params.dephasing_sigma * gauss(rng);
        }
        if (params.dephasing_timing == DephasingTiming::IncludeSandwichWindow) {
            if (params.dephasing_scope == DephasingScope::Global) {
                double phi = params.dephasing_sigma * gauss(rng);
                for (auto& v : r.sandwich_phi) v = phi;
            } else {
                for (auto& v : r.sandwich_phi) v = params.dephasing_sigma * gauss(rng);
            }
        }
    }

    r.path_phi.assign(shape.path_count, 0.0);
    if (params.path_jitter_sigma > 0.0)
        for (auto& v : r.path_phi) v = params.path_jitter_sigma * gauss(rng);

    if (params.loss_per_element > 0.0) {
        if (params.loss_trajectory) {
            r.element_alive.assign(shape.element_count, 1);
            for (auto& v : r.element_alive) v = uni(rng) >= params.loss_per_element;
        } else {
            r.survival = std::sqrt(1.0 - params.loss_per_element);
        }
    }

    r.dark_flag.assign(shape.detector_count, 0);
    double p_dark = dark_count_penalty(params.dark_rate_hz, params.detection_window_s);
    if (p_dark > 0.0)
        for (auto& v : r.dark_flag) v = uni(rng) < p_dark;
    return r;
}

double dark_count_penalty(double rate_hz, double window_s) {
    if (rate_hz < 0.0 || window_s < 0.0) throw PhysicsError("dark count arguments must be >= 0");
    return -std::expm1(-rate_hz * window_s);
}

double gate_time(GateKind kind, const TimingParams& timing, int n_nodes) {
    timing.validate();
    double t = timing.kappa_t / (2.0 * std::numbers::pi * timing.kappa_over_2pi);
    switch (kind) {
        case GateKind::CPF: return t;
        case GateKind::Hadamard: return 2.0 * t;
        case GateKind::CPN:
            if (n_nodes < 1) throw PhysicsError("conditional phase needs at least one node");
            return n_nodes * t;
    }
    return t;
}

std::vector<std::string> validate_regime(const TimingParams& timing) {
    timing.validate();
    std::vector<std::string> warnings;
    if (timing.kappa_t < 10.0)
        warnings.push_back("kappa*T = " + std::to_string(timing.kappa_t) +
                           " is not >> 1; the cavity phase flip degrades for short pulses");
    double strongest_dissipation = std::max(timing.kappa_over_2pi, timing.gamma_over_2pi);
    if (timing.g_over_2pi < 3.0 * strongest_dissipation)
        warnings.push_back("atom-cavity coupling g is below 3x the dissipative rates; "
                           "strong-coupling assumption violated");
    return warnings;
}

}  // namespace dfsnet
