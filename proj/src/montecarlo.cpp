#include "dfsnet/montecarlo.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dfsnet {

namespace {

void apply_boundary_dephasing(JointState& st, const NoiseRealization& r) {
    for (int n = 0; n < st.node_count(); ++n)
        if (n < static_cast<int>(r.boundary_phi.size()) && r.boundary_phi[n] != 0.0)
            st.apply_collective_dephasing(n, r.boundary_phi[n]);
}

JointState ideal_output(const McScenario& sc) {
    JointState ideal = sc.input;
    if (sc.bare_comparison) return ideal;
    if (sc.op == ProtocolOp::ConditionalPhase) {
        apply_cpz_logical(ideal, sc.participants);
    } else {
        logical_hadamard(ideal, sc.toffoli_target);
        apply_cpz_logical(ideal, sc.participants);
        logical_hadamard(ideal, sc.toffoli_target);
    }
    return ideal;
}

}  // namespace

TrialRecord run_trial(const McScenario& sc, const NoiseParams& params, uint64_t seed,
                      uint64_t trial_index) {
    const NetworkGraph& g = *sc.graph;
    RealizationShape shape{g.n_nodes, static_cast<int>(g.center_paths.size()),
                           static_cast<int>(g.elements.size()),
                           static_cast<int>(g.detector_names.size())};
    NoiseRealization real = sample_realization(params, shape, derive_seed(seed, 0x7ea1, trial_index));
    Rng rng(derive_seed(seed, 0x9a3e, trial_index));

    JointState st = sc.input;
    apply_boundary_dephasing(st, real);

    TrialRecord rec;
    if (sc.bare_comparison) {
        // no protocol; the dephasing damage alone is scored against the
        // untouched input
        rec.which = Herald::DvSuccess;
        rec.success = true;
        rec.attempts = 0;
        rec.fidelity = fidelity_up_to_global_phase(st, ideal_output(sc));
        return rec;
    }

    HeraldedOutcome out;
    if (sc.op == ProtocolOp::ConditionalPhase) {
        int entry = sc.entry >= 0 ? sc.entry : *std::min_element(sc.participants.begin(),
                                                                 sc.participants.end());
        out = repeat_until_success(st, g, sc.participants, entry, sc.max_attempts, rng, &real);
    } else {
        out = toffoli(st, g, sc.participants[0], sc.participants[1], sc.toffoli_target,
                      sc.max_attempts, rng, &real);
    }
    rec.which = out.which;
    rec.attempts = out.attempts_used;
    rec.success = out.which == Herald::DvSuccess ||
                  (out.which == Herald::DarkFalse && out.detector_id == g.det_dv);
    if (rec.success) {
        // Scored against the noiseless target: encoded registers shrug off
        // the boundary dephasing, anything else shows up as lost fidelity.
        rec.fidelity = fidelity_up_to_global_phase(out.post_state, ideal_output(sc));
    }
    return rec;
}

McSummary summarize(std::vector<TrialRecord> records) {
    McSummary s;
    s.trials = static_cast<int>(records.size());
    double fsum = 0.0, f2sum = 0.0;
    int successes = 0;
    long attempts = 0;
    for (const auto& r : records) {
        attempts += r.attempts;
        s.attempt_histogram[r.attempts]++;
        if (r.success) {
            ++successes;
            fsum += r.fidelity;
            f2sum += r.fidelity * r.fidelity;
        }
    }
    s.success_prob = s.trials ? static_cast<double>(successes) / s.trials : 0.0;
    s.mean_attempts = s.trials ? static_cast<double>(attempts) / s.trials : 0.0;
    if (successes > 0) {
        s.fidelity_mean = fsum / successes;
        double var = std::max(0.0, f2sum / successes - s.fidelity_mean * s.fidelity_mean);
        s.fidelity_stderr = successes > 1 ? std::sqrt(var / (successes - 1)) : 0.0;
    }
    s.records = std::move(records);
    return s;
}

McSummary monte_carlo_fidelity(const McScenario& sc, const NoiseParams& params, int trials,
                               uint64_t seed) {
    if (trials < 1) throw PhysicsError("trials must be >= 1");
    std::vector<TrialRecord> records(trials);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 8)
#endif
    for (int t = 0; t < trials; ++t)
        records[t] = run_trial(sc, params, seed, static_cast<uint64_t>(t));
    return summarize(std::move(records));
}

McSummary monte_carlo_fidelity_serial(const McScenario& sc, const NoiseParams& params, int trials,
                                      uint64_t seed) {
    if (trials < 1) throw PhysicsError("trials must be >= 1");
    std::vector<TrialRecord> records(trials);
    for (int t = 0; t < trials; ++t)
        records[t] = run_trial(sc, params, seed, static_cast<uint64_t>(t));
    return summarize(std::move(records));
}

}  // namespace dfsnet
