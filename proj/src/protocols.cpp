#include "dfsnet/protocols.hpp"

#include <algorithm>
#include <cmath>

namespace dfsnet {

std::string herald_name(Herald h) {
    switch (h) {
        case Herald::DvSuccess: return "Dv-success";
        case Herald::DhIdentity: return "Dh-identity";
        case Herald::NoClickLoss: return "NoClick-loss";
        case Herald::DarkFalse: return "DarkFalse";
    }
    return "?";
}

void encode_logical(JointState& state, int node, cplx alpha, cplx beta) {
    if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > kUnitaryTol)
        throw PhysicsError("encoded amplitudes are not normalized");
    // The node must hold one definite basis configuration across all terms.
    int a1 = -1, a2 = -1;
    for (const auto& [k, a] : state.terms()) {
        AtomString s = JointState::key_atoms(k);
        int b1 = atom_bit(s, node, 1), b2 = atom_bit(s, node, 2);
        if (a1 == -1) { a1 = b1; a2 = b2; }
        else if (a1 != b1 || a2 != b2)
            throw PhysicsError("node atoms are not in a definite product state");
    }
    if (a1 == -1) throw PhysicsError("empty state");
    JointState out;
    out.clear(state.node_count(), state.registry());
    for (const auto& [k, a] : state.terms()) {
        AtomString s = JointState::key_atoms(k);
        PhotonMode m = JointState::key_mode(k);
        AtomString base = s & ~((AtomString{1} << atom_bit_pos(node, 1)) |
                                (AtomString{1} << atom_bit_pos(node, 2)));
        if (alpha != cplx{0.0, 0.0})
            out.insert_term(m, base | (AtomString{1} << atom_bit_pos(node, 1)), a * alpha);
        if (beta != cplx{0.0, 0.0})
            out.insert_term(m, base | (AtomString{1} << atom_bit_pos(node, 2)), a * beta);
    }
    state = std::move(out);
}

double leakage_mass(const JointState& state, const std::vector<int>& nodes) {
    double leak = 0.0;
    for (const auto& [k, a] : state.terms()) {
        AtomString s = JointState::key_atoms(k);
        for (int n : nodes)
            if (logical_bit(s, n) < 0) {
                leak += std::norm(a);
                break;
            }
    }
    return std::sqrt(leak);
}

void logical_hadamard(JointState& state, int node) {
    if (leakage_mass(state, {node}) > 1e-10)
        throw PhysicsError("encoded Hadamard requires the node inside the logical span");
    const double s = 1.0 / std::sqrt(2.0);
    JointState out;
    out.clear(state.node_count(), state.registry());
    for (const auto& [k, a] : state.terms()) {
        AtomString atoms = JointState::key_atoms(k);
        PhotonMode m = JointState::key_mode(k);
        int lb = logical_bit(atoms, node);
        if (lb < 0) {
            out.insert_term(m, atoms, a);  // |00>/|11> untouched
            continue;
        }
        AtomString zero = flip_atom(flip_atom(atoms, node, 1), node, 2);
        AtomString as0 = lb == 0 ? atoms : zero;  // |10...> string
        AtomString as1 = lb == 0 ? zero : atoms;  // |01...> string
        if (lb == 0) {
            out.insert_term(m, as0, a * s);
            out.insert_term(m, as1, a * s);
        } else {
            out.insert_term(m, as0, a * s);
            out.insert_term(m, as1, -a * s);
        }
    }
    out.prune();
    state = std::move(out);
}

ReadoutResult readout_logical(const JointState& state, int node, Rng& rng) {
    struct Bucket { ReadoutValue v; int a1, a2; };
    static const Bucket buckets[] = {{ReadoutValue::Zero, 1, 0},
                                     {ReadoutValue::One, 0, 1},
                                     {ReadoutValue::Leak00, 0, 0},
                                     {ReadoutValue::Leak11, 1, 1}};
    double probs[4] = {0, 0, 0, 0};
    for (const auto& [k, a] : state.terms()) {
        AtomString s = JointState::key_atoms(k);
        for (int i = 0; i < 4; ++i)
            if (node_atoms_are(s, node, buckets[i].a1, buckets[i].a2)) probs[i] += std::norm(a);
    }
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double r = u(rng) * (probs[0] + probs[1] + probs[2] + probs[3]);
    int pick = 3;
    double acc = 0.0;
    for (int i = 0; i < 4; ++i) {
        acc += probs[i];
        if (r < acc) { pick = i; break; }
    }
    JointState collapsed;
    collapsed.clear(state.node_count(), state.registry());
    double inv = probs[pick] > 0.0 ? 1.0 / std::sqrt(probs[pick]) : 0.0;
    for (const auto& [k, a] : state.terms()) {
        AtomString s = JointState::key_atoms(k);
        if (node_atoms_are(s, node, buckets[pick].a1, buckets[pick].a2))
            collapsed.insert_term(JointState::key_mode(k), s, a * inv);
    }
    return {buckets[pick].v, probs[pick], std::move(collapsed)};
}

void apply_cpz_logical(JointState& state, const std::vector<int>& participants) {
    JointState out;
    out.clear(state.node_count(), state.registry());
    for (const auto& [k, a] : state.terms()) {
        AtomString s = JointState::key_atoms(k);
        bool all_one = true;
        for (int n : participants) all_one &= (logical_bit(s, n) == 1);
        out.insert_term(JointState::key_mode(k), s, all_one ? -a : a);
    }
    state = std::move(out);
}

namespace {

JointState with_registry(const JointState& state, const NetworkGraph& g) {
    // Re-homes a register-only state onto this graph's mode registry.
    JointState s;
    s.clear(state.node_count(), g.registry());
    for (const auto& [k, a] : state.terms()) {
        PhotonMode m = JointState::key_mode(k);
        if (m.kind != LocKind::NoPhoton)
            throw PhysicsError("input state must have no photon in flight");
        s.insert_term(m, JointState::key_atoms(k), a);
    }
    return s;
}

PropagationResult run_network_pass(const JointState& input, const NetworkGraph& g,
                                   const SwitchSchedule& sched, const NoiseRealization* noise) {
    JointState st = with_registry(input, g);
    const double s = 1.0 / std::sqrt(2.0);
    inject_photon(st, g, sched.entry, cplx{s, 0.0}, cplx{s, 0.0});
    return propagate(std::move(st), g, sched, noise);
}

HeraldedOutcome make_branch(const MeasureOutcome& mo, const NetworkGraph& g, int which_det,
                            const JointState& input) {
    HeraldedOutcome out;
    out.probability = mo.prob;
    if (which_det == g.det_dv) {
        out.which = Herald::DvSuccess;
        out.detector_id = g.det_dv;
        if (mo.collapsed) {
            out.post_state = *mo.collapsed;
            // The reflected branch carries a fixed overall minus sign; drop it
            // so the conditioned state reads directly as CPZ * input.
            out.post_state.scale(cplx{-1.0, 0.0});
        }
    } else if (which_det == g.det_dh) {
        out.which = Herald::DhIdentity;
        out.detector_id = g.det_dh;
        if (mo.collapsed) out.post_state = *mo.collapsed;
    } else {
        out.which = Herald::NoClickLoss;
        // Loss is heralded; under uniform attenuation the undetected branch
        // factorizes, so the register is returned unharmed.
        out.post_state = input;
    }
    return out;
}

}  // namespace

std::vector<HeraldedOutcome> enumerate_cp_branches_with(const JointState& state,
                                                        const NetworkGraph& g,
                                                        const SwitchSchedule& sched,
                                                        const NoiseRealization* noise) {
    auto res = run_network_pass(state, g, sched, noise);
    std::vector<uint32_t> dets{static_cast<uint32_t>(g.det_dv), static_cast<uint32_t>(g.det_dh)};
    auto outcomes = enumerate_detector_outcomes(res.state, dets);
    std::vector<HeraldedOutcome> branches;
    JointState input_reg = with_registry(state, g);
    for (const auto& mo : outcomes) {
        int det = mo.detector == 0 ? g.det_dv : mo.detector == 1 ? g.det_dh : -1;
        branches.push_back(make_branch(mo, g, det, input_reg));
    }
    return branches;
}

std::vector<HeraldedOutcome> enumerate_cp_branches(const JointState& state, const NetworkGraph& g,
                                                   const std::vector<int>& participants, int entry,
                                                   const NoiseRealization* noise) {
    return enumerate_cp_branches_with(state, g, compile_schedule(g, participants, entry), noise);
}

HeraldedOutcome u_cp_subset_with(const JointState& state, const NetworkGraph& g,
                                 const SwitchSchedule& sched, Rng& rng,
                                 const NoiseRealization* noise) {
    auto res = run_network_pass(state, g, sched, noise);
    std::vector<uint32_t> dets{static_cast<uint32_t>(g.det_dv), static_cast<uint32_t>(g.det_dh)};
    auto mo = measure_detectors(res.state, dets, rng);
    int det = mo.detector == 0 ? g.det_dv : mo.detector == 1 ? g.det_dh : -1;
    JointState input_reg = with_registry(state, g);
    HeraldedOutcome out = make_branch(mo, g, det, input_reg);
    if (out.which == Herald::NoClickLoss && noise) {
        // A dark count can masquerade as a click when nothing arrived.
        // Coincidence with a real click resolves as the real click, so only
        // the no-click branch can be falsified.
        if (noise->dark(g.det_dv)) {
            out.which = Herald::DarkFalse;
            out.detector_id = g.det_dv;
        } else if (noise->dark(g.det_dh)) {
            out.which = Herald::DarkFalse;
            out.detector_id = g.det_dh;
        }
    }
    return out;
}

HeraldedOutcome u_cp_subset(const JointState& state, const NetworkGraph& g,
                            const std::vector<int>& participants, int entry, Rng& rng,
                            const NoiseRealization* noise) {
    return u_cp_subset_with(state, g, compile_schedule(g, participants, entry), rng, noise);
}

HeraldedOutcome repeat_until_success(const JointState& state, const NetworkGraph& g,
                                     const std::vector<int>& participants, int entry,
                                     int max_attempts, Rng& rng, const NoiseRealization* noise) {
    if (max_attempts < 1) throw PhysicsError("max_attempts must be >= 1");
    JointState current = state;
    HeraldedOutcome out;
    for (int attempt = 1; attempt <= max_attempts; ++attempt) {
        out = u_cp_subset(current, g, participants, entry, rng, noise);
        out.attempts_used = attempt;
        if (out.which == Herald::DvSuccess) return out;
        if (out.which == Herald::DarkFalse && out.detector_id == g.det_dv) return out;
        // identity and loss outcomes leave the register usable; retry
        current = out.post_state;
    }
    return out;  // exhausted; caller sees the last herald
}

HeraldedOutcome toffoli(const JointState& state, const NetworkGraph& g, int control_i,
                        int control_j, int target_k, int max_attempts, Rng& rng,
                        const NoiseRealization* noise) {
    if (control_i == control_j || control_i == target_k || control_j == target_k)
        throw PhysicsError("Toffoli nodes must be distinct");
    std::vector<int> s{control_i, control_j, target_k};
    std::sort(s.begin(), s.end());
    JointState st = state;
    logical_hadamard(st, target_k);
    HeraldedOutcome out = repeat_until_success(st, g, s, s.front(), max_attempts, rng, noise);
    // Undo the basis change in every branch: on success this completes the
    // gate, on identity/exhaustion it returns the register as it was given.
    logical_hadamard(out.post_state, target_k);
    return out;
}

LogicalMap engine_conditioned_map(const NetworkGraph& g, const std::vector<int>& participants,
                                  int entry) {
    std::vector<int> s = participants;
    std::sort(s.begin(), s.end());
    LogicalMap map;
    map.participants = s;
    size_t dim = size_t{1} << s.size();
    map.dv = zeros(dim, dim);
    map.dh = zeros(dim, dim);
    SwitchSchedule sched = compile_schedule(g, s, entry);
    for (size_t l = 0; l < dim; ++l) {
        uint32_t bits = 0;
        for (size_t pos = 0; pos < s.size(); ++pos)
            bits |= ((l >> (s.size() - 1 - pos)) & 1u) << s[pos];
        JointState st = new_state(g.n_nodes, g.registry(), logical_atom_string(g.n_nodes, bits));
        auto res = run_network_pass(st, g, sched, nullptr);
        for (const auto& [k, a] : res.state.terms()) {
            PhotonMode m = JointState::key_mode(k);
            if (m.kind != LocKind::Detector) continue;
            AtomString atoms = JointState::key_atoms(k);
            size_t lp = 0;
            for (size_t pos = 0; pos < s.size(); ++pos) {
                int lb = logical_bit(atoms, s[pos]);
                if (lb < 0) throw PhysicsError("conditioned map: leaked atom string at detector");
                lp = (lp << 1) | static_cast<size_t>(lb);
            }
            if (static_cast<int>(m.index) == g.det_dv) map.dv[lp][l] += a;
            else if (static_cast<int>(m.index) == g.det_dh) map.dh[lp][l] += a;
        }
    }
    return map;
}

}  // namespace dfsnet
