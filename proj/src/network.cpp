#include "dfsnet/network.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "dfsnet/noise.hpp"

namespace dfsnet {

uint32_t NetworkGraph::element_named(const std::string& n) const {
    auto it = by_name.find(n);
    if (it == by_name.end()) throw PhysicsError("no element named " + n);
    return it->second;
}

uint32_t NetworkGraph::out_edge_of(uint32_t elem, int port) const {
    const auto& m = out_edge[elem];
    auto it = m.find(port);
    if (it == m.end())
        throw PhysicsError("element " + elements[elem].name + " has no edge on output port " +
                           std::to_string(port));
    return it->second;
}

ElementConfig SwitchSchedule::config_for(const NetworkGraph& g, uint32_t elem) const {
    ElementConfig c;
    switch (g.elements[elem].kind) {
        case ElementKind::TRSwitch: {
            auto it = tr.find(elem);
            if (it != tr.end()) c.tr = it->second;
            break;
        }
        case ElementKind::STRRouter: {
            auto it = str.find(elem);
            if (it != str.end()) c.str = it->second;
            break;
        }
        default: break;
    }
    return c;
}

namespace {

struct Builder {
    NetworkGraph g;

    uint32_t add(ElementKind kind, std::string name, int node = -1, double theta = 0.0,
                 int fan_in = 1, const std::string& det_name = "") {
        Element e;
        e.kind = kind;
        e.name = std::move(name);
        e.node = node;
        e.theta_deg = theta;
        e.fan_in = fan_in;
        if (kind == ElementKind::DetectorSink) {
            e.detector_id = static_cast<int>(g.detector_names.size());
            g.detector_names.push_back(det_name);
        }
        g.elements.push_back(e);
        g.out_edge.emplace_back();
        g.by_name[g.elements.back().name] = static_cast<uint32_t>(g.elements.size() - 1);
        return static_cast<uint32_t>(g.elements.size() - 1);
    }

    void connect(uint32_t from, int from_port, uint32_t to, int to_port) {
        if (g.out_edge[from].count(from_port))
            throw PhysicsError("output port wired twice on " + g.elements[from].name);
        GraphEdge e{from, from_port, to, to_port};
        g.out_edge[from][from_port] = static_cast<uint32_t>(g.edges.size());
        g.edges.push_back(e);
    }

    // Chain of `count` unit delay pads from (from,port) to (to,to_port);
    // count == 0 wires them directly.
    void pad_chain(uint32_t from, int from_port, uint32_t to, int to_port, int count,
                   const std::string& prefix, int node, std::vector<uint32_t>* first_out = nullptr) {
        uint32_t prev = from;
        int prev_port = from_port;
        for (int i = 0; i < count; ++i) {
            uint32_t pad = add(ElementKind::DelayPad, prefix + "_" + std::to_string(i), node);
            if (i == 0 && first_out) first_out->push_back(pad);
            connect(prev, prev_port, pad, 0);
            prev = pad;
            prev_port = 0;
        }
        if (count == 0 && first_out) first_out->push_back(to);
        connect(prev, prev_port, to, to_port);
    }
};

}  // namespace

NetworkGraph build_ring_network(int n_nodes) {
    using namespace ports;
    if (n_nodes < 1) throw PhysicsError("ring needs at least one node");
    const int N = n_nodes;
    Builder b;
    b.g.n_nodes = N;
    auto& g = b.g;
    auto id = [](const char* base, int n) { return std::string(base) + std::to_string(n); };

    for (int n = 0; n < N; ++n) {
        g.source.push_back(b.add(ElementKind::PhotonSource, id("SRC", n), n));
        g.str.push_back(b.add(ElementKind::STRRouter, id("STR", n), n));
        g.circ.push_back(b.add(ElementKind::Circulator, id("CIRC", n), n));
        g.node_pbs.push_back(b.add(ElementKind::PBS, id("NPBS", n), n));
        g.cavity.push_back(b.add(ElementKind::CavityPort, id("CAV", n), n));
        g.tr0.push_back(b.add(ElementKind::TRSwitch, id("TR0_", n), n));
        g.pol45.push_back(b.add(ElementKind::Polarizer45, id("P45_", n), n));
        g.node_det.push_back(b.add(ElementKind::DetectorSink, id("DDET", n), n, 0.0, 1, id("D", n)));
        g.hwp45.push_back(b.add(ElementKind::HWP, id("HWP45_", n), n, 45.0));
        g.exit_comb.push_back(b.add(ElementKind::Combiner, id("EXIT", n), n, 0.0, 2));
        g.tr_i.push_back(b.add(ElementKind::TRSwitch, id("TRI", n), n));
        g.hwp_pre.push_back(b.add(ElementKind::HWP, id("HWPA", n), n, 22.5));
        g.branch_pbs.push_back(b.add(ElementKind::PBS, id("BPBS", n), n));
        g.tr_ii.push_back(b.add(ElementKind::TRSwitch, id("TRII", n), n));
        g.hwp_post.push_back(b.add(ElementKind::HWP, id("HWPB", n), n, 22.5));
    }
    g.center_comb = b.add(ElementKind::Combiner, "CCOMB", -1, 0.0, 2 * N);
    g.pbs_d = b.add(ElementKind::PBS, "PBSD");
    uint32_t dh = b.add(ElementKind::DetectorSink, "DHDET", -1, 0.0, 1, "Dh");
    uint32_t dv = b.add(ElementKind::DetectorSink, "DVDET", -1, 0.0, 1, "Dv");
    g.det_dh = g.elements[dh].detector_id;
    g.det_dv = g.elements[dv].detector_id;

    for (int n = 0; n < N; ++n) {
        // node internals: STR -> circulator -> PBS -> {cavity | V pass} ->
        // merge -> circulator -> TR0 -> {polarizer+detector | HWP45 -> STR}
        b.connect(g.source[n], 0, g.str[n], str_in_port0);
        b.connect(g.str[n], str_out_node, g.circ[n], 0);
        b.connect(g.circ[n], 0, g.node_pbs[n], 0);
        b.connect(g.node_pbs[n], pbs_thru(0), g.cavity[n], 0);
        uint32_t varc = b.add(ElementKind::DelayPad, id("VARC", n), n);
        b.connect(g.node_pbs[n], pbs_refl(0), varc, 0);
        uint32_t ncomb = b.add(ElementKind::Combiner, id("NCOMB", n), n, 0.0, 2);
        b.connect(g.cavity[n], 0, ncomb, 0);
        b.connect(varc, 0, ncomb, 1);
        b.connect(ncomb, 0, g.circ[n], 1);
        b.connect(g.circ[n], 1, g.tr0[n], tr_in_a);
        b.connect(g.tr0[n], tr_out_a, g.pol45[n], 0);
        b.connect(g.pol45[n], 0, g.node_det[n], 0);
        b.connect(g.tr0[n], tr_out_b, g.hwp45[n], 0);
        b.connect(g.hwp45[n], 0, g.str[n], str_in_return);
        b.connect(g.str[n], str_out_port2, g.exit_comb[n], 0);
        // padded port1 -> port2 pass, same nine-tick delay as the node path
        b.pad_chain(g.str[n], str_out_bypass, g.exit_comb[n], 1, 8, id("BYP", n), n);

        // ring segment: exit -> TRI -> HWP -> branch PBS -> TRII -> HWP -> next STR
        b.connect(g.exit_comb[n], 0, g.tr_i[n], tr_in_a);
        b.connect(g.tr_i[n], tr_out_a, g.hwp_pre[n], 0);
        b.connect(g.hwp_pre[n], 0, g.branch_pbs[n], 0);
        b.connect(g.branch_pbs[n], pbs_thru(0), g.tr_ii[n], tr_in_a);
        // reflected arc around the branch PBS, padded to the same three ticks
        b.pad_chain(g.tr_i[n], tr_out_b, g.tr_ii[n], tr_in_b, 2, id("ARC", n), n);
        b.connect(g.tr_ii[n], tr_out_a, g.hwp_post[n], 0);
        b.connect(g.hwp_post[n], 0, g.str[(n + 1) % N], str_in_port1);
    }

    // Radial paths to the center.  Arrival tick algebra (all edges are one
    // delay unit): the branch PBS of node n fires at tick 13 + 15n and its
    // TRII one tick later, counting hops from the entry source.  Padding
    // makes every radial route reach the detectors at tick 15N + 3.
    const int total = 15 * N + 3;
    for (int n = 0; n < N; ++n) {
        int kb = total - 17 - 15 * n;  // pads on the V branch path of node n
        int kf = total - 18 - 15 * n;  // pads on the H exit path of node n
        uint32_t hwp_cb = b.add(ElementKind::HWP, id("HWPCB", n), n, 22.5);
        uint32_t hwp_cf = b.add(ElementKind::HWP, id("HWPCF", n), n, 22.5);
        std::vector<uint32_t> first;
        b.pad_chain(g.branch_pbs[n], pbs_refl(0), hwp_cb, 0, kb, id("PADB", n), n, &first);
        b.connect(hwp_cb, 0, g.center_comb, 2 * n);
        b.pad_chain(g.tr_ii[n], tr_out_b, hwp_cf, 0, kf, id("PADF", n), n, &first);
        b.connect(hwp_cf, 0, g.center_comb, 2 * n + 1);

        CenterPath branch{"branch" + std::to_string(n), n, false, first[0]};
        CenterPath final_{"exit" + std::to_string(n), n, true, first[1]};
        g.path_entry[first[0]] = static_cast<int>(g.center_paths.size());
        g.center_paths.push_back(branch);
        g.path_entry[first[1]] = static_cast<int>(g.center_paths.size());
        g.center_paths.push_back(final_);
    }
    b.connect(g.center_comb, 0, g.pbs_d, 0);
    b.connect(g.pbs_d, pbs_thru(0), b.g.element_named("DHDET"), 0);
    b.connect(g.pbs_d, pbs_refl(0), b.g.element_named("DVDET"), 0);
    return std::move(b.g);
}

SwitchSchedule compile_schedule(const NetworkGraph& g, const std::vector<int>& participants,
                                int entry) {
    if (participants.empty()) throw PhysicsError("participant set is empty");
    std::vector<int> s = participants;
    std::sort(s.begin(), s.end());
    if (std::unique(s.begin(), s.end()) != s.end())
        throw PhysicsError("duplicate participant node");
    for (int n : s)
        if (n < 0 || n >= g.n_nodes) throw PhysicsError("participant node out of range");
    if (std::find(s.begin(), s.end(), entry) == s.end())
        throw PhysicsError("entry node is not a participant");
    // Radial padding is fixed at build time, so a visit order that crosses
    // the ring seam cannot arrive in step; only the first participant in the
    // build direction can be the entry.
    if (entry != s.front())
        throw PhysicsError("participants not reachable in ring order from entry node " +
                           std::to_string(entry));

    SwitchSchedule sched;
    sched.participants = s;
    sched.entry = entry;
    const int last = s.back();
    for (int n = 0; n < g.n_nodes; ++n) {
        bool part = std::find(s.begin(), s.end(), n) != s.end();
        sched.str[g.str[n]] = (n == entry)  ? STRConfig::Port0Entry
                              : part        ? STRConfig::Port1Entry
                                            : STRConfig::Bypass1to2;
        sched.tr[g.tr0[n]] = TRState::Reflect;
        sched.tr[g.tr_i[n]] = part ? TRState::Transmit : TRState::Reflect;
        sched.tr[g.tr_ii[n]] = (part && n != last) ? TRState::Transmit : TRState::Reflect;
        if (part) {
            SwitchSchedule::Hooks h;
            h.pre.emplace_back(2, sigma_x());
            h.post.emplace_back(2, sigma_x());
            sched.node_hooks[n] = std::move(h);
        }
    }
    return sched;
}

void inject_photon(JointState& state, const NetworkGraph& g, int node, cplx amp_h, cplx amp_v) {
    if (node < 0 || node >= g.n_nodes) throw PhysicsError("injection node out of range");
    for (const auto& [k, a] : state.terms())
        if (JointState::key_mode(k).kind != LocKind::NoPhoton)
            throw PhysicsError("photon already present");
    if (std::abs(std::norm(amp_h) + std::norm(amp_v) - 1.0) > kUnitaryTol)
        throw PhysicsError("photon amplitudes are not normalized");
    uint32_t e = g.out_edge_of(g.source[node], 0);
    state.relocate_modes({{PhotonMode::no_photon(), PhotonMode::on_edge(e, Pol::H), amp_h},
                          {PhotonMode::no_photon(), PhotonMode::on_edge(e, Pol::V), amp_v}});
}

namespace {

void run_cavity_hooks(JointState& st, const NetworkGraph& g, const SwitchSchedule& sched,
                      uint32_t elem, uint32_t in_edge, const NoiseRealization* noise) {
    int node = g.elements[elem].node;
    auto it = sched.node_hooks.find(node);
    const SwitchSchedule::Hooks* hooks = (it == sched.node_hooks.end()) ? nullptr : &it->second;
    if (hooks)
        for (const auto& [atom, u] : hooks->pre) st.apply_atom_unitary(node, atom, u);
    if (noise && node < static_cast<int>(noise->sandwich_phi.size()) &&
        noise->sandwich_phi[node] != 0.0)
        st.apply_collective_dephasing(node, noise->sandwich_phi[node]);
    double phase = noise ? noise->scattering_phase : 0.0;
    st.apply_scattering(node, PhotonMode::on_edge(in_edge, Pol::H), phase);
    if (hooks)
        for (const auto& [atom, u] : hooks->post) st.apply_atom_unitary(node, atom, u);
}

}  // namespace

PropagationResult propagate(JointState state, const NetworkGraph& g, const SwitchSchedule& sched,
                            const NoiseRealization* noise, const PropagateOptions& opts) {
    PropagationResult res;
    JointState st = std::move(state);

    auto snapshot = [&](int tick) {
        if (!opts.record_trace) return;
        TraceTick t;
        t.tick = tick;
        t.occupancy.assign(st.terms().begin(), st.terms().end());
        res.trace.push_back(std::move(t));
    };
    snapshot(0);

    int tick = 0;
    while (st.has_edge_amplitude()) {
        if (++tick > opts.tick_budget)
            throw PhysicsError("propagation exceeded tick budget (routing cycle in schedule?)");

        // Occupied edges in ascending id order.
        std::vector<uint32_t> occ_edges;
        for (const auto& [k, a] : st.terms()) {
            PhotonMode m = JointState::key_mode(k);
            if (m.is_edge() && (occ_edges.empty() || occ_edges.back() != m.index))
                occ_edges.push_back(m.index);
        }
        std::sort(occ_edges.begin(), occ_edges.end());
        occ_edges.erase(std::unique(occ_edges.begin(), occ_edges.end()), occ_edges.end());

        // Local element actions at the arrival boundary.
        std::vector<uint32_t> seen_elems;
        for (uint32_t e : occ_edges) {
            uint32_t elem = g.edges[e].to_elem;
            if (std::find(seen_elems.begin(), seen_elems.end(), elem) != seen_elems.end()) continue;
            seen_elems.push_back(elem);
            const Element& el = g.elements[elem];
            switch (el.kind) {
                case ElementKind::CavityPort:
                    run_cavity_hooks(st, g, sched, elem, e, noise);
                    break;
                case ElementKind::HWP:
                    st.apply_pol_unitary(e, hwp_matrix(el.theta_deg));
                    break;
                case ElementKind::Polarizer45:
                    res.polarizer_events.emplace_back(elem, st.project_polarizer(e));
                    break;
                default:
                    break;
            }
        }

        // Route everything one step.
        std::vector<ModeMap> moves;
        for (const auto& [k, a] : st.terms()) {
            PhotonMode m = JointState::key_mode(k);
            if (!m.is_edge()) continue;
            const GraphEdge& edge = g.edges[m.index];
            const Element& el = g.elements[edge.to_elem];
            cplx factor = noise ? noise->survival_amp(edge.to_elem) : cplx{1.0, 0.0};
            if (noise) {
                auto pit = g.path_entry.find(edge.to_elem);
                if (pit != g.path_entry.end()) factor *= noise->path_phase_factor(pit->second);
            }
            bool dup = false;
            for (const auto& mm : moves) dup |= (mm.from == m);
            if (dup) continue;  // one entry per occupied (edge, pol)
            if (el.kind == ElementKind::DetectorSink) {
                moves.push_back(
                    {m, PhotonMode::detector(static_cast<uint32_t>(el.detector_id)), factor});
                continue;
            }
            auto terms = transfer(el.kind, sched.config_for(g, edge.to_elem), edge.to_port, m.pol,
                                  el.fan_in);
            for (const auto& t : terms) {
                uint32_t out = g.out_edge_of(edge.to_elem, t.out_port);
                moves.push_back({m, PhotonMode::on_edge(out, t.pol), t.factor * factor});
            }
        }
        st.relocate_modes(moves);
        snapshot(tick);
    }
    res.ticks = tick;
    res.state = std::move(st);
    return res;
}

ArrivalReport validate_equal_arrival(const NetworkGraph& g, const SwitchSchedule& sched) {
    ArrivalReport report;
    if (sched.entry < 0 || sched.entry >= g.n_nodes) throw PhysicsError("schedule has no entry node");
    struct Frame {
        uint32_t edge;
        int depth;
        int path = -1;  // center path index crossed so far
    };
    std::vector<Frame> stack{{g.out_edge_of(g.source[sched.entry], 0), 1, -1}};
    const int depth_budget = 64 * (15 * g.n_nodes + 4);
    std::vector<std::pair<std::string, int>> arrivals;
    while (!stack.empty()) {
        Frame f = stack.back();
        stack.pop_back();
        if (f.depth > depth_budget) {
            report.ok = false;
            report.unequal_pairs.emplace_back("unterminated-route", "depth budget exceeded");
            continue;
        }
        const GraphEdge& edge = g.edges[f.edge];
        uint32_t elem = edge.to_elem;
        auto pit = g.path_entry.find(elem);
        if (pit != g.path_entry.end()) f.path = pit->second;
        if (elem == g.pbs_d) {
            std::string label = f.path >= 0 ? g.center_paths[f.path].label : "direct";
            arrivals.emplace_back(label, f.depth);
            continue;
        }
        const Element& el = g.elements[elem];
        if (el.kind == ElementKind::DetectorSink) continue;  // node detector: not a center route
        std::vector<int> outs;
        if (el.kind == ElementKind::PBS) {
            outs = {ports::pbs_thru(edge.to_port), ports::pbs_refl(edge.to_port)};
        } else {
            try {
                for (const auto& t :
                     transfer(el.kind, sched.config_for(g, elem), edge.to_port, Pol::H, el.fan_in))
                    outs.push_back(t.out_port);
            } catch (const PhysicsError&) {
                continue;  // no route for this arrival under the schedule
            }
        }
        for (int p : outs) stack.push_back({g.out_edge_of(elem, p), f.depth + 1, f.path});
    }
    std::sort(arrivals.begin(), arrivals.end());
    arrivals.erase(std::unique(arrivals.begin(), arrivals.end()), arrivals.end());
    report.path_lengths = arrivals;
    for (size_t i = 0; i + 1 < arrivals.size(); ++i) {
        if (arrivals[i].second != arrivals[i + 1].second) {
            report.ok = false;
            report.unequal_pairs.emplace_back(
                arrivals[i].first + "=" + std::to_string(arrivals[i].second),
                arrivals[i + 1].first + "=" + std::to_string(arrivals[i + 1].second));
        }
    }
    return report;
}

}  // namespace dfsnet
