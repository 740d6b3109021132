#include "dfsnet/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace dfsnet {

CMatrix zeros(size_t rows, size_t cols) {
    return CMatrix(rows, std::vector<cplx>(cols, cplx{0.0, 0.0}));
}

CMatrix matmul(const CMatrix& a, const CMatrix& b) {
    size_t n = a.size(), m = b[0].size(), k = b.size();
    CMatrix r = zeros(n, m);
    for (size_t i = 0; i < n; ++i)
        for (size_t l = 0; l < k; ++l)
            for (size_t j = 0; j < m; ++j) r[i][j] += a[i][l] * b[l][j];
    return r;
}

CMatrix dagger(const CMatrix& a) {
    CMatrix r = zeros(a[0].size(), a.size());
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < a[0].size(); ++j) r[j][i] = std::conj(a[i][j]);
    return r;
}

double LogicalMap::completeness_defect() const {
    size_t d = dv.size();
    CMatrix sum = matmul(dagger(dv), dv);
    CMatrix hh = matmul(dagger(dh), dh);
    double dev = 0.0;
    for (size_t i = 0; i < d; ++i)
        for (size_t j = 0; j < d; ++j) {
            cplx v = sum[i][j] + hh[i][j] - (i == j ? cplx{1.0, 0.0} : cplx{0.0, 0.0});
            dev = std::max(dev, std::abs(v));
        }
    return dev;
}

namespace {

// Recursive single-branch walker.  Follows one (edge, pol, amplitude) ray
// through the graph to a sink, branching where an element mixes polarization.
struct Walker {
    const NetworkGraph& g;
    const SwitchSchedule& sched;
    AtomString atoms;  // basis string; fixed during the walk
    cplx amp_dv{0.0, 0.0};
    cplx amp_dh{0.0, 0.0};
    int depth_budget = 0;

    void walk(uint32_t edge_id, Pol pol, cplx amp, int depth) {
        if (std::abs(amp) < kPruneCutoff) return;
        if (depth > depth_budget) throw PhysicsError("reference walk exceeded depth budget");
        const GraphEdge& edge = g.edges[edge_id];
        const Element& el = g.elements[edge.to_elem];
        switch (el.kind) {
            case ElementKind::DetectorSink:
                if (el.detector_id == g.det_dv) amp_dv += amp;
                else if (el.detector_id == g.det_dh) amp_dh += amp;
                return;  // node detectors terminate silently
            case ElementKind::CavityPort: {
                // Flip-scatter-flip sandwich: with the hooks scheduled, the H
                // ray picks up the pi phase exactly when the node encodes 0.
                int node = el.node;
                bool sandwiched = sched.node_hooks.count(node) > 0;
                bool flips = sandwiched ? (logical_bit(atoms, node) == 0)
                                        : node_atoms_are(atoms, node, 1, 1);
                if (pol == Pol::H && flips) amp = -amp;
                walk(g.out_edge_of(edge.to_elem, 0), pol, amp, depth + 1);
                return;
            }
            case ElementKind::HWP: {
                Mat2 m = hwp_matrix(el.theta_deg);
                uint32_t out = g.out_edge_of(edge.to_elem, 0);
                int c = static_cast<int>(pol);
                walk(out, Pol::H, m[0][c] * amp, depth + 1);
                walk(out, Pol::V, m[1][c] * amp, depth + 1);
                return;
            }
            case ElementKind::Polarizer45: {
                // <+|H> = <+|V> = 1/sqrt(2); retained ray continues labeled H
                walk(g.out_edge_of(edge.to_elem, 0), Pol::H, amp / std::sqrt(2.0), depth + 1);
                return;
            }
            default: {
                auto terms = transfer(el.kind, sched.config_for(g, edge.to_elem), edge.to_port, pol,
                                      el.fan_in);
                for (const auto& t : terms)
                    walk(g.out_edge_of(edge.to_elem, t.out_port), t.pol, t.factor * amp, depth + 1);
                return;
            }
        }
    }
};

}  // namespace

LogicalMap enumerate_logical_map(const NetworkGraph& g, const SwitchSchedule& sched,
                                 const std::vector<int>& participants) {
    if (participants.size() > 5) throw PhysicsError("reference enumeration limited to 5 nodes");
    std::vector<int> s = participants;
    std::sort(s.begin(), s.end());
    LogicalMap map;
    map.participants = s;
    size_t dim = size_t{1} << s.size();
    map.dv = zeros(dim, dim);
    map.dh = zeros(dim, dim);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (size_t l = 0; l < dim; ++l) {
        // first participant = most significant logical bit
        uint32_t bits = 0;
        for (size_t pos = 0; pos < s.size(); ++pos) {
            uint32_t v = (l >> (s.size() - 1 - pos)) & 1u;
            bits |= v << s[pos];
        }
        Walker w{g, sched, logical_atom_string(g.n_nodes, bits)};
        w.depth_budget = 64 * (15 * g.n_nodes + 4);
        uint32_t start = g.out_edge_of(g.source[sched.entry], 0);
        w.walk(start, Pol::H, cplx{inv_sqrt2, 0.0}, 1);
        w.walk(start, Pol::V, cplx{inv_sqrt2, 0.0}, 1);
        map.dv[l][l] = w.amp_dv;
        map.dh[l][l] = w.amp_dh;
    }
    return map;
}

CMatrix standard_target(StandardGate gate, int qubits) {
    switch (gate) {
        case StandardGate::CPZ: {
            if (qubits < 1) throw PhysicsError("CPZ needs a qubit count");
            size_t dim = size_t{1} << qubits;
            CMatrix m = zeros(dim, dim);
            for (size_t i = 0; i < dim; ++i) m[i][i] = (i == dim - 1) ? cplx{-1.0, 0.0} : cplx{1.0, 0.0};
            return m;
        }
        case StandardGate::Toffoli: {
            CMatrix m = zeros(8, 8);
            for (size_t i = 0; i < 8; ++i) {
                size_t j = (i >> 1) == 3 ? (i ^ 1) : i;  // flip target when both controls set
                m[j][i] = cplx{1.0, 0.0};
            }
            return m;
        }
        case StandardGate::Hadamard: {
            double s = 1.0 / std::sqrt(2.0);
            return {{cplx{s, 0.0}, cplx{s, 0.0}}, {cplx{s, 0.0}, cplx{-s, 0.0}}};
        }
    }
    throw PhysicsError("unknown standard gate");
}

PhaseComparison compare_up_to_global_phase(const CMatrix& a, const CMatrix& b, double tol) {
    if (a.size() != b.size() || (a.size() && a[0].size() != b[0].size()))
        throw PhysicsError("matrix shape mismatch");
    cplx ip{0.0, 0.0};
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < a[0].size(); ++j) ip += std::conj(b[i][j]) * a[i][j];
    PhaseComparison c;
    c.phase = std::abs(ip) > 0.0 ? ip / std::abs(ip) : cplx{1.0, 0.0};
    double dev = 0.0;
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < a[0].size(); ++j) dev = std::max(dev, std::abs(a[i][j] - c.phase * b[i][j]));
    c.max_deviation = dev;
    c.ok = dev <= tol;
    return c;
}

}  // namespace dfsnet
