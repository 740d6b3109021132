#pragma once

#include <cmath>
#include <vector>

#include "dfsnet/network.hpp"
#include "dfsnet/qstate.hpp"
#include "dfsnet/rng.hpp"

namespace testutil {

using namespace dfsnet;

inline constexpr double kInvSqrt2 = 0.7071067811865476;

inline bool close(double a, double b, double tol = 1e-12) { return std::abs(a - b) <= tol; }
inline bool close(cplx a, cplx b, double tol = 1e-12) { return std::abs(a - b) <= tol; }

// Random normalized state over a handful of modes and all atom strings.
inline JointState random_state(int node_count, const ModeRegistry& reg,
                               const std::vector<PhotonMode>& modes, Rng& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    JointState st;
    st.clear(node_count, reg);
    double norm = 0.0;
    std::vector<std::pair<std::pair<PhotonMode, AtomString>, cplx>> terms;
    for (const auto& m : modes) {
        for (AtomString a = 0; a < (AtomString{1} << (2 * node_count)); ++a) {
            cplx v{g(rng), g(rng)};
            terms.push_back({{m, a}, v});
            norm += std::norm(v);
        }
    }
    double inv = 1.0 / std::sqrt(norm);
    for (auto& [key, v] : terms) st.insert_term(key.first, key.second, v * inv);
    return st;
}

// Register-only state with amplitudes over the logical basis of `nodes`
// (first node = most significant bit); the rest sit in encoded 0.
inline JointState logical_superposition(int node_count, const ModeRegistry& reg,
                                        const std::vector<int>& nodes,
                                        const std::vector<cplx>& amps) {
    JointState st;
    st.clear(node_count, reg);
    for (size_t l = 0; l < amps.size(); ++l) {
        uint32_t bits = 0;
        for (size_t pos = 0; pos < nodes.size(); ++pos)
            bits |= ((l >> (nodes.size() - 1 - pos)) & 1u) << nodes[pos];
        st.insert_term(PhotonMode::no_photon(), logical_atom_string(node_count, bits), amps[l]);
    }
    return st;
}

inline std::vector<cplx> random_unit_vector(size_t dim, Rng& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<cplx> v(dim);
    double norm = 0.0;
    for (auto& a : v) {
        a = {g(rng), g(rng)};
        norm += std::norm(a);
    }
    for (auto& a : v) a /= std::sqrt(norm);
    return v;
}

// Amplitude found on `edge` across the whole trace (the photon crosses each
// edge on exactly one tick).
inline cplx trace_amplitude(const PropagationResult& res, uint32_t edge, Pol pol,
                            AtomString atoms) {
    uint64_t key = JointState::make_key(PhotonMode::on_edge(edge, pol), atoms);
    for (const auto& t : res.trace)
        for (const auto& [k, a] : t.occupancy)
            if (k == key) return a;
    return {0.0, 0.0};
}

}  // namespace testutil
