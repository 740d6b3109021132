#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dfsnet/errors.hpp"
#include "dfsnet/rng.hpp"

namespace dfsnet {

using cplx = std::complex<double>;
using Mat2 = std::array<std::array<cplx, 2>, 2>;

inline constexpr double kPruneCutoff = 1e-15;   // amplitudes below this are dropped
inline constexpr double kUnitaryTol = 1e-12;

Mat2 mat2_dagger(const Mat2& m);
Mat2 mat2_mul(const Mat2& a, const Mat2& b);
bool mat2_is_unitary(const Mat2& m, double tol = kUnitaryTol);
Mat2 sigma_x();
Mat2 identity2();

enum class Pol : uint8_t { H = 0, V = 1 };

enum class LocKind : uint8_t { NoPhoton = 0, Edge = 1, Detector = 2, Lost = 3, Absorbed = 4 };

// Basis label for the photon degree of freedom: a directed edge of the optical
// graph (with polarization), a terminal sink, or "no photon in flight".
// Sink modes and NoPhoton carry no polarization; their pol field is
// canonicalized to H so equal modes compare equal.
struct PhotonMode {
    LocKind kind = LocKind::NoPhoton;
    uint32_t index = 0;  // edge id for Edge, detector id for Detector
    Pol pol = Pol::H;

    static PhotonMode no_photon() { return {}; }
    static PhotonMode on_edge(uint32_t edge, Pol p) { return {LocKind::Edge, edge, p}; }
    static PhotonMode detector(uint32_t det) { return {LocKind::Detector, det, Pol::H}; }
    static PhotonMode lost() { return {LocKind::Lost, 0, Pol::H}; }
    static PhotonMode absorbed() { return {LocKind::Absorbed, 0, Pol::H}; }

    bool is_edge() const { return kind == LocKind::Edge; }
    // Terminal modes never transfer out (sinks and the no-photon label).
    bool is_terminal() const { return !is_edge(); }

    // Packed key: kind(3) | pol(1) | index(28).  Ordering groups modes by
    // location, which the propagation engine relies on for deterministic
    // iteration.
    uint32_t key() const {
        uint32_t p = (kind == LocKind::Edge) ? static_cast<uint32_t>(pol) : 0u;
        return (static_cast<uint32_t>(kind) << 29) | (p << 28) | (index & 0x0fffffffu);
    }
    static PhotonMode from_key(uint32_t k) {
        PhotonMode m;
        m.kind = static_cast<LocKind>(k >> 29);
        m.pol = static_cast<Pol>((k >> 28) & 1u);
        m.index = k & 0x0fffffffu;
        return m;
    }
    friend bool operator==(const PhotonMode& a, const PhotonMode& b) { return a.key() == b.key(); }
    friend bool operator!=(const PhotonMode& a, const PhotonMode& b) { return !(a == b); }
    std::string str() const;
};

// 2N-bit atomic basis string.  Bit 2n is atom 1 of node n, bit 2n+1 is atom 2
// of node n; atom 1 of node 0 is the least significant bit.
using AtomString = uint32_t;

inline int atom_bit_pos(int node, int atom /* 1 or 2 */) { return 2 * node + (atom - 1); }
inline int atom_bit(AtomString s, int node, int atom) { return (s >> atom_bit_pos(node, atom)) & 1; }
inline AtomString flip_atom(AtomString s, int node, int atom) {
    return s ^ (AtomString{1} << atom_bit_pos(node, atom));
}
inline bool node_atoms_are(AtomString s, int node, int a1, int a2) {
    return atom_bit(s, node, 1) == a1 && atom_bit(s, node, 2) == a2;
}
// Encoded value of a node: |10> -> 0, |01> -> 1, otherwise -1 (leaked).
inline int logical_bit(AtomString s, int node) {
    int a1 = atom_bit(s, node, 1), a2 = atom_bit(s, node, 2);
    if (a1 == 1 && a2 == 0) return 0;
    if (a1 == 0 && a2 == 1) return 1;
    return -1;
}
// Atom string with every node set to the encoded basis value of `bits`
// (bit k of `bits` is node k, 0 -> |10>, 1 -> |01>).
AtomString logical_atom_string(int node_count, uint32_t bits);

// The set of photon modes a state may occupy: the edges and detector sinks of
// one network, plus the always-legal NoPhoton/Lost/Absorbed labels.
struct ModeRegistry {
    uint32_t edge_count = 0;
    std::vector<std::string> detector_names;

    bool contains(const PhotonMode& m) const {
        switch (m.kind) {
            case LocKind::Edge: return m.index < edge_count;
            case LocKind::Detector: return m.index < detector_names.size();
            default: return true;
        }
    }
};

struct ModeMap {
    PhotonMode from;
    PhotonMode to;
    cplx factor{1.0, 0.0};
};

// Sparse pure state of one photon and 2N atomic qubits.  Keys combine the
// photon mode with the atomic basis string; value semantics throughout.
class JointState {
public:
    using Key = uint64_t;
    using Terms = std::map<Key, cplx>;

    JointState() = default;

    static Key make_key(const PhotonMode& m, AtomString atoms) {
        return (static_cast<uint64_t>(m.key()) << 32) | atoms;
    }
    static PhotonMode key_mode(Key k) { return PhotonMode::from_key(static_cast<uint32_t>(k >> 32)); }
    static AtomString key_atoms(Key k) { return static_cast<AtomString>(k & 0xffffffffu); }

    int node_count() const { return node_count_; }
    const ModeRegistry& registry() const { return registry_; }
    const Terms& terms() const { return amps_; }
    double lost_weight() const { return lost_weight_; }

    cplx amplitude(const PhotonMode& m, AtomString atoms) const;
    double norm2() const;
    double mode_norm2(const PhotonMode& m) const;  // squared norm at one mode (pol included)
    bool has_edge_amplitude() const;
    void prune(double cutoff = kPruneCutoff);

    void apply_atom_unitary(int node, int atom, const Mat2& u);
    void apply_scattering(int node, const PhotonMode& cavity_mode, double phase_rad = 0.0 /* 0 => exact pi */);
    void apply_pol_unitary(uint32_t edge, const Mat2& u);
    void relocate_modes(const std::vector<ModeMap>& mapping);
    double project_polarizer(uint32_t edge);  // returns success probability
    // Phase e^{i phi} on |1> of both atoms of `node` (same phi: collective).
    void apply_collective_dephasing(int node, double phi);
    void scale(cplx factor);

    // Construction helpers (used by new_state and by tests preparing
    // entangled register inputs).
    void insert_term(const PhotonMode& m, AtomString atoms, cplx amp);
    void clear(int node_count, ModeRegistry reg);

    friend bool operator==(const JointState& a, const JointState& b);

private:
    int node_count_ = 0;
    ModeRegistry registry_;
    Terms amps_;
    // Probability mass removed by sub-unit relocation factors (uniform
    // attenuation); counts toward the no-click outcome.
    double lost_weight_ = 0.0;

    void check_node(int node) const;
};

struct PhotonInit {
    PhotonMode mode;  // edge location; pol field ignored
    cplx amp_h{0.0, 0.0};
    cplx amp_v{0.0, 0.0};
};

JointState new_state(int node_count, const ModeRegistry& reg, AtomString atom_config,
                     const std::optional<PhotonInit>& photon = std::nullopt);

struct MeasureOutcome {
    int detector = -1;  // index into the `detectors` argument; -1 = no click
    double prob = 0.0;
    // Collapsed state (photon relabeled NoPhoton).  Absent for a no-click
    // outcome whose mass is pure attenuation (nothing coherent remains).
    std::optional<JointState> collapsed;
};

// Exhaustive outcome table over `detectors` plus the no-click aggregate.
std::vector<MeasureOutcome> enumerate_detector_outcomes(const JointState& state,
                                                        const std::vector<uint32_t>& detectors);
// Samples one outcome with the injected generator.
MeasureOutcome measure_detectors(const JointState& state, const std::vector<uint32_t>& detectors,
                                 Rng& rng);

// |<a|b>|^2; both states must be normalized and share node count.
double fidelity_up_to_global_phase(const JointState& a, const JointState& b);

}  // namespace dfsnet
