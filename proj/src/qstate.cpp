#include "dfsnet/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <unordered_set>

namespace dfsnet {

Mat2 mat2_dagger(const Mat2& m) {
    return {{{std::conj(m[0][0]), std::conj(m[1][0])}, {std::conj(m[0][1]), std::conj(m[1][1])}}};
}

Mat2 mat2_mul(const Mat2& a, const Mat2& b) {
    Mat2 r{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
    return r;
}

bool mat2_is_unitary(const Mat2& m, double tol) {
    Mat2 p = mat2_mul(mat2_dagger(m), m);
    double dev = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) dev = std::max(dev, std::abs(p[i][j] - (i == j ? cplx{1.0, 0.0} : cplx{0.0, 0.0})));
    return dev <= tol;
}

Mat2 sigma_x() { return {{{cplx{0.0, 0.0}, cplx{1.0, 0.0}}, {cplx{1.0, 0.0}, cplx{0.0, 0.0}}}}; }
Mat2 identity2() { return {{{cplx{1.0, 0.0}, cplx{0.0, 0.0}}, {cplx{0.0, 0.0}, cplx{1.0, 0.0}}}}; }

std::string PhotonMode::str() const {
    std::ostringstream os;
    switch (kind) {
        case LocKind::NoPhoton: os << "nophoton"; break;
        case LocKind::Edge: os << "edge:" << index << (pol == Pol::H ? ":H" : ":V"); break;
        case LocKind::Detector: os << "det:" << index; break;
        case LocKind::Lost: os << "lost"; break;
        case LocKind::Absorbed: os << "absorbed"; break;
    }
    return os.str();
}

AtomString logical_atom_string(int node_count, uint32_t bits) {
    AtomString s = 0;
    for (int n = 0; n < node_count; ++n) {
        int b = (bits >> n) & 1;
        // encoded 0 is |10> (atom1=1, atom2=0); encoded 1 is |01>
        if (b == 0)
            s |= AtomString{1} << atom_bit_pos(n, 1);
        else
            s |= AtomString{1} << atom_bit_pos(n, 2);
    }
    return s;
}

cplx JointState::amplitude(const PhotonMode& m, AtomString atoms) const {
    auto it = amps_.find(make_key(m, atoms));
    return it == amps_.end() ? cplx{0.0, 0.0} : it->second;
}

double JointState::norm2() const {
    double s = 0.0;
    for (const auto& [k, a] : amps_) s += std::norm(a);
    return s;
}

double JointState::mode_norm2(const PhotonMode& m) const {
    double s = 0.0;
    for (const auto& [k, a] : amps_)
        if (key_mode(k) == m) s += std::norm(a);
    return s;
}

bool JointState::has_edge_amplitude() const {
    for (const auto& [k, a] : amps_)
        if (key_mode(k).is_edge()) return true;
    return false;
}

void JointState::prune(double cutoff) {
    for (auto it = amps_.begin(); it != amps_.end();) {
        if (std::abs(it->second) < cutoff)
            it = amps_.erase(it);
        else
            ++it;
    }
}

void JointState::check_node(int node) const {
    if (node < 0 || node >= node_count_) throw PhysicsError("node index out of range");
}

void JointState::apply_atom_unitary(int node, int atom, const Mat2& u) {
    check_node(node);
    if (atom != 1 && atom != 2) throw PhysicsError("atom index must be 1 or 2");
    if (!mat2_is_unitary(u)) throw PhysicsError("atom operation is not unitary");
    const int pos = atom_bit_pos(node, atom);
    Terms out;
    for (const auto& [k, a] : amps_) {
        AtomString atoms = key_atoms(k);
        PhotonMode m = key_mode(k);
        int bit = (atoms >> pos) & 1;
        AtomString with0 = atoms & ~(AtomString{1} << pos);
        AtomString with1 = atoms | (AtomString{1} << pos);
        if (u[0][bit] != cplx{0.0, 0.0}) out[make_key(m, with0)] += u[0][bit] * a;
        if (u[1][bit] != cplx{0.0, 0.0}) out[make_key(m, with1)] += u[1][bit] * a;
    }
    amps_ = std::move(out);
    prune();
}

void JointState::apply_scattering(int node, const PhotonMode& cavity_mode, double phase_rad) {
    check_node(node);
    if (!cavity_mode.is_edge()) throw PhysicsError("scattering requires a live edge mode, not a sink");
    if (!registry_.contains(cavity_mode)) throw PhysicsError("unknown cavity mode");
    // phase_rad == 0 selects the ideal pi flip, applied as an exact -1.
    const cplx mult = (phase_rad == 0.0) ? cplx{-1.0, 0.0}
                                         : std::exp(cplx{0.0, 1.0} * phase_rad);
    PhotonMode h_mode = PhotonMode::on_edge(cavity_mode.index, Pol::H);
    for (auto& [k, a] : amps_) {
        if (key_mode(k) == h_mode && node_atoms_are(key_atoms(k), node, 1, 1)) a *= mult;
    }
}

void JointState::apply_pol_unitary(uint32_t edge, const Mat2& u) {
    if (!mat2_is_unitary(u)) throw PhysicsError("polarization operation is not unitary");
    PhotonMode mh = PhotonMode::on_edge(edge, Pol::H);
    PhotonMode mv = PhotonMode::on_edge(edge, Pol::V);
    if (!registry_.contains(mh)) throw PhysicsError("unknown edge for polarization operation");
    // Collect atom strings occupying this edge.
    std::vector<AtomString> strings;
    for (const auto& [k, a] : amps_) {
        PhotonMode m = key_mode(k);
        if (m.is_edge() && m.index == edge) strings.push_back(key_atoms(k));
    }
    std::sort(strings.begin(), strings.end());
    strings.erase(std::unique(strings.begin(), strings.end()), strings.end());
    for (AtomString s : strings) {
        Key kh = make_key(mh, s), kv = make_key(mv, s);
        cplx ah = amps_.count(kh) ? amps_[kh] : cplx{0.0, 0.0};
        cplx av = amps_.count(kv) ? amps_[kv] : cplx{0.0, 0.0};
        cplx nh = u[0][0] * ah + u[0][1] * av;
        cplx nv = u[1][0] * ah + u[1][1] * av;
        if (nh == cplx{0.0, 0.0}) amps_.erase(kh); else amps_[kh] = nh;
        if (nv == cplx{0.0, 0.0}) amps_.erase(kv); else amps_[kv] = nv;
    }
    prune();
}

void JointState::relocate_modes(const std::vector<ModeMap>& mapping) {
    // Group map entries by source mode.
    std::map<uint32_t, std::vector<const ModeMap*>> by_source;
    for (const auto& mm : mapping) {
        if (!registry_.contains(mm.from) || !registry_.contains(mm.to))
            throw PhysicsError("relocation references an unknown mode");
        if (mm.from.is_terminal() && mm.from.kind != LocKind::NoPhoton)
            throw PhysicsError("sink modes are terminal; no transfer out of " + mm.from.str());
        by_source[mm.from.key()].push_back(&mm);
    }
    Terms out;
    // collision tracking: Edge targets only; sinks may accumulate
    std::unordered_set<uint64_t> occupied_edge_targets;
    auto place = [&](const PhotonMode& m, AtomString atoms, cplx amp, bool moved) {
        Key k = make_key(m, atoms);
        if (m.is_edge()) {
            if (!occupied_edge_targets.insert(k).second)
                throw PhysicsError("beam collision: two occupied modes merged onto " + m.str());
            out[k] += amp;
        } else {
            out[k] += amp;  // sinks add
        }
        (void)moved;
    };
    for (const auto& [k, a] : amps_) {
        PhotonMode m = key_mode(k);
        AtomString atoms = key_atoms(k);
        auto it = by_source.find(m.key());
        if (it == by_source.end()) {
            place(m, atoms, a, false);
            continue;
        }
        double wsum = 0.0;
        for (const ModeMap* mm : it->second) {
            wsum += std::norm(mm->factor);
            place(mm->to, atoms, a * mm->factor, true);
        }
        if (wsum > 1.0 + kUnitaryTol)
            throw PhysicsError("relocation factors exceed unit total weight (not an isometry)");
        if (wsum < 1.0 - kUnitaryTol) lost_weight_ += std::norm(a) * (1.0 - wsum);
    }
    amps_ = std::move(out);
    prune();
}

double JointState::project_polarizer(uint32_t edge) {
    PhotonMode mh = PhotonMode::on_edge(edge, Pol::H);
    PhotonMode mv = PhotonMode::on_edge(edge, Pol::V);
    if (!registry_.contains(mh)) throw PhysicsError("unknown edge for polarizer");
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    double retained = 0.0, total = 0.0;
    Terms out;
    for (const auto& [k, a] : amps_) {
        PhotonMode m = key_mode(k);
        AtomString atoms = key_atoms(k);
        if (!(m.is_edge() && m.index == edge)) {
            out[k] += a;
            continue;
        }
        total += std::norm(a);
        cplx ah = amplitude(mh, atoms), av = amplitude(mv, atoms);
        if (m.pol == Pol::V) continue;  // handled together with the H term below
        cplx plus = (ah + av) * inv_sqrt2;   // retained ray, stored under label H
        cplx minus = (ah - av) * inv_sqrt2;  // orthogonal ray, absorbed
        if (plus != cplx{0.0, 0.0}) out[make_key(mh, atoms)] += plus;
        if (minus != cplx{0.0, 0.0}) out[make_key(PhotonMode::lost(), atoms)] += minus;
        retained += std::norm(plus);
    }
    // Strings with only a V component never hit the pol==H branch; fold them in.
    for (const auto& [k, a] : amps_) {
        PhotonMode m = key_mode(k);
        if (m.is_edge() && m.index == edge && m.pol == Pol::V) {
            AtomString atoms = key_atoms(k);
            if (amplitude(mh, atoms) == cplx{0.0, 0.0}) {
                cplx plus = a * inv_sqrt2;
                cplx minus = -a * inv_sqrt2;
                out[make_key(mh, atoms)] += plus;
                out[make_key(PhotonMode::lost(), atoms)] += minus;
                retained += std::norm(plus);
            }
        }
    }
    amps_ = std::move(out);
    prune();
    if (total <= 0.0) return 1.0;  // nothing at the polarizer
    return retained / total;
}

void JointState::apply_collective_dephasing(int node, double phi) {
    check_node(node);
    if (phi == 0.0) return;
    for (auto& [k, a] : amps_) {
        AtomString atoms = key_atoms(k);
        int ones = atom_bit(atoms, node, 1) + atom_bit(atoms, node, 2);
        if (ones != 0) a *= std::exp(cplx{0.0, 1.0} * (phi * static_cast<double>(ones)));
    }
}

void JointState::scale(cplx factor) {
    for (auto& [k, a] : amps_) a *= factor;
}

void JointState::insert_term(const PhotonMode& m, AtomString atoms, cplx amp) {
    if (!registry_.contains(m)) throw PhysicsError("unregistered mode: " + m.str());
    if (node_count_ > 0 && atoms >= (AtomString{1} << (2 * node_count_)))
        throw PhysicsError("atom string out of range");
    amps_[make_key(m, atoms)] += amp;
}

void JointState::clear(int node_count, ModeRegistry reg) {
    node_count_ = node_count;
    registry_ = std::move(reg);
    amps_.clear();
    lost_weight_ = 0.0;
}

bool operator==(const JointState& a, const JointState& b) {
    return a.node_count_ == b.node_count_ && a.amps_ == b.amps_ && a.lost_weight_ == b.lost_weight_;
}

JointState new_state(int node_count, const ModeRegistry& reg, AtomString atom_config,
                     const std::optional<PhotonInit>& photon) {
    if (node_count < 1) throw PhysicsError("node count must be >= 1");
    if (atom_config >= (AtomString{1} << (2 * node_count))) throw PhysicsError("atom string out of range");
    JointState s;
    s.clear(node_count, reg);
    if (photon) {
        if (!photon->mode.is_edge()) throw PhysicsError("photon must start on an edge mode");
        if (!reg.contains(photon->mode)) throw PhysicsError("unknown photon mode");
        double n = std::norm(photon->amp_h) + std::norm(photon->amp_v);
        if (std::abs(n - 1.0) > kUnitaryTol) throw PhysicsError("photon amplitudes are not normalized");
        if (photon->amp_h != cplx{0.0, 0.0})
            s.insert_term(PhotonMode::on_edge(photon->mode.index, Pol::H), atom_config, photon->amp_h);
        if (photon->amp_v != cplx{0.0, 0.0})
            s.insert_term(PhotonMode::on_edge(photon->mode.index, Pol::V), atom_config, photon->amp_v);
    } else {
        s.insert_term(PhotonMode::no_photon(), atom_config, cplx{1.0, 0.0});
    }
    return s;
}

std::vector<MeasureOutcome> enumerate_detector_outcomes(const JointState& state,
                                                        const std::vector<uint32_t>& detectors) {
    if (state.has_edge_amplitude())
        throw PhysicsError("measurement requested while photon amplitude is still in flight");
    std::vector<MeasureOutcome> outcomes;
    double clicked = 0.0;
    for (size_t i = 0; i < detectors.size(); ++i) {
        PhotonMode sink = PhotonMode::detector(detectors[i]);
        double p = state.mode_norm2(sink);
        clicked += p;
        MeasureOutcome o;
        o.detector = static_cast<int>(i);
        o.prob = p;
        if (p > 0.0) {
            JointState c;
            c.clear(state.node_count(), state.registry());
            double inv = 1.0 / std::sqrt(p);
            for (const auto& [k, a] : state.terms()) {
                if (JointState::key_mode(k) == sink)
                    c.insert_term(PhotonMode::no_photon(), JointState::key_atoms(k), a * inv);
            }
            o.collapsed = std::move(c);
        }
        outcomes.push_back(std::move(o));
    }
    MeasureOutcome nc;
    nc.detector = -1;
    nc.prob = std::max(0.0, 1.0 - clicked);
    // Coherent no-click remainder: Lost/Absorbed sinks, NoPhoton, plus any
    // detector sink not in the measured set.
    JointState c;
    c.clear(state.node_count(), state.registry());
    double mass = 0.0;
    for (const auto& [k, a] : state.terms()) {
        PhotonMode m = JointState::key_mode(k);
        bool measured = false;
        if (m.kind == LocKind::Detector)
            for (uint32_t d : detectors) measured |= (m.index == d);
        if (!measured) {
            c.insert_term(PhotonMode::no_photon(), JointState::key_atoms(k), a);
            mass += std::norm(a);
        }
    }
    if (mass > 0.0) {
        c.scale(1.0 / std::sqrt(mass));
        nc.collapsed = std::move(c);
    }
    outcomes.push_back(std::move(nc));
    return outcomes;
}

MeasureOutcome measure_detectors(const JointState& state, const std::vector<uint32_t>& detectors,
                                 Rng& rng) {
    auto outcomes = enumerate_detector_outcomes(state, detectors);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double r = u(rng);
    double acc = 0.0;
    for (auto& o : outcomes) {
        acc += o.prob;
        if (r < acc) return o;
    }
    return outcomes.back();  // numerical slack lands on no-click
}

double fidelity_up_to_global_phase(const JointState& a, const JointState& b) {
    if (a.node_count() != b.node_count()) throw PhysicsError("fidelity: dimension mismatch");
    double na = a.norm2(), nb = b.norm2();
    if (std::abs(na - 1.0) > 1e-9 || std::abs(nb - 1.0) > 1e-9)
        throw PhysicsError("fidelity: states must be normalized");
    cplx ip{0.0, 0.0};
    const auto& ta = a.terms();
    const auto& tb = b.terms();
    auto ia = ta.begin();
    auto ib = tb.begin();
    while (ia != ta.end() && ib != tb.end()) {
        if (ia->first < ib->first) ++ia;
        else if (ib->first < ia->first) ++ib;
        else {
            ip += std::conj(ia->second) * ib->second;
            ++ia; ++ib;
        }
    }
    return std::norm(ip);
}

}  // namespace dfsnet
