#include <doctest.h>

#include "testutil.hpp"

using namespace dfsnet;
using namespace testutil;

namespace {
ModeRegistry small_registry() {
    ModeRegistry r;
    r.edge_count = 8;
    r.detector_names = {"Dh", "Dv"};
    return r;
}
}  // namespace

TEST_CASE("new_state builds product states") {
    auto reg = small_registry();
    // single node in |10>, no photon
    JointState s = new_state(1, reg, logical_atom_string(1, 0));
    CHECK(s.terms().size() == 1);
    CHECK(close(s.amplitude(PhotonMode::no_photon(), 0b01), 1.0));

    // photon split over H and V
    PhotonInit ph{PhotonMode::on_edge(3, Pol::H), kInvSqrt2, kInvSqrt2};
    JointState sp = new_state(1, reg, 0b01, ph);
    CHECK(sp.terms().size() == 2);
    CHECK(close(sp.amplitude(PhotonMode::on_edge(3, Pol::H), 0b01), kInvSqrt2));
    CHECK(close(sp.amplitude(PhotonMode::on_edge(3, Pol::V), 0b01), kInvSqrt2));

    // three nodes all encoded zero: |10 10 10>
    JointState s3 = new_state(3, reg, logical_atom_string(3, 0));
    CHECK(close(s3.amplitude(PhotonMode::no_photon(), 0b010101), 1.0));

    CHECK_THROWS_AS(new_state(0, reg, 0), PhysicsError);
    PhotonInit bad{PhotonMode::on_edge(3, Pol::H), 1.0, 1.0};
    CHECK_THROWS_AS(new_state(1, reg, 0, bad), PhysicsError);
    PhotonInit offmap{PhotonMode::on_edge(99, Pol::H), 1.0, 0.0};
    CHECK_THROWS_AS(new_state(1, reg, 0, offmap), PhysicsError);
}

TEST_CASE("atom unitaries act on single atoms") {
    auto reg = small_registry();
    JointState s = new_state(1, reg, 0b01);  // |10>: atom1=1, atom2=0

    SUBCASE("sigma_x flips atom 2: |10> -> |11>") {
        s.apply_atom_unitary(0, 2, sigma_x());
        CHECK(close(s.amplitude(PhotonMode::no_photon(), 0b11), 1.0));
    }
    SUBCASE("identity leaves the state alone") {
        JointState before = s;
        s.apply_atom_unitary(0, 1, identity2());
        CHECK(s == before);
    }
    SUBCASE("sigma_x twice is the identity") {
        JointState before = s;
        s.apply_atom_unitary(0, 2, sigma_x());
        s.apply_atom_unitary(0, 2, sigma_x());
        CHECK(s == before);
    }
    SUBCASE("non-unitary and bad node are rejected") {
        Mat2 bad{{{cplx{1, 0}, cplx{1, 0}}, {cplx{0, 0}, cplx{1, 0}}}};
        CHECK_THROWS_AS(s.apply_atom_unitary(0, 1, bad), PhysicsError);
        CHECK_THROWS_AS(s.apply_atom_unitary(5, 1, sigma_x()), PhysicsError);
    }
}

TEST_CASE("cavity scattering flips the H component exactly for |11>") {
    auto reg = small_registry();
    PhotonMode cavity = PhotonMode::on_edge(2, Pol::H);

    PhotonInit ph{cavity, kInvSqrt2, kInvSqrt2};
    JointState s = new_state(1, reg, 0b11, ph);
    s.apply_scattering(0, cavity);
    CHECK(close(s.amplitude(PhotonMode::on_edge(2, Pol::H), 0b11), -kInvSqrt2));
    CHECK(close(s.amplitude(PhotonMode::on_edge(2, Pol::V), 0b11), kInvSqrt2));

    // V polarization never interacts
    PhotonInit pv{cavity, 0.0, 1.0};
    JointState sv = new_state(1, reg, 0b11, pv);
    JointState before = sv;
    sv.apply_scattering(0, cavity);
    CHECK(sv == before);

    // atoms |10>: no interaction
    PhotonInit phh{cavity, 1.0, 0.0};
    JointState sh = new_state(1, reg, 0b01, phh);
    JointState before_h = sh;
    sh.apply_scattering(0, cavity);
    CHECK(sh == before_h);

    CHECK_THROWS_AS(sh.apply_scattering(0, PhotonMode::lost()), PhysicsError);
}

TEST_CASE("polarization unitaries act locally") {
    auto reg = small_registry();
    PhotonInit ph{PhotonMode::on_edge(1, Pol::H), -kInvSqrt2, kInvSqrt2};  // (-H+V)/sqrt(2)
    JointState s = new_state(1, reg, 0b01, ph);

    SUBCASE("h<->v swap turns (-H+V)/sqrt2 into (H-V)/sqrt2") {
        s.apply_pol_unitary(1, sigma_x());
        CHECK(close(s.amplitude(PhotonMode::on_edge(1, Pol::H), 0b01), kInvSqrt2));
        CHECK(close(s.amplitude(PhotonMode::on_edge(1, Pol::V), 0b01), -kInvSqrt2));
    }
    SUBCASE("polarization Hadamard turns (H-V)/sqrt2 into V") {
        s.apply_pol_unitary(1, sigma_x());
        const double r = kInvSqrt2;
        Mat2 had{{{cplx{r, 0}, cplx{r, 0}}, {cplx{r, 0}, cplx{-r, 0}}}};
        s.apply_pol_unitary(1, had);
        CHECK(close(s.amplitude(PhotonMode::on_edge(1, Pol::V), 0b01), 1.0, 1e-12));
        CHECK(close(s.amplitude(PhotonMode::on_edge(1, Pol::H), 0b01), 0.0, 1e-12));
    }
    SUBCASE("identity") {
        JointState before = s;
        s.apply_pol_unitary(1, identity2());
        CHECK(s == before);
    }
}

TEST_CASE("relocation moves, splits, and detects collisions") {
    auto reg = small_registry();

    SUBCASE("plain relabeling carries the amplitude") {
        PhotonInit ph{PhotonMode::on_edge(0, Pol::V), 0.0, 1.0};
        JointState s = new_state(1, reg, 0b01, ph);
        s.relocate_modes({{PhotonMode::on_edge(0, Pol::V), PhotonMode::on_edge(4, Pol::V), 1.0}});
        CHECK(close(s.amplitude(PhotonMode::on_edge(4, Pol::V), 0b01), 1.0));
    }
    SUBCASE("two occupied modes onto one target collide") {
        PhotonInit ph{PhotonMode::on_edge(0, Pol::H), kInvSqrt2, kInvSqrt2};
        JointState s = new_state(1, reg, 0b01, ph);
        CHECK_THROWS_AS(
            s.relocate_modes({{PhotonMode::on_edge(0, Pol::H), PhotonMode::on_edge(4, Pol::H), 1.0},
                              {PhotonMode::on_edge(0, Pol::V), PhotonMode::on_edge(4, Pol::H), 1.0}}),
            PhysicsError);
    }
    SUBCASE("beam-splitter style separation by polarization") {
        PhotonInit ph{PhotonMode::on_edge(0, Pol::H), kInvSqrt2, kInvSqrt2};
        JointState s = new_state(1, reg, 0b01, ph);
        s.relocate_modes({{PhotonMode::on_edge(0, Pol::H), PhotonMode::on_edge(4, Pol::H), 1.0},
                          {PhotonMode::on_edge(0, Pol::V), PhotonMode::on_edge(5, Pol::V), 1.0}});
        CHECK(close(s.amplitude(PhotonMode::on_edge(4, Pol::H), 0b01), kInvSqrt2));
        CHECK(close(s.amplitude(PhotonMode::on_edge(5, Pol::V), 0b01), kInvSqrt2));
    }
    SUBCASE("unknown mode is rejected") {
        JointState s = new_state(1, reg, 0b01);
        CHECK_THROWS_AS(
            s.relocate_modes({{PhotonMode::on_edge(99, Pol::H), PhotonMode::on_edge(4, Pol::H), 1.0}}),
            PhysicsError);
    }
}

TEST_CASE("polarizer projection") {
    auto reg = small_registry();

    SUBCASE("the +45 ray passes untouched, relabeled H") {
        PhotonInit ph{PhotonMode::on_edge(0, Pol::H), kInvSqrt2, kInvSqrt2};
        JointState s = new_state(1, reg, 0b01, ph);
        double p = s.project_polarizer(0);
        CHECK(close(p, 1.0));
        CHECK(close(s.amplitude(PhotonMode::on_edge(0, Pol::H), 0b01), 1.0));
    }
    SUBCASE("the orthogonal ray is fully absorbed") {
        PhotonInit ph{PhotonMode::on_edge(0, Pol::H), kInvSqrt2, -kInvSqrt2};
        JointState s = new_state(1, reg, 0b01, ph);
        double p = s.project_polarizer(0);
        CHECK(close(p, 0.0));
        CHECK(close(s.mode_norm2(PhotonMode::lost()), 1.0));
    }
    SUBCASE("pure H passes with probability 1/2") {
        PhotonInit ph{PhotonMode::on_edge(0, Pol::H), 1.0, 0.0};
        JointState s = new_state(1, reg, 0b01, ph);
        double p = s.project_polarizer(0);
        CHECK(close(p, 0.5));
    }
}

TEST_CASE("measurement enumerates detectors plus no-click") {
    auto reg = small_registry();

    SUBCASE("amplitudes parked on detector sinks") {
        JointState s;
        s.clear(1, reg);
        s.insert_term(PhotonMode::detector(0), 0b01, cplx{kInvSqrt2, 0.0});
        s.insert_term(PhotonMode::detector(1), 0b10, cplx{-kInvSqrt2, 0.0});
        auto outcomes = enumerate_detector_outcomes(s, {0, 1});
        REQUIRE(outcomes.size() == 3);
        CHECK(close(outcomes[0].prob, 0.5));
        CHECK(close(outcomes[1].prob, 0.5));
        CHECK(close(outcomes[2].prob, 0.0));
        double total = 0.0;
        for (auto& o : outcomes) total += o.prob;
        CHECK(close(total, 1.0));
        // collapse renormalizes onto the register
        REQUIRE(outcomes[1].collapsed.has_value());
        CHECK(close(outcomes[1].collapsed->amplitude(PhotonMode::no_photon(), 0b10), -1.0));
    }
    SUBCASE("all amplitude lost means no click") {
        JointState s;
        s.clear(1, reg);
        s.insert_term(PhotonMode::lost(), 0b01, cplx{1.0, 0.0});
        Rng rng(7);
        auto o = measure_detectors(s, {0, 1}, rng);
        CHECK(o.detector == -1);
        CHECK(close(o.prob, 1.0));
    }
    SUBCASE("in-flight amplitude is rejected") {
        PhotonInit ph{PhotonMode::on_edge(0, Pol::H), 1.0, 0.0};
        JointState s = new_state(1, reg, 0b01, ph);
        CHECK_THROWS_AS(enumerate_detector_outcomes(s, {0}), PhysicsError);
    }
}

TEST_CASE("fidelity is global-phase blind") {
    auto reg = small_registry();
    Rng rng(42);
    JointState a = random_state(2, reg, {PhotonMode::no_photon()}, rng);
    JointState b = a;
    CHECK(close(fidelity_up_to_global_phase(a, b), 1.0));
    b.scale(std::exp(cplx{0.0, 0.77}));
    CHECK(close(fidelity_up_to_global_phase(a, b), 1.0));

    JointState z = new_state(1, reg, logical_atom_string(1, 0));
    JointState o = new_state(1, reg, logical_atom_string(1, 1));
    CHECK(close(fidelity_up_to_global_phase(z, o), 0.0));

    CHECK_THROWS_AS(fidelity_up_to_global_phase(z, a), PhysicsError);
}

TEST_CASE("invariants on random states") {
    auto reg = small_registry();
    Rng rng(2024);
    std::vector<PhotonMode> modes{PhotonMode::on_edge(0, Pol::H), PhotonMode::on_edge(0, Pol::V),
                                  PhotonMode::on_edge(1, Pol::H), PhotonMode::on_edge(1, Pol::V)};

    SUBCASE("norm preserved under random op sequences") {
        for (int rep = 0; rep < 20; ++rep) {
            JointState s = random_state(2, reg, modes, rng);
            std::uniform_int_distribution<int> pick(0, 3);
            for (int step = 0; step < 12; ++step) {
                switch (pick(rng)) {
                    case 0: s.apply_atom_unitary(rep % 2, 1 + (step % 2), sigma_x()); break;
                    case 1: s.apply_pol_unitary(step % 2, sigma_x()); break;
                    case 2: s.apply_scattering(0, PhotonMode::on_edge(0, Pol::H)); break;
                    case 3: s.apply_collective_dephasing(1, 0.3 * step); break;
                }
            }
            CHECK(close(s.norm2(), 1.0, 1e-12));
        }
    }
    SUBCASE("scattering twice at the same mode is the identity") {
        for (int rep = 0; rep < 10; ++rep) {
            JointState s = random_state(2, reg, modes, rng);
            JointState before = s;
            s.apply_scattering(1, PhotonMode::on_edge(0, Pol::H));
            s.apply_scattering(1, PhotonMode::on_edge(0, Pol::H));
            CHECK(close(fidelity_up_to_global_phase(s, before), 1.0));
        }
    }
    SUBCASE("atom and polarization unitaries commute") {
        for (int rep = 0; rep < 10; ++rep) {
            JointState s = random_state(2, reg, modes, rng);
            JointState ab = s, ba = s;
            const double r = kInvSqrt2;
            Mat2 had{{{cplx{r, 0}, cplx{r, 0}}, {cplx{r, 0}, cplx{-r, 0}}}};
            ab.apply_atom_unitary(1, 2, had);
            ab.apply_pol_unitary(0, sigma_x());
            ba.apply_pol_unitary(0, sigma_x());
            ba.apply_atom_unitary(1, 2, had);
            CHECK(close(fidelity_up_to_global_phase(ab, ba), 1.0));
        }
    }
    SUBCASE("unit-modulus relocation preserves pairwise overlaps") {
        std::vector<ModeMap> iso{
            {PhotonMode::on_edge(0, Pol::H), PhotonMode::on_edge(4, Pol::H), std::exp(cplx{0, 0.4})},
            {PhotonMode::on_edge(0, Pol::V), PhotonMode::on_edge(5, Pol::V), 1.0},
            {PhotonMode::on_edge(1, Pol::H), PhotonMode::on_edge(6, Pol::H), -1.0},
            {PhotonMode::on_edge(1, Pol::V), PhotonMode::on_edge(7, Pol::V), std::exp(cplx{0, -1.1})}};
        for (int rep = 0; rep < 10; ++rep) {
            JointState x = random_state(1, reg, modes, rng);
            JointState y = random_state(1, reg, modes, rng);
            double before = fidelity_up_to_global_phase(x, y);
            x.relocate_modes(iso);
            y.relocate_modes(iso);
            CHECK(close(fidelity_up_to_global_phase(x, y), before, 1e-11));
        }
    }
    SUBCASE("collective dephasing is a global phase on encoded registers") {
        std::vector<cplx> amps = random_unit_vector(4, rng);
        JointState s = logical_superposition(2, reg, {0, 1}, amps);
        JointState before = s;
        s.apply_collective_dephasing(0, 0.9);
        s.apply_collective_dephasing(1, -2.4);
        CHECK(close(fidelity_up_to_global_phase(s, before), 1.0));
    }
}
