#pragma once

#include <string>
#include <vector>

#include "dfsnet/network.hpp"

namespace dfsnet {

using CMatrix = std::vector<std::vector<cplx>>;

CMatrix zeros(size_t rows, size_t cols);

// Conditioned maps of one heralded run over the logical basis of the
// participant set: one matrix per detector outcome (unnormalized detector
// amplitudes), indexed so that the first participant is the most significant
// logical bit.
struct LogicalMap {
    std::vector<int> participants;
    CMatrix dv;  // reflected-V detector
    CMatrix dh;  // transmitted-H detector
    // completeness defect max |sum_o M_o^dag M_o - I|
    double completeness_defect() const;
};

// Brute-force reference: walks the photon through the graph basis state by
// basis state with a recursive router that shares only the element transfer
// tables with the propagation engine.
LogicalMap enumerate_logical_map(const NetworkGraph& g, const SwitchSchedule& sched,
                                 const std::vector<int>& participants);

enum class StandardGate { CPZ, Toffoli, Hadamard };

// Textbook matrices on the encoded basis.  CPZ takes the qubit count; the
// Toffoli is the 3-qubit flip of the last bit when the first two are set.
CMatrix standard_target(StandardGate gate, int qubits = 0);

struct PhaseComparison {
    bool ok = false;
    double max_deviation = 0.0;
    cplx phase{1.0, 0.0};
};

// Finds a unit phase aligning A with B (Frobenius-optimal) and reports the
// residual max deviation against `tol`.
PhaseComparison compare_up_to_global_phase(const CMatrix& a, const CMatrix& b, double tol);

inline void assert_equal_up_to_global_phase(const CMatrix& a, const CMatrix& b, double tol) {
    auto c = compare_up_to_global_phase(a, b, tol);
    if (!c.ok)
        throw PhysicsError("matrices differ up to global phase by " +
                           std::to_string(c.max_deviation));
}

CMatrix matmul(const CMatrix& a, const CMatrix& b);
CMatrix dagger(const CMatrix& a);

}  // namespace dfsnet
