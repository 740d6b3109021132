#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dfsnet/qstate.hpp"

namespace dfsnet {

enum class ElementKind : uint8_t {
    PBS,          // polarizing beam splitter: transmits H, reflects V
    HWP,          // half-wave plate at theta degrees
    Circulator,   // three-port one-way router, no polarization action
    TRSwitch,     // controllable transmit/reflect crossbar
    STRRouter,    // node port router (ports 0/1/2 plus the cavity side)
    Polarizer45,  // projects onto (H+V)/sqrt(2); handled by the state layer
    DetectorSink, // absorbs into a named detector sink
    Mirror,
    Combiner,     // fan-in merge onto one output
    CavityPort,   // cavity pass; conditional phase applied by the engine
    PhotonSource,
    DelayPad,     // unit-delay pass-through used to equalize path lengths
};

std::string kind_name(ElementKind k);                 // config-file token ("PBS", "HWP", ...)
std::optional<ElementKind> kind_from_name(const std::string& s);

enum class TRState : uint8_t { Transmit, Reflect };

enum class STRConfig : uint8_t { Port0Entry, Port1Entry, ExitToPort2, Bypass1to2 };

std::string tr_name(TRState s);
std::string str_name(STRConfig c);
std::optional<TRState> tr_from_name(const std::string& s);
std::optional<STRConfig> str_from_name(const std::string& s);

// Port conventions.  Inputs and outputs are numbered independently per kind.
namespace ports {
// STRRouter inputs
inline constexpr int str_in_port0 = 0;
inline constexpr int str_in_port1 = 1;
inline constexpr int str_in_return = 2;  // photon coming back from the node internals
// STRRouter outputs
inline constexpr int str_out_node = 0;    // toward circulator/cavity
inline constexpr int str_out_port2 = 1;   // node exit onto the ring
inline constexpr int str_out_bypass = 2;  // head of the padded port1->port2 pass
// TRSwitch
inline constexpr int tr_in_a = 0;
inline constexpr int tr_in_b = 1;
inline constexpr int tr_out_a = 0;
inline constexpr int tr_out_b = 1;
// PBS (input side s in {0,1}): H -> thru(s), V -> refl(s)
inline constexpr int pbs_thru(int side) { return 2 * side; }
inline constexpr int pbs_refl(int side) { return 2 * side + 1; }
}  // namespace ports

// Reflection matrix of a half-wave plate with its axis at theta degrees, in
// the (H, V) basis: [[cos 2t, sin 2t], [sin 2t, -cos 2t]].
Mat2 hwp_matrix(double theta_degrees);

struct ElementConfig {
    std::optional<TRState> tr;
    std::optional<STRConfig> str;
};

struct TransferTerm {
    int out_port = 0;
    Pol pol = Pol::H;
    cplx factor{1.0, 0.0};
};

// Pure routing table of an element: where does amplitude entering at
// (in_port, pol) go.  HWP and Polarizer45 route in-place to their single
// output; their polarization action is applied by the state layer before
// routing.  DetectorSink returns no terms (absorption is a sink relocation).
// Throws on a port that is illegal for the kind/config.
std::vector<TransferTerm> transfer(ElementKind kind, const ElementConfig& cfg, int in_port, Pol pol,
                                   int fan_in = 1);

// Declared input ports of a kind under a config (ports with defined routing).
std::vector<int> legal_input_ports(ElementKind kind, const ElementConfig& cfg, int fan_in = 1);

}  // namespace dfsnet
