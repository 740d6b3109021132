#include "dfsnet/optics.hpp"

#include <cmath>
#include <numbers>

namespace dfsnet {

std::string kind_name(ElementKind k) {
    switch (k) {
        case ElementKind::PBS: return "PBS";
        case ElementKind::HWP: return "HWP";
        case ElementKind::Circulator: return "CIRC";
        case ElementKind::TRSwitch: return "TR";
        case ElementKind::STRRouter: return "STR";
        case ElementKind::Polarizer45: return "P45";
        case ElementKind::DetectorSink: return "DET";
        case ElementKind::Mirror: return "MIRROR";
        case ElementKind::Combiner: return "COMBINER";
        case ElementKind::CavityPort: return "CAVITY";
        case ElementKind::PhotonSource: return "SOURCE";
        case ElementKind::DelayPad: return "DELAY";
    }
    return "?";
}

std::optional<ElementKind> kind_from_name(const std::string& s) {
    for (int i = 0; i <= static_cast<int>(ElementKind::DelayPad); ++i) {
        auto k = static_cast<ElementKind>(i);
        if (kind_name(k) == s) return k;
    }
    return std::nullopt;
}

std::string tr_name(TRState s) { return s == TRState::Transmit ? "Transmit" : "Reflect"; }

std::string str_name(STRConfig c) {
    switch (c) {
        case STRConfig::Port0Entry: return "Port0Entry";
        case STRConfig::Port1Entry: return "Port1Entry";
        case STRConfig::ExitToPort2: return "ExitToPort2";
        case STRConfig::Bypass1to2: return "Bypass1to2";
    }
    return "?";
}

std::optional<TRState> tr_from_name(const std::string& s) {
    if (s == "Transmit") return TRState::Transmit;
    if (s == "Reflect") return TRState::Reflect;
    return std::nullopt;
}

std::optional<STRConfig> str_from_name(const std::string& s) {
    for (auto c : {STRConfig::Port0Entry, STRConfig::Port1Entry, STRConfig::ExitToPort2,
                   STRConfig::Bypass1to2})
        if (str_name(c) == s) return c;
    return std::nullopt;
}

Mat2 hwp_matrix(double theta_degrees) {
    double t = 2.0 * theta_degrees * std::numbers::pi / 180.0;
    double c = std::cos(t), s = std::sin(t);
    // Snap the distinguished angles so 45 and 22.5 degree plates act exactly.
    if (std::abs(c) < 1e-15) c = 0.0;
    if (std::abs(s) < 1e-15) s = 0.0;
    if (std::abs(std::abs(c) - std::abs(s)) < 1e-15) {
        double r = std::sqrt(0.5);
        c = std::copysign(r, c);
        s = std::copysign(r, s);
    }
    return {{{cplx{c, 0.0}, cplx{s, 0.0}}, {cplx{s, 0.0}, cplx{-c, 0.0}}}};
}

namespace {

[[noreturn]] void bad_port(ElementKind kind, int in_port) {
    throw PhysicsError("illegal input port " + std::to_string(in_port) + " for element kind " +
                       kind_name(kind));
}

std::vector<TransferTerm> str_transfer(STRConfig cfg, int in_port, Pol pol) {
    using namespace ports;
    switch (cfg) {
        case STRConfig::Port0Entry:
            // Port-0 injection; the returning photon leaves through port 2.
            // Ring traffic at port 1 idles through the bypass pass.
            if (in_port == str_in_port0) return {{str_out_node, pol, 1.0}};
            if (in_port == str_in_return) return {{str_out_port2, pol, 1.0}};
            if (in_port == str_in_port1) return {{str_out_bypass, pol, 1.0}};
            break;
        case STRConfig::Port1Entry:
            if (in_port == str_in_port1) return {{str_out_node, pol, 1.0}};
            if (in_port == str_in_return) return {{str_out_port2, pol, 1.0}};
            break;
        case STRConfig::ExitToPort2:
            if (in_port == str_in_return) return {{str_out_port2, pol, 1.0}};
            break;
        case STRConfig::Bypass1to2:
            if (in_port == str_in_port1) return {{str_out_bypass, pol, 1.0}};
            break;
    }
    throw PhysicsError("photon arrived at STR port " + std::to_string(in_port) +
                       " with no route under config " + str_name(cfg));
}

}  // namespace

std::vector<TransferTerm> transfer(ElementKind kind, const ElementConfig& cfg, int in_port, Pol pol,
                                   int fan_in) {
    using namespace ports;
    switch (kind) {
        case ElementKind::PBS: {
            if (in_port != 0 && in_port != 1) bad_port(kind, in_port);
            int out = (pol == Pol::H) ? pbs_thru(in_port) : pbs_refl(in_port);
            return {{out, pol, 1.0}};
        }
        case ElementKind::HWP:
        case ElementKind::Polarizer45:
        case ElementKind::Mirror:
        case ElementKind::DelayPad:
        case ElementKind::CavityPort:
        case ElementKind::PhotonSource:
            if (in_port != 0) bad_port(kind, in_port);
            return {{0, pol, 1.0}};
        case ElementKind::Circulator:
            // three-port cycle: input i exits toward port i+1
            if (in_port < 0 || in_port > 2) bad_port(kind, in_port);
            return {{in_port, pol, 1.0}};
        case ElementKind::TRSwitch: {
            if (!cfg.tr) throw PhysicsError("TR switch has no scheduled state");
            if (in_port != tr_in_a && in_port != tr_in_b) bad_port(kind, in_port);
            bool cross = (*cfg.tr == TRState::Reflect);
            int out = ((in_port == tr_in_a) != cross) ? tr_out_a : tr_out_b;
            return {{out, pol, 1.0}};
        }
        case ElementKind::STRRouter:
            if (!cfg.str) throw PhysicsError("STR router has no scheduled config");
            return str_transfer(*cfg.str, in_port, pol);
        case ElementKind::Combiner:
            if (in_port < 0 || in_port >= fan_in) bad_port(kind, in_port);
            return {{0, pol, 1.0}};
        case ElementKind::DetectorSink:
            if (in_port != 0) bad_port(kind, in_port);
            return {};  // absorbed by the engine into the detector sink
    }
    bad_port(kind, in_port);
}

std::vector<int> legal_input_ports(ElementKind kind, const ElementConfig& cfg, int fan_in) {
    using namespace ports;
    switch (kind) {
        case ElementKind::PBS: return {0, 1};
        case ElementKind::HWP:
        case ElementKind::Polarizer45:
        case ElementKind::Mirror:
        case ElementKind::DelayPad:
        case ElementKind::CavityPort:
        case ElementKind::PhotonSource:
        case ElementKind::DetectorSink: return {0};
        case ElementKind::Circulator: return {0, 1, 2};
        case ElementKind::TRSwitch: return {tr_in_a, tr_in_b};
        case ElementKind::STRRouter:
            if (!cfg.str) return {};
            switch (*cfg.str) {
                case STRConfig::Port0Entry: return {str_in_port0, str_in_port1, str_in_return};
                case STRConfig::Port1Entry: return {str_in_port1, str_in_return};
                case STRConfig::ExitToPort2: return {str_in_return};
                case STRConfig::Bypass1to2: return {str_in_port1};
            }
            return {};
        case ElementKind::Combiner: {
            std::vector<int> p;
            for (int i = 0; i < fan_in; ++i) p.push_back(i);
            return p;
        }
    }
    return {};
}

}  // namespace dfsnet
