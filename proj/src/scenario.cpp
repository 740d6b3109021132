#include "dfsnet/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace dfsnet {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw SchemaError("config field '" + where + "': " + what);
}

int get_int(const njson& j, const std::string& key, std::optional<int> fallback = {}) {
    if (!j.contains(key)) {
        if (fallback) return *fallback;
        fail(key, "missing");
    }
    if (!j[key].is_number_integer()) fail(key, "expected an integer");
    return j[key].get<int>();
}

double get_num(const njson& j, const std::string& key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number()) fail(key, "expected a number");
    return j[key].get<double>();
}

cplx parse_cplx(const njson& v, const std::string& where) {
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
        return {v[0].get<double>(), v[1].get<double>()};
    fail(where, "expected a number or [re, im]");
}

int parse_port(const njson& v) {
    // "0<k>" names port 0 of node k; a bare integer is accepted too.
    if (v.is_number_integer()) return v.get<int>();
    if (v.is_string()) {
        std::string s = v.get<std::string>();
        if (s.size() >= 2 && s[0] == '0') {
            try {
                return std::stoi(s.substr(1));
            } catch (...) {
            }
        }
    }
    fail("photon.port", "expected \"0<node>\" or a node index");
}

NoiseParams parse_noise(const njson& j) {
    NoiseParams p;
    if (!j.is_object()) fail("noise", "expected an object");
    p.dephasing_sigma = get_num(j, "dephasing_sigma", 0.0);
    if (j.contains("dephasing_scope")) {
        std::string s = j["dephasing_scope"].get<std::string>();
        if (s == "per-node") p.dephasing_scope = DephasingScope::PerNode;
        else if (s == "global") p.dephasing_scope = DephasingScope::Global;
        else fail("noise.dephasing_scope", "expected per-node|global");
    }
    if (j.contains("dephasing_timing")) {
        std::string s = j["dephasing_timing"].get<std::string>();
        if (s == "boundaries-only") p.dephasing_timing = DephasingTiming::BoundariesOnly;
        else if (s == "include-sandwich-window")
            p.dephasing_timing = DephasingTiming::IncludeSandwichWindow;
        else fail("noise.dephasing_timing", "expected boundaries-only|include-sandwich-window");
    }
    p.loss_per_element = get_num(j, "loss_per_element", 0.0);
    if (j.contains("loss_trajectory")) p.loss_trajectory = j["loss_trajectory"].get<bool>();
    p.path_jitter_sigma = get_num(j, "path_jitter_sigma", 0.0);
    p.dark_rate_hz = get_num(j, "dark_rate_hz", 0.0);
    p.detection_window_s = get_num(j, "detection_window_s", 1e-6);
    p.scattering_phase_error = get_num(j, "scattering_phase_error", 0.0);
    try {
        p.validate();
    } catch (const PhysicsError& e) {
        fail("noise", e.what());
    }
    return p;
}

TimingParams parse_timing(const njson& j) {
    TimingParams t;
    if (!j.is_object()) fail("timing", "expected an object");
    t.kappa_over_2pi = get_num(j, "kappa_over_2pi", t.kappa_over_2pi);
    t.g_over_2pi = get_num(j, "g_over_2pi", t.g_over_2pi);
    t.gamma_over_2pi = get_num(j, "gamma_over_2pi", t.gamma_over_2pi);
    t.kappa_t = get_num(j, "kappa_t", t.kappa_t);
    try {
        t.validate();
    } catch (const PhysicsError& e) {
        fail("timing", e.what());
    }
    return t;
}

std::string herald_json_name(Herald h) { return herald_name(h); }

njson branch_json(const HeraldedOutcome& o, const JointState* ideal) {
    njson b;
    b["which"] = herald_json_name(o.which);
    b["probability"] = o.probability;
    b["attempts"] = o.attempts_used;
    if (ideal && o.post_state.norm2() > 0.5)
        b["fidelity_vs_target"] = fidelity_up_to_global_phase(o.post_state, *ideal);
    return b;
}

std::string basis_label(size_t l, size_t qubits) {
    std::string s;
    for (size_t i = 0; i < qubits; ++i) s += ((l >> (qubits - 1 - i)) & 1) ? '1' : '0';
    return s;
}

}  // namespace

Scenario parse_scenario(const njson& j) {
    if (!j.is_object()) throw SchemaError("scenario must be a JSON object");
    Scenario sc;
    sc.nodes = get_int(j, "nodes");
    if (sc.nodes < 1 || sc.nodes > 12) fail("nodes", "expected 1..12");

    std::string op = j.contains("op") ? j["op"].get<std::string>() : "cpz";
    if (op == "cpz") sc.op = ScenarioOp::Cpz;
    else if (op == "toffoli") sc.op = ScenarioOp::Toffoli;
    else if (op == "hadamard") sc.op = ScenarioOp::Hadamard;
    else if (op == "readout") sc.op = ScenarioOp::Readout;
    else fail("op", "expected cpz|toffoli|hadamard|readout");

    auto node_list = [&](const std::string& key) {
        std::vector<int> v;
        if (!j.contains(key) || !j[key].is_array()) fail(key, "expected an array of node ids");
        for (const auto& e : j[key]) {
            if (!e.is_number_integer()) fail(key, "expected node ids");
            int n = e.get<int>();
            if (n < 0 || n >= sc.nodes) fail(key, "node id out of range");
            v.push_back(n);
        }
        return v;
    };

    switch (sc.op) {
        case ScenarioOp::Cpz: {
            sc.participants = node_list("participants");
            std::vector<int> s = sc.participants;
            std::sort(s.begin(), s.end());
            sc.entry = get_int(j, "entry", s.empty() ? 0 : s.front());
            break;
        }
        case ScenarioOp::Toffoli: {
            sc.controls = node_list("controls");
            if (sc.controls.size() != 2) fail("controls", "expected two control nodes");
            sc.target = get_int(j, "target");
            if (sc.target < 0 || sc.target >= sc.nodes) fail("target", "node id out of range");
            sc.participants = {sc.controls[0], sc.controls[1], sc.target};
            std::sort(sc.participants.begin(), sc.participants.end());
            sc.entry = sc.participants.front();
            break;
        }
        case ScenarioOp::Hadamard:
        case ScenarioOp::Readout:
            sc.node = get_int(j, "node");
            if (sc.node < 0 || sc.node >= sc.nodes) fail("node", "node id out of range");
            break;
    }

    if (j.contains("photon")) {
        const auto& p = j["photon"];
        if (!p.is_object() || !p.contains("pol") || !p["pol"].is_array() || p["pol"].size() != 2)
            fail("photon", "expected {\"port\": ..., \"pol\": [[re,im],[re,im]]}");
        sc.photon_h = parse_cplx(p["pol"][0], "photon.pol[0]");
        sc.photon_v = parse_cplx(p["pol"][1], "photon.pol[1]");
        sc.photon_given = true;
        if (p.contains("port")) {
            int port_node = parse_port(p["port"]);
            if (sc.op == ScenarioOp::Cpz || sc.op == ScenarioOp::Toffoli) {
                if (port_node != sc.entry)
                    fail("photon.port", "must be port 0 of the entry node");
            }
        }
        double n = std::norm(sc.photon_h) + std::norm(sc.photon_v);
        if (std::abs(n - 1.0) > 1e-9) fail("photon.pol", "amplitudes must be normalized");
    }

    if (j.contains("atom_init")) {
        if (!j["atom_init"].is_object()) fail("atom_init", "expected an object keyed by node id");
        for (const auto& [key, val] : j["atom_init"].items()) {
            int n = -1;
            try {
                n = std::stoi(key);
            } catch (...) {
                fail("atom_init", "keys must be node ids");
            }
            if (n < 0 || n >= sc.nodes) fail("atom_init", "node id out of range");
            AtomInit init;
            if (val.is_array() && val.size() == 2 && val[0].is_number_integer()) {
                init.bits = {val[0].get<int>(), val[1].get<int>()};
                if (*init.bits != std::pair<int, int>{0, 0} && *init.bits != std::pair<int, int>{0, 1} &&
                    *init.bits != std::pair<int, int>{1, 0} && *init.bits != std::pair<int, int>{1, 1})
                    fail("atom_init", "bits must be 0 or 1");
            } else if (val.is_object() && val.contains("alpha") && val.contains("beta")) {
                cplx a = parse_cplx(val["alpha"], "atom_init.alpha");
                cplx b = parse_cplx(val["beta"], "atom_init.beta");
                if (std::abs(std::norm(a) + std::norm(b) - 1.0) > 1e-9)
                    fail("atom_init", "encoded amplitudes must be normalized");
                init.encoded = {a, b};
            } else {
                fail("atom_init", "expected [a1,a2] or {alpha, beta}");
            }
            sc.atom_init[n] = init;
        }
    }

    if (j.contains("schedule_overrides")) {
        if (!j["schedule_overrides"].is_object()) fail("schedule_overrides", "expected an object");
        for (const auto& [key, val] : j["schedule_overrides"].items()) {
            if (!val.is_string()) fail("schedule_overrides", "settings must be strings");
            sc.schedule_overrides[key] = val.get<std::string>();
        }
    }

    if (j.contains("noise")) sc.noise = parse_noise(j["noise"]);
    if (j.contains("timing")) sc.timing = parse_timing(j["timing"]);
    if (j.contains("exact")) sc.exact = j["exact"].get<bool>();
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer())
            fail("seed", "expected an unsigned integer");
        sc.seed = j["seed"].get<uint64_t>();
    }
    sc.trials = get_int(j, "trials", 0);
    if (sc.trials < 0) fail("trials", "must be >= 0");
    sc.max_attempts = get_int(j, "max_attempts", 64);
    if (sc.max_attempts < 1) fail("max_attempts", "must be >= 1");

    bool stochastic = !sc.exact || sc.trials > 0 || sc.op == ScenarioOp::Readout;
    if (stochastic && !sc.seed) fail("seed", "required for sampled runs");
    return sc;
}

Scenario scenario_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open config file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    njson j;
    try {
        j = njson::parse(text);
    } catch (const njson::parse_error& e) {
        // byte offset -> line/column
        size_t line = 1, col = 1;
        for (size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') { ++line; col = 1; }
            else ++col;
        }
        throw SchemaError("JSON parse error at line " + std::to_string(line) + ", column " +
                          std::to_string(col) + ": " + e.what());
    }
    return parse_scenario(j);
}

JointState build_input_state(const Scenario& sc, const NetworkGraph& g) {
    AtomString base = logical_atom_string(sc.nodes, 0);  // every node |10>
    for (const auto& [n, init] : sc.atom_init) {
        if (!init.bits) continue;
        AtomString mask = ~((AtomString{1} << atom_bit_pos(n, 1)) |
                            (AtomString{1} << atom_bit_pos(n, 2)));
        base &= mask;
        if (init.bits->first) base |= AtomString{1} << atom_bit_pos(n, 1);
        if (init.bits->second) base |= AtomString{1} << atom_bit_pos(n, 2);
    }
    JointState st = new_state(sc.nodes, g.registry(), base);
    for (const auto& [n, init] : sc.atom_init)
        if (init.encoded) encode_logical(st, n, init.encoded->first, init.encoded->second);
    return st;
}

SwitchSchedule build_schedule(const Scenario& sc, const NetworkGraph& g) {
    SwitchSchedule sched = compile_schedule(g, sc.participants, sc.entry);
    for (const auto& [name, setting] : sc.schedule_overrides) {
        uint32_t elem;
        try {
            elem = g.element_named(name);
        } catch (const PhysicsError& e) {
            throw SchemaError(std::string("schedule_overrides: ") + e.what());
        }
        switch (g.elements[elem].kind) {
            case ElementKind::TRSwitch: {
                auto v = tr_from_name(setting);
                if (!v) throw SchemaError("schedule_overrides: bad TR setting " + setting);
                sched.tr[elem] = *v;
                break;
            }
            case ElementKind::STRRouter: {
                auto v = str_from_name(setting);
                if (!v) throw SchemaError("schedule_overrides: bad STR setting " + setting);
                sched.str[elem] = *v;
                break;
            }
            default:
                throw SchemaError("schedule_overrides: element " + name + " is not configurable");
        }
    }
    return sched;
}

njson run_simulate(const Scenario& sc) {
    NetworkGraph g = build_ring_network(sc.nodes);
    JointState input = build_input_state(sc, g);
    njson out;
    out["nodes"] = sc.nodes;
    out["mode"] = sc.exact ? "exact" : "sampled";

    if (sc.op == ScenarioOp::Hadamard) {
        out["op"] = "hadamard";
        out["node"] = sc.node;
        JointState st = input;
        logical_hadamard(st, sc.node);
        JointState twice = st;
        logical_hadamard(twice, sc.node);
        out["involution_fidelity"] = fidelity_up_to_global_phase(twice, input);
        out["gate_time_s"] = gate_time(GateKind::Hadamard, sc.timing);
        njson amps = njson::array();
        for (const auto& [k, a] : st.terms())
            amps.push_back({{"atoms", JointState::key_atoms(k)},
                            {"re", a.real()},
                            {"im", a.imag()}});
        out["output_amplitudes"] = amps;
        return out;
    }
    if (sc.op == ScenarioOp::Readout) {
        out["op"] = "readout";
        out["node"] = sc.node;
        Rng rng(derive_seed(*sc.seed, 0x5eed));
        auto r = readout_logical(input, sc.node, rng);
        const char* names[] = {"0", "1", "leak00", "leak11"};
        out["value"] = names[static_cast<int>(r.value)];
        out["probability"] = r.prob;
        return out;
    }

    // conditional-phase family
    SwitchSchedule sched;
    JointState pre = input;
    int cp_nodes = static_cast<int>(sc.participants.size());
    if (sc.op == ScenarioOp::Toffoli) {
        out["op"] = "toffoli";
        out["controls"] = sc.controls;
        out["target"] = sc.target;
        logical_hadamard(pre, sc.target);
    } else {
        out["op"] = "cpz";
        out["participants"] = sc.participants;
        out["entry"] = sc.entry;
    }
    sched = build_schedule(sc, g);

    JointState ideal = input;
    if (sc.op == ScenarioOp::Toffoli) {
        logical_hadamard(ideal, sc.target);
        apply_cpz_logical(ideal, sc.participants);
        logical_hadamard(ideal, sc.target);
    } else {
        apply_cpz_logical(ideal, sc.participants);
    }

    out["gate_time_s"] = gate_time(GateKind::CPN, sc.timing, cp_nodes);
    auto warnings = validate_regime(sc.timing);
    out["regime_warnings"] = warnings;

    RealizationShape shape{g.n_nodes, static_cast<int>(g.center_paths.size()),
                           static_cast<int>(g.elements.size()),
                           static_cast<int>(g.detector_names.size())};
    std::optional<NoiseRealization> noise;
    if (!sc.noise.is_zero())
        noise = sample_realization(sc.noise, shape, sc.seed ? derive_seed(*sc.seed, 0x7ea1) : 0);

    if (sc.exact) {
        auto branches = enumerate_cp_branches_with(pre, g, sched, noise ? &*noise : nullptr);
        njson blist = njson::array();
        njson dets;
        for (auto& b : branches) {
            JointState post = b.post_state;
            if (sc.op == ScenarioOp::Toffoli && post.norm2() > 0.5)
                logical_hadamard(post, sc.target);
            njson bj;
            bj["which"] = herald_name(b.which);
            bj["probability"] = b.probability;
            if (post.norm2() > 0.5)
                bj["fidelity_vs_target"] =
                    b.which == Herald::DvSuccess
                        ? fidelity_up_to_global_phase(post, ideal)
                        : fidelity_up_to_global_phase(post, input);
            blist.push_back(bj);
            if (b.which == Herald::DvSuccess) dets["Dv"] = b.probability;
            else if (b.which == Herald::DhIdentity) dets["Dh"] = b.probability;
            else dets["NoClick"] = b.probability;
        }
        out["detectors"] = dets;
        out["branches"] = blist;
        return out;
    }

    Rng rng(derive_seed(*sc.seed, 0x9a3e));
    HeraldedOutcome o;
    if (sc.op == ScenarioOp::Toffoli) {
        o = toffoli(input, g, sc.controls[0], sc.controls[1], sc.target, sc.max_attempts, rng,
                    noise ? &*noise : nullptr);
    } else {
        o = repeat_until_success(input, g, sc.participants, sc.entry, sc.max_attempts, rng,
                                 noise ? &*noise : nullptr);
    }
    njson oj = branch_json(o, nullptr);
    if (o.post_state.norm2() > 0.5)
        oj["fidelity_vs_target"] = o.which == Herald::DvSuccess
                                       ? fidelity_up_to_global_phase(o.post_state, ideal)
                                       : fidelity_up_to_global_phase(o.post_state, input);
    out["outcome"] = oj;
    return out;
}

std::string run_truth_table(const Scenario& sc) {
    if (sc.op != ScenarioOp::Cpz && sc.op != ScenarioOp::Toffoli)
        throw SchemaError("truth-table requires op cpz or toffoli");
    NetworkGraph g = build_ring_network(sc.nodes);
    std::vector<int> s = sc.participants;
    std::sort(s.begin(), s.end());
    size_t dim = size_t{1} << s.size();
    std::ostringstream csv;
    if (sc.op == ScenarioOp::Cpz) {
        csv << "input,p_dv,p_dh,output,sign\n";
    } else {
        csv << "input,p_success,output,fidelity_vs_target\n";
    }
    for (size_t l = 0; l < dim; ++l) {
        uint32_t bits = 0;
        for (size_t pos = 0; pos < s.size(); ++pos)
            bits |= ((l >> (s.size() - 1 - pos)) & 1u) << s[pos];
        JointState input = new_state(sc.nodes, g.registry(), logical_atom_string(sc.nodes, bits));
        if (sc.op == ScenarioOp::Cpz) {
            auto branches = enumerate_cp_branches(input, g, s, s.front());
            double pdv = 0, pdh = 0;
            int sign = 0;
            for (auto& b : branches) {
                if (b.which == Herald::DvSuccess) {
                    pdv = b.probability;
                    cplx a = b.post_state.amplitude(PhotonMode::no_photon(),
                                                    logical_atom_string(sc.nodes, bits));
                    sign = a.real() >= 0 ? 1 : -1;
                } else if (b.which == Herald::DhIdentity) {
                    pdh = b.probability;
                }
            }
            csv << basis_label(l, s.size()) << ',' << pdv << ',' << pdh << ','
                << basis_label(l, s.size()) << ',' << (sign >= 0 ? "+1" : "-1") << '\n';
        } else {
            JointState pre = input;
            logical_hadamard(pre, sc.target);
            auto branches = enumerate_cp_branches(pre, g, s, s.front());
            for (auto& b : branches) {
                if (b.which != Herald::DvSuccess) continue;
                JointState post = b.post_state;
                logical_hadamard(post, sc.target);
                // success branch permutes basis states; find the column
                size_t best = 0;
                double best_p = -1.0;
                for (size_t m = 0; m < dim; ++m) {
                    uint32_t mb = 0;
                    for (size_t pos = 0; pos < s.size(); ++pos)
                        mb |= ((m >> (s.size() - 1 - pos)) & 1u) << s[pos];
                    double p = std::norm(post.amplitude(PhotonMode::no_photon(),
                                                        logical_atom_string(sc.nodes, mb)));
                    if (p > best_p) { best_p = p; best = m; }
                }
                JointState ideal = input;
                logical_hadamard(ideal, sc.target);
                apply_cpz_logical(ideal, s);
                logical_hadamard(ideal, sc.target);
                csv << basis_label(l, s.size()) << ',' << b.probability << ','
                    << basis_label(best, s.size()) << ','
                    << fidelity_up_to_global_phase(post, ideal) << '\n';
            }
        }
    }
    return csv.str();
}

std::vector<std::string> sweepable_parameters() {
    return {"dephasing_sigma", "path_jitter_sigma", "loss_per_element", "dark_rate_hz",
            "scattering_phase_error", "detection_window_s"};
}

std::string run_sweep(const Scenario& sc, const std::string& parameter,
                      const std::vector<double>& values) {
    auto names = sweepable_parameters();
    if (std::find(names.begin(), names.end(), parameter) == names.end())
        throw SchemaError("unknown sweep parameter: " + parameter);
    if (!sc.seed) throw SchemaError("sweep requires a seed");
    if (sc.trials < 1) throw SchemaError("sweep requires trials >= 1");
    if (sc.op != ScenarioOp::Cpz && sc.op != ScenarioOp::Toffoli)
        throw SchemaError("sweep requires op cpz or toffoli");

    NetworkGraph g = build_ring_network(sc.nodes);
    McScenario mc;
    mc.graph = &g;
    mc.input = build_input_state(sc, g);
    mc.max_attempts = sc.max_attempts;
    if (sc.op == ScenarioOp::Toffoli) {
        mc.op = ProtocolOp::Toffoli;
        mc.participants = {sc.controls[0], sc.controls[1]};
        mc.participants.push_back(sc.target);
        mc.toffoli_target = sc.target;
    } else {
        mc.op = ProtocolOp::ConditionalPhase;
        mc.participants = sc.participants;
        mc.entry = sc.entry;
    }

    std::ostringstream csv;
    csv << "parameter,value,success_prob,fidelity_mean,fidelity_stderr,trials\n";
    for (double v : values) {
        NoiseParams p = sc.noise;
        if (parameter == "dephasing_sigma") p.dephasing_sigma = v;
        else if (parameter == "path_jitter_sigma") p.path_jitter_sigma = v;
        else if (parameter == "loss_per_element") p.loss_per_element = v;
        else if (parameter == "dark_rate_hz") p.dark_rate_hz = v;
        else if (parameter == "scattering_phase_error") p.scattering_phase_error = v;
        else if (parameter == "detection_window_s") p.detection_window_s = v;
        auto summary = monte_carlo_fidelity(mc, p, sc.trials, *sc.seed);
        csv << parameter << ',' << v << ',' << summary.success_prob << ',' << summary.fidelity_mean
            << ',' << summary.fidelity_stderr << ',' << summary.trials << '\n';
    }
    return csv.str();
}

njson run_timing(const TimingParams& timing) {
    njson out;
    out["t_pulse_s"] = gate_time(GateKind::CPF, timing);
    out["t_cpf_s"] = gate_time(GateKind::CPF, timing);
    out["t_hadamard_s"] = gate_time(GateKind::Hadamard, timing);
    for (int n = 3; n <= 5; ++n)
        out["t_cp" + std::to_string(n) + "_s"] = gate_time(GateKind::CPN, timing, n);
    out["warnings"] = validate_regime(timing);
    return out;
}

njson run_validate(const Scenario& sc) {
    NetworkGraph g = build_ring_network(sc.nodes);
    SwitchSchedule sched = build_schedule(sc, g);
    auto report = validate_equal_arrival(g, sched);
    njson out;
    out["equal_arrival"] = report.ok;
    njson lengths;
    for (const auto& [label, len] : report.path_lengths) lengths[label] = len;
    out["path_lengths"] = lengths;
    njson pairs = njson::array();
    for (const auto& [a, b] : report.unequal_pairs) pairs.push_back({a, b});
    out["unequal_pairs"] = pairs;
    out["regime_warnings"] = validate_regime(sc.timing);
    return out;
}

njson run_oracle_check(int nodes, const std::optional<std::vector<int>>& participants,
                       std::optional<int> entry, double tol) {
    NetworkGraph g = build_ring_network(nodes);
    njson cases = njson::array();
    bool all_ok = true;
    double worst = 0.0;
    auto check = [&](const std::vector<int>& s, int e) {
        SwitchSchedule sched = compile_schedule(g, s, e);
        LogicalMap ref = enumerate_logical_map(g, sched, s);
        LogicalMap eng = engine_conditioned_map(g, s, e);
        auto cv = compare_up_to_global_phase(eng.dv, ref.dv, tol);
        auto ch = compare_up_to_global_phase(eng.dh, ref.dh, tol);
        njson c;
        c["participants"] = s;
        c["entry"] = e;
        c["max_deviation_dv"] = cv.max_deviation;
        c["max_deviation_dh"] = ch.max_deviation;
        c["ok"] = cv.ok && ch.ok;
        all_ok &= cv.ok && ch.ok;
        worst = std::max({worst, cv.max_deviation, ch.max_deviation});
        cases.push_back(c);
    };
    if (participants) {
        check(*participants, entry.value_or(*std::min_element(participants->begin(),
                                                              participants->end())));
    } else {
        for (uint32_t mask = 1; mask < (1u << nodes); ++mask) {
            std::vector<int> s;
            for (int n = 0; n < nodes; ++n)
                if (mask & (1u << n)) s.push_back(n);
            check(s, s.front());
        }
    }
    njson out;
    out["nodes"] = nodes;
    out["tolerance"] = tol;
    out["cases"] = cases;
    out["all_ok"] = all_ok;
    out["max_deviation"] = worst;
    return out;
}

bool validate_result_json(const njson& j, std::string* why) {
    auto bad = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    if (!j.is_object()) return bad("not an object");
    if (!j.contains("op") || !j["op"].is_string()) return bad("missing op");
    std::string op = j["op"];
    if (op == "cpz" || op == "toffoli") {
        if (!j.contains("mode")) return bad("missing mode");
        if (j["mode"] == "exact") {
            if (!j.contains("branches") || !j["branches"].is_array() || j["branches"].empty())
                return bad("missing branches");
            double total = 0.0;
            for (const auto& b : j["branches"]) {
                if (!b.contains("which") || !b.contains("probability"))
                    return bad("branch missing which/probability");
                total += b["probability"].get<double>();
            }
            if (std::abs(total - 1.0) > 1e-9) return bad("branch probabilities do not sum to 1");
        } else {
            if (!j.contains("outcome") || !j["outcome"].contains("which"))
                return bad("missing outcome");
        }
        if (!j.contains("gate_time_s")) return bad("missing gate_time_s");
    } else if (op == "hadamard") {
        if (!j.contains("output_amplitudes")) return bad("missing output_amplitudes");
    } else if (op == "readout") {
        if (!j.contains("value") || !j.contains("probability")) return bad("missing value/probability");
    } else {
        return bad("unknown op " + op);
    }
    return true;
}

}  // namespace dfsnet
