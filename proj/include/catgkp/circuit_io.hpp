#pragma once

// Circuit-file parsing and execution.  A circuit document is JSON with the
// fields `modes`, `inputs`, `elements`, `measurements`; all numbers are
// decimal strings and unknown keys are rejected.  The same parsed circuit
// runs on the analytic coherent engine (LabeledState) or the truncated Fock
// engine, with an automatic cutoff from the coherent amplitude trace.

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "coherent.hpp"
#include "errors.hpp"
#include "fock.hpp"
#include "protocols.hpp"

namespace catgkp {

struct CircuitElement {
    enum class Op { beam_split, displace, homodyne, fock_project };
    Op op = Op::beam_split;
    int mode_a = 0;
    int mode_b = 0;            // second port, beam_split only
    double transmittance = 0;  // beam_split
    cplx amount;               // displace
    double outcome_p = 0;      // homodyne
    int outcome_n = 0;         // fock_project
};

struct Circuit {
    int mode_count = 0;
    std::map<int, SuperposedState> coherent_inputs;  // mode -> single-mode state
    std::map<int, int> label_inputs;                 // mode -> Fock occupation
    std::vector<CircuitElement> elements;
};

namespace detail {

inline void check_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed,
                       const std::string& where) {
    if (!j.is_object()) throw ParseError(where + ": expected an object");
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* k : allowed) known = known || item.key() == k;
        if (!known) throw ParseError(where + ": unknown key '" + item.key() + "'");
    }
    for (const char* k : allowed)
        if (!j.contains(k)) throw ParseError(where + ": missing key '" + std::string(k) + "'");
}

inline double parse_real(const nlohmann::json& j, const std::string& where) {
    if (!j.is_string()) throw ParseError(where + ": numbers must be decimal strings");
    const std::string s = j.get<std::string>();
    std::size_t pos = 0;
    double x = 0.0;
    try {
        x = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw ParseError(where + ": invalid number '" + s + "'");
    }
    if (pos != s.size()) throw ParseError(where + ": trailing characters in number '" + s + "'");
    if (!std::isfinite(x)) throw ParseError(where + ": number must be finite");
    return x;
}

inline int parse_integer(const nlohmann::json& j, const std::string& where) {
    const double x = parse_real(j, where);
    const double r = std::nearbyint(x);
    if (std::abs(x - r) > 0.0) throw ParseError(where + ": expected an integer");
    return static_cast<int>(r);
}

inline SuperposedState parse_input_state(const std::string& kind, const nlohmann::json& params,
                                         const std::string& where) {
    if (kind == "vacuum") {
        check_keys(params, {}, where);
        return SuperposedState::vacuum(1);
    }
    if (kind == "coherent") {
        check_keys(params, {"real", "imag"}, where);
        return SuperposedState::coherent(
            cplx(parse_real(params.at("real"), where), parse_real(params.at("imag"), where)));
    }
    if (kind == "cat") {
        check_keys(params, {"alpha", "parity"}, where);
        const nlohmann::json& par = params.at("parity");
        if (!par.is_string() || (par != "even" && par != "odd"))
            throw ParseError(where + ": parity must be 'even' or 'odd'");
        return make_cat(parse_real(params.at("alpha"), where),
                        par == "odd" ? Parity::odd : Parity::even);
    }
    if (kind == "logical_zero") {
        check_keys(params, {"alpha"}, where);
        return logical_zero(parse_real(params.at("alpha"), where));
    }
    if (kind == "logical_one") {
        check_keys(params, {"alpha"}, where);
        return logical_one(parse_real(params.at("alpha"), where));
    }
    if (kind == "superposition") {
        check_keys(params, {"terms"}, where);
        const nlohmann::json& terms = params.at("terms");
        if (!terms.is_array() || terms.empty())
            throw ParseError(where + ": terms must be a non-empty list");
        SuperposedState out(1);
        for (const auto& t : terms) {
            check_keys(t, {"weight_re", "weight_im", "amplitude_re", "amplitude_im"}, where);
            out.add_term(cplx(parse_real(t.at("weight_re"), where),
                              parse_real(t.at("weight_im"), where)),
                         {cplx(parse_real(t.at("amplitude_re"), where),
                               parse_real(t.at("amplitude_im"), where))});
        }
        return out;
    }
    throw ParseError(where + ": unknown input kind '" + kind + "'");
}

}  // namespace detail

inline Circuit parse_circuit(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("circuit document is not valid JSON: ") + e.what());
    }
    detail::check_keys(doc, {"modes", "inputs", "elements", "measurements"}, "circuit");

    Circuit c;
    c.mode_count = detail::parse_integer(doc.at("modes"), "modes");
    if (c.mode_count < 1) throw ParseError("modes: must be at least 1");

    const nlohmann::json& inputs = doc.at("inputs");
    if (!inputs.is_array()) throw ParseError("inputs: expected a list");
    for (const auto& in : inputs) {
        detail::check_keys(in, {"mode", "kind", "params"}, "input");
        const int mode = detail::parse_integer(in.at("mode"), "input.mode");
        if (mode < 0 || mode >= c.mode_count) throw ParseError("input.mode: out of range");
        if (c.coherent_inputs.count(mode) || c.label_inputs.count(mode))
            throw ParseError("input.mode: duplicate declaration");
        if (!in.at("kind").is_string()) throw ParseError("input.kind: expected a string");
        const std::string kind = in.at("kind").get<std::string>();
        if (kind == "single_photon") {
            detail::check_keys(in.at("params"), {}, "input.params");
            c.label_inputs[mode] = 1;
        } else {
            c.coherent_inputs.emplace(mode,
                                      detail::parse_input_state(kind, in.at("params"), "input"));
        }
    }
    for (int m = 0; m < c.mode_count; ++m)
        if (!c.coherent_inputs.count(m) && !c.label_inputs.count(m))
            throw ParseError("inputs: mode " + std::to_string(m) + " has no input declaration");

    const nlohmann::json& elements = doc.at("elements");
    if (!elements.is_array()) throw ParseError("elements: expected a list");
    std::vector<std::pair<std::string, int>> measured;  // (op, mode) in element order
    for (const auto& el : elements) {
        detail::check_keys(el, {"op", "modes", "params"}, "element");
        if (!el.at("op").is_string()) throw ParseError("element.op: expected a string");
        const std::string op = el.at("op").get<std::string>();
        const nlohmann::json& modes = el.at("modes");
        if (!modes.is_array()) throw ParseError("element.modes: expected a list");
        std::vector<int> ports;
        for (const auto& m : modes) {
            const int mode = detail::parse_integer(m, "element.modes");
            if (mode < 0 || mode >= c.mode_count) throw ParseError("element.modes: out of range");
            ports.push_back(mode);
        }
        CircuitElement e;
        const nlohmann::json& params = el.at("params");
        if (op == "beam_split") {
            if (ports.size() != 2) throw ParseError("beam_split: expected two modes");
            detail::check_keys(params, {"transmittance"}, "beam_split.params");
            e.op = CircuitElement::Op::beam_split;
            e.mode_a = ports[0];
            e.mode_b = ports[1];
            e.transmittance = detail::parse_real(params.at("transmittance"), "transmittance");
        } else if (op == "displace") {
            if (ports.size() != 1) throw ParseError("displace: expected one mode");
            detail::check_keys(params, {"real", "imag"}, "displace.params");
            e.op = CircuitElement::Op::displace;
            e.mode_a = ports[0];
            e.amount = cplx(detail::parse_real(params.at("real"), "displace.real"),
                            detail::parse_real(params.at("imag"), "displace.imag"));
        } else if (op == "homodyne") {
            if (ports.size() != 1) throw ParseError("homodyne: expected one mode");
            detail::check_keys(params, {"p"}, "homodyne.params");
            e.op = CircuitElement::Op::homodyne;
            e.mode_a = ports[0];
            e.outcome_p = detail::parse_real(params.at("p"), "homodyne.p");
            measured.emplace_back(op, e.mode_a);
        } else if (op == "fock_project") {
            if (ports.size() != 1) throw ParseError("fock_project: expected one mode");
            detail::check_keys(params, {"n"}, "fock_project.params");
            e.op = CircuitElement::Op::fock_project;
            e.mode_a = ports[0];
            e.outcome_n = detail::parse_integer(params.at("n"), "fock_project.n");
            if (e.outcome_n < 0) throw ParseError("fock_project.n: must be nonnegative");
            measured.emplace_back(op, e.mode_a);
        } else {
            throw ParseError("element.op: unknown operation '" + op + "'");
        }
        c.elements.push_back(e);
    }

    const nlohmann::json& meas = doc.at("measurements");
    if (!meas.is_array()) throw ParseError("measurements: expected a list");
    std::vector<std::pair<std::string, int>> declared;
    for (const auto& m : meas) {
        detail::check_keys(m, {"op", "mode"}, "measurement");
        if (!m.at("op").is_string()) throw ParseError("measurement.op: expected a string");
        const std::string op = m.at("op").get<std::string>();
        if (op != "homodyne" && op != "fock_project")
            throw ParseError("measurement.op: unknown operation '" + op + "'");
        declared.emplace_back(op, detail::parse_integer(m.at("mode"), "measurement.mode"));
    }
    if (declared != measured)
        throw ParseError("measurements: declarations do not match the measuring elements");
    return c;
}

inline Circuit parse_circuit_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open circuit file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_circuit(buf.str());
}

// ---------------------------------------------------------------------------
// Execution
// ---------------------------------------------------------------------------

inline LabeledState initial_state(const Circuit& c) {
    std::vector<int> coherent_ids, label_ids, labels;
    SuperposedState part(0);
    part.add_term(1.0, {});
    for (int m = 0; m < c.mode_count; ++m) {
        const auto ci = c.coherent_inputs.find(m);
        if (ci != c.coherent_inputs.end()) {
            coherent_ids.push_back(m);
            part = tensor(part, ci->second);
        } else {
            label_ids.push_back(m);
            labels.push_back(c.label_inputs.at(m));
        }
    }
    LabeledState st(std::move(coherent_ids), std::move(label_ids));
    st.add_component(std::move(labels), part);
    return st;
}

struct CircuitRun {
    LabeledState state{{}, {}};
    std::vector<double> densities;  // one per measuring element, in order
    double norm_squared = 0.0;
    double max_amplitude = 0.0;  // largest coherent amplitude seen at any stage
};

inline CircuitRun run_circuit(const Circuit& c) {
    CircuitRun run;
    run.state = initial_state(c);
    run.max_amplitude = run.state.max_amplitude();
    for (const CircuitElement& e : c.elements) {
        switch (e.op) {
            case CircuitElement::Op::beam_split:
                run.state = beam_split(run.state, e.mode_a, e.mode_b, e.transmittance);
                break;
            case CircuitElement::Op::displace:
                run.state = displace(run.state, e.mode_a, e.amount);
                break;
            case CircuitElement::Op::homodyne: {
                LabeledConditional cond = homodyne_project(run.state, e.mode_a, e.outcome_p);
                run.densities.push_back(cond.density);
                run.state = std::move(cond.state);
                break;
            }
            case CircuitElement::Op::fock_project: {
                LabeledConditional cond = fock_project(run.state, e.mode_a, e.outcome_n);
                run.densities.push_back(cond.density);
                run.state = std::move(cond.state);
                break;
            }
        }
        run.max_amplitude = std::max(run.max_amplitude, run.state.max_amplitude());
    }
    run.state.canonicalize_components();
    run.norm_squared = run.state.norm_squared();
    return run;
}

struct FockCircuitRun {
    FockState state{std::vector<int>{1}};
    std::vector<double> densities;
    double norm_squared = 0.0;
    int cutoff = 0;
};

// Replays the circuit in a truncated Fock space.  cutoff <= 0 chooses the
// default heuristic from the coherent engine's amplitude trace.
inline FockCircuitRun run_circuit_fock(const Circuit& c, int cutoff = 0) {
    if (cutoff <= 0) cutoff = default_cutoff(run_circuit(c).max_amplitude);
    FockCircuitRun run;
    run.cutoff = cutoff;
    run.state = to_fock(initial_state(c), cutoff, 1e-6);
    std::vector<int> axis(static_cast<std::size_t>(c.mode_count));
    for (int m = 0; m < c.mode_count; ++m) axis[static_cast<std::size_t>(m)] = m;
    const auto drop_axis = [&axis](int mode) {
        const int gone = axis[static_cast<std::size_t>(mode)];
        for (int& a : axis)
            if (a > gone) --a;
        axis[static_cast<std::size_t>(mode)] = -1;
    };
    const auto axis_of = [&axis](int mode) {
        const int a = axis[static_cast<std::size_t>(mode)];
        if (a < 0) throw InvalidMode("mode was already measured");
        return static_cast<std::size_t>(a);
    };
    for (const CircuitElement& e : c.elements) {
        switch (e.op) {
            case CircuitElement::Op::beam_split:
                run.state = apply_beam_splitter(run.state, axis_of(e.mode_a), axis_of(e.mode_b),
                                                e.transmittance);
                break;
            case CircuitElement::Op::displace:
                run.state = apply_displacement(run.state, axis_of(e.mode_a), e.amount);
                break;
            case CircuitElement::Op::homodyne: {
                auto [next, density] = project_quadrature(run.state, axis_of(e.mode_a),
                                                          e.outcome_p);
                run.densities.push_back(density);
                run.state = std::move(next);
                drop_axis(e.mode_a);
                break;
            }
            case CircuitElement::Op::fock_project: {
                auto [next, density] = project_fock(run.state, axis_of(e.mode_a), e.outcome_n);
                run.densities.push_back(density);
                run.state = std::move(next);
                drop_axis(e.mode_a);
                break;
            }
        }
    }
    run.norm_squared = run.state.norm_squared();
    return run;
}

// Cross-engine agreement metrics for one circuit.
struct EngineAgreement {
    double norm_gap = 0.0;      // relative norm^2 difference
    double density_gap = 0.0;   // worst relative conditional-density difference
    double fidelity_gap = 0.0;  // 1 - fidelity of the final states
    int cutoff = 0;
};

inline EngineAgreement compare_engines(const Circuit& c, int cutoff = 0) {
    const CircuitRun coherent = run_circuit(c);
    if (cutoff <= 0) cutoff = default_cutoff(coherent.max_amplitude);
    const FockCircuitRun fock = run_circuit_fock(c, cutoff);

    EngineAgreement gap;
    gap.cutoff = cutoff;
    gap.norm_gap = std::abs(coherent.norm_squared - fock.norm_squared) /
                   std::max({coherent.norm_squared, fock.norm_squared, 1e-12});
    for (std::size_t k = 0; k < coherent.densities.size(); ++k) {
        const double da = coherent.densities[k], db = fock.densities[k];
        gap.density_gap =
            std::max(gap.density_gap, std::abs(da - db) / std::max({da, db, 1e-12}));
    }
    const bool has_modes =
        !coherent.state.coherent_ids().empty() || !coherent.state.label_ids().empty();
    if (has_modes && coherent.norm_squared > kZeroDensityThreshold) {
        const FockState converted = to_fock(coherent.state, cutoff, 1.0);
        gap.fidelity_gap = std::max(0.0, 1.0 - fidelity(converted, fock.state));
    }
    return gap;
}

}  // namespace catgkp
