// Command-line front end: runs the named protocols and parameter sweeps,
// writing CSV data files plus a JSON sidecar with the fully resolved
// configuration next to every output.  Exit codes: 0 success, 1 configuration
// or parse error, 2 numeric-convergence failure, 3 cross-engine disagreement.

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "catgkp/analysis.hpp"
#include "catgkp/circuit_io.hpp"
#include "catgkp/coherent.hpp"
#include "catgkp/fock.hpp"
#include "catgkp/protocols.hpp"
#include "catgkp/wigner.hpp"

namespace {

using namespace catgkp;

constexpr double kEngineGapTolerance = 1e-6;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

class CsvWriter {
public:
    explicit CsvWriter(const std::string& path) : out_(path, std::ios::binary) {
        if (!out_) throw Error("cannot open output file '" + path + "'");
    }

    void row(const std::vector<std::string>& cells) {
        for (std::size_t k = 0; k < cells.size(); ++k) {
            if (k) out_ << ',';
            out_ << cells[k];
        }
        out_ << '\n';
    }

private:
    std::ofstream out_;
};

void write_sidecar(const std::string& out_path, const nlohmann::json& meta) {
    std::ofstream f(out_path + ".meta.json", std::ios::binary);
    if (!f) throw Error("cannot open sidecar file '" + out_path + ".meta.json'");
    f << meta.dump(2) << '\n';
}

void require_out(const std::string& out_path) {
    if (out_path.empty()) throw Error("--out is required");
}

int run_simulate(const std::string& circuit_path, const std::string& engine,
                 const std::string& out_path, int cutoff) {
    const Circuit c = parse_circuit_file(circuit_path);
    nlohmann::json meta;
    meta["command"] = "simulate";
    meta["engine"] = engine;
    meta["parameters"] = {{"circuit", circuit_path}, {"cutoff_override", cutoff}};

    std::vector<std::pair<std::string, double>> rows;
    int exit_code = 0;
    if (engine == "fock") {
        const FockCircuitRun r = run_circuit_fock(c, cutoff);
        rows.emplace_back("norm_squared", r.norm_squared);
        for (std::size_t k = 0; k < r.densities.size(); ++k)
            rows.emplace_back("density_" + std::to_string(k + 1), r.densities[k]);
        meta["diagnostics"] = {{"cutoff", r.cutoff}};
    } else {
        const CircuitRun r = run_circuit(c);
        rows.emplace_back("norm_squared", r.norm_squared);
        for (std::size_t k = 0; k < r.densities.size(); ++k)
            rows.emplace_back("density_" + std::to_string(k + 1), r.densities[k]);
        meta["diagnostics"] = {{"max_amplitude", r.max_amplitude}};
        if (engine == "both") {
            const EngineAgreement gap = compare_engines(c, cutoff);
            meta["diagnostics"]["cutoff"] = gap.cutoff;
            meta["diagnostics"]["norm_gap"] = gap.norm_gap;
            meta["diagnostics"]["density_gap"] = gap.density_gap;
            meta["diagnostics"]["fidelity_gap"] = gap.fidelity_gap;
            if (gap.norm_gap > kEngineGapTolerance || gap.density_gap > kEngineGapTolerance ||
                gap.fidelity_gap > kEngineGapTolerance) {
                std::fprintf(stderr, "cross-engine disagreement: norm %.3g density %.3g fidelity %.3g\n",
                             gap.norm_gap, gap.density_gap, gap.fidelity_gap);
                exit_code = 3;
            }
        }
    }

    CsvWriter w(out_path);
    w.row({"quantity", "value"});
    for (const auto& [name, value] : rows) w.row({name, fmt(value)});
    write_sidecar(out_path, meta);
    return exit_code;
}

int run_sweep_fidelity(double alpha_min, double alpha_max, double step,
                       const std::string& engine, const std::string& out_path) {
    const std::vector<SweepRecord> records = sweep_fidelity(alpha_min, alpha_max, step);
    std::vector<double> values(records.size());
    double max_gap = 0.0;
    for (std::size_t k = 0; k < records.size(); ++k) {
        if (engine == "coherent") {
            values[k] = records[k].fidelity;
        } else {
            const double numeric = hybrid_fidelity_fock(records[k].parameter);
            values[k] = engine == "fock" ? numeric : records[k].fidelity;
            max_gap = std::max(max_gap, std::abs(numeric - records[k].fidelity));
        }
    }

    CsvWriter w(out_path);
    w.row({"alpha", "fidelity"});
    std::size_t best = 0;
    for (std::size_t k = 0; k < records.size(); ++k) {
        if (values[k] > values[best]) best = k;
        w.row({fmt(records[k].parameter), fmt(values[k])});
    }

    nlohmann::json meta;
    meta["command"] = "sweep-fidelity";
    meta["engine"] = engine;
    meta["parameters"] = {{"alpha_min", alpha_min}, {"alpha_max", alpha_max}, {"step", step}};
    meta["diagnostics"] = {{"rows", records.size()},
                           {"argmax_alpha", records[best].parameter},
                           {"max_fidelity", values[best]}};
    if (engine == "both") meta["diagnostics"]["engine_gap"] = max_gap;
    write_sidecar(out_path, meta);
    if (engine == "both" && max_gap > kEngineGapTolerance) {
        std::fprintf(stderr, "cross-engine disagreement: max fidelity gap %.3g\n", max_gap);
        return 3;
    }
    return 0;
}

int run_tradeoff(const std::string& alpha_arg, double vup_max, int points, double p_max,
                 const std::string& out_path) {
    double alpha = 0.0;
    if (alpha_arg == "auto") {
        alpha = optimal_alpha().alpha_star;
    } else {
        try {
            std::size_t pos = 0;
            alpha = std::stod(alpha_arg, &pos);
            if (pos != alpha_arg.size()) throw std::invalid_argument(alpha_arg);
        } catch (const std::exception&) {
            throw Error("--alpha expects a positive number or 'auto'");
        }
    }
    if (points < 1) throw Error("--points must be at least 1");

    const TradeoffCurve curve(alpha, p_max);
    CsvWriter w(out_path);
    w.row({"v_up", "avg_fidelity", "success_prob"});
    double panels = 0.0;
    for (int k = 1; k <= points; ++k) {
        const double v = vup_max * static_cast<double>(k) / static_cast<double>(points);
        const SweepRecord rec = curve.at(v);
        panels += rec.diagnostics.at("panels");
        w.row({fmt(v), fmt(rec.fidelity), fmt(*rec.probability)});
    }

    nlohmann::json meta;
    meta["command"] = "tradeoff";
    meta["engine"] = "coherent";
    meta["parameters"] = {{"alpha", alpha},
                          {"alpha_mode", alpha_arg},
                          {"vup_max", vup_max},
                          {"points", points},
                          {"p_max", p_max}};
    meta["diagnostics"] = {{"total_density", curve.total_density()}, {"panels", panels}};
    write_sidecar(out_path, meta);
    return 0;
}

int run_breed(int j, double alpha, const std::string& out_path) {
    const SuperposedState state = bred_input(j, alpha);
    CsvWriter w(out_path);
    w.row({"term", "weight_re", "weight_im", "amplitude_re", "amplitude_im"});
    for (std::size_t k = 0; k < state.terms().size(); ++k) {
        const auto& t = state.terms()[k];
        w.row({std::to_string(k), fmt(t.weight.real()), fmt(t.weight.imag()),
               fmt(t.amplitudes[0].real()), fmt(t.amplitudes[0].imag())});
    }
    nlohmann::json meta;
    meta["command"] = "breed";
    meta["engine"] = "coherent";
    meta["parameters"] = {{"j", j}, {"alpha", alpha}};
    meta["diagnostics"] = {{"terms", state.term_count()},
                           {"norm_squared", norm_squared(state)}};
    write_sidecar(out_path, meta);
    return 0;
}

int run_qutrit(double alpha, double p, bool true_photon, int cutoff,
               const std::string& out_path) {
    const HybridOutput result = qutrit_generate(alpha, p);
    const auto targets = qutrit_branch_targets(alpha);

    std::map<int, FockState> numeric;
    double numeric_density = 0.0;
    if (true_photon) {
        if (cutoff <= 0) cutoff = default_cutoff(result.labeled->max_amplitude() + alpha);
        auto [branches, density] = qutrit_generate_fock(alpha, p, cutoff);
        numeric = std::move(branches);
        numeric_density = density;
    }

    CsvWriter w(out_path);
    if (true_photon)
        w.row({"branch", "norm_squared", "target_fidelity", "true_photon_fidelity"});
    else
        w.row({"branch", "norm_squared", "target_fidelity"});
    for (const auto& [n, part] : result.branches) {
        std::vector<std::string> cells{std::to_string(n), fmt(norm_squared(part)),
                                       fmt(fidelity(part, targets.at(n)))};
        if (true_photon) {
            const FockState converted = to_fock(part, {cutoff}, 1.0);
            cells.push_back(fmt(fidelity(converted, numeric.at(n))));
        }
        w.row(cells);
    }

    nlohmann::json meta;
    meta["command"] = "qutrit";
    meta["engine"] = true_photon ? "both" : "coherent";
    meta["parameters"] = {{"alpha", alpha}, {"p", p}, {"true_photon", true_photon}};
    meta["diagnostics"] = {{"density", result.density}};
    if (true_photon) {
        meta["diagnostics"]["cutoff"] = cutoff;
        meta["diagnostics"]["true_photon_density"] = numeric_density;
    }
    write_sidecar(out_path, meta);
    return 0;
}

int run_equal_amp(double amplitude, double p, bool exact, const std::string& out_path) {
    HybridOptions options;
    options.approximate_ancilla = !exact;
    const HybridOutput result = equal_amplitude_generate(amplitude, p, options);
    const auto targets = equal_amplitude_targets(amplitude);

    CsvWriter w(out_path);
    w.row({"branch", "norm_squared", "target_fidelity"});
    for (const auto& [n, part] : result.branches)
        w.row({std::to_string(n), fmt(norm_squared(part)), fmt(fidelity(part, targets.at(n)))});

    nlohmann::json meta;
    meta["command"] = "equal-amp";
    meta["engine"] = "coherent";
    meta["parameters"] = {{"amplitude", amplitude}, {"p", p}, {"exact", exact}};
    meta["diagnostics"] = {{"density", result.density}};
    write_sidecar(out_path, meta);
    return 0;
}

int run_parity(const std::string& kind, double alpha, double frame_re, double frame_im,
               const std::string& out_path) {
    SuperposedState state(1);
    if (kind == "logical_zero")
        state = logical_zero(alpha);
    else if (kind == "logical_one")
        state = logical_one(alpha);
    else if (kind == "bred2")
        state = bred_logical_zero2(alpha);
    else if (kind == "cat-odd")
        state = make_cat(alpha, Parity::odd);
    else if (kind == "cat-even")
        state = make_cat(alpha, Parity::even);
    else
        throw Error("unknown parity state kind '" + kind + "'");
    state = normalized(state);

    const ParitySpectrum spectrum = parity_spectrum(state, cplx(frame_re, frame_im));
    CsvWriter w(out_path);
    w.row({"n", "weight"});
    for (std::size_t n = 0; n < spectrum.weights.size(); ++n)
        w.row({std::to_string(n), fmt(spectrum.weights[n])});

    nlohmann::json meta;
    meta["command"] = "parity";
    meta["engine"] = "fock";
    meta["parameters"] = {{"state", kind},
                          {"alpha", alpha},
                          {"frame_re", frame_re},
                          {"frame_im", frame_im}};
    meta["diagnostics"] = {{"even_weight", spectrum.even_weight},
                           {"odd_weight", spectrum.odd_weight}};
    write_sidecar(out_path, meta);
    return 0;
}

int run_wigner(const std::string& protocol, int j, double alpha, int branch,
               const WignerGridSpec& spec, const std::string& out_path) {
    SuperposedState state(1);
    if (protocol == "breed") {
        if (branch == 0) {
            state = bred_input(j, alpha);
        } else if (branch == 1) {
            if (j == 1) {
                state = normalized(logical_one(alpha));
            } else {
                HybridOptions options;
                options.displace_input = false;
                options.ancilla_weighting = CatWeighting::raw;
                const HybridOutput round =
                    hybrid_generate(bred_input(j - 1, alpha), alpha, 0.0, options);
                state = normalized(round.branches.at(1));
            }
        } else {
            throw Error("--branch must be 0 or 1");
        }
    } else if (protocol == "cat") {
        state = make_cat(alpha, Parity::odd);
    } else {
        throw Error("unknown wigner protocol '" + protocol + "'");
    }

    const WignerGrid grid = wigner(state, spec);
    CsvWriter w(out_path);
    w.row({"x", "p", "W"});
    for (std::size_t ix = 0; ix < grid.x_axis.size(); ++ix)
        for (std::size_t ip = 0; ip < grid.p_axis.size(); ++ip)
            w.row({fmt(grid.x_axis[ix]), fmt(grid.p_axis[ip]), fmt(grid.at(ix, ip))});

    nlohmann::json meta;
    meta["command"] = "wigner";
    meta["engine"] = "fock";
    meta["parameters"] = {{"protocol", protocol}, {"j", j},   {"alpha", alpha},
                          {"branch", branch},     {"x_min", spec.x_min},
                          {"x_max", spec.x_max},  {"x_points", spec.x_points},
                          {"p_min", spec.p_min},  {"p_max", spec.p_max},
                          {"p_points", spec.p_points}};
    meta["diagnostics"] = {{"min_w", grid.min_value()},
                           {"max_w", grid.max_value()},
                           {"mass", grid.mass()}};
    write_sidecar(out_path, meta);
    return 0;
}

int run_validate_approx(double alpha_min, double alpha_max, double step,
                        const std::string& out_path) {
    if (!(alpha_min > 0.0) || !(alpha_max >= alpha_min) || !(step > 0.0))
        throw Error("invalid sweep range");
    const auto count =
        static_cast<std::size_t>(std::floor((alpha_max - alpha_min) / step + 1e-9)) + 1;
    CsvWriter w(out_path);
    w.row({"alpha", "validity", "neglected_weight"});
    for (std::size_t k = 0; k < count; ++k) {
        const double a = alpha_min + static_cast<double>(k) * step;
        w.row({fmt(a), fmt(approximation_validity(a)), fmt(neglected_subspace_weight(a))});
    }
    nlohmann::json meta;
    meta["command"] = "validate-approx";
    meta["engine"] = "coherent";
    meta["parameters"] = {{"alpha_min", alpha_min}, {"alpha_max", alpha_max}, {"step", step}};
    meta["diagnostics"] = {{"rows", count}};
    write_sidecar(out_path, meta);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hybrid cat-state entanglement simulator and analysis toolkit"};
    app.require_subcommand(1);

    std::string engine = "coherent";
    std::string out_path;
    app.add_option("--engine", engine, "Computation engine")
        ->check(CLI::IsMember({"coherent", "fock", "both"}));
    app.add_option("--out", out_path, "Output CSV path (sidecar written alongside)");

    auto* simulate = app.add_subcommand("simulate", "Run a circuit file");
    std::string circuit_path;
    int cutoff = 0;
    simulate->add_option("--circuit", circuit_path, "Circuit JSON document")->required();
    simulate->add_option("--cutoff", cutoff, "Fock cutoff override");
    simulate->fallthrough();

    auto* sweep = app.add_subcommand("sweep-fidelity", "Closed-form fidelity sweep over alpha");
    double alpha_min = 0.05, alpha_max = 1.5, sweep_step = 0.005;
    sweep->add_option("--alpha-min", alpha_min, "Sweep start");
    sweep->add_option("--alpha-max", alpha_max, "Sweep end");
    sweep->add_option("--step", sweep_step, "Sweep step");
    sweep->fallthrough();

    auto* tradeoff_cmd = app.add_subcommand("tradeoff", "Fidelity/probability trade-off sweep");
    std::string alpha_arg = "auto";
    double vup_max = 3.0, p_max = 8.0;
    int points = 100;
    tradeoff_cmd->add_option("--alpha", alpha_arg, "Working amplitude or 'auto'");
    tradeoff_cmd->add_option("--vup-max", vup_max, "Largest acceptance window");
    tradeoff_cmd->add_option("--points", points, "Number of sweep points");
    tradeoff_cmd->add_option("--p-max", p_max, "Integration domain bound");
    tradeoff_cmd->fallthrough();

    auto* breed = app.add_subcommand("breed", "Bred logical-zero state terms");
    int breed_j = 1;
    double breed_alpha = 0.455;
    breed->add_option("--j", breed_j, "Breeding depth")->required();
    breed->add_option("--alpha", breed_alpha, "Cat amplitude")->required();
    breed->fallthrough();

    auto* qutrit = app.add_subcommand("qutrit", "Hybrid qutrit branch summary");
    double qutrit_alpha = 0.5, qutrit_p = 0.0;
    bool true_photon = false;
    int qutrit_cutoff = 0;
    qutrit->add_option("--alpha", qutrit_alpha, "Cat amplitude")->required();
    qutrit->add_option("--p", qutrit_p, "Homodyne outcome");
    qutrit->add_flag("--true-photon", true_photon,
                     "Cross-check against a genuine single-photon ancilla (Fock engine)");
    qutrit->add_option("--cutoff", qutrit_cutoff, "Fock cutoff override");
    qutrit->fallthrough();

    auto* equal_amp = app.add_subcommand("equal-amp", "Equal-amplitude (T=1/3) variant");
    double ea_amplitude = 0.557, ea_p = 0.0;
    bool ea_exact = false;
    equal_amp->add_option("--amplitude", ea_amplitude, "Input cat amplitude")->required();
    equal_amp->add_option("--p", ea_p, "Homodyne outcome");
    equal_amp->add_flag("--exact", ea_exact, "Use the exact three-mode ancilla path");
    equal_amp->fallthrough();

    auto* parity = app.add_subcommand("parity", "Photon-number parity spectrum");
    std::string parity_state = "logical_one";
    double parity_alpha = 0.455, frame_re = 0.0, frame_im = 0.0;
    parity->add_option("--state", parity_state, "State kind")
        ->check(CLI::IsMember({"logical_zero", "logical_one", "bred2", "cat-odd", "cat-even"}));
    parity->add_option("--alpha", parity_alpha, "Cat amplitude")->required();
    parity->add_option("--frame-re", frame_re, "Frame displacement, real part");
    parity->add_option("--frame-im", frame_im, "Frame displacement, imaginary part");
    parity->fallthrough();

    auto* wigner_cmd = app.add_subcommand("wigner", "Wigner function grid");
    std::string wigner_protocol = "breed";
    int wigner_j = 2, wigner_branch = 0;
    double wigner_alpha = 0.6;
    WignerGridSpec grid_spec;
    wigner_cmd->add_option("--protocol", wigner_protocol, "State family")
        ->check(CLI::IsMember({"breed", "cat"}));
    wigner_cmd->add_option("--j", wigner_j, "Breeding depth");
    wigner_cmd->add_option("--alpha", wigner_alpha, "Cat amplitude")->required();
    wigner_cmd->add_option("--branch", wigner_branch, "Conditional branch (0 or 1)");
    wigner_cmd->add_option("--x-min", grid_spec.x_min, "Grid x minimum");
    wigner_cmd->add_option("--x-max", grid_spec.x_max, "Grid x maximum");
    wigner_cmd->add_option("--x-points", grid_spec.x_points, "Grid x resolution");
    wigner_cmd->add_option("--p-min", grid_spec.p_min, "Grid p minimum");
    wigner_cmd->add_option("--p-max", grid_spec.p_max, "Grid p maximum");
    wigner_cmd->add_option("--p-points", grid_spec.p_points, "Grid p resolution");
    wigner_cmd->fallthrough();

    auto* validate = app.add_subcommand("validate-approx", "Two-branch approximation validity");
    double va_min = 0.05, va_max = 0.5, va_step = 0.05;
    validate->add_option("--alpha-min", va_min, "Sweep start");
    validate->add_option("--alpha-max", va_max, "Sweep end");
    validate->add_option("--step", va_step, "Sweep step");
    validate->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        require_out(out_path);
        if (app.got_subcommand(simulate))
            return run_simulate(circuit_path, engine, out_path, cutoff);
        if (app.got_subcommand(sweep))
            return run_sweep_fidelity(alpha_min, alpha_max, sweep_step, engine, out_path);
        if (app.got_subcommand(tradeoff_cmd))
            return run_tradeoff(alpha_arg, vup_max, points, p_max, out_path);
        if (app.got_subcommand(breed)) return run_breed(breed_j, breed_alpha, out_path);
        if (app.got_subcommand(qutrit))
            return run_qutrit(qutrit_alpha, qutrit_p, true_photon, qutrit_cutoff, out_path);
        if (app.got_subcommand(equal_amp)) return run_equal_amp(ea_amplitude, ea_p, ea_exact, out_path);
        if (app.got_subcommand(parity))
            return run_parity(parity_state, parity_alpha, frame_re, frame_im, out_path);
        if (app.got_subcommand(wigner_cmd))
            return run_wigner(wigner_protocol, wigner_j, wigner_alpha, wigner_branch, grid_spec,
                              out_path);
        if (app.got_subcommand(validate))
            return run_validate_approx(va_min, va_max, va_step, out_path);
        throw Error("no subcommand selected");
    } catch (const ConvergenceFailure& e) {
        std::fprintf(stderr, "convergence failure: %s\n", e.what());
        return 2;
    } catch (const CutoffTooSmall& e) {
        std::fprintf(stderr, "convergence failure: %s\n", e.what());
        return 2;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
