#pragma once

// Figures of merit for the hybrid-generation protocol: single-photon and
// closed-form fidelities, the optimal working amplitude, the
// fidelity/probability trade-off over a homodyne acceptance window,
// approximation-validity diagnostics, and parity spectra in displaced frames.

#include <cmath>
#include <complex>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "coherent.hpp"
#include "errors.hpp"
#include "fock.hpp"
#include "protocols.hpp"
#include "quadrature.hpp"

namespace catgkp {

// One point of a parameter sweep.  `probability` is absent for
// pure-fidelity sweeps; `diagnostics` carries reproduction aids
// (panel counts, cutoffs, convergence estimates).
struct SweepRecord {
    double parameter = 0.0;
    double fidelity = 0.0;
    std::optional<double> probability;
    std::map<std::string, double> diagnostics;
};

// Photon-number weights of a single-mode state split by parity.
struct ParitySpectrum {
    double even_weight = 0.0;
    double odd_weight = 0.0;
    std::vector<double> weights;
};

// Fidelity |<1|C^-_alpha>|^2 = 4 a^2 e^{-a^2} / N^2 between the normalized
// odd cat and the single-photon Fock state.
inline double single_photon_fidelity(double alpha) {
    if (!(alpha > 0.0)) throw DegenerateState("single-photon fidelity requires alpha > 0");
    const double n = cat_norm(alpha, Parity::odd);
    return 4.0 * alpha * alpha * std::exp(-alpha * alpha) / (n * n);
}

// Closed-form fidelity between the exact-ancilla and approximate-ancilla
// conditional states at p = 0, with beta = alpha/sqrt(2):
//   N0   = 6 - 8 e^{-2 b^2} + 2 e^{-8 b^2}        (norm^2 of |3b> - 2|b> + |-b>)
//   N1   = 2 (1 - e^{-2 b^2})                      (norm^2 of |2b> - |0>)
//   Npr  = 4 (1 - e^{-2 b^2}) - 2 e^{-2 a^2} (2 e^{-2 b^2} - e^{-8 b^2} - 1)
//   F    = e^{-a^2} (N0 + 2 a (e^{-b^2/2} - e^{-9 b^2/2}))^2 / ((N0 + N1) Npr)
// The differences are evaluated through expm1 so the small-alpha limit (0.4)
// is reached without catastrophic cancellation.
inline double closed_form_fidelity(double alpha) {
    if (!(alpha > 0.0)) throw DegenerateState("closed-form fidelity requires alpha > 0");
    const double b2 = 0.5 * alpha * alpha;              // beta^2
    const double u = std::expm1(-2.0 * b2);             // e^{-2 b^2} - 1
    const double v = std::expm1(-8.0 * b2);             // e^{-8 b^2} - 1
    const double n0 = -8.0 * u + 2.0 * v;
    const double n1 = -2.0 * u;
    const double npr = -4.0 * u - 2.0 * std::exp(-2.0 * alpha * alpha) * (2.0 * u - v);
    const double overlap =
        n0 + 2.0 * alpha * (std::exp(-0.5 * b2) - std::exp(-4.5 * b2));
    const double scaled = std::exp(-0.5 * alpha * alpha) * overlap;
    return scaled * scaled / ((n0 + n1) * npr);
}

// The same fidelity evaluated by running both circuit paths with the
// analytic coherent algebra: the approximate conditional state (raw ancilla
// weighting) against the exact conditional joint state, overlapped through
// the ancilla photon-number components.
inline double hybrid_fidelity_coherent(double alpha) {
    HybridOptions exact_options;
    exact_options.approximate_ancilla = false;
    const HybridOutput exact = hybrid_generate(alpha, 0.0, exact_options);
    HybridOptions approx_options;
    approx_options.ancilla_weighting = CatWeighting::raw;
    const HybridOutput approx = hybrid_generate(alpha, 0.0, approx_options);
    cplx overlap = 0.0;
    for (const auto& [n, part] : approx.branches)
        overlap += inner_product(part, exact.branches.at(n));
    return std::norm(overlap) /
           (branch_norm_squared(approx.branches) * norm_squared(*exact.joint));
}

// The same fidelity evaluated in a truncated Fock space (cutoff <= 0 picks
// the default heuristic from the largest amplitude in play).
inline double hybrid_fidelity_fock(double alpha, int cutoff = 0) {
    HybridOptions exact_options;
    exact_options.approximate_ancilla = false;
    const HybridOutput exact = hybrid_generate(alpha, 0.0, exact_options);
    HybridOptions approx_options;
    approx_options.ancilla_weighting = CatWeighting::raw;
    const HybridOutput approx = hybrid_generate(alpha, 0.0, approx_options);
    if (cutoff <= 0) {
        const double g = std::max(exact.joint->max_amplitude(), approx.labeled->max_amplitude());
        cutoff = default_cutoff(g);
    }
    const FockState e = to_fock(*exact.joint, {cutoff, cutoff});
    const FockState a = to_fock(*approx.labeled, cutoff);
    return fidelity(a, e);
}

// Maximizer of closed_form_fidelity over [lo, hi]: grid scan at step 1e-3
// followed by golden-section refinement to |d alpha| < 1e-6.
struct OptimalAlpha {
    double alpha_star = 0.0;
    double fidelity_star = 0.0;
};

inline OptimalAlpha optimal_alpha(double lo = 0.05, double hi = 1.5) {
    if (!(lo > 0.0) || !(hi >= lo) || !(hi <= 2.0))
        throw Error("search interval must satisfy 0 < lo <= hi <= 2");
    const double step = 1e-3;
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    std::size_t best = 0;
    double best_f = -1.0;
    for (std::size_t k = 0; k < count; ++k) {
        const double f = closed_form_fidelity(lo + static_cast<double>(k) * step);
        if (f > best_f) {
            best_f = f;
            best = k;
        }
    }
    if (count == 1) return {lo, best_f};
    const double bracket_lo = lo + static_cast<double>(best > 0 ? best - 1 : 0) * step;
    const double bracket_hi = std::min(hi, lo + static_cast<double>(best + 1) * step);
    const double alpha_star = golden_max(closed_form_fidelity, bracket_lo, bracket_hi, 1e-6);
    return {alpha_star, closed_form_fidelity(alpha_star)};
}

// Closed-form fidelity sweep over alpha in [lo, hi] with the given step.
// Emits floor((hi-lo)/step)+1 records ordered by parameter value.
inline std::vector<SweepRecord> sweep_fidelity(double lo, double hi, double step) {
    if (!(lo > 0.0) || !(hi >= lo) || !(step > 0.0)) throw Error("invalid sweep range");
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    std::vector<SweepRecord> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        const double a = lo + static_cast<double>(k) * step;
        SweepRecord rec;
        rec.parameter = a;
        rec.fidelity = closed_form_fidelity(a);
        rec.diagnostics["single_photon_fidelity"] = single_photon_fidelity(a);
        out.push_back(std::move(rec));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Fidelity/probability trade-off over a homodyne acceptance window
// ---------------------------------------------------------------------------

// Evaluates the conditional state family |g(p)> (approximate ancilla, raw
// weighting, full Gaussian envelope retained) against the target
// |t> = |g(0)>/||g(0)||:
//   P(v) = int_{-v}^{v} <g|g> dp / int_{-p_max}^{p_max} <g|g> dp
//   F(v) = int_{-v}^{v} |<t|g>|^2 dp / int_{-v}^{v} <g|g> dp
// Integrals use composite 64-point Gauss-Legendre panels doubled until the
// relative change falls below 1e-10.
class TradeoffCurve {
public:
    explicit TradeoffCurve(double alpha, double p_max = 8.0) : alpha_(alpha), p_max_(p_max) {
        if (!(alpha > 0.0)) throw DegenerateState("trade-off requires alpha > 0");
        if (!(p_max > 0.0)) throw Error("integration domain bound must be positive");
        options_.approximate_ancilla = true;
        options_.displace_input = true;
        options_.ancilla_weighting = CatWeighting::raw;
        target_ = hybrid_generate(alpha_, 0.0, options_).branches;
        const double tn = std::sqrt(branch_norm_squared(target_));
        if (!(tn > 0.0)) throw ZeroDensity("target state has vanishing density");
        for (auto& [n, part] : target_) part.scale(1.0 / tn);
        total_ = integrate_adaptive([this](double p) { return density(p); }, -p_max_, p_max_,
                                    kRelTol);
    }

    double alpha() const { return alpha_; }
    double p_max() const { return p_max_; }
    double total_density() const { return total_.value; }

    // <g(p)|g(p)>: probability density of homodyne outcome p.
    double density(double p) const { return branch_norm_squared(branches_at(p)); }

    // |<t|g(p)>|^2: density-weighted projection onto the target.
    double projected_density(double p) const {
        return std::norm(branch_overlap(target_, branches_at(p)));
    }

    // F'(p) = |<t|g(p)>|^2 / <g(p)|g(p)>.
    double pointwise_fidelity(double p) const {
        const double d = density(p);
        if (d <= kZeroDensityThreshold) throw ZeroDensity("vanishing density at outcome p");
        return projected_density(p) / d;
    }

    SweepRecord at(double v_up) const {
        if (!(v_up > 0.0)) throw Error("acceptance window must be positive");
        if (v_up > p_max_) throw WindowExceedsDomain("acceptance window exceeds p_max");
        const IntegralResult win =
            integrate_adaptive([this](double p) { return density(p); }, -v_up, v_up, kRelTol);
        const IntegralResult proj = integrate_adaptive(
            [this](double p) { return projected_density(p); }, -v_up, v_up, kRelTol);
        SweepRecord rec;
        rec.parameter = v_up;
        rec.fidelity = proj.value / win.value;
        rec.probability = win.value / total_.value;
        rec.diagnostics["window_density"] = win.value;
        rec.diagnostics["total_density"] = total_.value;
        rec.diagnostics["panels"] =
            static_cast<double>(win.panels + proj.panels + total_.panels);
        rec.diagnostics["convergence"] = std::max(win.last_change, proj.last_change);
        return rec;
    }

    // Window achieving the requested average fidelity (F decreases with v).
    SweepRecord solve_fidelity(double fidelity_target) const {
        const double v = bisect_to([this](double v_up) { return at(v_up).fidelity; },
                                   fidelity_target, 1e-4, p_max_, 1e-9);
        return at(v);
    }

    // Window achieving the requested success probability (P increases with v).
    SweepRecord solve_probability(double probability_target) const {
        const double v = bisect_to([this](double v_up) { return *at(v_up).probability; },
                                   probability_target, 1e-4, p_max_, 1e-9);
        return at(v);
    }

private:
    static constexpr double kRelTol = 1e-10;

    std::map<int, SuperposedState> branches_at(double p) const {
        return hybrid_generate(alpha_, p, options_).branches;
    }

    double alpha_;
    double p_max_;
    HybridOptions options_;
    std::map<int, SuperposedState> target_;
    IntegralResult total_{};
};

inline SweepRecord tradeoff(double alpha, double v_up, double p_max = 8.0) {
    return TradeoffCurve(alpha, p_max).at(v_up);
}

// ---------------------------------------------------------------------------
// Approximation validity
// ---------------------------------------------------------------------------

// Fidelity between the exact post-split two-mode state
// (|a>|a> - |-a>|-a>) / N^-_{sqrt(2) a} and the approximate form
// (|C^-_a>|0> + |0>|1>) / sqrt(2).
inline double approximation_validity(double alpha) {
    const double n_minus = cat_norm(alpha, Parity::odd);
    const double n_pair = cat_norm(std::sqrt(2.0) * alpha, Parity::odd);
    const double overlap = (n_minus * std::exp(-0.5 * alpha * alpha) +
                            2.0 * alpha * std::exp(-alpha * alpha)) /
                           (std::sqrt(2.0) * n_pair);
    return overlap * overlap;
}

// Total population of the truncated-away subspace at three photons: the
// occupations (1,2), (2,1) and (0,3) of the unnormalized pair state
// |a>|a> - |-a>|-a>.  Scales as (14/3) a^6 e^{-2 a^2}.
inline double neglected_subspace_weight(double alpha) {
    if (!(alpha > 0.0)) throw DegenerateState("subspace weight requires alpha > 0");
    const SuperposedState pair(2, {{1.0, {alpha, alpha}}, {-1.0, {-alpha, -alpha}}});
    const int d = std::max(6, default_cutoff(alpha));
    const FockState f = to_fock(pair, {d, d});
    return std::norm(f.at({1, 2})) + std::norm(f.at({2, 1})) + std::norm(f.at({0, 3}));
}

// ---------------------------------------------------------------------------
// Parity spectrum
// ---------------------------------------------------------------------------

// Displaces a single-mode state by `frame_displacement`, converts to the
// Fock basis with an automatically chosen cutoff, and bins |amplitude|^2 by
// photon-number parity.
inline ParitySpectrum parity_spectrum(const SuperposedState& state, cplx frame_displacement) {
    if (state.mode_count() != 1)
        throw NotSingleMode("parity spectrum requires a single-mode state");
    const SuperposedState displaced = displace(state, 0, frame_displacement);
    const int cutoff = default_cutoff(displaced.max_amplitude());
    const FockState f = to_fock(displaced, {cutoff});
    ParitySpectrum out;
    out.weights.resize(static_cast<std::size_t>(cutoff));
    for (int n = 0; n < cutoff; ++n) {
        const double w = std::norm(f.amplitudes()[static_cast<std::size_t>(n)]);
        out.weights[static_cast<std::size_t>(n)] = w;
        (n % 2 == 0 ? out.even_weight : out.odd_weight) += w;
    }
    return out;
}

}  // namespace catgkp
