#pragma once

// Exact symbolic engine: states are finite superpositions of multimode
// coherent states.  Every circuit element used by the protocols (displacement,
// beam splitter, homodyne projection, Fock projection) maps such a
// superposition to another one, with analytic Gaussian inner products.

#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace catgkp {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

// Canonicalization tolerances and the squared-norm threshold below which a
// measurement outcome counts as structurally forbidden.
inline constexpr double kMergeTolerance = 1e-12;
inline constexpr double kPruneTolerance = 1e-12;
inline constexpr double kZeroDensityThreshold = 1e-14;

// <x|y> for two coherent amplitudes: exp(-(|x|^2+|y|^2)/2 + conj(x) y).
inline cplx coherent_overlap(cplx x, cplx y) {
    return std::exp(-0.5 * (std::norm(x) + std::norm(y)) + std::conj(x) * y);
}

struct CoherentTerm {
    cplx weight;
    std::vector<cplx> amplitudes;  // one phase-space amplitude per mode
};

class SuperposedState {
public:
    explicit SuperposedState(std::size_t mode_count) : mode_count_(mode_count) {}

    SuperposedState(std::size_t mode_count,
                    std::initializer_list<std::pair<cplx, std::vector<cplx>>> terms)
        : mode_count_(mode_count) {
        for (const auto& [w, amps] : terms) add_term(w, amps);
    }

    static SuperposedState vacuum(std::size_t mode_count = 1) {
        SuperposedState s(mode_count);
        s.add_term(1.0, std::vector<cplx>(mode_count, cplx(0.0)));
        return s;
    }

    // Single-mode coherent state |amplitude>.
    static SuperposedState coherent(cplx amplitude) {
        SuperposedState s(1);
        s.add_term(1.0, {amplitude});
        return s;
    }

    std::size_t mode_count() const { return mode_count_; }
    std::size_t term_count() const { return terms_.size(); }
    const std::vector<CoherentTerm>& terms() const { return terms_; }

    SuperposedState& add_term(cplx weight, std::vector<cplx> amplitudes) {
        if (amplitudes.size() != mode_count_)
            throw ModeMismatch("term amplitude count does not match state mode count");
        if (!std::isfinite(weight.real()) || !std::isfinite(weight.imag()))
            throw Error("term weight must be finite");
        terms_.push_back(CoherentTerm{weight, std::move(amplitudes)});
        return *this;
    }

    SuperposedState& scale(cplx factor) {
        for (auto& t : terms_) t.weight *= factor;
        return *this;
    }

    // Largest |amplitude| over all terms and modes (0 for an empty state).
    double max_amplitude() const {
        double m = 0.0;
        for (const auto& t : terms_)
            for (cplx a : t.amplitudes) m = std::max(m, std::abs(a));
        return m;
    }

private:
    std::size_t mode_count_;
    std::vector<CoherentTerm> terms_;
};

enum class Parity { even, odd };

// Cat-state normalization N = sqrt(2 (1 +/- exp(-2 alpha^2))).  The odd-cat
// value is evaluated with expm1 so small amplitudes keep full precision.
inline double cat_norm(double alpha, Parity parity) {
    const double t = -std::expm1(-2.0 * alpha * alpha);  // 1 - exp(-2 a^2)
    const double n2 = parity == Parity::odd ? 2.0 * t : 2.0 * (2.0 - t);
    if (!(n2 > 0.0) || !std::isfinite(n2))
        throw DegenerateState("cat state normalization vanishes");
    return std::sqrt(n2);
}

// Normalized cat state (|alpha> +/- |-alpha>)/N on `mode` of a `mode_count`
// mode state, all other modes vacuum.
inline SuperposedState make_cat(double alpha, Parity parity,
                                std::size_t mode_count = 1, std::size_t mode = 0) {
    if (mode >= mode_count) throw InvalidMode("cat mode index out of range");
    const double w = 1.0 / cat_norm(alpha, parity);
    std::vector<cplx> plus(mode_count, cplx(0.0)), minus(mode_count, cplx(0.0));
    plus[mode] = alpha;
    minus[mode] = -alpha;
    SuperposedState s(mode_count);
    s.add_term(w, std::move(plus));
    s.add_term(parity == Parity::odd ? -w : w, std::move(minus));
    return s;
}

inline SuperposedState tensor(const SuperposedState& a, const SuperposedState& b) {
    SuperposedState out(a.mode_count() + b.mode_count());
    for (const auto& ta : a.terms()) {
        for (const auto& tb : b.terms()) {
            std::vector<cplx> amps = ta.amplitudes;
            amps.insert(amps.end(), tb.amplitudes.begin(), tb.amplitudes.end());
            out.add_term(ta.weight * tb.weight, std::move(amps));
        }
    }
    return out;
}

// D(alpha) on one mode: |gamma> -> exp((alpha conj(gamma) - conj(alpha) gamma)/2)
// |gamma + alpha>.  The phase factor is exact for complex amplitudes and
// reduces to 1 when everything is real.
inline SuperposedState displace(const SuperposedState& state, std::size_t mode, cplx alpha) {
    if (mode >= state.mode_count()) throw InvalidMode("displacement mode out of range");
    SuperposedState out(state.mode_count());
    for (const auto& t : state.terms()) {
        const cplx g = t.amplitudes[mode];
        const cplx phase = std::exp(0.5 * (alpha * std::conj(g) - std::conj(alpha) * g));
        std::vector<cplx> amps = t.amplitudes;
        amps[mode] = g + alpha;
        out.add_term(t.weight * phase, std::move(amps));
    }
    return out;
}

// Two-port beam splitter on (mode_i, mode_j) with transmittance T:
// (u, v) -> (sqrt(T) u + sqrt(1-T) v, -sqrt(1-T) u + sqrt(T) v).
// T = 1/2 realizes the half-beam-splitter convention
// (u, v) -> ((u+v)/sqrt(2), (v-u)/sqrt(2)).
inline SuperposedState beam_split(const SuperposedState& state, std::size_t mode_i,
                                  std::size_t mode_j, double transmittance) {
    if (mode_i >= state.mode_count() || mode_j >= state.mode_count())
        throw InvalidMode("beam splitter mode out of range");
    if (mode_i == mode_j) throw InvalidMode("beam splitter modes must be distinct");
    if (!(transmittance > 0.0) || !(transmittance < 1.0))
        throw InvalidTransmittance("transmittance must lie in (0, 1)");
    const double t = std::sqrt(transmittance);
    const double r = std::sqrt(1.0 - transmittance);
    SuperposedState out(state.mode_count());
    for (const auto& term : state.terms()) {
        const cplx u = term.amplitudes[mode_i];
        const cplx v = term.amplitudes[mode_j];
        std::vector<cplx> amps = term.amplitudes;
        amps[mode_i] = t * u + r * v;
        amps[mode_j] = -r * u + t * v;
        out.add_term(term.weight, std::move(amps));
    }
    return out;
}

// <a|b> via the Gaussian overlap of every term pair.
inline cplx inner_product(const SuperposedState& a, const SuperposedState& b) {
    if (a.mode_count() != b.mode_count())
        throw ModeMismatch("inner product requires equal mode counts");
    cplx s = 0.0;
    for (const auto& ta : a.terms()) {
        for (const auto& tb : b.terms()) {
            cplx prod = std::conj(ta.weight) * tb.weight;
            for (std::size_t m = 0; m < a.mode_count(); ++m)
                prod *= coherent_overlap(ta.amplitudes[m], tb.amplitudes[m]);
            s += prod;
        }
    }
    return s;
}

inline double norm_squared(const SuperposedState& a) {
    return inner_product(a, a).real();
}

// |<a|b>|^2 / (<a|a> <b|b>): global phase never enters comparisons.
inline double fidelity(const SuperposedState& a, const SuperposedState& b) {
    const double na = norm_squared(a), nb = norm_squared(b);
    if (na <= 0.0 || nb <= 0.0) throw DegenerateState("fidelity of a null state");
    return std::norm(inner_product(a, b)) / (na * nb);
}

inline SuperposedState normalized(const SuperposedState& a) {
    const double n2 = norm_squared(a);
    if (n2 < kZeroDensityThreshold) throw ZeroDensity("cannot normalize a null state");
    SuperposedState out = a;
    out.scale(1.0 / std::sqrt(n2));
    return out;
}

// Momentum-quadrature kernel <p|gamma> with hbar = 1 and x = (a + a^dag)/sqrt(2):
//   pi^{-1/4} exp(-(p - sqrt(2) Im g)^2 / 2 - i sqrt(2) p Re g + i Re g Im g).
// For real gamma this is the plane-wave phase exp(-i sqrt(2) p gamma) under a
// Gaussian envelope.
inline cplx quadrature_overlap(double p, cplx gamma) {
    const double gr = gamma.real(), gi = gamma.imag();
    const double sq2 = std::sqrt(2.0);
    const cplx expo(-0.5 * (p - sq2 * gi) * (p - sq2 * gi), -sq2 * p * gr + gr * gi);
    return std::pow(kPi, -0.25) * std::exp(expo);
}

// <n|gamma> = exp(-|gamma|^2/2) gamma^n / sqrt(n!), evaluated by a running
// product so gamma = 0 stays exact.
inline cplx fock_overlap(unsigned n, cplx gamma) {
    cplx c = std::exp(cplx(-0.5 * std::norm(gamma), 0.0));
    for (unsigned k = 1; k <= n; ++k) c *= gamma / std::sqrt(static_cast<double>(k));
    return c;
}

// Post-selected, unnormalized state plus the probability(-density) of the
// measurement outcome that produced it.
struct ConditionalOutput {
    SuperposedState state;           // measured mode removed
    double density_amplitude_norm2;  // <state|state>

    SuperposedState normalized_state() const {
        if (density_amplitude_norm2 < kZeroDensityThreshold)
            throw ZeroDensity("conditional state has (numerically) zero density");
        SuperposedState out = state;
        out.scale(1.0 / std::sqrt(density_amplitude_norm2));
        return out;
    }
};

namespace detail {

template <class Kernel>
ConditionalOutput project_with(const SuperposedState& state, std::size_t mode, Kernel&& k) {
    if (mode >= state.mode_count()) throw InvalidMode("projection mode out of range");
    SuperposedState out(state.mode_count() - 1);
    for (const auto& t : state.terms()) {
        std::vector<cplx> amps;
        amps.reserve(t.amplitudes.size() - 1);
        for (std::size_t m = 0; m < t.amplitudes.size(); ++m)
            if (m != mode) amps.push_back(t.amplitudes[m]);
        out.add_term(t.weight * k(t.amplitudes[mode]), std::move(amps));
    }
    return ConditionalOutput{out, norm_squared(out)};
}

}  // namespace detail

// Project mode onto the momentum-quadrature outcome p.
inline ConditionalOutput homodyne_project(const SuperposedState& state, std::size_t mode,
                                          double p) {
    return detail::project_with(state, mode, [p](cplx g) { return quadrature_overlap(p, g); });
}

// Project mode onto Fock state |n>.
inline ConditionalOutput project_fock(const SuperposedState& state, std::size_t mode,
                                      unsigned n) {
    return detail::project_with(state, mode, [n](cplx g) { return fock_overlap(n, g); });
}

// Merge terms whose amplitude vectors agree componentwise within merge_tol
// (weights summed), then drop terms with |weight| <= prune_tol.
inline SuperposedState canonicalize(const SuperposedState& state,
                                    double merge_tol = kMergeTolerance,
                                    double prune_tol = kPruneTolerance) {
    std::vector<CoherentTerm> merged;
    for (const auto& t : state.terms()) {
        bool found = false;
        for (auto& m : merged) {
            bool same = true;
            for (std::size_t k = 0; k < t.amplitudes.size() && same; ++k)
                same = std::abs(t.amplitudes[k] - m.amplitudes[k]) <= merge_tol;
            if (same) {
                m.weight += t.weight;
                found = true;
                break;
            }
        }
        if (!found) merged.push_back(t);
    }
    SuperposedState out(state.mode_count());
    for (auto& m : merged)
        if (std::abs(m.weight) > prune_tol) out.add_term(m.weight, std::move(m.amplitudes));
    return out;
}

// True when the two states have identical term structure up to one common
// complex factor: equal amplitude vectors (within tol) in some pairing and
// proportional weights.  Both states are canonicalized first.
inline bool termwise_proportional(const SuperposedState& a, const SuperposedState& b,
                                  double tol = 1e-12) {
    if (a.mode_count() != b.mode_count()) return false;
    const auto reduce = [tol](const SuperposedState& s) {
        const SuperposedState merged = canonicalize(s, tol, 0.0);
        double wmax = 0.0;
        for (const auto& t : merged.terms()) wmax = std::max(wmax, std::abs(t.weight));
        return canonicalize(merged, tol, tol * wmax);
    };
    const SuperposedState ca = reduce(a);
    const SuperposedState cb = reduce(b);
    if (ca.term_count() != cb.term_count()) return false;
    const std::size_t n = ca.term_count();
    if (n == 0) return true;
    std::vector<bool> used(n, false);
    cplx ratio = 0.0;
    for (const auto& ta : ca.terms()) {
        bool matched = false;
        for (std::size_t j = 0; j < n && !matched; ++j) {
            if (used[j]) continue;
            const auto& tb = cb.terms()[j];
            bool same = true;
            for (std::size_t k = 0; k < ta.amplitudes.size() && same; ++k)
                same = std::abs(ta.amplitudes[k] - tb.amplitudes[k]) <= tol;
            if (!same) continue;
            if (ratio == cplx(0.0)) {
                if (std::abs(tb.weight) == 0.0) return false;
                ratio = ta.weight / tb.weight;
            }
            if (std::abs(ta.weight - ratio * tb.weight) >
                tol * std::max(1.0, std::abs(ratio * tb.weight)))
                return false;
            used[j] = true;
            matched = true;
        }
        if (!matched) return false;
    }
    return true;
}

}  // namespace catgkp
