#pragma once

// Truncated Fock-space numeric engine.  Serves as the independent oracle for
// the exact coherent-superposition algebra and as the backend for Wigner
// functions and parity spectra.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "coherent.hpp"
#include "errors.hpp"

namespace catgkp {

// Default per-mode cutoff for a circuit whose largest traced coherent
// amplitude is gamma_max; keeps coherent-state truncation error below ~1e-10
// for gamma_max <= 1.5 and degrades gracefully beyond.
inline int default_cutoff(double gamma_max) {
    const double g = std::abs(gamma_max);
    return static_cast<int>(std::ceil(g * g + 6.0 * g + 10.0));
}

class FockState {
public:
    explicit FockState(std::vector<int> cutoffs) : cutoffs_(std::move(cutoffs)) {
        std::size_t total = 1;
        for (int c : cutoffs_) {
            if (c < 1) throw CutoffTooSmall("cutoffs must be positive");
            total *= static_cast<std::size_t>(c);
        }
        amplitudes_.assign(total, cplx(0.0));
    }

    // |n_0, n_1, ...> basis state.
    static FockState basis(std::vector<int> cutoffs, const std::vector<int>& occupation) {
        FockState s(std::move(cutoffs));
        if (occupation.size() != s.cutoffs_.size())
            throw ModeMismatch("occupation length must match mode count");
        std::size_t flat = 0;
        for (std::size_t m = 0; m < occupation.size(); ++m) {
            if (occupation[m] < 0 || occupation[m] >= s.cutoffs_[m])
                throw CutoffTooSmall("basis occupation exceeds cutoff");
            flat = flat * static_cast<std::size_t>(s.cutoffs_[m]) +
                   static_cast<std::size_t>(occupation[m]);
        }
        s.amplitudes_[flat] = 1.0;
        return s;
    }

    std::size_t mode_count() const { return cutoffs_.size(); }
    const std::vector<int>& cutoffs() const { return cutoffs_; }
    const std::vector<cplx>& amplitudes() const { return amplitudes_; }
    std::vector<cplx>& amplitudes() { return amplitudes_; }

    // Row-major stride of a mode (mode 0 varies slowest).
    std::size_t stride(std::size_t mode) const {
        std::size_t s = 1;
        for (std::size_t m = mode + 1; m < cutoffs_.size(); ++m)
            s *= static_cast<std::size_t>(cutoffs_[m]);
        return s;
    }

    cplx at(const std::vector<int>& occupation) const {
        std::size_t flat = 0;
        for (std::size_t m = 0; m < occupation.size(); ++m)
            flat = flat * static_cast<std::size_t>(cutoffs_[m]) +
                   static_cast<std::size_t>(occupation[m]);
        return amplitudes_[flat];
    }

    double norm_squared() const {
        double s = 0.0;
        for (const cplx& a : amplitudes_) s += std::norm(a);
        return s;
    }

    // Truncation error 1 - |truncated|^2 / |exact|^2, tracked when the state
    // was built from an analytic superposition; 0 otherwise.
    double truncation_error() const { return truncation_error_; }
    void set_truncation_error(double e) { truncation_error_ = e; }

private:
    std::vector<int> cutoffs_;
    std::vector<cplx> amplitudes_;
    double truncation_error_ = 0.0;
};

inline cplx inner_product(const FockState& a, const FockState& b) {
    if (a.cutoffs() != b.cutoffs())
        throw ModeMismatch("Fock inner product requires identical cutoffs");
    cplx s = 0.0;
    for (std::size_t k = 0; k < a.amplitudes().size(); ++k)
        s += std::conj(a.amplitudes()[k]) * b.amplitudes()[k];
    return s;
}

inline double fidelity(const FockState& a, const FockState& b) {
    const double na = a.norm_squared(), nb = b.norm_squared();
    if (na <= 0.0 || nb <= 0.0) throw DegenerateState("fidelity of a null state");
    return std::norm(inner_product(a, b)) / (na * nb);
}

inline FockState tensor(const FockState& a, const FockState& b) {
    std::vector<int> cut = a.cutoffs();
    cut.insert(cut.end(), b.cutoffs().begin(), b.cutoffs().end());
    FockState out(std::move(cut));
    const std::size_t nb = b.amplitudes().size();
    for (std::size_t ia = 0; ia < a.amplitudes().size(); ++ia)
        for (std::size_t ib = 0; ib < nb; ++ib)
            out.amplitudes()[ia * nb + ib] = a.amplitudes()[ia] * b.amplitudes()[ib];
    out.set_truncation_error(a.truncation_error() + b.truncation_error());
    return out;
}

// Dense conversion of an exact superposition, with per-term coherent-state
// coefficients <n|gamma>.  Throws CutoffTooSmall when the tracked truncation
// error exceeds max_truncation_error (skipped for null states).
inline FockState to_fock(const SuperposedState& state, const std::vector<int>& cutoffs,
                         double max_truncation_error = 1e-6) {
    if (cutoffs.size() != state.mode_count())
        throw ModeMismatch("cutoff list length must match mode count");
    FockState out(cutoffs);
    const std::size_t modes = cutoffs.size();
    const std::size_t total = out.amplitudes().size();
    std::vector<std::vector<cplx>> coeff(modes);
    for (const auto& term : state.terms()) {
        for (std::size_t m = 0; m < modes; ++m) {
            auto& c = coeff[m];
            c.resize(static_cast<std::size_t>(cutoffs[m]));
            const cplx g = term.amplitudes[m];
            c[0] = std::exp(cplx(-0.5 * std::norm(g), 0.0));
            for (int n = 1; n < cutoffs[m]; ++n)
                c[n] = c[n - 1] * g / std::sqrt(static_cast<double>(n));
        }
        std::vector<int> digit(modes, 0);
        std::vector<cplx> prefix(modes + 1);
        prefix[0] = term.weight;
        for (std::size_t m = 0; m < modes; ++m) prefix[m + 1] = prefix[m] * coeff[m][0];
        out.amplitudes()[0] += prefix[modes];
        for (std::size_t flat = 1; flat < total; ++flat) {
            std::size_t m = modes - 1;
            while (digit[m] == cutoffs[m] - 1) {
                digit[m] = 0;
                --m;
            }
            ++digit[m];
            for (std::size_t k = m; k < modes; ++k)
                prefix[k + 1] = prefix[k] * coeff[k][static_cast<std::size_t>(digit[k])];
            out.amplitudes()[flat] += prefix[modes];
        }
    }
    const double exact = norm_squared(state);
    if (exact > kZeroDensityThreshold) {
        const double err = std::max(0.0, 1.0 - out.norm_squared() / exact);
        out.set_truncation_error(err);
        if (err > max_truncation_error)
            throw CutoffTooSmall("Fock truncation error exceeds the requested bound");
    }
    return out;
}

// Unitary displacement exp(alpha a^dag - conj(alpha) a) truncated to the mode
// cutoff, built by scaling-and-squaring matrix exponential of the generator.
inline FockState apply_displacement(const FockState& state, std::size_t mode, cplx alpha,
                                    double norm_drop_bound = 1e-8) {
    if (mode >= state.mode_count()) throw InvalidMode("displacement mode out of range");
    const int d = state.cutoffs()[mode];
    if (d < 2) throw CutoffTooSmall("displacement needs cutoff >= 2");
    // Exponentiating the generator truncated at d alone would be exactly
    // unitary, hiding any truncation loss.  Work in a space enlarged past the
    // cutoff instead: the enlarged exponential is still unitary, so the weight
    // it leaves above the cutoff is exactly the norm lost when keeping d.
    const int big = d + default_cutoff(std::abs(alpha));
    Eigen::MatrixXcd gen = Eigen::MatrixXcd::Zero(big, big);
    for (int n = 1; n < big; ++n) {
        const double r = std::sqrt(static_cast<double>(n));
        gen(n, n - 1) = alpha * r;              // a^dag
        gen(n - 1, n) = -std::conj(alpha) * r;  // -conj(alpha) a
    }
    const Eigen::MatrixXcd full = gen.exp();
    const Eigen::MatrixXcd u = full.leftCols(d);
    FockState out = state;
    const std::size_t s = out.stride(mode);
    const std::size_t total = out.amplitudes().size();
    const std::size_t block = static_cast<std::size_t>(d) * s;
    const double before = out.norm_squared();
    double spilled = 0.0;
    Eigen::VectorXcd v(d), w(big);
    for (std::size_t hi = 0; hi < total; hi += block) {
        for (std::size_t lo = 0; lo < s; ++lo) {
            for (int n = 0; n < d; ++n) v(n) = out.amplitudes()[hi + n * s + lo];
            w.noalias() = u * v;
            for (int n = 0; n < d; ++n) out.amplitudes()[hi + n * s + lo] = w(n);
            spilled += w.tail(big - d).squaredNorm();
        }
    }
    if (before > 0.0 && spilled / before > norm_drop_bound)
        throw CutoffTooSmall("displacement lost norm beyond the requested bound");
    return out;
}

namespace detail {

// Rotation block of the beam splitter exp(theta (a_i^dag a_j - a_j^dag a_i))
// in the total-photon-number-N subspace, restricted to k = n_j in
// [k_min, k_max].  Restricting the antisymmetric generator keeps the
// exponential exactly orthogonal even in truncated (N >= cutoff) blocks.
inline Eigen::MatrixXd beam_splitter_block(int total_n, int k_min, int k_max, double theta) {
    const int m = k_max - k_min + 1;
    Eigen::MatrixXd gen = Eigen::MatrixXd::Zero(m, m);
    for (int k = k_min + 1; k <= k_max; ++k) {
        // a_i^dag a_j : |N-k, k> -> sqrt(k (N-k+1)) |N-k+1, k-1>
        const double c = std::sqrt(static_cast<double>(k) * (total_n - k + 1));
        gen(k - 1 - k_min, k - k_min) = c;
        gen(k - k_min, k - 1 - k_min) = -c;
    }
    return (theta * gen).exp();
}

}  // namespace detail

// Two-mode beam splitter with transmittance T; photon number n_i + n_j is
// conserved blockwise, so the truncated operator is still exactly unitary.
inline FockState apply_beam_splitter(const FockState& state, std::size_t mode_i,
                                     std::size_t mode_j, double transmittance) {
    if (mode_i >= state.mode_count() || mode_j >= state.mode_count())
        throw InvalidMode("beam splitter mode out of range");
    if (mode_i == mode_j) throw InvalidMode("beam splitter modes must be distinct");
    if (!(transmittance > 0.0) || !(transmittance < 1.0))
        throw InvalidTransmittance("transmittance must lie in (0, 1)");
    const int d = state.cutoffs()[mode_i];
    if (state.cutoffs()[mode_j] != d)
        throw ModeMismatch("beam splitter requires equal cutoffs on both modes");
    const double theta = std::atan2(std::sqrt(1.0 - transmittance), std::sqrt(transmittance));

    std::vector<Eigen::MatrixXd> blocks;
    blocks.reserve(static_cast<std::size_t>(2 * d - 1));
    for (int total_n = 0; total_n <= 2 * (d - 1); ++total_n) {
        const int k_min = std::max(0, total_n - (d - 1));
        const int k_max = std::min(total_n, d - 1);
        blocks.push_back(detail::beam_splitter_block(total_n, k_min, k_max, theta));
    }

    FockState out = state;
    const std::size_t si = state.stride(mode_i), sj = state.stride(mode_j);
    const std::size_t total = state.amplitudes().size();
    std::vector<cplx> v, w;
    for (std::size_t flat = 0; flat < total; ++flat) {
        const int ni = static_cast<int>((flat / si) % static_cast<std::size_t>(d));
        const int nj = static_cast<int>((flat / sj) % static_cast<std::size_t>(d));
        if (ni != 0 || nj != 0) continue;  // fiber base element
        for (int total_n = 0; total_n <= 2 * (d - 1); ++total_n) {
            const int k_min = std::max(0, total_n - (d - 1));
            const int k_max = std::min(total_n, d - 1);
            const int m = k_max - k_min + 1;
            v.assign(static_cast<std::size_t>(m), cplx(0.0));
            for (int k = k_min; k <= k_max; ++k)
                v[static_cast<std::size_t>(k - k_min)] =
                    state.amplitudes()[flat + static_cast<std::size_t>(total_n - k) * si +
                                       static_cast<std::size_t>(k) * sj];
            const Eigen::MatrixXd& u = blocks[static_cast<std::size_t>(total_n)];
            w.assign(static_cast<std::size_t>(m), cplx(0.0));
            for (int r = 0; r < m; ++r)
                for (int c = 0; c < m; ++c) w[static_cast<std::size_t>(r)] += u(r, c) * v[static_cast<std::size_t>(c)];
            for (int k = k_min; k <= k_max; ++k)
                out.amplitudes()[flat + static_cast<std::size_t>(total_n - k) * si +
                                 static_cast<std::size_t>(k) * sj] =
                    w[static_cast<std::size_t>(k - k_min)];
        }
    }
    return out;
}

// Momentum-quadrature kernel <p|n> = (-i)^n pi^{-1/4} (2^n n!)^{-1/2} H_n(p)
// e^{-p^2/2}, via the stable three-term recurrence on normalized Hermite
// functions.  The (-i)^n phase makes the kernel agree with the coherent-state
// kernel quadrature_overlap for real amplitudes.
inline std::vector<cplx> homodyne_kernel(double p, int cutoff) {
    if (cutoff < 1) throw CutoffTooSmall("homodyne kernel needs cutoff >= 1");
    std::vector<double> h(static_cast<std::size_t>(cutoff));
    h[0] = std::pow(kPi, -0.25) * std::exp(-0.5 * p * p);
    if (cutoff > 1) h[1] = std::sqrt(2.0) * p * h[0];
    for (int n = 1; n + 1 < cutoff; ++n)
        h[static_cast<std::size_t>(n + 1)] =
            std::sqrt(2.0 / (n + 1)) * p * h[static_cast<std::size_t>(n)] -
            std::sqrt(static_cast<double>(n) / (n + 1)) * h[static_cast<std::size_t>(n - 1)];
    static const cplx phase[4] = {cplx(1, 0), cplx(0, -1), cplx(-1, 0), cplx(0, 1)};
    std::vector<cplx> out(static_cast<std::size_t>(cutoff));
    for (int n = 0; n < cutoff; ++n) out[static_cast<std::size_t>(n)] = phase[n % 4] * h[static_cast<std::size_t>(n)];
    return out;
}

// Position kernel <x|n> (real Hermite functions), used for Wigner marginals.
inline std::vector<double> position_kernel(double x, int cutoff) {
    if (cutoff < 1) throw CutoffTooSmall("position kernel needs cutoff >= 1");
    std::vector<double> h(static_cast<std::size_t>(cutoff));
    h[0] = std::pow(kPi, -0.25) * std::exp(-0.5 * x * x);
    if (cutoff > 1) h[1] = std::sqrt(2.0) * x * h[0];
    for (int n = 1; n + 1 < cutoff; ++n)
        h[static_cast<std::size_t>(n + 1)] =
            std::sqrt(2.0 / (n + 1)) * x * h[static_cast<std::size_t>(n)] -
            std::sqrt(static_cast<double>(n) / (n + 1)) * h[static_cast<std::size_t>(n - 1)];
    return h;
}

// Contract one mode against the momentum-quadrature kernel at outcome p.
// Returns the reduced state and the probability density (its squared norm).
inline std::pair<FockState, double> project_quadrature(const FockState& state,
                                                       std::size_t mode, double p) {
    if (mode >= state.mode_count()) throw InvalidMode("projection mode out of range");
    const int d = state.cutoffs()[mode];
    const std::vector<cplx> kernel = homodyne_kernel(p, d);
    std::vector<int> cut;
    for (std::size_t m = 0; m < state.mode_count(); ++m)
        if (m != mode) cut.push_back(state.cutoffs()[m]);
    if (cut.empty()) cut.push_back(1);  // fully measured: keep a scalar slot
    FockState out(cut);
    const std::size_t s = state.stride(mode);
    const std::size_t block = static_cast<std::size_t>(d) * s;
    const std::size_t total = state.amplitudes().size();
    std::size_t w = 0;
    for (std::size_t hi = 0; hi < total; hi += block)
        for (std::size_t lo = 0; lo < s; ++lo, ++w) {
            cplx acc = 0.0;
            for (int n = 0; n < d; ++n)
                acc += kernel[static_cast<std::size_t>(n)] * state.amplitudes()[hi + static_cast<std::size_t>(n) * s + lo];
            out.amplitudes()[w] = acc;
        }
    out.set_truncation_error(state.truncation_error());
    return {out, out.norm_squared()};
}

// Project one mode onto Fock |n>; returns the reduced state and the outcome
// probability.
inline std::pair<FockState, double> project_fock(const FockState& state, std::size_t mode,
                                                 int n) {
    if (mode >= state.mode_count()) throw InvalidMode("projection mode out of range");
    const int d = state.cutoffs()[mode];
    if (n < 0 || n >= d) throw CutoffTooSmall("projection occupation exceeds cutoff");
    std::vector<int> cut;
    for (std::size_t m = 0; m < state.mode_count(); ++m)
        if (m != mode) cut.push_back(state.cutoffs()[m]);
    if (cut.empty()) cut.push_back(1);
    FockState out(cut);
    const std::size_t s = state.stride(mode);
    const std::size_t block = static_cast<std::size_t>(d) * s;
    const std::size_t total = state.amplitudes().size();
    std::size_t w = 0;
    for (std::size_t hi = 0; hi < total; hi += block)
        for (std::size_t lo = 0; lo < s; ++lo, ++w)
            out.amplitudes()[w] = state.amplitudes()[hi + static_cast<std::size_t>(n) * s + lo];
    out.set_truncation_error(state.truncation_error());
    return {out, out.norm_squared()};
}

}  // namespace catgkp
