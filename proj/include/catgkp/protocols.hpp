#pragma once

// Executable realizations of the protocol family: the hybrid-qubit generator
// (exact and approximate-ancilla paths), the breeding recursion, the hybrid
// qutrit circuit, and the equal-amplitude (T = 1/3) variant.
//
// Circuits that carry discrete photon-number content alongside coherent
// superpositions use LabeledState: a map from occupation labels on discrete
// modes to exact SuperposedStates on the remaining (coherent) modes.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "coherent.hpp"
#include "errors.hpp"
#include "fock.hpp"

namespace catgkp {

// ---------------------------------------------------------------------------
// Named single-mode states of the protocol family (unnormalized unless noted).
// ---------------------------------------------------------------------------

// |alpha> - |-alpha> with unit weights (small-amplitude single-photon
// surrogate; normalize with cat_norm for the physical cat state).
inline SuperposedState raw_odd_cat(double alpha) {
    return SuperposedState(1, {{1.0, {alpha}}, {-1.0, {-alpha}}});
}

// First-generation logical zero: |3b> - 2|b> + |-b>, b = alpha/sqrt(2).
inline SuperposedState logical_zero(double alpha) {
    const double b = alpha / std::sqrt(2.0);
    return SuperposedState(1, {{1.0, {3 * b}}, {-2.0, {b}}, {1.0, {-b}}});
}

// First-generation logical one: |2b> - |0>, b = alpha/sqrt(2).
inline SuperposedState logical_one(double alpha) {
    const double b = alpha / std::sqrt(2.0);
    return SuperposedState(1, {{1.0, {2 * b}}, {-1.0, {0.0}}});
}

// Second-generation logical zero in its direct six-term form:
// |3a/2 + r> - |3a/2 - r> - 2|a/2 + r> + 2|a/2 - r> + |-a/2 + r> - |-a/2 - r>,
// r = alpha/sqrt(2).
inline SuperposedState bred_logical_zero2(double alpha) {
    const double r = alpha / std::sqrt(2.0);
    const double a = alpha;
    return SuperposedState(1, {{1.0, {1.5 * a + r}},
                               {-1.0, {1.5 * a - r}},
                               {-2.0, {0.5 * a + r}},
                               {2.0, {0.5 * a - r}},
                               {1.0, {-0.5 * a + r}},
                               {-1.0, {-0.5 * a - r}}});
}

// Second-generation logical one: |3a/2> - 2|a/2> + |-a/2>.
inline SuperposedState bred_logical_one2(double alpha) {
    return SuperposedState(1, {{1.0, {1.5 * alpha}}, {-2.0, {0.5 * alpha}}, {1.0, {-0.5 * alpha}}});
}

// Qutrit companion states.
inline SuperposedState qutrit_one(double alpha) {
    const double r = alpha / std::sqrt(2.0);
    return SuperposedState(1, {{1.0, {alpha + r}}, {-1.0, {alpha - r}}, {-1.0, {r}}, {1.0, {-r}}});
}

inline SuperposedState qutrit_two(double alpha) {
    return SuperposedState(1, {{1.0, {alpha}}, {-1.0, {0.0}}});
}

// ---------------------------------------------------------------------------
// LabeledState
// ---------------------------------------------------------------------------

class LabeledState {
public:
    LabeledState(std::vector<int> coherent_modes, std::vector<int> label_modes)
        : coherent_ids_(std::move(coherent_modes)), label_ids_(std::move(label_modes)) {}

    const std::vector<int>& coherent_ids() const { return coherent_ids_; }
    const std::vector<int>& label_ids() const { return label_ids_; }
    const std::map<std::vector<int>, SuperposedState>& components() const { return components_; }

    bool has_coherent(int mode_id) const { return find(coherent_ids_, mode_id) >= 0; }
    bool has_label(int mode_id) const { return find(label_ids_, mode_id) >= 0; }

    std::size_t coherent_index(int mode_id) const {
        const int k = find(coherent_ids_, mode_id);
        if (k < 0) throw InvalidMode("mode is not a coherent mode of this state");
        return static_cast<std::size_t>(k);
    }

    std::size_t label_index(int mode_id) const {
        const int k = find(label_ids_, mode_id);
        if (k < 0) throw InvalidMode("mode is not a labeled mode of this state");
        return static_cast<std::size_t>(k);
    }

    void add_component(std::vector<int> labels, const SuperposedState& part) {
        if (labels.size() != label_ids_.size())
            throw ModeMismatch("label vector length must match labeled mode count");
        if (part.mode_count() != coherent_ids_.size())
            throw ModeMismatch("component mode count must match coherent mode count");
        auto [it, fresh] = components_.try_emplace(std::move(labels), part);
        if (!fresh)
            for (const auto& t : part.terms()) it->second.add_term(t.weight, t.amplitudes);
    }

    double norm_squared() const {
        double s = 0.0;
        for (const auto& [labels, part] : components_) s += catgkp::norm_squared(part);
        return s;
    }

    double max_amplitude() const {
        double m = 0.0;
        for (const auto& [labels, part] : components_) m = std::max(m, part.max_amplitude());
        return m;
    }

    int max_label() const {
        int m = 0;
        for (const auto& [labels, part] : components_)
            for (int n : labels) m = std::max(m, n);
        return m;
    }

    LabeledState& canonicalize_components(double merge_tol = kMergeTolerance,
                                          double prune_tol = kPruneTolerance) {
        for (auto& [labels, part] : components_) part = canonicalize(part, merge_tol, prune_tol);
        return *this;
    }

private:
    static int find(const std::vector<int>& v, int x) {
        for (std::size_t k = 0; k < v.size(); ++k)
            if (v[k] == x) return static_cast<int>(k);
        return -1;
    }

    std::vector<int> coherent_ids_;
    std::vector<int> label_ids_;
    std::map<std::vector<int>, SuperposedState> components_;
};

inline cplx inner_product(const LabeledState& a, const LabeledState& b) {
    if (a.coherent_ids() != b.coherent_ids() || a.label_ids() != b.label_ids())
        throw ModeMismatch("labeled inner product requires identical mode layout");
    cplx s = 0.0;
    for (const auto& [labels, part] : a.components()) {
        const auto it = b.components().find(labels);
        if (it != b.components().end()) s += inner_product(part, it->second);
    }
    return s;
}

inline double fidelity(const LabeledState& a, const LabeledState& b) {
    const double na = a.norm_squared(), nb = b.norm_squared();
    if (na <= 0.0 || nb <= 0.0) throw DegenerateState("fidelity of a null state");
    return std::norm(inner_product(a, b)) / (na * nb);
}

struct LabeledConditional {
    LabeledState state;
    double density = 0.0;
};

inline LabeledState displace(const LabeledState& state, int mode_id, cplx alpha) {
    if (state.has_label(mode_id))
        throw InvalidMode("displacement on a photon-labeled mode is not supported");
    const std::size_t k = state.coherent_index(mode_id);
    LabeledState out(state.coherent_ids(), state.label_ids());
    for (const auto& [labels, part] : state.components())
        out.add_component(labels, displace(part, k, alpha));
    return out;
}

inline LabeledState beam_split(const LabeledState& state, int mode_i, int mode_j,
                               double transmittance) {
    if (mode_i == mode_j) throw InvalidMode("beam splitter modes must be distinct");
    if (!(transmittance > 0.0) || !(transmittance < 1.0))
        throw InvalidTransmittance("transmittance must lie in (0, 1)");
    const bool ci = state.has_coherent(mode_i), cj = state.has_coherent(mode_j);
    const bool li = state.has_label(mode_i), lj = state.has_label(mode_j);
    if (!(ci || li) || !(cj || lj)) throw InvalidMode("beam splitter mode out of range");

    LabeledState out(state.coherent_ids(), state.label_ids());
    if (ci && cj) {
        const std::size_t i = state.coherent_index(mode_i), j = state.coherent_index(mode_j);
        for (const auto& [labels, part] : state.components())
            out.add_component(labels, beam_split(part, i, j, transmittance));
        return out;
    }
    if (li && lj) {
        const std::size_t i = state.label_index(mode_i), j = state.label_index(mode_j);
        const double theta =
            std::atan2(std::sqrt(1.0 - transmittance), std::sqrt(transmittance));
        for (const auto& [labels, part] : state.components()) {
            const int ni = labels[i], nj = labels[j];
            const int total_n = ni + nj;
            const Eigen::MatrixXd u = detail::beam_splitter_block(total_n, 0, total_n, theta);
            for (int k = 0; k <= total_n; ++k) {
                const double coef = u(k, nj);
                if (coef == 0.0) continue;
                std::vector<int> new_labels = labels;
                new_labels[i] = total_n - k;
                new_labels[j] = k;
                SuperposedState scaled = part;
                scaled.scale(coef);
                out.add_component(std::move(new_labels), scaled);
            }
        }
        return out;
    }
    throw InvalidMode("beam splitter cannot mix a coherent mode with a labeled mode here");
}

namespace detail {

inline std::vector<int> erase_at(const std::vector<int>& v, std::size_t k) {
    std::vector<int> out;
    out.reserve(v.size() - 1);
    for (std::size_t m = 0; m < v.size(); ++m)
        if (m != k) out.push_back(v[m]);
    return out;
}

}  // namespace detail

inline LabeledConditional homodyne_project(const LabeledState& state, int mode_id, double p) {
    const std::size_t k = state.coherent_index(mode_id);
    LabeledState out(detail::erase_at(state.coherent_ids(), k), state.label_ids());
    for (const auto& [labels, part] : state.components())
        out.add_component(labels, homodyne_project(part, k, p).state);
    return LabeledConditional{out, out.norm_squared()};
}

// Fock projection on either kind of mode: a labeled mode filters components;
// a coherent mode applies the analytic <n|gamma> kernel.
inline LabeledConditional fock_project(const LabeledState& state, int mode_id, int n) {
    if (state.has_label(mode_id)) {
        const std::size_t k = state.label_index(mode_id);
        LabeledState out(state.coherent_ids(), detail::erase_at(state.label_ids(), k));
        for (const auto& [labels, part] : state.components()) {
            if (labels[k] != n) continue;
            std::vector<int> rest;
            rest.reserve(labels.size() - 1);
            for (std::size_t m = 0; m < labels.size(); ++m)
                if (m != k) rest.push_back(labels[m]);
            out.add_component(std::move(rest), part);
        }
        return LabeledConditional{out, out.norm_squared()};
    }
    const std::size_t k = state.coherent_index(mode_id);
    LabeledState out(detail::erase_at(state.coherent_ids(), k), state.label_ids());
    for (const auto& [labels, part] : state.components())
        out.add_component(labels, project_fock(part, k, static_cast<unsigned>(n)).state);
    return LabeledConditional{out, out.norm_squared()};
}

// Dense numeric conversion.  Modes are ordered by ascending original mode id;
// labeled modes become basis indices.
inline FockState to_fock(const LabeledState& state, int cutoff,
                         double max_truncation_error = 1e-6) {
    std::vector<int> ids = state.coherent_ids();
    ids.insert(ids.end(), state.label_ids().begin(), state.label_ids().end());
    std::sort(ids.begin(), ids.end());
    const std::size_t modes = ids.size();
    FockState out(std::vector<int>(modes, cutoff));

    double exact = 0.0;
    for (const auto& [labels, part] : state.components()) {
        exact += catgkp::norm_squared(part);
        const FockState dense = to_fock(part, std::vector<int>(part.mode_count(), cutoff), 1.0);
        // Scatter the coherent tensor into the full index space.
        std::vector<std::size_t> strides;  // stride of each coherent mode in `out`
        std::size_t base = 0;
        for (std::size_t m = 0; m < modes; ++m) {
            const int id = ids[m];
            if (state.has_coherent(id)) {
                strides.push_back(out.stride(m));
            } else {
                const int n = labels[state.label_index(id)];
                if (n >= cutoff) throw CutoffTooSmall("label occupation exceeds cutoff");
                base += static_cast<std::size_t>(n) * out.stride(m);
            }
        }
        const std::size_t cmodes = strides.size();
        std::vector<int> digit(cmodes, 0);
        for (std::size_t flat = 0; flat < dense.amplitudes().size(); ++flat) {
            std::size_t target = base;
            for (std::size_t m = 0; m < cmodes; ++m)
                target += static_cast<std::size_t>(digit[m]) * strides[m];
            out.amplitudes()[target] += dense.amplitudes()[flat];
            for (std::size_t m = cmodes; m-- > 0;) {
                if (++digit[m] < cutoff) break;
                digit[m] = 0;
            }
        }
    }
    if (exact > kZeroDensityThreshold) {
        const double err = std::max(0.0, 1.0 - out.norm_squared() / exact);
        out.set_truncation_error(err);
        if (err > max_truncation_error)
            throw CutoffTooSmall("Fock truncation error exceeds the requested bound");
    }
    return out;
}

// ---------------------------------------------------------------------------
// Hybrid generator
// ---------------------------------------------------------------------------

enum class CatWeighting {
    normalized,  // ancilla branch cat carries its physical 1/N^- normalization
    raw          // ancilla branch cat carries unit term weights
};

struct HybridOptions {
    bool approximate_ancilla = true;
    // The input-displacement stage belongs to the cat-state protocol; the
    // breeding variants interfere an already-bred state without it.
    bool displace_input = true;
    CatWeighting ancilla_weighting = CatWeighting::normalized;
};

// Conditional output of a hybrid-entanglement circuit at one homodyne outcome.
struct HybridOutput {
    // Ancilla Fock index -> unnormalized component on the surviving mode(s).
    std::map<int, SuperposedState> branches;
    // Squared norm of the full conditional state (probability density at the
    // homodyne outcome, times any discrete-outcome probability).
    double density = 0.0;
    // Exact-ancilla path: the joint (logical, ancilla) coherent state.
    std::optional<SuperposedState> joint;
    // Approximate path: the conditional labeled state the branches came from.
    std::optional<LabeledState> labeled;
};

inline double branch_norm_squared(const std::map<int, SuperposedState>& branches) {
    double s = 0.0;
    for (const auto& [n, part] : branches) s += norm_squared(part);
    return s;
}

inline cplx branch_overlap(const std::map<int, SuperposedState>& a,
                           const std::map<int, SuperposedState>& b) {
    cplx s = 0.0;
    for (const auto& [n, part] : a) {
        const auto it = b.find(n);
        if (it != b.end()) s += inner_product(part, it->second);
    }
    return s;
}

inline double branch_fidelity(const std::map<int, SuperposedState>& a,
                              const std::map<int, SuperposedState>& b) {
    const double na = branch_norm_squared(a), nb = branch_norm_squared(b);
    if (na <= 0.0 || nb <= 0.0) throw DegenerateState("fidelity of a null branch map");
    return std::norm(branch_overlap(a, b)) / (na * nb);
}

// Three-mode hybrid circuit at homodyne outcome p.
//   mode 0: input1 (default: normalized odd cat of amplitude alpha)
//   mode 1: normalized odd cat of amplitude sqrt(2) alpha
//   mode 2: vacuum
// Elements: B(2,1; T=1/2) [so |g>_1|0>_2 -> |g/sqrt2>|g/sqrt2>], optionally
// D(0, alpha), B(0,1; T=1/2), homodyne on mode 1.  The approximate path
// replaces the post-split modes (1,2) by the two-branch ancilla
// (cat_alpha |0> + |0> |1>)/sqrt(2) with the Fock content carried as a label.
inline HybridOutput hybrid_generate(const SuperposedState& input1, double alpha, double p,
                                    const HybridOptions& options = {}) {
    if (!(alpha > 0.0)) throw DegenerateState("hybrid generation requires alpha > 0");
    if (input1.mode_count() != 1) throw NotSingleMode("input must be a single-mode state");

    HybridOutput out;
    const double inv_sq2 = 1.0 / std::sqrt(2.0);
    if (options.approximate_ancilla) {
        const double w0 = options.ancilla_weighting == CatWeighting::raw
                              ? 1.0
                              : 1.0 / cat_norm(alpha, Parity::odd);
        SuperposedState anc0 = raw_odd_cat(alpha);
        anc0.scale(w0);
        LabeledState st({0, 1}, {2});
        SuperposedState part0 = tensor(input1, anc0);
        part0.scale(inv_sq2);
        SuperposedState part1 = tensor(input1, SuperposedState::vacuum(1));
        part1.scale(inv_sq2);
        st.add_component({0}, part0);
        st.add_component({1}, part1);
        if (options.displace_input) st = displace(st, 0, alpha);
        st = beam_split(st, 0, 1, 0.5);
        LabeledConditional cond = homodyne_project(st, 1, p);
        cond.state.canonicalize_components();
        out.density = cond.density;
        out.labeled = cond.state;
        for (const auto& [labels, part] : cond.state.components()) out.branches.emplace(labels[0], part);
    } else {
        SuperposedState st =
            tensor(tensor(input1, make_cat(std::sqrt(2.0) * alpha, Parity::odd)),
                   SuperposedState::vacuum(1));
        st = beam_split(st, 2, 1, 0.5);
        if (options.displace_input) st = displace(st, 0, alpha);
        st = beam_split(st, 0, 1, 0.5);
        const ConditionalOutput cond = homodyne_project(st, 1, p);
        out.density = cond.density_amplitude_norm2;
        out.joint = canonicalize(cond.state);
        for (int n : {0, 1}) out.branches.emplace(n, canonicalize(project_fock(cond.state, 1, n).state));
    }
    return out;
}

inline HybridOutput hybrid_generate(double alpha, double p, const HybridOptions& options = {}) {
    return hybrid_generate(make_cat(alpha, Parity::odd), alpha, p, options);
}

// ---------------------------------------------------------------------------
// Breeding
// ---------------------------------------------------------------------------

// Normalized j-th generation bred logical-zero state.  j = 1 is the direct
// three-term state; j >= 2 interferes the previous generation with a fresh
// ancilla (no displacement stage) and keeps the label-0 branch at p = 0.
// Depths beyond 2 extrapolate the same recursion.
inline SuperposedState bred_input(int j, double alpha) {
    if (j < 1) throw Error("breeding depth must be >= 1");
    if (!(alpha > 0.0)) throw DegenerateState("breeding requires alpha > 0");
    if (j == 1) return normalized(logical_zero(alpha));
    const SuperposedState prev = bred_input(j - 1, alpha);
    HybridOptions options;
    options.approximate_ancilla = true;
    options.displace_input = false;
    options.ancilla_weighting = CatWeighting::raw;
    const HybridOutput out = hybrid_generate(prev, alpha, 0.0, options);
    return normalized(out.branches.at(0));
}

// Analytic two-branch conditional state at outcome p for the default cat
// input (raw ancilla weighting), up to the common Gaussian envelope:
//   branch 0: e^{i a p} (|3b> + |-b> - 2 cos(2 a p) |b>)
//   branch 1: e^{i a p} (e^{i a p} |2b> - e^{-i a p} |0>)
inline std::map<int, SuperposedState> conditional_branch_targets(double alpha, double p) {
    const double b = alpha / std::sqrt(2.0);
    const cplx ph = std::exp(cplx(0.0, alpha * p));
    SuperposedState br0(1);
    br0.add_term(ph, {3 * b});
    br0.add_term(ph, {-b});
    br0.add_term(-2.0 * std::cos(2.0 * alpha * p) * ph, {b});
    SuperposedState br1(1);
    br1.add_term(ph * ph, {2 * b});
    br1.add_term(-1.0, {0.0});
    return {{0, br0}, {1, br1}};
}

// ---------------------------------------------------------------------------
// Qutrit generator
// ---------------------------------------------------------------------------

// Four-mode circuit producing a hybrid qutrit:
//   mode 0: logical content of the first-stage hybrid state
//   mode 1: its photon-number mode (labels {0,1})
//   mode 2: single-photon surrogate (|alpha> - |-alpha>) / vacuum
//   mode 3: photon-number mode of the path-entangled ancilla (labels {0,1})
// Elements: B(0,2; 1/2), homodyne(mode 2, p), B(3,1; 1/2) on the labeled
// pair, Fock projection of mode 1 onto |0>.  Branches over the mode-3 label.
inline HybridOutput qutrit_generate(double alpha, double p) {
    if (!(alpha > 0.0)) throw DegenerateState("qutrit generation requires alpha > 0");
    const double inv_sq2 = 1.0 / std::sqrt(2.0);
    LabeledState st({0, 2}, {1, 3});
    const SuperposedState z0 = logical_zero(alpha);
    const SuperposedState z1 = logical_one(alpha);
    const SuperposedState photon = raw_odd_cat(alpha);
    const SuperposedState vac = SuperposedState::vacuum(1);
    const auto scaled = [inv_sq2](SuperposedState s) {
        s.scale(inv_sq2);
        return s;
    };
    st.add_component({0, 0}, scaled(tensor(z0, photon)));
    st.add_component({0, 1}, scaled(tensor(z0, vac)));
    st.add_component({1, 0}, scaled(tensor(z1, photon)));
    st.add_component({1, 1}, scaled(tensor(z1, vac)));

    st = beam_split(st, 0, 2, 0.5);
    LabeledConditional after_homodyne = homodyne_project(st, 2, p);
    LabeledState mixed = beam_split(after_homodyne.state, 3, 1, 0.5);
    LabeledConditional cond = fock_project(mixed, 1, 0);
    cond.state.canonicalize_components();

    HybridOutput out;
    out.density = cond.density;
    out.labeled = cond.state;
    for (const auto& [labels, part] : cond.state.components()) out.branches.emplace(labels[0], part);
    return out;
}

// Reference branch states of the qutrit circuit at p = 0 (unnormalized; the
// circuit produces branches 1 and 2 scaled by 1/sqrt(2) relative to these).
inline std::map<int, SuperposedState> qutrit_branch_targets(double alpha) {
    SuperposedState one = bred_logical_one2(alpha);
    const SuperposedState companion = qutrit_one(alpha);
    for (const auto& t : companion.terms()) one.add_term(t.weight, t.amplitudes);
    return {{0, bred_logical_zero2(alpha)}, {1, one}, {2, qutrit_two(alpha)}};
}

// Numeric (true single-photon ancilla) variant of the qutrit circuit for
// cross-checking: mode 2 carries a genuine Fock |1> instead of the
// small-amplitude odd-cat surrogate.  Returns branch Fock vectors over the
// mode-3 photon number together with the conditional density.
inline std::pair<std::map<int, FockState>, double> qutrit_generate_fock(double alpha, double p,
                                                                        int cutoff) {
    if (!(alpha > 0.0)) throw DegenerateState("qutrit generation requires alpha > 0");
    const std::vector<int> cuts{cutoff, 4, cutoff, 4};
    const double inv_sq2 = 1.0 / std::sqrt(2.0);
    FockState psi(cuts);
    const auto accumulate = [&psi](const FockState& term, double w) {
        for (std::size_t k = 0; k < psi.amplitudes().size(); ++k)
            psi.amplitudes()[k] += w * term.amplitudes()[k];
    };
    const std::vector<int> c1{cutoff};
    const FockState z0 = to_fock(logical_zero(alpha), c1, 1.0);
    const FockState z1 = to_fock(logical_one(alpha), c1, 1.0);
    const FockState one_c = FockState::basis(c1, {1});
    const FockState vac_c = FockState::basis(c1, {0});
    const FockState e0 = FockState::basis({4}, {0});
    const FockState e1 = FockState::basis({4}, {1});
    accumulate(tensor(tensor(z0, e0), tensor(one_c, e0)), inv_sq2);
    accumulate(tensor(tensor(z0, e0), tensor(vac_c, e1)), inv_sq2);
    accumulate(tensor(tensor(z1, e1), tensor(one_c, e0)), inv_sq2);
    accumulate(tensor(tensor(z1, e1), tensor(vac_c, e1)), inv_sq2);

    FockState mixed = apply_beam_splitter(psi, 0, 2, 0.5);
    auto [after_h, dens_h] = project_quadrature(mixed, 2, p);  // modes now (0, 1, 3)
    FockState mixed2 = apply_beam_splitter(after_h, 2, 1, 0.5);
    // Match the labeled-engine port order (mode 3 on the u-port): the block
    // convention above rotates (u=first, v=second) = (axis 2, axis 1).
    auto [cond, prob] = project_fock(mixed2, 1, 0);  // modes now (0, 3)
    std::map<int, FockState> branches;
    for (int n = 0; n <= 2; ++n) branches.emplace(n, project_fock(cond, 1, n).first);
    return {std::move(branches), cond.norm_squared()};
}

// ---------------------------------------------------------------------------
// Equal-amplitude (T = 1/3) variant
// ---------------------------------------------------------------------------

// Three-mode circuit with equal input cats of amplitude A:
// B(2,1; 1/2), D(0, A), B(0,1; T=1/3), homodyne(mode 1, p).  The approximate
// path replaces the post-split modes (1,2) with the two-branch ancilla at
// amplitude A/sqrt(2).
inline HybridOutput equal_amplitude_generate(double amplitude, double p,
                                             const HybridOptions& options = {}) {
    if (!(amplitude > 0.0)) throw DegenerateState("equal-amplitude generation requires A > 0");
    const double a_anc = amplitude / std::sqrt(2.0);
    const double inv_sq2 = 1.0 / std::sqrt(2.0);
    HybridOutput out;
    if (options.approximate_ancilla) {
        const double w0 = options.ancilla_weighting == CatWeighting::raw
                              ? 1.0
                              : 1.0 / cat_norm(a_anc, Parity::odd);
        SuperposedState anc0 = raw_odd_cat(a_anc);
        anc0.scale(w0);
        const SuperposedState input1 = make_cat(amplitude, Parity::odd);
        LabeledState st({0, 1}, {2});
        SuperposedState part0 = tensor(input1, anc0);
        part0.scale(inv_sq2);
        SuperposedState part1 = tensor(input1, SuperposedState::vacuum(1));
        part1.scale(inv_sq2);
        st.add_component({0}, part0);
        st.add_component({1}, part1);
        st = displace(st, 0, amplitude);
        st = beam_split(st, 0, 1, 1.0 / 3.0);
        LabeledConditional cond = homodyne_project(st, 1, p);
        cond.state.canonicalize_components();
        out.density = cond.density;
        out.labeled = cond.state;
        for (const auto& [labels, part] : cond.state.components()) out.branches.emplace(labels[0], part);
    } else {
        SuperposedState st = tensor(tensor(make_cat(amplitude, Parity::odd),
                                           make_cat(amplitude, Parity::odd)),
                                    SuperposedState::vacuum(1));
        st = beam_split(st, 2, 1, 0.5);
        st = displace(st, 0, amplitude);
        st = beam_split(st, 0, 1, 1.0 / 3.0);
        const ConditionalOutput cond = homodyne_project(st, 1, p);
        out.density = cond.density_amplitude_norm2;
        out.joint = canonicalize(cond.state);
        for (int n : {0, 1}) out.branches.emplace(n, canonicalize(project_fock(cond.state, 1, n).state));
    }
    return out;
}

// Reference branches of the equal-amplitude circuit at p = 0:
//   branch 0: |sqrt(3) A> - 2|A/sqrt(3)> + |-A/sqrt(3)>
//   branch 1: |2A/sqrt(3)> - |0>
inline std::map<int, SuperposedState> equal_amplitude_targets(double amplitude) {
    const double s3 = std::sqrt(3.0);
    SuperposedState br0(1, {{1.0, {s3 * amplitude}},
                            {-2.0, {amplitude / s3}},
                            {1.0, {-amplitude / s3}}});
    SuperposedState br1(1, {{1.0, {2.0 * amplitude / s3}}, {-1.0, {0.0}}});
    return {{0, br0}, {1, br1}};
}

// Reference joint state of the exact hybrid circuit at p = 0:
// (|3b> - |b>) |alpha>  -  (|b> - |-b>) |-alpha>, b = alpha/sqrt(2).
inline SuperposedState hybrid_joint_target(double alpha) {
    const double b = alpha / std::sqrt(2.0);
    return SuperposedState(2, {{1.0, {3 * b, alpha}},
                               {-1.0, {b, alpha}},
                               {-1.0, {b, -alpha}},
                               {1.0, {-b, -alpha}}});
}

// Reference branches of the approximate hybrid circuit at p = 0.
inline std::map<int, SuperposedState> hybrid_branch_targets(double alpha) {
    return {{0, logical_zero(alpha)}, {1, logical_one(alpha)}};
}

}  // namespace catgkp
