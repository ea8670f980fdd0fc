// Unit tests for the analysis layer: closed-form and numeric fidelities, the
// optimal working amplitude, the acceptance-window trade-off, approximation
// validity and parity spectra.  Golden numbers were frozen from an
// independent high-precision prototype.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "catgkp/analysis.hpp"
#include "catgkp/coherent.hpp"
#include "catgkp/fock.hpp"
#include "catgkp/protocols.hpp"
#include "catgkp/quadrature.hpp"

using namespace catgkp;

TEST_CASE("closed-form fidelity reproduces the golden values") {
    REQUIRE(closed_form_fidelity(0.455) == Catch::Approx(0.964023762450419).epsilon(1e-12));
    REQUIRE(closed_form_fidelity(0.1) == Catch::Approx(0.63562637134474).epsilon(1e-9));
    REQUIRE(closed_form_fidelity(0.3) == Catch::Approx(0.91761712631306).epsilon(1e-9));
    REQUIRE(closed_form_fidelity(0.7) == Catch::Approx(0.88769477452561).epsilon(1e-9));
    REQUIRE(closed_form_fidelity(1.0) == Catch::Approx(0.63896507041295).epsilon(1e-9));
    REQUIRE(closed_form_fidelity(1.3) == Catch::Approx(0.34544381440701).epsilon(1e-9));
    // Cancellation-free small-alpha evaluation: F -> 0.4 (1 + 6 a + O(a^2)).
    REQUIRE(closed_form_fidelity(0.001) == Catch::Approx(0.402401104123).epsilon(1e-9));
    // The N0 difference is an O(alpha^4) cancellation of O(alpha^2) terms, so
    // the formula's conditioning is ~eps/alpha^2; 1e-5 keeps that negligible.
    REQUIRE(closed_form_fidelity(1e-5) == Catch::Approx(0.4).margin(1e-4));
    REQUIRE((closed_form_fidelity(1e-4) - 0.4) / 1e-4 == Catch::Approx(2.4).margin(1e-3));
    REQUIRE_THROWS_AS(closed_form_fidelity(0.0), DegenerateState);
}

TEST_CASE("closed form equals the circuit-level fidelity") {
    for (double a : {0.1, 0.3, 0.455, 0.7, 1.0, 1.4}) {
        REQUIRE(hybrid_fidelity_coherent(a) ==
                Catch::Approx(closed_form_fidelity(a)).epsilon(1e-10));
    }
    for (double a : {0.3, 0.455, 1.0}) {
        REQUIRE(hybrid_fidelity_fock(a) ==
                Catch::Approx(closed_form_fidelity(a)).epsilon(1e-8));
    }
}

TEST_CASE("single-photon fidelity of the odd cat") {
    REQUIRE(single_photon_fidelity(0.455) == Catch::Approx(0.992892332150709).epsilon(1e-12));
    REQUIRE(single_photon_fidelity(0.2) == Catch::Approx(0.999733383102715).epsilon(1e-12));
    REQUIRE(single_photon_fidelity(0.8) == Catch::Approx(0.934860351094004).epsilon(1e-12));
    // Cross-check against a direct Fock projection of the normalized cat.
    const double a = 1.0;
    const double projected = project_fock(make_cat(a, Parity::odd), 0, 1).density_amplitude_norm2;
    REQUIRE(single_photon_fidelity(a) == Catch::Approx(projected).epsilon(1e-10));
    REQUIRE_THROWS_AS(single_photon_fidelity(0.0), DegenerateState);
}

TEST_CASE("optimal amplitude search lands on the golden maximum") {
    const OptimalAlpha best = optimal_alpha();
    REQUIRE(best.alpha_star == Catch::Approx(0.4546514).margin(5e-6));
    REQUIRE(best.fidelity_star == Catch::Approx(0.964023950692).epsilon(1e-9));

    // Halving the bracket from either side must land on the same maximum.
    const OptimalAlpha narrow = optimal_alpha(0.3, 0.7);
    REQUIRE(std::abs(narrow.alpha_star - best.alpha_star) < 1e-5);

    // Degenerate single-point interval.
    const OptimalAlpha point = optimal_alpha(0.3, 0.3);
    REQUIRE(point.alpha_star == Catch::Approx(0.3));
    REQUIRE(point.fidelity_star == Catch::Approx(closed_form_fidelity(0.3)));

    REQUIRE_THROWS_AS(optimal_alpha(0.0, 1.0), Error);
    REQUIRE_THROWS_AS(optimal_alpha(0.5, 2.5), Error);
}

TEST_CASE("fidelity sweeps emit the requested grid") {
    const auto records = sweep_fidelity(0.05, 1.5, 0.005);
    REQUIRE(records.size() == 291);
    REQUIRE(records.front().parameter == Catch::Approx(0.05));
    REQUIRE(records.back().parameter == Catch::Approx(1.5));
    for (const auto& rec : records) {
        REQUIRE(rec.fidelity == Catch::Approx(closed_form_fidelity(rec.parameter)));
        REQUIRE(rec.diagnostics.count("single_photon_fidelity") == 1);
        REQUIRE_FALSE(rec.probability.has_value());
    }
    REQUIRE_THROWS_AS(sweep_fidelity(0.5, 0.4, 0.1), Error);
    REQUIRE_THROWS_AS(sweep_fidelity(0.1, 0.5, 0.0), Error);
}

TEST_CASE("trade-off curve reproduces the golden operating points") {
    const TradeoffCurve curve(0.455, 8.0);
    REQUIRE(curve.total_density() == Catch::Approx(0.839032098).epsilon(1e-6));

    const SweepRecord half = curve.at(0.5);
    REQUIRE(half.fidelity == Catch::Approx(0.915642846).epsilon(1e-7));
    REQUIRE(*half.probability == Catch::Approx(0.345607137).epsilon(1e-7));

    const SweepRecord at_f = curve.solve_fidelity(0.99);
    REQUIRE(at_f.parameter == Catch::Approx(0.172205).margin(2e-5));
    REQUIRE(*at_f.probability == Catch::Approx(0.125880565).margin(2e-5));

    const SweepRecord at_p = curve.solve_probability(0.10);
    REQUIRE(at_p.fidelity == Catch::Approx(0.993735816).margin(2e-6));
}

TEST_CASE("trade-off fidelity falls and probability rises with the window") {
    const TradeoffCurve curve(0.455, 8.0);
    double prev_f = 2.0, prev_p = -1.0;
    for (int k = 1; k <= 12; ++k) {
        const double v = 0.25 * k;  // 0.25 .. 3.0
        const SweepRecord rec = curve.at(v);
        REQUIRE(rec.fidelity < prev_f + 1e-12);
        REQUIRE(*rec.probability > prev_p - 1e-12);
        prev_f = rec.fidelity;
        prev_p = *rec.probability;
    }
    // The full-domain window accepts everything.
    REQUIRE(*curve.at(8.0).probability == Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("trade-off results are insensitive to the domain bound") {
    const SweepRecord a = tradeoff(0.455, 0.5, 8.0);
    const SweepRecord b = tradeoff(0.455, 0.5, 16.0);
    REQUIRE(a.fidelity == Catch::Approx(b.fidelity).epsilon(1e-8));
    REQUIRE(*a.probability == Catch::Approx(*b.probability).epsilon(1e-8));
}

TEST_CASE("windowed average equals the density-weighted pointwise fidelity") {
    const TradeoffCurve curve(0.455, 8.0);
    const double v = 0.7;
    const IntegralResult num = integrate_adaptive(
        [&](double p) { return curve.pointwise_fidelity(p) * curve.density(p); }, -v, v, 1e-12);
    const IntegralResult den =
        integrate_adaptive([&](double p) { return curve.density(p); }, -v, v, 1e-12);
    REQUIRE(curve.at(v).fidelity == Catch::Approx(num.value / den.value).epsilon(1e-10));
}

TEST_CASE("trade-off domain errors are reported") {
    const TradeoffCurve curve(0.455, 8.0);
    REQUIRE_THROWS_AS(curve.at(8.5), WindowExceedsDomain);
    REQUIRE_THROWS_AS(curve.at(0.0), Error);
    REQUIRE_THROWS_AS(curve.solve_fidelity(1.5), ConvergenceFailure);
    REQUIRE_THROWS_AS(TradeoffCurve(0.0), DegenerateState);
    REQUIRE_THROWS_AS(TradeoffCurve(0.455, -1.0), Error);
}

TEST_CASE("approximation validity matches the golden values and the Fock engine") {
    REQUIRE(approximation_validity(0.455) == Catch::Approx(0.975464345839741).epsilon(1e-12));
    REQUIRE(approximation_validity(0.3) == Catch::Approx(0.995291869875778).epsilon(1e-12));
    REQUIRE(approximation_validity(0.2) == Catch::Approx(0.999067326673774).epsilon(1e-12));
    REQUIRE(approximation_validity(0.1) == Catch::Approx(0.999941669246421).epsilon(1e-12));
    // (1 - F) / a^6 regression values.
    REQUIRE((1.0 - approximation_validity(0.05)) / std::pow(0.05, 6) ==
            Catch::Approx(233.332689).epsilon(1e-6));

    // Direct Fock-space reconstruction of the same overlap.
    for (double a : {0.2, 0.455}) {
        const int d = default_cutoff(2.0 * a + 1.0);
        const SuperposedState pair(2, {{1.0, {a, a}}, {-1.0, {-a, -a}}});
        const FockState exact = to_fock(normalized(pair), {d, d});
        FockState approx =
            to_fock(tensor(make_cat(a, Parity::odd), SuperposedState::vacuum(1)), {d, d});
        const FockState photon = tensor(FockState::basis({d}, {0}), FockState::basis({d}, {1}));
        for (std::size_t k = 0; k < approx.amplitudes().size(); ++k)
            approx.amplitudes()[k] =
                (approx.amplitudes()[k] + photon.amplitudes()[k]) / std::sqrt(2.0);
        REQUIRE(fidelity(approx, exact) == Catch::Approx(approximation_validity(a)).epsilon(1e-8));
    }
}

TEST_CASE("neglected three-photon weight scales as the sixth power") {
    const double w1 = neglected_subspace_weight(0.1);
    const double w2 = neglected_subspace_weight(0.2);
    const double slope = std::log2(w2 / w1);
    REQUIRE(slope == Catch::Approx(6.0).margin(0.3));
    // The three-photon population is exactly (14/3) a^6 e^{-2 a^2}.
    for (double a : {0.1, 0.3, 0.6}) {
        REQUIRE(neglected_subspace_weight(a) /
                    (std::pow(a, 6) * std::exp(-2.0 * a * a)) ==
                Catch::Approx(14.0 / 3.0).epsilon(1e-10));
    }
    REQUIRE_THROWS_AS(neglected_subspace_weight(0.0), DegenerateState);
}

TEST_CASE("parity spectra split photon-number weight by parity") {
    // Coherent state in the lab frame.
    const double g = 0.7;
    const ParitySpectrum coh = parity_spectrum(SuperposedState::coherent(cplx(g, 0.0)), 0.0);
    REQUIRE(coh.even_weight ==
            Catch::Approx(0.5 * (1.0 + std::exp(-2.0 * g * g))).margin(1e-10));
    REQUIRE(coh.even_weight + coh.odd_weight == Catch::Approx(1.0).margin(1e-9));

    // Vacuum is purely even.
    const ParitySpectrum vac = parity_spectrum(SuperposedState::vacuum(), 0.0);
    REQUIRE(vac.even_weight == Catch::Approx(1.0).margin(1e-12));
    REQUIRE(vac.odd_weight < 1e-12);

    REQUIRE_THROWS_AS(parity_spectrum(SuperposedState::vacuum(2), 0.0), NotSingleMode);
}

TEST_CASE("displaced frames expose the parity of the logical states") {
    for (double beta : {0.2, 0.35, 0.5}) {
        const double alpha = std::sqrt(2.0) * beta;  // so the term spacing is beta
        const ParitySpectrum one =
            parity_spectrum(normalized(logical_one(alpha)), cplx(-beta, 0.0));
        REQUIRE(one.even_weight < 1e-10);
        REQUIRE(one.odd_weight == Catch::Approx(1.0).margin(1e-9));

        const ParitySpectrum zero =
            parity_spectrum(normalized(logical_zero(alpha)), cplx(-beta, 0.0));
        REQUIRE(zero.odd_weight < 1e-10);
        REQUIRE(zero.even_weight == Catch::Approx(1.0).margin(1e-9));
    }
    // Second generation: the bred state is parity-odd in the -alpha/2 frame.
    const ParitySpectrum bred =
        parity_spectrum(normalized(bred_logical_zero2(0.9)), cplx(-0.45, 0.0));
    REQUIRE(bred.even_weight < 1e-10);
}
