#pragma once

// Numeric helpers shared by the analysis layer: composite Gauss-Legendre
// integration with panel doubling, bisection on monotone curves, and a
// golden-section refinement for one-dimensional maxima.

#include <cmath>
#include <functional>
#include <utility>

#include <boost/math/quadrature/gauss.hpp>

#include "errors.hpp"

namespace catgkp {

struct IntegralResult {
    double value = 0.0;
    int panels = 0;          // panel count of the accepted pass
    double last_change = 0;  // |value - previous pass| (convergence estimate)
};

// Integrate f over [lo, hi] with 64-point Gauss-Legendre panels, doubling the
// panel count until the result changes by less than rel_tol (relative to
// max(1, |value|)).
template <class F>
IntegralResult integrate_adaptive(F&& f, double lo, double hi, double rel_tol = 1e-10,
                                  int max_panels = 4096) {
    using rule = boost::math::quadrature::gauss<double, 64>;
    const auto pass = [&](int panels) {
        double sum = 0.0;
        const double width = (hi - lo) / panels;
        for (int k = 0; k < panels; ++k)
            sum += rule::integrate(f, lo + k * width, lo + (k + 1) * width);
        return sum;
    };
    double prev = pass(1);
    for (int panels = 2; panels <= max_panels; panels *= 2) {
        const double cur = pass(panels);
        const double change = std::abs(cur - prev);
        if (change <= rel_tol * std::max(1.0, std::abs(cur)))
            return IntegralResult{cur, panels, change};
        prev = cur;
    }
    throw ConvergenceFailure("quadrature did not converge within the panel budget");
}

// Find x in [lo, hi] with f(x) = target for monotone f (either direction),
// bisection until the bracket is narrower than xtol.
template <class F>
double bisect_to(F&& f, double target, double lo, double hi, double xtol = 1e-9) {
    double flo = f(lo) - target;
    const double fhi = f(hi) - target;
    if (flo * fhi > 0.0)
        throw ConvergenceFailure("bisection target not bracketed");
    while (hi - lo > xtol) {
        const double mid = 0.5 * (lo + hi);
        const double fmid = f(mid) - target;
        if (flo * fmid <= 0.0) {
            hi = mid;
        } else {
            lo = mid;
            flo = fmid;
        }
    }
    return 0.5 * (lo + hi);
}

// Golden-section search for the maximizer of f on [lo, hi].
template <class F>
double golden_max(F&& f, double lo, double hi, double xtol = 1e-6) {
    const double invphi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > xtol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace catgkp
