#pragma once

#include <cmath>
#include <algorithm>
#include <complex>
#include <limits>
#include <vector>

namespace painleve {

// n-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendre {
    std::vector<double> x, w;
    explicit GaussLegendre(int n);
};

const GaussLegendre& gl20();

template <class F>
std::complex<double> gl_panel(F& f, double a, double b) {
    const GaussLegendre& g = gl20();
    double c = 0.5 * (a + b), h = 0.5 * (b - a);
    std::complex<double> s = 0;
    for (std::size_t i = 0; i < g.x.size(); ++i) s += g.w[i] * f(c + h * g.x[i]);
    return h * s;
}

namespace detail {
template <class F>
std::complex<double> adapt(F& f, double a, double b, std::complex<double> whole, double tol, int depth,
                           int& panels) {
    double m = 0.5 * (a + b);
    std::complex<double> l = gl_panel(f, a, m), r = gl_panel(f, m, b);
    panels += 2;
    // the roundoff floor keeps an absolute tol from forcing refinement it can never satisfy
    double floor = 64 * std::numeric_limits<double>::epsilon() * (std::abs(l) + std::abs(r));
    if (depth <= 0 || std::abs(l + r - whole) <= std::max(tol, floor)) return l + r;
    return adapt(f, a, m, l, 0.5 * tol, depth - 1, panels) + adapt(f, m, b, r, 0.5 * tol, depth - 1, panels);
}
}  // namespace detail

// Adaptive bisection with a 20-point panel; tol is absolute.
template <class F>
std::complex<double> integrate(F f, double a, double b, double tol = 1e-13, int max_depth = 40) {
    int panels = 1;
    std::complex<double> whole = gl_panel(f, a, b);
    return detail::adapt(f, a, b, whole, tol, max_depth, panels);
}

}  // namespace painleve
