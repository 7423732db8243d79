#include "painleve/asymptotics.hpp"

#include <cmath>
#include <numbers>

#include <boost/math/tools/roots.hpp>

#include "painleve/errors.hpp"
#include "painleve/quadrature.hpp"

namespace painleve {

namespace {

constexpr double pi = std::numbers::pi;

// sqrt with arg(z) taken in [lo, lo + 2 pi)
cplx bsqrt(cplx z, double lo) {
    double a = std::arg(z);
    while (a < lo) a += 2 * pi;
    while (a >= lo + 2 * pi) a -= 2 * pi;
    return std::polar(std::sqrt(std::abs(z)), a / 2);
}

// Real root eta0 of eta^3 + C eta + q: negative for q = 1, positive for q = -1.
double real_root(double C, int q) {
    auto f = [&](double x) { return (x * x + C) * x + q; };
    double lo, hi;
    if (q > 0) {
        hi = 0;
        lo = -1;
        while (f(lo) > 0) lo *= 2;
    } else {
        lo = 0;
        hi = 1;
        while (f(hi) < 0) hi *= 2;
    }
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        double fx = f(x);
        if (fx == 0) break;
        if (fx < 0) lo = x; else hi = x;
        double d = 3 * x * x + C;
        double xn = d != 0 ? x - fx / d : 0.5 * (lo + hi);
        if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
        if (std::abs(xn - x) <= 1e-17 * std::abs(x)) {
            x = xn;
            break;
        }
        x = xn;
    }
    return x;
}

cplx polish(cplx z, double C, int q) {
    for (int i = 0; i < 3; ++i) {
        cplx d = 3.0 * z * z + C;
        if (std::abs(d) == 0) break;
        cplx dz = ((z * z + C) * z + double(q)) / d;
        if (!std::isfinite(std::abs(dz))) break;
        z -= dz;
    }
    return z;
}

// Case I square root of s^3 + C s + 1 with the cut conventions of the period contours.
struct SqrtF {
    cplx e0, e1, e2;
    cplx operator()(cplx s) const {
        return std::sqrt(s - e0) * bsqrt(s - e1, -pi / 2) * bsqrt(s - e2, -pi / 2);
    }
};

// Case II square root of s^3 + C s - 1 with principal factors.
struct SqrtFt {
    double e0;
    cplx operator()(cplx s) const { return std::sqrt(s - e0) * std::sqrt(s * s + e0 * s + 1.0 / e0); }
};

// Integral of f over the straight segment a -> b with square-root endpoint behaviour.
template <class F>
cplx segment_integral(F f, cplx a, cplx b, double tol) {
    cplx d = b - a;
    const double m = std::sqrt(0.5);
    auto left = [&](double u) { return f(a + d * (u * u)) * d * (2 * u); };
    auto right = [&](double u) { return f(b - d * (u * u)) * d * (2 * u); };
    return integrate(left, 0.0, m, tol) + integrate(right, 0.0, m, tol);
}

// 2 * int_eta^{inf e^{i theta}} [sqrtF - s^{3/2} - (C/2) s^{-1/2}] ds - (4/5 eta^{5/2} + 2 C eta^{1/2})
template <class F>
cplx regularized_ray(F sq, cplx eta, double theta, double C, double q, double tol) {
    cplx dir = std::polar(1.0, theta);
    auto g = [&](double v) -> cplx {
        double x = v / (1 - v);
        cplx s = eta + dir * (x * x);
        double drdv = 2 * x / ((1 - v) * (1 - v));
        cplx rs = std::sqrt(s);
        cplx reg = s * rs + 0.5 * C / rs;
        cplx root = sq(s);
        cplx val;
        if (std::abs(s) < 4 + std::sqrt(std::abs(C)))
            val = root - reg;
        else
            val = (q - C * C / (4.0 * s)) / (root + reg);
        return val * dir * drdv;
    };
    cplx I = integrate(g, 0.0, 1.0, tol);
    cplx re = std::sqrt(eta);
    return 2.0 * I - (0.8 * eta * eta * re + 2 * C * re);
}

}  // namespace

TurningPoints turning_points(double C, int case_sign) {
    if (case_sign != 1 && case_sign != -1) throw Error("domain_error", "case sign must be +1 or -1");
    const int q = case_sign;
    TurningPoints tp;
    tp.case_sign = q;
    double e0 = real_root(C, q);
    tp.eta0 = e0;
    // remaining quadratic eta^2 + e0 eta + (e0^2 + C)
    double c0 = e0 * e0 + C;
    double D = e0 * e0 - 4 * c0;
    if (std::abs(D) <= 1e-14 * (e0 * e0 + std::abs(C))) D = 0;
    if (D < 0) {
        double im = 0.5 * std::sqrt(-D);
        tp.eta1 = polish(cplx(-0.5 * e0, im), C, q);
        tp.eta2 = std::conj(tp.eta1);
    } else {
        double sq = std::sqrt(D);
        double r1 = -0.5 * (e0 + (e0 >= 0 ? sq : -sq));
        double r2 = r1 != 0 ? c0 / r1 : 0;
        double a = std::min(r1, r2), b = std::max(r1, r2);
        if (D > 0) {
            a = polish(a, C, q).real();
            b = polish(b, C, q).real();
        }
        tp.eta1 = a;
        tp.eta2 = b;
    }
    return tp;
}

double kappa2(double C) {
    if (std::abs(C - kCcrit) < 1e-8) return -std::pow(2.0, 5.0 / 6) / std::sqrt(3.0) * (C - kCcrit);
    TurningPoints tp = turning_points(C, 1);
    SqrtF sq{tp.eta0, tp.eta1, tp.eta2};
    cplx I = segment_integral(sq, tp.eta1, tp.eta2, 1e-15);
    return (4.0 / (pi * cplx(0, 1)) * I).real();
}

cplx kappahat2(double C) {
    TurningPoints tp = turning_points(C, 1);
    SqrtF sq{tp.eta0, tp.eta1, tp.eta2};
    cplx I = segment_integral(sq, tp.eta0, tp.eta1, 1e-15);
    return 4.0 / (pi * cplx(0, 1)) * I;
}

cplx action_IE(double C, double theta) {
    TurningPoints tp = turning_points(C, 1);
    return regularized_ray(SqrtF{tp.eta0, tp.eta1, tp.eta2}, tp.eta2, theta, C, 1.0, 1e-14);
}

cplx action_IF(double C, double theta) {
    TurningPoints tp = turning_points(C, 1);
    return regularized_ray(SqrtF{tp.eta0, tp.eta1, tp.eta2}, tp.eta1, theta, C, 1.0, 1e-14);
}

double action_G(double C, double theta) {
    TurningPoints tp = turning_points(C, -1);
    double e0 = tp.eta0.real();
    return regularized_ray(SqrtFt{e0}, cplx(e0, 0), theta, C, -1.0, 1e-14).real();
}

PeriodData periods(double C, const PeriodOptions& opts) {
    PeriodData d;
    d.C = C;
    d.kappa2 = kappa2(C);
    d.kappahat2 = kappahat2(C);
    TurningPoints tp = turning_points(C, 1);
    SqrtF sq{tp.eta0, tp.eta1, tp.eta2};
    d.I_E = regularized_ray(sq, tp.eta2, opts.theta_E, C, 1.0, opts.tol);
    d.I_F = regularized_ray(sq, tp.eta1, opts.theta_F, C, 1.0, opts.tol);
    const double l2 = std::log(2.0);
    cplx k2 = d.kappa2;
    if (d.kappa2 != 0)
        d.E = d.I_E + k2 / 4.0 + k2 * l2 / 2.0 - k2 * std::log(k2) / 4.0;
    else
        d.E = d.I_E;
    cplx kh = d.kappahat2;
    d.F = d.I_F + kh / 4.0 + kh * l2 / 2.0 - kh * std::log(kh) / 4.0;
    d.G = action_G(C);
    return d;
}

double find_C0() {
    static const double c0 = [] {
        auto f = [](double C) { return kappahat2(C).imag(); };
        boost::math::tools::eps_tolerance<double> tol(50);
        std::uintmax_t iters = 200;
        auto r = boost::math::tools::toms748_solve(f, 1.0, 3.0, tol, iters);
        return 0.5 * (r.first + r.second);
    }();
    return c0;
}

double predict_xi_n(double C, int n) {
    if (!(C > kCcrit && C < find_C0()))
        throw Error("domain_error", "C outside the separatrix interval", {{"C", C}});
    if (n < 1) throw Error("domain_error", "n must be positive", {{"n", n}});
    return (2.0 * n - 1) / (-kappa2(C));
}

double predict_h_n(double C, int n) {
    double xi = predict_xi_n(C, n);
    PeriodData d = periods(C);
    double logmag = 0.5 * std::log(pi) - std::lgamma(n) + n * std::log(2.0) + (n - 0.5) * std::log(xi) +
                    2 * xi * d.E.real();
    double sign = n % 2 == 0 ? 1.0 : -1.0;
    return sign * std::exp(logmag);
}

std::pair<double, double> tritronquee_pole(int n) {
    if (n < 1) throw Error("domain_error", "n must be positive", {{"n", n}});
    const double C0 = find_C0();
    const double xi = (4.0 * n - 2) / std::abs(kappa2(C0));
    return {2 * C0 * std::pow(xi, 0.8), -std::pow(xi, 1.2) / 7};
}

}  // namespace painleve
