#pragma once

#include <complex>
#include <vector>

namespace painleve {

// Truncated expansion y = sum_{k=-2}^{N} a_k (t-p)^k at a double pole.
struct LaurentSeries {
    double p = 0;
    double H = 0;
    int N = 40;
    std::vector<long double> a;  // a[k+2]

    long double coeff(int k) const { return a[k + 2]; }
};

struct LaurentValue {
    std::complex<double> y;
    std::complex<double> yp;
    double error = 0;  // magnitude of the last retained term
};

struct PoleFit {
    double p = 0;
    double H = 0;
    bool converged = false;
    int iterations = 0;
    double residual = 0;  // relative misfit of (y, y')
};

struct FitOptions {
    int N = 40;
    int max_iterations = 50;
    double tol = 1e-12;
    double safety_radius = 0.5;
};

constexpr double kLaurentSafetyRadius = 0.5;

LaurentSeries laurent_coeffs(double p, double H, int N = 40);

// Throws Error("domain_error") at the pole itself or outside the safety radius.
LaurentValue eval_laurent(const LaurentSeries& s, std::complex<double> t,
                          double safety_radius = kLaurentSafetyRadius);

PoleFit fit_pole(double t0, double y0, double y0p, double p_guess, const FitOptions& opts = {});

}  // namespace painleve
