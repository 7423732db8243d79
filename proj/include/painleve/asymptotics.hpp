#pragma once

#include <complex>
#include <utility>

namespace painleve {

using cplx = std::complex<double>;

// C at which two Case I turning points coalesce: -3/2^{2/3}.
inline const double kCcrit = -3.0 / std::cbrt(4.0);

// Roots of eta^3 + C eta + case_sign.
struct TurningPoints {
    int case_sign = 1;
    cplx eta0, eta1, eta2;
};

struct PeriodOptions {
    double theta_E = -0.7853981633974483;  // ray angle for I_E
    double theta_F = 0.7853981633974483;   // ray angle for I_F
    double tol = 1e-14;
};

struct PeriodData {
    double C = 0;
    double kappa2 = 0;
    cplx kappahat2;
    cplx I_E, I_F;
    cplx E, F;
    double G = 0;  // Case II action at the same C
};

TurningPoints turning_points(double C, int case_sign = 1);

double kappa2(double C);
cplx kappahat2(double C);
cplx action_IE(double C, double theta = -0.7853981633974483);
cplx action_IF(double C, double theta = 0.7853981633974483);
double action_G(double C, double theta = 0);

PeriodData periods(double C, const PeriodOptions& opts = {});

// Root of Im kappahat2 on (0, inf); computed once.
double find_C0();

double predict_xi_n(double C, int n);
double predict_h_n(double C, int n);

// Large-n location (p_n, H_n) of the n-th positive pole of the real tritronquee solution.
std::pair<double, double> tritronquee_pole(int n);

}  // namespace painleve
