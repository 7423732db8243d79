#include "painleve/laurent.hpp"

#include <algorithm>
#include <cmath>

#include "painleve/errors.hpp"

namespace painleve {

namespace {

using ld = long double;
using cld = std::complex<long double>;

// Coefficients and their partial derivatives in p and H.
struct Tables {
    std::vector<ld> a, da_dp, da_dH;
};

Tables build(double p, double H, int N, bool with_derivs) {
    Tables T;
    T.a.assign(N + 3, 0.0L);
    if (with_derivs) {
        T.da_dp.assign(N + 3, 0.0L);
        T.da_dH.assign(N + 3, 0.0L);
    }
    auto A = [&](int k) -> ld& { return T.a[k + 2]; };
    A(-2) = 1;
    if (N >= 2) A(2) = -static_cast<ld>(p) / 10;
    if (N >= 3) A(3) = -1.0L / 6;
    if (N >= 4) A(4) = H;
    if (with_derivs) {
        if (N >= 2) T.da_dp[4] = -0.1L;
        if (N >= 4) T.da_dH[6] = 1;
    }
    for (int n = 5; n <= N; ++n) {
        ld s = 0, sp = 0, sH = 0;
        for (int i = -1; i <= n - 1; ++i) {
            int j = n - 2 - i;
            if (j < -1) continue;
            s += T.a[i + 2] * T.a[j + 2];
            if (with_derivs) {
                sp += T.da_dp[i + 2] * T.a[j + 2] + T.a[i + 2] * T.da_dp[j + 2];
                sH += T.da_dH[i + 2] * T.a[j + 2] + T.a[i + 2] * T.da_dH[j + 2];
            }
        }
        ld lin = static_cast<ld>(n) * (n - 1) - 12;
        A(n) = 6 * s / lin;
        if (with_derivs) {
            T.da_dp[n + 2] = 6 * sp / lin;
            T.da_dH[n + 2] = 6 * sH / lin;
        }
    }
    return T;
}

// Sum_k c_k x^k and its derivative for k = -2..N, Horner on the regular part.
void sum_series(const std::vector<ld>& c, cld x, cld& f, cld& fp) {
    int N = static_cast<int>(c.size()) - 3;
    cld g = 0, gp = 0;  // regular part sum_{k>=0} c_k x^k
    for (int k = N; k >= 0; --k) {
        gp = gp * x + g;
        g = g * x + c[k + 2];
    }
    cld xi = 1.0L / x;
    cld xi2 = xi * xi;
    f = c[0] * xi2 + c[1] * xi + g;
    fp = -2.0L * c[0] * xi2 * xi - c[1] * xi2 + gp;
}

}  // namespace

LaurentSeries laurent_coeffs(double p, double H, int N) {
    if (N < 4) throw Error("domain_error", "Laurent order must be at least 4", {{"N", N}});
    LaurentSeries s;
    s.p = p;
    s.H = H;
    s.N = N;
    s.a = build(p, H, N, false).a;
    return s;
}

LaurentValue eval_laurent(const LaurentSeries& s, std::complex<double> t, double safety_radius) {
    cld x = cld(t.real(), t.imag()) - static_cast<ld>(s.p);
    ld r = std::abs(x);
    if (r == 0) throw Error("domain_error", "evaluation at the pole", {{"p", s.p}});
    if (r > safety_radius)
        throw Error("domain_error", "evaluation point outside the series safety radius",
                    {{"p", s.p}, {"distance", static_cast<double>(r)}, {"radius", safety_radius}});
    cld f, fp;
    sum_series(s.a, x, f, fp);
    LaurentValue v;
    v.y = std::complex<double>(static_cast<double>(f.real()), static_cast<double>(f.imag()));
    v.yp = std::complex<double>(static_cast<double>(fp.real()), static_cast<double>(fp.imag()));
    // the last five terms, since the coefficients can vanish in a period-5 pattern
    ld last = 0;
    for (int k = std::max(3, s.N - 4); k <= s.N; ++k)
        last = std::max(last, std::abs(s.coeff(k)) * std::pow(static_cast<ld>(r), static_cast<ld>(k)));
    v.error = static_cast<double>(last);
    return v;
}

PoleFit fit_pole(double t0, double y0, double y0p, double p_guess, const FitOptions& opts) {
    PoleFit out;
    ld p = p_guess, H = 0;
    const ld sy = std::max<ld>(std::abs(y0), 1), syp = std::max<ld>(std::abs(y0p), 1);

    auto misfit = [&](ld pp, ld HH, ld& ry, ld& ryp, ld J[2][2], bool jac) {
        Tables T = build(static_cast<double>(pp), static_cast<double>(HH), opts.N, jac);
        ld x = static_cast<ld>(t0) - pp;
        cld f, fp;
        sum_series(T.a, x, f, fp);
        ry = (f.real() - y0) / sy;
        ryp = (fp.real() - y0p) / syp;
        if (!jac) return;
        cld fpp, fpH, dp, dH;
        sum_series(T.da_dp, x, fpp, dp);
        sum_series(T.da_dH, x, fpH, dH);
        // y(t0; p, H) depends on p through the coefficients and through x = t0 - p
        ld ypp = 6 * f.real() * f.real() + t0;
        J[0][0] = (fpp.real() - fp.real()) / sy;
        J[0][1] = fpH.real() / sy;
        J[1][0] = (dp.real() - ypp) / syp;
        J[1][1] = dH.real() / syp;
    };

    ld J[2][2];
    ld ry, ryp;
    for (int it = 0; it < opts.max_iterations; ++it) {
        if (std::abs(static_cast<ld>(t0) - p) > opts.safety_radius || static_cast<ld>(t0) == p) break;
        misfit(p, H, ry, ryp, J, true);
        ld res = std::hypot(ry, ryp);
        out.iterations = it;
        out.residual = static_cast<double>(res);
        if (res <= opts.tol) {
            out.converged = true;
            break;
        }
        ld det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
        if (det == 0 || !std::isfinite(static_cast<double>(det))) break;
        ld dp = -(J[1][1] * ry - J[0][1] * ryp) / det;
        ld dH = -(-J[1][0] * ry + J[0][0] * ryp) / det;
        // step halving on the residual norm
        ld lam = 1;
        bool improved = false;
        for (int h = 0; h < 30; ++h) {
            ld pn = p + lam * dp, Hn = H + lam * dH;
            if (std::abs(static_cast<ld>(t0) - pn) <= opts.safety_radius && static_cast<ld>(t0) != pn) {
                ld r1, r2, Jd[2][2];
                misfit(pn, Hn, r1, r2, Jd, false);
                if (std::isfinite(static_cast<double>(r1)) && std::hypot(r1, r2) < res) {
                    p = pn;
                    H = Hn;
                    improved = true;
                    break;
                }
            }
            lam /= 2;
        }
        if (!improved) {
            // residual already at rounding level
            out.converged = res <= 1e3 * opts.tol;
            break;
        }
        out.iterations = it + 1;
    }
    if (!out.converged && std::abs(static_cast<ld>(t0) - p) <= opts.safety_radius && static_cast<ld>(t0) != p) {
        misfit(p, H, ry, ryp, J, false);
        out.residual = static_cast<double>(std::hypot(ry, ryp));
        out.converged = out.residual <= opts.tol;
    }
    out.p = static_cast<double>(p);
    out.H = static_cast<double>(H);
    return out;
}

}  // namespace painleve
