#pragma once

#include <array>
#include <complex>

namespace painleve {

using cplx = std::complex<double>;

// Recessive solution of Y'' = (4 l^3 + 2 p l - 28 H) Y on the ray arg l = 2 j pi / 5,
// normalized as Y ~ (-i/sqrt 2) l^{-3/4} exp(-eps (4/5 l^{5/2} + p l^{1/2})).
// The true value is exp(log_scale) * (Y, Yp).
struct RecessiveValue {
    cplx Y, Yp;
    double log_scale = 0;
    double R_start = 0;
    double seed_error = 0;  // smallest neglected WKB term

    cplx value() const;
    cplx derivative() const;
};

struct StokesOptions {
    double seed_tol = 1e-30;  // relative WKB truncation budget for Y'/Y at the starting radius
    double R_min = 6;
};

RecessiveValue recessive_solution(double p, double H, int j, cplx lambda, const StokesOptions& opts = {});

struct StokesData {
    std::array<cplx, 5> s;                         // s[k + 2], k = -2..2
    std::array<double, 5> constraint_residual{};   // |s_k - i(1 + s_{k+2} s_{k+3})| / max(1, |s_k|, |s_{k+2} s_{k+3}|)
    std::array<double, 5> constraint_absolute{};   // same without the scale
    std::array<double, 5> reality_residual{};      // |s_{-k} + conj(s_k)| / max(1, |s_k|)
    std::array<double, 5> error_bar{};             // relative error estimate from Wronskian cancellation
    double normalization_residual = 0;             // |W(u_{k-1}, u_k) -/+ 2| relative to its cancellation scale
    double R_start = 0;
    double seed_error = 0;

    cplx at(int k) const;
    double max_constraint_residual() const;
    double max_reality_residual() const;
};

StokesData stokes_multipliers(double p, double H, const StokesOptions& opts = {});

}  // namespace painleve
