#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "painleve/errors.hpp"
#include "painleve/laurent.hpp"

using namespace painleve;

namespace {

// y'' by the Cauchy integral on a small circle; trapezoid sums converge geometrically here.
std::complex<double> second_derivative(const LaurentSeries& s, double t, double rho = 0.04, int M = 96) {
    std::complex<double> acc = 0;
    for (int k = 0; k < M; ++k) {
        std::complex<double> w = std::polar(1.0, 2 * M_PI * k / M);
        acc += eval_laurent(s, t + rho * w).y / (w * w);
    }
    return 2.0 * acc / (static_cast<double>(M) * rho * rho);
}

}  // namespace

TEST_CASE("leading Laurent coefficients are fixed by p and H") {
    LaurentSeries s = laurent_coeffs(1.7, -0.4, 4);
    CHECK(s.coeff(-2) == 1);
    CHECK(s.coeff(-1) == 0);
    CHECK(s.coeff(0) == 0);
    CHECK(s.coeff(1) == 0);
    CHECK(s.coeff(2) == doctest::Approx(-0.17).epsilon(1e-15));
    CHECK(s.coeff(3) == doctest::Approx(-1.0 / 6).epsilon(1e-15));
    CHECK(s.coeff(4) == -0.4);
}

TEST_CASE("higher coefficients match symbolic substitution") {
    // closed forms obtained by substituting the ansatz into y'' = 6y^2 + t with sympy
    std::mt19937 g(7);
    std::uniform_real_distribution<double> U(-3, 3);
    for (int rep = 0; rep < 10; ++rep) {
        double p = U(g), H = U(g);
        LaurentSeries s = laurent_coeffs(p, H, 16);
        auto near = [](long double a, double b) { return std::abs(static_cast<double>(a) - b) <= 1e-14 * (1 + std::abs(b)); };
        CHECK(s.coeff(5) == 0);
        CHECK(near(s.coeff(6), p * p / 300));
        CHECK(near(s.coeff(7), p / 150));
        CHECK(near(s.coeff(8), -3 * H * p / 110 + 1.0 / 264));
        CHECK(near(s.coeff(9), -H / 30));
        CHECK(near(s.coeff(10), H * H / 13 - p * p * p / 19500));
        CHECK(near(s.coeff(13), H * p / 825 - 1.0 / 19008));
        CHECK(near(s.coeff(16), H * H * H / 247 - 29 * H * p * p * p / 2717000 + 4831 * p * p / 1228920000));
    }
    CHECK(static_cast<double>(laurent_coeffs(1, 0, 6).coeff(6)) == doctest::Approx(1.0 / 300).epsilon(1e-15));
}

TEST_CASE("series values agree with high-precision symbolic sums") {
    struct Row {
        double p, H, y, yp;
    };
    // oracle evaluated at the exact binary value of (p + 0.1) - p
    const Row rows[] = {{0, 0, 99.9998333333712010136931766408, -2000.00499999696936458726725141},
                        {2.384169, -0.062139, 99.9974429710504467981234473663, -2000.05293068143699270554927597},
                        {3.7, -1.2, 99.9960133827327290509001907014, -2000.08379698474686293506488416}};
    for (auto r : rows) {
        LaurentValue v = eval_laurent(laurent_coeffs(r.p, r.H, 40), r.p + 0.1);
        CHECK(v.y.real() == doctest::Approx(r.y).epsilon(1e-15));
        CHECK(v.yp.real() == doctest::Approx(r.yp).epsilon(1e-15));
        CHECK(v.y.imag() == 0);
        CHECK(v.error < 1e-20);
        CHECK(v.y.real() * 0.01 == doctest::Approx(1).epsilon(1e-3));
    }
}

TEST_CASE("truncated series satisfies the ODE near the pole") {
    std::mt19937 g(11);
    std::uniform_real_distribution<double> U(-10, 10);
    for (int rep = 0; rep < 20; ++rep) {
        double p = U(g), H = U(g);
        LaurentSeries s = laurent_coeffs(p, H, 40);
        double t = p + 0.1;
        std::complex<double> y = eval_laurent(s, t).y;
        double res = std::abs(second_derivative(s, t) - 6.0 * y * y - t);
        CHECK(res < 1e-9 * (1 + 6 * std::norm(y)));
    }
    LaurentSeries s = laurent_coeffs(2.384169, -0.062139, 40);
    std::complex<double> y = eval_laurent(s, 2.484169).y;
    CHECK(std::abs(second_derivative(s, 2.484169) - 6.0 * y * y - 2.484169) < 1e-10 * 6 * std::norm(y));
}

TEST_CASE("evaluation is rejected at the pole and outside the safety radius") {
    LaurentSeries s = laurent_coeffs(1, 1, 40);
    CHECK_THROWS_AS(eval_laurent(s, 1.0), Error);
    CHECK_THROWS_AS(eval_laurent(s, 1.6), Error);
    CHECK_NOTHROW(eval_laurent(s, std::complex<double>(1, 0.3)));
}

TEST_CASE("pole fit inverts the series") {
    LaurentValue v = eval_laurent(laurent_coeffs(3.7, -1.2, 40), 3.8);
    PoleFit f = fit_pole(3.8, v.y.real(), v.yp.real(), 3.75);
    REQUIRE(f.converged);
    CHECK(std::abs(f.p - 3.7) < 1e-8);
    CHECK(std::abs(f.H + 1.2) < 1e-8);

    // H enters at order x^4 against x^-2, so a relative data error d moves it by about d / x^6
    PoleFit g = fit_pole(3.8, v.y.real() * (1 + 1e-9), v.yp.real() * (1 - 1e-9), 3.75);
    REQUIRE(g.converged);
    CHECK(std::abs(g.p - 3.7) < 1e-8);
    CHECK(std::abs(g.H + 1.2) < 1e-9 / std::pow(0.1, 6));

    std::mt19937 rng(3);
    std::uniform_real_distribution<double> U(-5, 5), D(0.05, 0.15);
    for (int rep = 0; rep < 30; ++rep) {
        double p = U(rng), H = U(rng), d = D(rng) * (rep % 2 ? 1 : -1);
        LaurentValue w = eval_laurent(laurent_coeffs(p, H, 40), p + d);
        PoleFit h = fit_pole(p + d, w.y.real(), w.yp.real(), p + 0.3 * d);
        CHECK(h.converged);
        CHECK(std::abs(h.p - p) < 1e-9);
        CHECK(std::abs(h.H - H) < 1e-7 * (1 + std::abs(H)));
    }
}
