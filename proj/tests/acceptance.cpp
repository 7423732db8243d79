// One PASS/FAIL line per acceptance criterion; exit status is the number of failures.
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "painleve/asymptotics.hpp"
#include "painleve/classifier.hpp"
#include "painleve/integrator.hpp"
#include "painleve/laurent.hpp"
#include "painleve/stokes.hpp"
#include "reference_data.hpp"

using namespace painleve;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

int failures = 0;

void criterion(int n, const char* title, const std::function<Outcome()>& body) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %2d %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", n, title, o.detail.c_str(), dt);
    std::fflush(stdout);
    failures += !o.pass;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

int workers() { return std::max(1u, std::thread::hardware_concurrency()); }

SolutionTrace& tritronquee10() {
    static SolutionTrace tr = tritronquee_trace(10);
    return tr;
}

// y'' by the Cauchy integral on a small circle
cplx second_derivative(const LaurentSeries& s, double t, double rho = 0.04, int M = 96) {
    cplx acc = 0;
    for (int k = 0; k < M; ++k) {
        cplx w = std::polar(1.0, 2 * M_PI * k / M);
        acc += eval_laurent(s, t + rho * w).y / (w * w);
    }
    return 2.0 * acc / (static_cast<double>(M) * rho * rho);
}

}  // namespace

int main() {
    criterion(1, "tritronquee poles vs reference integration", [] {
        const SolutionTrace& tr = tritronquee10();
        if (tr.poles.size() < 10) return Outcome{false, "only " + std::to_string(tr.poles.size()) + " poles"};
        double ep = 0, eH = 0;
        for (int k = 0; k < 10; ++k) {
            ep = std::max(ep, std::abs(tr.poles[k].p - ref::kTritronquee[k].p_num));
            eH = std::max(eH, std::abs(tr.poles[k].H - ref::kTritronquee[k].H_num));
        }
        return Outcome{ep <= 1e-4 && eH <= 1e-4, fmt("max |dp| = %.2e, max |dH| = %.2e (bound 1e-4)", ep, eH)};
    });

    criterion(2, "tritronquee pole asymptotics vs reference values", [] {
        double worst = 0;
        for (auto r : ref::kTritronquee) {
            auto [p, H] = tritronquee_pole(r.n);
            worst = std::max({worst, std::abs(p - r.p_asym) / std::abs(r.p_asym), std::abs(H - r.H_asym) / std::abs(r.H_asym)});
        }
        return Outcome{worst <= 1e-5, fmt("max relative deviation %.2e (bound 1e-5)", worst)};
    });

    criterion(3, "relative-error law", [] {
        const SolutionTrace& tr = tritronquee10();
        if (tr.poles.size() < 10) return Outcome{false, "tritronquee trace incomplete"};
        double sp = 0, sH = 0, sw = 0;
        for (int n = 1; n <= 10; ++n) {
            auto [pa, Ha] = tritronquee_pole(n);
            double w = 1 / ((n - 0.5) * (n - 0.5));
            sp += w * (pa - tr.poles[n - 1].p) / tr.poles[n - 1].p;
            sH += w * (Ha - tr.poles[n - 1].H) / tr.poles[n - 1].H;
            sw += w * w;
        }
        double ap = -sp / sw, aH = sH / sw;
        bool ok = std::abs(ap - ref::kErrLawP) <= 0.25 * ref::kErrLawP && std::abs(aH - ref::kErrLawH) <= 0.25 * ref::kErrLawH;
        return Outcome{ok, fmt("p: -a/(n-1/2)^2 with a = %.5f (ref %.5f); H: a/(n-1/2)^2 with a = %.5f (ref %.4f)", ap,
                               ref::kErrLawP, aH, ref::kErrLawH)};
    });

    criterion(4, "C0", [] {
        double c0 = find_C0();
        return Outcome{std::abs(c0 - ref::kC0) <= 1e-9, fmt("C0 = %.16g, |diff| = %.2e", c0, std::abs(c0 - ref::kC0))};
    });

    criterion(5, "kappa^2 closed form, zero and monotonicity", [] {
        double beta = std::tgamma(0.5) * std::tgamma(1.0 / 3) / std::tgamma(5.0 / 6);
        double oracle = -4 * std::sqrt(3.0) / (5 * M_PI) * beta;
        double e0 = std::abs(kappa2(0) - oracle);
        double z = std::abs(kappa2(-3.0 / std::cbrt(4.0)));
        int bad = 0;
        double prev = INFINITY;
        for (int i = 0; i < 100; ++i) {
            double k = kappa2(-4 + 8.0 * i / 99);
            bad += !(k < prev);
            prev = k;
        }
        return Outcome{e0 <= 1e-10 && z <= 1e-8 && bad == 0,
                       fmt("|kappa2(0) - Beta form| = %.2e, |kappa2(Ccrit)| = %.2e, %g non-decreasing steps", e0, z, bad)};
    });

    criterion(6, "period identities", [] {
        double w1 = 0, w2 = 0;
        const double c0 = find_C0();
        for (int i = 0; i < 20; ++i) {
            double C = kCcrit + 0.05 + (c0 - kCcrit - 0.05) * i / 19;
            PeriodData d = periods(C);
            w1 = std::max(w1, std::abs(d.kappa2 * M_PI - 4 * d.I_F.imag()) / (1 + std::abs(d.kappa2) * M_PI));
            w2 = std::max(w2, std::abs((d.kappahat2 * cplx(0, M_PI) + 2.0 * d.I_F).real()));
        }
        return Outcome{w1 <= 1e-9 && w2 <= 1e-9, fmt("max scaled |k2 pi - 4 Im I_F| = %.2e, max |Re(kh2 pi i + 2 I_F)| = %.2e", w1, w2)};
    });

    criterion(7, "Stokes constraints and the tritronquee fixture", [] {
        std::mt19937 g(2024);
        std::uniform_real_distribution<double> U(-5, 5);
        double cr = 0, rr = 0;
        for (int k = 0; k < 25; ++k) {
            StokesData s = stokes_multipliers(U(g), U(g));
            cr = std::max(cr, s.max_constraint_residual());
            rr = std::max(rr, s.max_reality_residual());
        }
        StokesData t = stokes_multipliers(ref::kTritronquee[0].p_num, ref::kTritronquee[0].H_num);
        double e0 = std::abs(t.at(0) - cplx(0, 1)), e2 = std::abs(t.at(2));
        return Outcome{cr <= 1e-6 && rr <= 1e-6 && e0 <= 1e-3 && e2 <= 1e-3,
                       fmt("max constraint %.2e, max reality %.2e, |s0 - i| = %.2e, |s2| = %.2e", cr, rr, e0, e2)};
    });

    criterion(8, "separatrix alternation at C = 0.5", [] {
        SeparatrixOptions so;
        so.workers = workers();
        std::vector<double> xs = find_separatrix_xi(0.5, 6, so);
        if (xs.size() < 6) return Outcome{false, "found " + std::to_string(xs.size()) + " separatrices"};
        ClassifyOptions q;
        q.decide_only = true;
        q.detect_b = false;
        std::string seq;
        bool alt = true;
        Label prev = Label::B;
        for (int k = 0; k < 5; ++k) {
            ScaledCoords m{0.5 * (xs[k] + xs[k + 1]), 0.5, 1};
            Label l = classify(m.p(), m.H(), q).label;
            seq += to_string(l);
            if (l == Label::B || (k && l == prev)) alt = false;
            prev = l;
        }
        double ratio = xs[5] * -kappa2(0.5) / 11;
        return Outcome{alt && ratio >= 0.9 && ratio <= 1.1,
                       "labels between xi_1..xi_6: " + seq + fmt(", xi_6 = %.10g, xi_6 (-kappa2)/11 = %.5f", xs[5], ratio)};
    });

    criterion(9, "phase-diagram A ceiling on a 200x200 grid", [] {
        PhaseDiagramOptions o;
        o.workers = workers();
        PhaseDiagram pd = phase_diagram({-10, 25}, {-3, 0.5}, 200, 200, o);
        std::size_t fails = 0;
        for (bool f : pd.failed) fails += f;
        double rel = std::abs(pd.a_ceiling - ref::kCeilingM) / std::abs(ref::kCeilingM);
        double rel_grid = std::abs(pd.a_ceiling_grid - ref::kCeilingM) / std::abs(ref::kCeilingM);
        return Outcome{rel <= 0.1, fmt("refined sup H = %.8f (%.2f%% off), grid nodes alone %.6f (%.1f%% off)", pd.a_ceiling,
                                       100 * rel, pd.a_ceiling_grid, 100 * rel_grid) +
                                       ", failed cells " + std::to_string(fails)};
    });

    criterion(10, "Stokes sign vs classifier on 10 points", [] {
        std::vector<std::pair<double, double>> pts = {{0, -1}, {3, -2}, {-5, -1}, {10, -3}, {-8, 0.3}, {0, 0}, {0, 10}};
        const SolutionTrace& tr = tritronquee10();
        if (!tr.poles.empty()) pts.push_back({tr.poles[0].p, tr.poles[0].H});
        std::vector<double> xs = find_separatrix_xi(0.5, 2);
        for (double xi : xs) pts.push_back({ScaledCoords{xi, 0.5, 1}.p(), ScaledCoords{xi, 0.5, 1}.H()});
        ClassifyOptions co;
        std::string seq;
        int agree = 0, kinds[3] = {0, 0, 0};
        for (auto [p, H] : pts) {
            Label a = classify(p, H, co).label;
            Label b = stokes_label(p, H, co.b_eps);
            agree += a == b;
            kinds[static_cast<int>(a)]++;
            seq += to_string(a) + (a == b ? "=" : "!=") + to_string(b) + " ";
        }
        bool ok = pts.size() == 10 && agree == 10 && kinds[0] && kinds[1] && kinds[2];
        return Outcome{ok, std::to_string(agree) + "/" + std::to_string(pts.size()) + " agree (classify vs stokes): " + seq};
    });

    criterion(11, "Laurent and integrator properties", [] {
        std::mt19937 g(11);
        std::uniform_real_distribution<double> U(-10, 10);
        double res = 0;
        for (int rep = 0; rep < 20; ++rep) {
            double p = U(g), H = U(g);
            LaurentSeries s = laurent_coeffs(p, H, 40);
            cplx y = eval_laurent(s, p + 0.1).y;
            res = std::max(res, std::abs(second_derivative(s, p + 0.1) - 6.0 * y * y - (p + 0.1)) / (6 * std::norm(y)));
        }
        LaurentSeries s1 = laurent_coeffs(2.384169, -0.062139, 40);
        cplx y1 = eval_laurent(s1, 2.484169).y;
        double fixture = std::abs(second_derivative(s1, 2.484169) - 6.0 * y1 * y1 - 2.484169) / (6 * std::norm(y1));

        LaurentValue v = eval_laurent(laurent_coeffs(3.7, -1.2, 40), 3.8);
        PoleFit f = fit_pole(3.8, v.y.real(), v.yp.real(), 3.75);
        double rt = std::max(std::abs(f.p - 3.7), std::abs(f.H + 1.2));

        double rev = 0;
        const double tol = 1e-12;
        for (std::vector<cplx> path : {std::vector<cplx>{0.0, 1.0}, {0.0, -3.0}, {0.0, cplx(0, 1), cplx(-1, 1)}}) {
            SolutionTrace a = integrate_ivp(0.0, kTritronqueeY0, kTritronqueeYp0, path, tol);
            std::vector<cplx> back(path.rbegin(), path.rend());
            SolutionTrace b = integrate_ivp(a.back().t, a.back().y, a.back().yp, back, tol);
            rev = std::max({rev, std::abs(b.back().y - kTritronqueeY0), std::abs(b.back().yp - kTritronqueeYp0)});
        }
        bool ok = res < 1e-9 && fixture < 1e-10 && f.converged && rt <= 1e-8 && rev <= 10 * tol;
        return Outcome{ok, fmt("ODE residual %.1e (random), %.1e (fixture); fit round trip %.1e; reversibility %.2f tol", res,
                               fixture, rt, rev / tol)};
    });

    std::printf("%d failed\n", failures);
    return failures;
}
