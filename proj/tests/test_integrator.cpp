#include <doctest.h>

#include <cmath>

#include "painleve/errors.hpp"
#include "painleve/integrator.hpp"
#include "painleve/laurent.hpp"
#include "reference_data.hpp"

using namespace painleve;

TEST_CASE("plain marching from the tritronquee data stays finite before the first pole") {
    SolutionTrace tr = integrate_ivp(0.0, kTritronqueeY0, kTritronqueeYp0, {0.0, 2.28});
    CHECK(tr.status == TraceStatus::completed);
    CHECK(std::isfinite(std::abs(tr.back().y)));
    CHECK(tr.back().t.real() == doctest::Approx(2.28));
}

TEST_CASE("a one-point path returns the initial sample") {
    SolutionTrace tr = integrate_ivp(1.5, 0.3, -0.2, {1.5});
    REQUIRE(tr.samples.size() == 1);
    CHECK(tr.samples[0].y == cplx(0.3));
    CHECK(tr.samples[0].yp == cplx(-0.2));
}

TEST_CASE("forward then backward marching returns to the start") {
    // paths kept away from the pole at 2.38, where the flow amplifies local errors
    for (double tol : {1e-10, 1e-12})
        for (std::vector<cplx> path : {std::vector<cplx>{0.0, 1.0}, {0.0, -3.0}, {0.0, cplx(0, 1), cplx(-1, 1)}}) {
            SolutionTrace f = integrate_ivp(0.0, kTritronqueeY0, kTritronqueeYp0, path, tol);
            std::vector<cplx> back(path.rbegin(), path.rend());
            SolutionTrace b = integrate_ivp(f.back().t, f.back().y, f.back().yp, back, tol);
            CHECK(std::abs(b.back().y - kTritronqueeY0) < 10 * tol);
            CHECK(std::abs(b.back().yp - kTritronqueeYp0) < 10 * tol);
        }
}

TEST_CASE("blow-up on a segment through a pole is reported") {
    SolutionTrace tr = integrate_ivp(0.0, kTritronqueeY0, kTritronqueeYp0, {0.0, 3.0});
    CHECK(tr.status == TraceStatus::blow_up_unresolved);
}

TEST_CASE("marching back from the first pole recovers the origin data") {
    SolutionTrace tr = trace_real_line(2.384169, -0.062139, -1, 0.0);
    REQUIRE(tr.status == TraceStatus::completed);
    CHECK(tr.back().t.real() == 0.0);
    // inputs carry six digits, so agreement is at the 1e-4 level
    CHECK(std::abs(tr.back().y.real() - kTritronqueeY0) < 1e-4);
    CHECK(std::abs(tr.back().yp.real() - kTritronqueeYp0) < 1e-4);
}

TEST_CASE("tritronquee poles match the reference integration") {
    SolutionTrace tr = tritronquee_trace(10);
    REQUIRE(tr.poles.size() == 10);
    for (int k = 0; k < 10; ++k) {
        CHECK(std::abs(tr.poles[k].p - ref::kTritronquee[k].p_num) <= 1e-4);
        CHECK(std::abs(tr.poles[k].H - ref::kTritronquee[k].H_num) <= 1e-4);
        CHECK(tr.poles[k].reality_residual < 1e-8);
    }
}

TEST_CASE("trace invariants: ordering, reality, local re-expansion") {
    MarchOptions mo;
    SolutionTrace tr = trace_real_line(0.0, 10.0, -1, -12.0, mo);
    REQUIRE(tr.status == TraceStatus::completed);
    int before = 0;
    for (auto& r : tr.poles) before += r.p < -10 ? 0 : 1;
    CHECK(tr.poles.size() >= 4);
    CHECK(before >= 4);  // seed plus at least three more before t = -10
    for (std::size_t k = 1; k < tr.poles.size(); ++k) {
        CHECK(tr.poles[k].p < tr.poles[k - 1].p);
        CHECK(tr.poles[k].reality_residual < 1e-8);
    }
    // off-detour samples are real
    for (auto& s : tr.samples)
        if (s.t.imag() == 0) CHECK(std::abs(s.y.imag()) <= 1e-8 * (1 + std::abs(s.y)));
    // each pole's series reproduces the sample where its half turn starts
    for (std::size_t k = 1; k < tr.poles.size(); ++k) {
        const auto& r = tr.poles[k];
        double a = r.p + r.radius;
        LaurentValue v = eval_laurent(laurent_coeffs(r.p, r.H, 40), a);
        bool found = false;
        for (auto& s : tr.samples)
            if (s.t.imag() == 0 && std::abs(s.t.real() - a) < 1e-13) {
                found = true;
                CHECK(std::abs(s.y - v.y) < 1e-7 * std::abs(v.y));
            }
        CHECK(found);
    }
}

TEST_CASE("re-seeding from a recorded pole reproduces the next one") {
    SolutionTrace tr = tritronquee_trace(6);
    REQUIRE(tr.poles.size() == 6);
    for (int k = 0; k + 1 < 6; ++k) {
        SolutionTrace seg = trace_real_line(tr.poles[k].p, tr.poles[k].H, 1, tr.poles[k + 1].p + 1);
        REQUIRE(seg.poles.size() == 2);
        CHECK(std::abs(seg.poles[1].p - tr.poles[k + 1].p) < 1e-6);
        CHECK(std::abs(seg.poles[1].H - tr.poles[k + 1].H) < 1e-6);
    }
}

TEST_CASE("halving the tolerance barely moves the poles") {
    MarchOptions coarse, fine;
    coarse.tol = 1e-10;
    fine.tol = 5e-11;
    SolutionTrace a = tritronquee_trace(10, coarse), b = tritronquee_trace(10, fine);
    REQUIRE(a.poles.size() == 10);
    REQUIRE(b.poles.size() == 10);
    for (int k = 0; k < 10; ++k) CHECK(std::abs(a.poles[k].p - b.poles[k].p) < 1e-7);
}

TEST_CASE("bad directions and intervals are rejected") {
    CHECK_THROWS_AS(trace_real_line(1, 0, 0, 2), Error);
    CHECK_THROWS_AS(trace_real_line(1, 0, 1, 0.5), Error);
}
