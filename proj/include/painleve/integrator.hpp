#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

namespace painleve {

using cplx = std::complex<double>;

struct TraceSample {
    cplx t, y, yp;
};

struct PoleRecord {
    double p = 0;
    double H = 0;
    double fit_residual = 0;
    double reality_residual = 0;  // |Im y| + |Im y'| (relative) after the half turn
    double exit_mismatch = 0;     // disagreement of the fit repeated on the far side
    double radius = 0;            // half-turn radius actually used
};

enum class TraceStatus { completed, blow_up_unresolved, tolerance_failure, pole_location_failure, cluster_failure };

std::string to_string(TraceStatus s);

struct SolutionTrace {
    std::vector<TraceSample> samples;
    std::vector<PoleRecord> poles;
    int direction = 1;
    TraceStatus status = TraceStatus::completed;
    bool stopped_early = false;  // observer requested termination
    std::string message;
    long steps = 0;

    const TraceSample& back() const { return samples.back(); }
};

// Plain marching along straight segments; no pole handling.
SolutionTrace integrate_ivp(cplx t0, cplx y0, cplx y0p, const std::vector<cplx>& path, double tol = 1e-12,
                            double blow_up = 1e6);

struct MarchOptions {
    double tol = 1e-12;
    double eps = 0.1;        // seeding offset from a pole
    double r_detour = 0.1;   // half-turn radius
    int laurent_order = 40;
    double reality_tol = 1e-8;
    bool record_samples = true;
    std::size_t max_poles = 100000;
    // Called on every accepted real-axis point; return false to stop.
    std::function<bool(double t, double y, double yp)> observer;
    // Called after each half turn; return false to stop.
    std::function<bool(const PoleRecord&)> on_pole;
};

// Marches from real Cauchy data along the real axis to t_stop, hopping over poles.
SolutionTrace march_real_line(double t0, double y0, double y0p, int direction, double t_stop,
                              const MarchOptions& opts = {});

// Cauchy data of the real tritronquee solution at t = 0.
inline constexpr double kTritronqueeY0 = -0.1875543083404949;
inline constexpr double kTritronqueeYp0 = 0.3049055602612289;

// The first n positive poles of the real tritronquee solution, marched from t = 0.
SolutionTrace tritronquee_trace(int n, const MarchOptions& opts = {});

// Seeds from the Laurent series of the pole (p, H) and marches away from it.
SolutionTrace trace_real_line(double p, double H, int direction, double t_stop, const MarchOptions& opts = {});

}  // namespace painleve
