#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "painleve/integrator.hpp"
#include "painleve/stokes.hpp"

namespace painleve {

enum class Label { A, B, C };

std::string to_string(Label l);

// p = 2 C xi^{4/5}, H = -h_sign xi^{6/5} / 7; h_sign = +1 is the H < 0 family.
struct ScaledCoords {
    double xi = 0;
    double C = 0;
    int h_sign = 1;

    static ScaledCoords from_pH(double p, double H);
    double p() const;
    double H() const;
};

struct ClassifyOptions {
    double T = 40;            // initial window [-T, p]
    double T_max = 200;       // extension when undecided
    double T_min = 10;        // poles beyond -T_min count as recurring
    double tol = 1e-14;       // boundaries move by ~1e-7 relative at 1e-12
    // Stop as soon as the label is settled; skips the parameter fits.
    bool decide_only = false;
    // Separatrix tests: the literal threshold test and the perturbation test.
    double b_threshold = 1e-6;
    double b_time = 30;
    double b_eps = 1e-9;
    double linger_tol = 1e-3;
    bool detect_b = true;
    bool stokes_for_b = true;  // fill h from the Stokes data when labelled B
};

struct TypeReport {
    Label label = Label::C;
    bool ambiguous = false;
    double t_lo = 0, t_hi = 0;  // window actually traced
    std::optional<double> d, phi;
    std::optional<double> h;
    std::optional<double> rho, sigma;
    int pole_count_negative = 0;
    double fit_residual = 0;
    double trap_time = 0;  // where the orbit fell into the well (Type A)
    double linger = 0;     // smallest |y - sqrt(-t/6)| / sqrt(-t/6) seen for t <= -3
    TraceStatus status = TraceStatus::completed;
    std::string note;
};

TypeReport classify(double p, double H, const ClassifyOptions& opts = {});

struct SeparatrixOptions {
    ClassifyOptions classify;
    double rel_tol = 1e-10;
    int scan_per_gap = 8;  // scan points per predicted gap between consecutive xi_n
    int workers = 1;
};

// First n_max sign changes of the A/C label along C = const, H < 0; empty outside the admissible interval.
std::vector<double> find_separatrix_xi(double C, int n_max, const SeparatrixOptions& opts = {});

struct ConnectionParameters {
    Label label = Label::C;
    std::optional<double> d, phi;
    std::optional<double> h;
    std::optional<double> rho, sigma;
};

// Label from sign Im s_0 and the matching parameter formulas. B when |Im s_0| <= b_tol or when the
// error bar of s_0 does not resolve its sign.
ConnectionParameters connection_parameters(const StokesData& s, double b_tol = 0);

Label label_from_stokes(const StokesData& s, double b_tol = 0);

// Stokes label at (p, H) with the perturbation test used by classify: B when the labels at
// H -+ b_eps max(1, |H|) differ. b_eps = 0 skips the test.
Label stokes_label(double p, double H, double b_eps = 0, const StokesOptions& opts = {});

struct PhaseDiagramOptions {
    ClassifyOptions classify;
    double bisect_tol = 1e-10;
    bool refine = true;
    int workers = 1;
};

struct BoundaryPoint {
    double p, H;
    Label below, above;  // labels on either side in H
};

struct PhaseDiagram {
    std::vector<double> p, H;       // grid axes
    std::vector<Label> labels;      // row-major, labels[i * p.size() + j] at (p[j], H[i])
    std::vector<bool> failed;       // cells whose trace did not complete
    std::vector<BoundaryPoint> boundary;
    std::vector<std::vector<std::pair<double, double>>> polylines;  // Sigma_n as (p, H)
    double a_ceiling_grid = 0;      // max H over A-labelled cells
    double a_ceiling = 0;           // refined by bisection and a search over p

    Label at(std::size_t i, std::size_t j) const { return labels[i * p.size() + j]; }
};

PhaseDiagram phase_diagram(std::pair<double, double> p_range, std::pair<double, double> H_range, int np, int nH,
                           const PhaseDiagramOptions& opts = {});

}  // namespace painleve
