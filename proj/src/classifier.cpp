#include "painleve/classifier.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <thread>

#include "painleve/asymptotics.hpp"
#include "painleve/errors.hpp"
#include "painleve/parallel.hpp"

namespace painleve {

namespace {

constexpr double pi = std::numbers::pi;
const double q24 = std::pow(24.0, 0.25);

// Im log Gamma(z) on the branch continuous from the positive real axis.
double arg_gamma(cplx z) {
    double shift = 0;
    while (z.real() < 15) {
        shift += std::arg(z);
        z += 1.0;
    }
    cplx iz = 1.0 / z, iz2 = iz * iz;
    cplx s = (z - 0.5) * std::log(z) - z + 0.5 * std::log(2 * pi) +
             iz * (1.0 / 12 - iz2 * (1.0 / 360 - iz2 * (1.0 / 1260 - iz2 / 1680.0)));
    return s.imag() - shift;
}

struct Probe {
    bool trapped = false;
    double trap_time = 0;
    double linger = INFINITY;
    double at_btime = INFINITY;
    double end_gap = INFINITY;
    int recurring = 0;
    std::vector<std::pair<double, double>> samples;  // (t, y) after the trap
};

SolutionTrace run_window(double p, double H, double t_end, const ClassifyOptions& o, Probe& pr) {
    MarchOptions mo;
    mo.tol = o.tol;
    mo.record_samples = false;
    const bool fit = !o.decide_only;
    mo.observer = [&](double t, double y, double yp) {
        if (t >= 0) return true;
        double s = std::sqrt(-t / 6);
        if (!pr.trapped && y < s) {
            double E = yp * yp / 2 - 2 * y * y * y - t * y;
            if (E < 4 * s * s * s) {
                pr.trapped = true;
                pr.trap_time = t;
                if (o.decide_only) return false;
            }
        }
        double gap = std::abs(y - s);
        if (!pr.trapped && t <= -3) pr.linger = std::min(pr.linger, gap / s);
        if (t <= -o.b_time && !std::isfinite(pr.at_btime)) pr.at_btime = gap;
        pr.end_gap = gap / s;
        if (pr.trapped && fit) pr.samples.emplace_back(t, y);
        return true;
    };
    mo.on_pole = [&](const PoleRecord& r) {
        pr.end_gap = INFINITY;
        if (r.p < -o.T_min) {
            ++pr.recurring;
            if (o.decide_only && !pr.trapped) return false;
        }
        return true;
    };
    return trace_real_line(p, H, -1, t_end, mo);
}

// Linear least squares of y + s = (-t)^{-1/8} (a cos Phi + b sin Phi), iterated on the d^2 log term.
void fit_type_a(const Probe& pr, TypeReport& rep) {
    if (pr.samples.size() < 20) return;
    auto theta = [](double t) { return q24 * 0.8 * std::pow(-t, 1.25); };
    const double th_end = theta(pr.samples.back().first);
    std::vector<std::pair<double, double>> win;
    for (auto& s : pr.samples)
        if (theta(s.first) >= th_end - 20 * pi) win.push_back(s);
    if (win.size() < 20) return;
    double d = 0, psi = 0, res = 0;
    for (int it = 0; it < 8; ++it) {
        double scc = 0, sss = 0, scs = 0, scy = 0, ssy = 0;
        for (auto [t, y] : win) {
            double ph = theta(t) - q24 * 0.625 * d * d * std::log(-t);
            double c = std::cos(ph), sn = std::sin(ph);
            double r = (y + std::sqrt(-t / 6)) * std::pow(-t, 0.125);
            scc += c * c, sss += sn * sn, scs += c * sn, scy += c * r, ssy += sn * r;
        }
        double det = scc * sss - scs * scs;
        if (det == 0) return;
        double a = (scy * sss - ssy * scs) / det;
        double b = (ssy * scc - scy * scs) / det;
        d = std::hypot(a, b);
        psi = std::atan2(-b, a);
        res = 0;
        for (auto [t, y] : win) {
            double ph = theta(t) - q24 * 0.625 * d * d * std::log(-t);
            double r = (y + std::sqrt(-t / 6)) * std::pow(-t, 0.125);
            res += std::pow(r - (a * std::cos(ph) + b * std::sin(ph)), 2);
        }
        res = std::sqrt(res / win.size());
    }
    rep.d = d;
    rep.phi = psi / q24;
    rep.fit_residual = res;
}

// Poles sit where (2/5) 24^{1/4} (-t)^{5/4} + (5/8) rho log(-t) + sigma is a multiple of pi.
void fit_type_c(const std::vector<PoleRecord>& poles, TypeReport& rep) {
    std::vector<double> ts;
    for (auto& r : poles)
        if (r.p < -1) ts.push_back(r.p);
    if (ts.size() < 4) return;
    std::sort(ts.begin(), ts.end(), std::greater<>());
    auto psi = [](double t) { return 0.4 * q24 * std::pow(-t, 1.25); };
    const double m0 = std::round(psi(ts[0]) / pi);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = ts.size();
    std::vector<double> xs, ys;
    for (std::size_t k = 0; k < ts.size(); ++k) {
        double x = 0.625 * std::log(-ts[k]);
        double y = (m0 + k) * pi - psi(ts[k]);
        xs.push_back(x), ys.push_back(y);
        sx += x, sy += y, sxx += x * x, sxy += x * y;
    }
    double det = n * sxx - sx * sx;
    if (det == 0) return;
    double rho = (n * sxy - sx * sy) / det;
    double sigma = (sy - rho * sx) / n;
    double res = 0;
    for (std::size_t k = 0; k < xs.size(); ++k) res += std::pow(ys[k] - rho * xs[k] - sigma, 2);
    sigma -= pi * std::floor(sigma / pi + 0.5);
    rep.rho = rho;
    rep.sigma = sigma;
    rep.fit_residual = std::sqrt(res / n);
}

Label quick_label(double p, double H, const ClassifyOptions& o) {
    ClassifyOptions q = o;
    q.decide_only = true;
    q.detect_b = false;
    return classify(p, H, q).label;
}

}  // namespace

std::string to_string(Label l) {
    switch (l) {
        case Label::A: return "A";
        case Label::B: return "B";
        default: return "C";
    }
}

ScaledCoords ScaledCoords::from_pH(double p, double H) {
    ScaledCoords s;
    s.h_sign = H <= 0 ? 1 : -1;
    s.xi = std::pow(7 * std::abs(H), 5.0 / 6.0);
    s.C = s.xi > 0 ? p / (2 * std::pow(s.xi, 0.8)) : 0;
    return s;
}

double ScaledCoords::p() const { return 2 * C * std::pow(xi, 0.8); }

double ScaledCoords::H() const { return -h_sign * std::pow(xi, 1.2) / 7; }

TypeReport classify(double p, double H, const ClassifyOptions& o) {
    TypeReport rep;
    rep.t_hi = p;
    double t_end = std::min(-o.T, p - 1);
    Probe pr;
    SolutionTrace tr = run_window(p, H, t_end, o, pr);
    auto decided = [&] { return pr.trapped || (pr.recurring > 0 && pr.end_gap > o.linger_tol); };
    if (!decided() && tr.status == TraceStatus::completed && o.T_max > o.T) {
        t_end = std::min(-o.T_max, p - 1);
        pr = Probe{};
        tr = run_window(p, H, t_end, o, pr);
        rep.note = "window extended";
    }
    rep.t_lo = t_end;
    rep.status = tr.status;
    rep.linger = pr.linger;
    for (auto& r : tr.poles)
        if (r.p < 0) ++rep.pole_count_negative;
    if (pr.trapped) {
        rep.label = Label::A;
        rep.trap_time = pr.trap_time;
    } else if (pr.recurring > 0) {
        rep.label = Label::C;
    } else {
        // no trap and no late poles: the orbit is sitting on the saddle branch
        rep.label = Label::B;
        rep.ambiguous = true;
    }
    if (tr.status != TraceStatus::completed) {
        rep.ambiguous = true;
        rep.note = tr.message;
    }

    if (o.detect_b && !o.decide_only && (pr.linger < o.linger_tol || pr.at_btime < o.b_threshold)) {
        bool literal = pr.at_btime < o.b_threshold;
        double dH = o.b_eps * std::max(1.0, std::abs(H));
        Label lo = quick_label(p, H - dH, o), hi = quick_label(p, H + dH, o);
        if (literal || lo != hi) {
            rep.label = Label::B;
            rep.note = literal ? "saddle threshold met" : "label flips within the separatrix tolerance";
        }
    }

    if (!o.decide_only) {
        if (rep.label == Label::A) fit_type_a(pr, rep);
        if (rep.label == Label::C) fit_type_c(tr.poles, rep);
        if (rep.label == Label::B && o.stokes_for_b) {
            StokesData sd = stokes_multipliers(p, H);
            rep.h = (sd.at(1) - sd.at(-1)).real();
        }
    }
    return rep;
}

std::vector<double> find_separatrix_xi(double C, int n_max, const SeparatrixOptions& opts) {
    if (n_max < 1) throw Error("domain_error", "n_max must be at least 1", {{"n_max", n_max}});
    if (!(C > kCcrit && C < find_C0())) return {};
    const double k2 = kappa2(C);
    const double gap = 2 / -k2;
    ClassifyOptions co = opts.classify;
    co.decide_only = true;
    co.detect_b = false;
    auto label_at = [&](double xi) {
        ScaledCoords sc{xi, C, 1};
        return classify(sc.p(), sc.H(), co).label;
    };

    std::vector<double> out;
    double h = gap / opts.scan_per_gap;
    double xi = 0.1 * h;
    Label prev = label_at(xi);
    const double xi_cap = gap * (n_max + 4) * 3;
    while (static_cast<int>(out.size()) < n_max && xi < xi_cap) {
        std::vector<double> xs;
        for (int k = 1; k <= opts.scan_per_gap; ++k) xs.push_back(xi + k * h);
        std::vector<Label> ls(xs.size());
        parallel_for(xs.size(), opts.workers, [&](std::size_t i) { ls[i] = label_at(xs[i]); });
        for (std::size_t i = 0; i < xs.size() && static_cast<int>(out.size()) < n_max; ++i) {
            if (ls[i] != prev) {
                double a = i == 0 ? xi : xs[i - 1], b = xs[i];
                Label la = prev;
                while (b - a > opts.rel_tol * b) {
                    double m = 0.5 * (a + b);
                    if (label_at(m) == la) a = m; else b = m;
                }
                out.push_back(0.5 * (a + b));
            }
            prev = ls[i];
        }
        xi = xs.back();
    }
    if (static_cast<int>(out.size()) < n_max)
        throw Error("bracketing_failure", "fewer sign changes than requested along the ray",
                    {{"C", C}, {"found", out.size()}, {"n_max", n_max}});
    return out;
}

Label label_from_stokes(const StokesData& s, double b_tol) {
    double im = s.at(0).imag();
    if (s.error_bar[2] >= 1 || std::abs(im) <= b_tol) return Label::B;
    if (im > 0) return Label::A;
    return Label::C;
}

Label stokes_label(double p, double H, double b_eps, const StokesOptions& opts) {
    Label here = label_from_stokes(stokes_multipliers(p, H, opts));
    if (b_eps <= 0 || here == Label::B) return here;
    double dH = b_eps * std::max(1.0, std::abs(H));
    Label lo = label_from_stokes(stokes_multipliers(p, H - dH, opts));
    Label hi = label_from_stokes(stokes_multipliers(p, H + dH, opts));
    return lo != hi ? Label::B : here;
}

ConnectionParameters connection_parameters(const StokesData& s, double b_tol) {
    ConnectionParameters cp;
    cp.label = label_from_stokes(s, b_tol);
    const cplx s0 = s.at(0);
    const double L2 = std::log(2.0), L3 = std::log(3.0);
    if (cp.label == Label::A) {
        double m = std::abs(s0);
        if (m > 1 + 1e-12)
            throw Error("inconsistent_input", "Type A data needs |s0| <= 1", {{"abs_s0", m}});
        double qd2 = std::max(0.0, -std::log(m) / pi);
        double d = std::sqrt(qd2 / q24);
        // arg Gamma(-i y) = arg Gamma(1 - i y) + pi/2 for y > 0, which also fixes the d = 0 limit
        double ag = arg_gamma(cplx(1, -qd2 / 2)) + pi / 2;
        double qphi = -std::arg(s.at(3)) - qd2 * (19.0 / 8 * L2 + 5.0 / 8 * L3) - pi / 4 - ag;
        cp.d = d;
        cp.phi = qphi / q24;
    } else if (cp.label == Label::C) {
        double rho = std::log(std::abs(s0)) / (2 * pi);
        cp.rho = rho;
        cp.sigma = 19.0 / 8 * rho * L2 + 5.0 / 8 * rho * L3 + 0.5 * arg_gamma(cplx(0.5, -rho)) - pi / 4 +
                   0.5 * std::arg(s.at(2));
    } else {
        cp.h = (s.at(1) - s.at(4)).real();
    }
    return cp;
}

}  // namespace painleve
