#include "painleve/integrator.hpp"

#include <cmath>
#include <numbers>

#include "painleve/dop853.hpp"
#include "painleve/errors.hpp"
#include "painleve/laurent.hpp"

namespace painleve {

std::string to_string(TraceStatus s) {
    switch (s) {
        case TraceStatus::completed: return "completed";
        case TraceStatus::blow_up_unresolved: return "blow-up-unresolved";
        case TraceStatus::tolerance_failure: return "tolerance-failure";
        case TraceStatus::pole_location_failure: return "pole-location-failure";
        case TraceStatus::cluster_failure: return "cluster-failure";
    }
    return "unknown";
}

namespace {

using State = CState<2>;

StepControl control(double tol) {
    StepControl c;
    c.rtol = tol;
    c.atol = tol;
    return c;
}

// Straight segment ta -> tb parameterized by arc length.
template <class Obs>
StepStatus segment(cplx ta, cplx tb, State& w, double tol, Obs&& obs, long* steps = nullptr) {
    double L = std::abs(tb - ta);
    if (L == 0) return StepStatus::completed;
    cplx u = (tb - ta) / L;
    bool real_leg = ta.imag() == 0 && tb.imag() == 0;
    auto at = [&](double s) { return real_leg ? cplx(ta.real() + u.real() * s, 0) : ta + u * s; };
    auto f = [&](double s, const State& v, State& d) {
        d[0] = u * v[1];
        d[1] = u * (6.0 * v[0] * v[0] + at(s));
    };
    StepStats st;
    auto status = dop853<2>(f, 0.0, L, w, control(tol), [&](double s, const State& v) { return obs(at(s), v); }, &st);
    if (steps) *steps += st.accepted;
    return status;
}

// Arc t = c + r e^{i theta}, theta from th0 to th1.
template <class Obs>
StepStatus arc(cplx c, double r, double th0, double th1, State& w, double tol, Obs&& obs, long* steps = nullptr) {
    auto f = [&](double th, const State& v, State& d) {
        cplx e = std::polar(1.0, th);
        cplx dt = cplx(0, r) * e;
        d[0] = dt * v[1];
        d[1] = dt * (6.0 * v[0] * v[0] + c + r * e);
    };
    StepStats st;
    auto status = dop853<2>(f, th0, th1, w, control(tol),
                            [&](double th, const State& v) { return obs(c + r * std::polar(1.0, th), v); }, &st);
    if (steps) *steps += st.accepted;
    return status;
}

void push(SolutionTrace& tr, bool record, cplx t, const State& w) {
    if (record) tr.samples.push_back({t, w[0], w[1]});
}

}  // namespace

SolutionTrace integrate_ivp(cplx t0, cplx y0, cplx y0p, const std::vector<cplx>& path, double tol,
                            double blow_up) {
    if (!(tol > 0)) throw Error("domain_error", "tolerance must be positive", {{"tol", tol}});
    SolutionTrace tr;
    State w{y0, y0p};
    tr.samples.push_back({t0, y0, y0p});
    cplx t = t0;
    for (const cplx& next : path) {
        bool blew = false;
        auto st = segment(t, next, w, tol, [&](cplx tt, const State& v) {
            tr.samples.push_back({tt, v[0], v[1]});
            if (std::abs(v[0]) > blow_up) {
                blew = true;
                return false;
            }
            return true;
        }, &tr.steps);
        if (blew) {
            tr.status = TraceStatus::blow_up_unresolved;
            tr.message = "solution exceeded the blow-up threshold";
            return tr;
        }
        if (st != StepStatus::completed) {
            tr.status = TraceStatus::tolerance_failure;
            tr.message = "step size underflow";
            return tr;
        }
        t = next;
        tr.samples.back().t = next;
    }
    return tr;
}

SolutionTrace march_real_line(double t0, double y0, double y0p, int direction, double t_stop,
                              const MarchOptions& opts) {
    if (direction != 1 && direction != -1) throw Error("domain_error", "direction must be +1 or -1");
    const double dir = direction;
    const bool rec = opts.record_samples;
    SolutionTrace tr;
    tr.direction = direction;
    double t = t0;
    State w{cplx(y0, 0), cplx(y0p, 0)};
    push(tr, rec, t, w);
    if (opts.observer && !opts.observer(t, y0, y0p)) {
        tr.stopped_early = true;
        return tr;
    }
    if ((t_stop - t) * dir <= 0) return tr;

    FitOptions fo;
    fo.N = opts.laurent_order;
    const double r0 = opts.r_detour;
    auto trigger_level = [&](double tt) { return 1.0 / (2.25 * r0 * r0) + std::sqrt(std::abs(tt)); };

    while (true) {
        // real-axis leg with the approach trigger armed
        bool trig = false, user_stop = false;
        double tc = t;
        auto st = segment(cplx(t, 0), cplx(t_stop, 0), w, opts.tol, [&](cplx tt, const State& v) {
            tc = tt.real();
            push(tr, rec, tt, v);
            if (opts.observer && !opts.observer(tc, v[0].real(), v[1].real())) {
                user_stop = true;
                return false;
            }
            if (v[0].real() > trigger_level(tc) && dir * v[1].real() > 0) {
                trig = true;
                return false;
            }
            return true;
        }, &tr.steps);
        if (user_stop) {
            tr.stopped_early = true;
            return tr;
        }
        if (st == StepStatus::completed) {
            if (rec) tr.samples.back().t = cplx(t_stop, 0);
            return tr;
        }
        if (!trig) {
            tr.status = TraceStatus::tolerance_failure;
            tr.message = "step size underflow on the real axis";
            return tr;
        }
        t = tc;

        // locate the pole ahead
        PoleFit fit;
        bool located = false;
        for (int attempt = 0; attempt < 3 && !located; ++attempt) {
            double y = w[0].real();
            double guess = t + dir / std::sqrt(y);
            fit = fit_pole(t, y, w[1].real(), guess, fo);
            located = fit.converged && dir * (fit.p - t) > 0;
            if (!located) {
                // creep closer and retry
                double target = 4 * y;
                segment(cplx(t, 0), cplx(t + dir * 0.5 / std::sqrt(y), 0), w, opts.tol,
                        [&](cplx tt, const State& v) {
                            t = tt.real();
                            push(tr, rec, tt, v);
                            return v[0].real() < target;
                        }, &tr.steps);
            }
        }
        if (!located) {
            tr.status = TraceStatus::pole_location_failure;
            tr.message = "pole fit did not converge";
            return tr;
        }
        const double p = fit.p;
        const double dist = dir * (p - t);

        // pole beyond the end of the requested interval
        if (dir * (t_stop - p) <= 0) {
            auto s2 = segment(cplx(t, 0), cplx(t_stop, 0), w, opts.tol, [&](cplx tt, const State& v) {
                push(tr, rec, tt, v);
                return true;
            }, &tr.steps);
            if (s2 != StepStatus::completed) {
                tr.status = TraceStatus::tolerance_failure;
                tr.message = "step size underflow near the final pole";
            }
            return tr;
        }

        const State w_entry = w;
        const double t_entry = t;
        const std::size_t n_entry = tr.samples.size();
        bool done = false;
        PoleRecord prec;
        for (int shrink = 0; shrink < 4 && !done; ++shrink) {
            double r = std::min(r0, dist) / std::pow(2.0, shrink);
            w = w_entry;
            if (rec) tr.samples.resize(n_entry);
            double a = p - dir * r;
            if (std::abs(a - t_entry) > 0) {
                auto s1 = segment(cplx(t_entry, 0), cplx(a, 0), w, opts.tol, [&](cplx tt, const State& v) {
                    push(tr, rec, tt, v);
                    return true;
                }, &tr.steps);
                if (s1 != StepStatus::completed) continue;
            }
            double th0 = dir > 0 ? std::numbers::pi : 0.0;
            double th1 = dir > 0 ? 0.0 : std::numbers::pi;
            const double cap = 100.0 / (r * r);
            bool intruder = false;
            auto s2 = arc(cplx(p, 0), r, th0, th1, w, opts.tol, [&](cplx tt, const State& v) {
                push(tr, rec, tt, v);
                if (std::abs(v[0]) > cap) {
                    intruder = true;
                    return false;
                }
                return true;
            }, &tr.steps);
            if (intruder || s2 != StepStatus::completed) continue;
            double b = p + dir * r;
            prec.reality_residual = std::abs(w[0].imag()) / (1 + std::abs(w[0])) +
                                    std::abs(w[1].imag()) / (1 + std::abs(w[1]));
            w[0] = cplx(w[0].real(), 0);
            w[1] = cplx(w[1].real(), 0);
            if (rec) tr.samples.back() = {cplx(b, 0), w[0], w[1]};
            PoleFit back = fit_pole(b, w[0].real(), w[1].real(), p, fo);
            double mis = std::abs(back.p - p) + std::abs(back.H - fit.H) / (1 + std::abs(fit.H));
            if (!back.converged || std::abs(back.p - p) > 1e-6 || mis > 1e-3) continue;
            if (prec.reality_residual > opts.reality_tol) continue;
            prec.p = p;
            prec.H = fit.H;
            prec.fit_residual = fit.residual;
            prec.exit_mismatch = mis;
            prec.radius = r;
            t = b;
            done = true;
        }
        if (!done) {
            tr.status = TraceStatus::cluster_failure;
            tr.message = "half turn around the pole failed; another pole is too close";
            tr.poles.push_back({p, fit.H, fit.residual, 0, 0, 0});
            return tr;
        }
        tr.poles.push_back(prec);
        if (tr.poles.size() >= opts.max_poles) return tr;
        if (opts.on_pole && !opts.on_pole(prec)) {
            tr.stopped_early = true;
            return tr;
        }
        if (opts.observer && !opts.observer(t, w[0].real(), w[1].real())) {
            tr.stopped_early = true;
            return tr;
        }
        if (dir * (t - t_stop) >= 0) {
            // the interval ends inside the half turn; step back to t_stop
            segment(cplx(t, 0), cplx(t_stop, 0), w, opts.tol, [&](cplx tt, const State& v) {
                push(tr, rec, tt, v);
                return true;
            }, &tr.steps);
            return tr;
        }
    }
}

SolutionTrace trace_real_line(double p, double H, int direction, double t_stop, const MarchOptions& opts) {
    if (direction != 1 && direction != -1) throw Error("domain_error", "direction must be +1 or -1");
    if ((t_stop - p) * direction <= 0)
        throw Error("domain_error", "t_stop must lie on the marching side of the pole",
                    {{"p", p}, {"t_stop", t_stop}, {"direction", direction}});
    LaurentSeries s = laurent_coeffs(p, H, opts.laurent_order);
    double eps = std::min(opts.eps, std::abs(t_stop - p));
    double t0 = p + direction * eps;
    LaurentValue v = eval_laurent(s, cplx(t0, 0));
    SolutionTrace tr = march_real_line(t0, v.y.real(), v.yp.real(), direction, t_stop, opts);
    PoleRecord seed;
    seed.p = p;
    seed.H = H;
    tr.poles.insert(tr.poles.begin(), seed);
    return tr;
}

SolutionTrace tritronquee_trace(int n, const MarchOptions& opts) {
    if (n < 1) throw Error("domain_error", "need at least one pole", {{"n", n}});
    MarchOptions o = opts;
    o.max_poles = n;
    // p_n grows like n^{4/5}; the bound only has to lie beyond the n-th pole
    double t_stop = 10 + 4 * std::pow(static_cast<double>(n), 0.8);
    return march_real_line(0, kTritronqueeY0, kTritronqueeYp0, 1, t_stop, o);
}

}  // namespace painleve
