#include "painleve/cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "painleve/asymptotics.hpp"
#include "painleve/classifier.hpp"
#include "painleve/errors.hpp"
#include "painleve/integrator.hpp"
#include "painleve/laurent.hpp"
#include "painleve/output.hpp"
#include "painleve/stokes.hpp"

namespace painleve {

namespace {

namespace fs = std::filesystem;

struct Context {
    std::string out_dir;
    std::string format = "all";
    std::ostream* out;
    std::vector<std::string> written;

    bool wants(const std::string& kind) const { return format == "all" || format == kind; }

    void emit(const std::string& name, const std::string& kind, const std::function<void(std::ostream&)>& body) {
        if (!wants(kind)) return;
        fs::create_directories(out_dir);
        fs::path path = fs::path(out_dir) / name;
        std::ofstream f(path);
        if (!f) throw Error("io_error", "cannot open artifact for writing", {{"path", path.string()}});
        body(f);
        written.push_back(path.string());
    }

    void emit_json(const std::string& name, const json& j) {
        emit(name, "json", [&](std::ostream& os) { os << j.dump(2) << '\n'; });
    }
};

json error_json(const std::string& code, const std::string& message, const nlohmann::json& context) {
    return {{"code", code}, {"message", message}, {"context", json::parse(context.dump())}};
}

std::string label_string(Label l) { return to_string(l); }

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Real solutions of y'' = 6 y^2 + t parameterized by pole data (p, H)", "painleve"};
    app.require_subcommand(1);
    app.fallthrough();  // global options may follow the subcommand
    Context ctx;
    ctx.out = &out;
    const char* env = std::getenv(kOutDirEnv);
    ctx.out_dir = env && *env ? env : ".";
    app.add_option("--out-dir", ctx.out_dir, std::string("artifact directory (default: $") + kOutDirEnv + " or .)");
    app.add_option("--format", ctx.format, "artifact kinds to write")->check(CLI::IsMember({"all", "csv", "json", "svg"}));

    std::function<void()> action;

    // laurent
    double lp = 0, lH = 0, lt = NAN, lt_im = 0;
    int lN = 40;
    auto* c_laurent = app.add_subcommand("laurent", "Laurent coefficients at a pole, optionally evaluated at t");
    c_laurent->add_option("--p", lp, "pole location")->required();
    c_laurent->add_option("--H", lH, "free coefficient")->required();
    c_laurent->add_option("--N", lN, "truncation order")->check(CLI::Range(4, 400));
    c_laurent->add_option("--t", lt, "evaluation point (real part)");
    c_laurent->add_option("--t-im", lt_im, "evaluation point (imaginary part)");
    c_laurent->callback([&] {
        action = [&] {
            LaurentSeries s = laurent_coeffs(lp, lH, lN);
            json j = {{"command", "laurent"}, {"config", {{"p", lp}, {"H", lH}, {"N", lN}}}, {"series", to_json(s)}};
            std::ostringstream msg;
            msg << "laurent p=" << fmt17(lp) << " H=" << fmt17(lH) << " N=" << lN;
            if (std::isfinite(lt)) {
                LaurentValue v = eval_laurent(s, cplx(lt, lt_im));
                j["config"]["t"] = {lt, lt_im};
                j["value"] = {{"y", {v.y.real(), v.y.imag()}}, {"yp", {v.yp.real(), v.yp.imag()}}, {"error", v.error}};
                msg << ": y=" << fmt17(v.y.real()) << (lt_im != 0 ? "+" + fmt17(v.y.imag()) + "i" : "")
                    << " y'=" << fmt17(v.yp.real()) << (lt_im != 0 ? "+" + fmt17(v.yp.imag()) + "i" : "")
                    << " err=" << fmt17(v.error);
            }
            ctx.emit_json("laurent.json", j);
            out << msg.str() << '\n';
        };
    });

    // trace
    double tp = NAN, tH = NAN, tstop = 0, ttol = 1e-12, teps = 0.1, tr_det = 0.1;
    int tdir = -1;
    auto* c_trace = app.add_subcommand("trace", "March along the real axis from a pole, hopping over later poles");
    c_trace->add_option("--p", tp, "seed pole")->required();
    c_trace->add_option("--H", tH, "seed free coefficient")->required();
    c_trace->add_option("--dir", tdir, "direction, +1 or -1")->check(CLI::IsMember({-1, 1}));
    c_trace->add_option("--t-stop", tstop, "end of the interval")->required();
    c_trace->add_option("--tol", ttol, "local error tolerance")->check(CLI::PositiveNumber);
    c_trace->add_option("--eps", teps, "seeding offset")->check(CLI::PositiveNumber);
    c_trace->add_option("--r-detour", tr_det, "half-turn radius")->check(CLI::PositiveNumber);
    c_trace->callback([&] {
        action = [&] {
            MarchOptions mo;
            mo.tol = ttol;
            mo.eps = teps;
            mo.r_detour = tr_det;
            SolutionTrace tr = trace_real_line(tp, tH, tdir, tstop, mo);
            json cfg = {{"p", tp}, {"H", tH}, {"dir", tdir}, {"t_stop", tstop}, {"tol", ttol}, {"eps", teps}, {"r_detour", tr_det}};
            ctx.emit("trace.csv", "csv", [&](std::ostream& os) { write_trace_csv(os, tr); });
            ctx.emit_json("trace.json", {{"command", "trace"}, {"config", cfg}, {"trace", to_json(tr)}});
            out << "trace: " << tr.poles.size() << " poles (seed included), status " << to_string(tr.status)
                << ", y(" << fmt17(tr.back().t.real()) << ")=" << fmt17(tr.back().y.real()) << '\n';
            if (tr.status != TraceStatus::completed)
                throw Error(to_string(tr.status), tr.message, {{"poles", tr.poles.size()}});
        };
    });

    // classify
    double cp = 0, cH = 0;
    ClassifyOptions copt;
    auto* c_classify = app.add_subcommand("classify", "Asymptotic type of y(t; p, H) as t -> -infinity");
    c_classify->add_option("--p", cp, "pole location")->required();
    c_classify->add_option("--H", cH, "free coefficient")->required();
    c_classify->add_option("--T", copt.T, "initial window length")->check(CLI::PositiveNumber);
    c_classify->add_option("--T-max", copt.T_max, "extended window length")->check(CLI::PositiveNumber);
    c_classify->add_option("--tol", copt.tol, "integrator tolerance")->check(CLI::PositiveNumber);
    c_classify->callback([&] {
        action = [&] {
            TypeReport r = classify(cp, cH, copt);
            json cfg = {{"p", cp}, {"H", cH}, {"T", copt.T}, {"T_max", copt.T_max}, {"tol", copt.tol}};
            ctx.emit_json("classify.json", {{"command", "classify"}, {"config", cfg}, {"report", to_json(r)}});
            out << "classify p=" << fmt17(cp) << " H=" << fmt17(cH) << ": label " << label_string(r.label)
                << (r.ambiguous ? " (ambiguous)" : "") << '\n';
        };
    });

    // separatrix
    double sC = 0.5;
    int sn = 6;
    SeparatrixOptions sopt;
    auto* c_sep = app.add_subcommand("separatrix", "Bisect the A/C switches xi_n along p = 2 C xi^{4/5}, H = -xi^{6/5}/7");
    c_sep->add_option("--C", sC, "scaled pole location")->required();
    c_sep->add_option("--n", sn, "number of separatrices")->check(CLI::Range(1, 200));
    c_sep->add_option("--rel-tol", sopt.rel_tol, "relative bisection tolerance")->check(CLI::PositiveNumber);
    c_sep->add_option("--workers", sopt.workers, "worker threads")->check(CLI::Range(1, 256));
    c_sep->callback([&] {
        action = [&] {
            std::vector<double> xs = find_separatrix_xi(sC, sn, sopt);
            json rows = json::array();
            std::ostringstream csv;
            csv << "n,xi,p,H,xi_predicted,label_after\n";
            ClassifyOptions q;
            q.decide_only = true;
            q.detect_b = false;
            for (std::size_t k = 0; k < xs.size(); ++k) {
                ScaledCoords sc{xs[k], sC, 1};
                double pred = predict_xi_n(sC, static_cast<int>(k) + 1);
                double next = k + 1 < xs.size() ? 0.5 * (xs[k] + xs[k + 1]) : xs[k] * 1.01;
                ScaledCoords mid{next, sC, 1};
                Label after = classify(mid.p(), mid.H(), q).label;
                rows.push_back({{"n", k + 1}, {"xi", xs[k]}, {"p", sc.p()}, {"H", sc.H()}, {"xi_predicted", pred},
                                {"label_after", label_string(after)}});
                csv << k + 1 << ',' << fmt17(xs[k]) << ',' << fmt17(sc.p()) << ',' << fmt17(sc.H()) << ',' << fmt17(pred)
                    << ',' << label_string(after) << '\n';
            }
            json cfg = {{"C", sC}, {"n", sn}, {"rel_tol", sopt.rel_tol}};
            ctx.emit_json("separatrix.json", {{"command", "separatrix"}, {"config", cfg}, {"xi", rows}});
            ctx.emit("separatrix.csv", "csv", [&](std::ostream& os) { os << csv.str(); });
            out << "separatrix C=" << fmt17(sC) << ": " << xs.size() << " values";
            if (!xs.empty()) out << ", xi_1=" << fmt17(xs.front()) << " xi_" << xs.size() << "=" << fmt17(xs.back());
            out << '\n';
        };
    });

    // phase-diagram
    double pmin = -10, pmax = 25, Hmin = -3, Hmax = 0.5;
    int np = 200, nH = 200;
    bool no_refine = false;
    PhaseDiagramOptions popt;
    auto* c_pd = app.add_subcommand("phase-diagram", "Label a (p, H) grid and trace the boundary curves");
    c_pd->add_option("--p-min", pmin);
    c_pd->add_option("--p-max", pmax);
    c_pd->add_option("--H-min", Hmin);
    c_pd->add_option("--H-max", Hmax);
    c_pd->add_option("--np", np, "grid points in p")->check(CLI::Range(1, 100000));
    c_pd->add_option("--nH", nH, "grid points in H")->check(CLI::Range(1, 100000));
    c_pd->add_option("--workers", popt.workers, "worker threads")->check(CLI::Range(1, 256));
    c_pd->add_option("--bisect-tol", popt.bisect_tol, "relative bisection tolerance")->check(CLI::PositiveNumber);
    c_pd->add_flag("--no-refine", no_refine, "skip boundary bisection");
    c_pd->callback([&] {
        action = [&] {
            popt.refine = !no_refine;
            PhaseDiagram pd = phase_diagram({pmin, pmax}, {Hmin, Hmax}, np, nH, popt);
            json cfg = {{"p_range", {pmin, pmax}}, {"H_range", {Hmin, Hmax}}, {"np", np}, {"nH", nH},
                        {"refine", popt.refine}, {"bisect_tol", popt.bisect_tol}};
            ctx.emit("phase.csv", "csv", [&](std::ostream& os) { write_phase_csv(os, pd); });
            ctx.emit("phase.svg", "svg", [&](std::ostream& os) { write_phase_svg(os, pd); });
            json j = polylines_json(pd);
            j["command"] = "phase-diagram";
            j["config"] = cfg;
            ctx.emit_json("sigma.json", j);
            std::size_t na = 0, fails = 0;
            for (std::size_t k = 0; k < pd.labels.size(); ++k) na += pd.labels[k] == Label::A, fails += pd.failed[k];
            out << "phase-diagram " << np << "x" << nH << ": " << na << " A cells, " << fails
                << " failed, A ceiling " << fmt17(pd.a_ceiling) << " (grid " << fmt17(pd.a_ceiling_grid) << ")\n";
        };
    });

    // periods
    double pC = 0;
    PeriodOptions peropt;
    auto* c_per = app.add_subcommand("periods", "Turning points, kappa^2, kappa-hat^2, I_E, I_F, E, F and G at C");
    c_per->add_option("--C", pC, "scaled pole location")->required();
    c_per->add_option("--theta-E", peropt.theta_E, "ray angle for I_E");
    c_per->add_option("--theta-F", peropt.theta_F, "ray angle for I_F");
    c_per->callback([&] {
        action = [&] {
            PeriodData d = periods(pC, peropt);
            json j = {{"command", "periods"},
                      {"config", {{"C", pC}, {"theta_E", peropt.theta_E}, {"theta_F", peropt.theta_F}}},
                      {"turning_points", {to_json(turning_points(pC, 1)), to_json(turning_points(pC, -1))}},
                      {"periods", to_json(d)}};
            ctx.emit_json("periods.json", j);
            out << "periods C=" << fmt17(pC) << ": kappa2=" << fmt17(d.kappa2) << " kappahat2=" << fmt17(d.kappahat2.real())
                << (d.kappahat2.imag() < 0 ? "" : "+") << fmt17(d.kappahat2.imag()) << "i G=" << fmt17(d.G) << '\n';
        };
    });

    // c0
    auto* c_c0 = app.add_subcommand("c0", "The constant C0 where Im kappa-hat^2 vanishes");
    c_c0->callback([&] {
        action = [&] {
            double c0 = find_C0();
            ctx.emit_json("c0.json", {{"command", "c0"}, {"config", json::object()}, {"C0", c0}, {"kappa2", kappa2(c0)}});
            out << fmt17(c0) << '\n';
        };
    });

    // tritronquee
    int tn = 10;
    bool compare = false;
    double ttol2 = 1e-12;
    auto* c_tri = app.add_subcommand("tritronquee", "Asymptotic poles of the real tritronquee solution");
    c_tri->add_option("--n", tn, "number of poles")->check(CLI::Range(1, 10000));
    c_tri->add_flag("--compare", compare, "also integrate from the origin and compare");
    c_tri->add_option("--tol", ttol2, "integrator tolerance")->check(CLI::PositiveNumber);
    c_tri->callback([&] {
        action = [&] {
            SolutionTrace tr;
            if (compare) {
                MarchOptions mo;
                mo.tol = ttol2;
                mo.record_samples = false;
                tr = tritronquee_trace(tn, mo);
                if (static_cast<int>(tr.poles.size()) < tn)
                    throw Error("integration_failure", "fewer poles than requested", {{"found", tr.poles.size()}, {"status", to_string(tr.status)}});
            }
            json rows = json::array();
            std::ostringstream csv;
            csv << "n,p_asym,H_asym" << (compare ? ",p_num,H_num,rel_err_p,rel_err_H" : "") << '\n';
            out << (compare ? " n        p_asym        H_asym         p_num         H_num    rel_err_p    rel_err_H\n"
                            : " n        p_asym        H_asym\n");
            for (int n = 1; n <= tn; ++n) {
                auto [pa, Ha] = tritronquee_pole(n);
                json row = {{"n", n}, {"p_asym", pa}, {"H_asym", Ha}};
                csv << n << ',' << fmt17(pa) << ',' << fmt17(Ha);
                char line[200];
                if (compare) {
                    const PoleRecord& r = tr.poles[n - 1];
                    double ep = (pa - r.p) / r.p, eH = (Ha - r.H) / r.H;
                    row["p_num"] = r.p, row["H_num"] = r.H, row["rel_err_p"] = ep, row["rel_err_H"] = eH;
                    csv << ',' << fmt17(r.p) << ',' << fmt17(r.H) << ',' << fmt17(ep) << ',' << fmt17(eH);
                    std::snprintf(line, sizeof line, "%2d %13.7f %13.7f %13.7f %13.7f %12.4e %12.4e\n", n, pa, Ha, r.p, r.H, ep, eH);
                } else {
                    std::snprintf(line, sizeof line, "%2d %13.7f %13.7f\n", n, pa, Ha);
                }
                out << line;
                csv << '\n';
                rows.push_back(row);
            }
            ctx.emit("tritronquee.csv", "csv", [&](std::ostream& os) { os << csv.str(); });
            ctx.emit_json("tritronquee.json", {{"command", "tritronquee"},
                                               {"config", {{"n", tn}, {"compare", compare}, {"tol", ttol2}}},
                                               {"C0", find_C0()},
                                               {"poles", rows}});
        };
    });

    // stokes
    double sp = 0, sH = 0;
    StokesOptions stopt;
    auto* c_st = app.add_subcommand("stokes", "Stokes multipliers of the associated linear problem");
    c_st->add_option("--p", sp, "pole location")->required();
    c_st->add_option("--H", sH, "free coefficient")->required();
    c_st->add_option("--seed-tol", stopt.seed_tol, "WKB truncation budget")->check(CLI::PositiveNumber);
    c_st->add_option("--R-min", stopt.R_min, "smallest starting radius")->check(CLI::PositiveNumber);
    double sb_eps = 0;
    c_st->add_option("--b-eps", sb_eps, "relative H perturbation for the separatrix test (0 disables)")
        ->check(CLI::NonNegativeNumber);
    c_st->callback([&] {
        action = [&] {
            StokesData s = stokes_multipliers(sp, sH, stopt);
            json j = {{"command", "stokes"},
                      {"config", {{"p", sp}, {"H", sH}, {"seed_tol", stopt.seed_tol}, {"R_min", stopt.R_min}, {"b_eps", sb_eps}}},
                      {"stokes", to_json(s)}};
            Label lab = sb_eps > 0 ? stokes_label(sp, sH, sb_eps, stopt) : label_from_stokes(s);
            j["label"] = label_string(lab);
            try {
                j["connection"] = to_json(connection_parameters(s));
            } catch (const Error& e) {
                j["connection"] = error_json(e.code(), e.what(), e.context());
            }
            ctx.emit_json("stokes.json", j);
            cplx s0 = s.at(0);
            out << "stokes p=" << fmt17(sp) << " H=" << fmt17(sH) << ": s0=" << fmt17(s0.real()) << (s0.imag() < 0 ? "" : "+")
                << fmt17(s0.imag()) << "i label " << label_string(lab) << " max residual "
                << fmt17(s.max_constraint_residual()) << '\n';
        };
    });

    std::vector<std::string> argv_rev(args.rbegin(), args.rend());
    try {
        app.parse(argv_rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << error_json("usage_error", e.what(), {{"args", args}}).dump() << '\n';
        return 2;
    }
    try {
        if (action) action();
    } catch (const Error& e) {
        err << error_json(e.code(), e.what(), e.context()).dump() << '\n';
        return e.code() == "domain_error" ? 2 : 1;
    } catch (const std::exception& e) {
        err << error_json("internal_error", e.what(), nlohmann::json::object()).dump() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace painleve
