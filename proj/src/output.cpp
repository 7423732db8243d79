#include "painleve/output.hpp"

#include <cmath>
#include <cstdio>

namespace painleve {

namespace {

// nlohmann writes non-finite doubles as null; keep that explicit.
json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json cnum(cplx z) { return json::array({num(z.real()), num(z.imag())}); }

template <class T>
json opt(const std::optional<T>& v) {
    return v ? num(*v) : json(nullptr);
}

}  // namespace

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

json to_json(const LaurentSeries& s) {
    json a = json::array();
    for (int k = -2; k <= s.N; ++k) a.push_back(num(static_cast<double>(s.coeff(k))));
    return {{"p", s.p}, {"H", s.H}, {"N", s.N}, {"k_min", -2}, {"coeffs", a}};
}

json to_json(const PoleRecord& r) {
    return {{"p", num(r.p)},
            {"H", num(r.H)},
            {"fit_residual", num(r.fit_residual)},
            {"reality_residual", num(r.reality_residual)},
            {"exit_mismatch", num(r.exit_mismatch)},
            {"radius", num(r.radius)}};
}

json to_json(const SolutionTrace& tr, bool with_samples) {
    json poles = json::array();
    for (auto& r : tr.poles) poles.push_back(to_json(r));
    json j = {{"direction", tr.direction},
              {"status", to_string(tr.status)},
              {"stopped_early", tr.stopped_early},
              {"message", tr.message},
              {"steps", tr.steps},
              {"poles", poles}};
    if (!tr.samples.empty()) {
        const auto& b = tr.samples.back();
        j["final"] = {{"t", cnum(b.t)}, {"y", cnum(b.y)}, {"yp", cnum(b.yp)}};
    }
    if (with_samples) {
        json s = json::array();
        for (auto& x : tr.samples) s.push_back({cnum(x.t), cnum(x.y), cnum(x.yp)});
        j["samples"] = s;
    }
    return j;
}

json to_json(const TypeReport& r) {
    return {{"label", to_string(r.label)},
            {"ambiguous", r.ambiguous},
            {"t_window", {num(r.t_lo), num(r.t_hi)}},
            {"d", opt(r.d)},
            {"phi", opt(r.phi)},
            {"h", opt(r.h)},
            {"rho", opt(r.rho)},
            {"sigma", opt(r.sigma)},
            {"pole_count_negative", r.pole_count_negative},
            {"fit_residual", num(r.fit_residual)},
            {"trap_time", num(r.trap_time)},
            {"linger", num(r.linger)},
            {"status", to_string(r.status)},
            {"note", r.note}};
}

json to_json(const TurningPoints& tp) {
    return {{"case_sign", tp.case_sign}, {"eta0", cnum(tp.eta0)}, {"eta1", cnum(tp.eta1)}, {"eta2", cnum(tp.eta2)}};
}

json to_json(const PeriodData& d) {
    return {{"C", d.C},           {"kappa2", num(d.kappa2)}, {"kappahat2", cnum(d.kappahat2)},
            {"I_E", cnum(d.I_E)}, {"I_F", cnum(d.I_F)},      {"E", cnum(d.E)},
            {"F", cnum(d.F)},     {"G", num(d.G)}};
}

json to_json(const StokesData& s) {
    json j = json::object();
    json m = json::object();
    for (int k = -2; k <= 2; ++k) m[std::to_string(k)] = cnum(s.at(k));
    j["s"] = m;
    j["constraint_residual"] = s.constraint_residual;
    j["reality_residual"] = s.reality_residual;
    j["error_bar"] = s.error_bar;
    j["normalization_residual"] = num(s.normalization_residual);
    j["R_start"] = num(s.R_start);
    j["seed_error"] = num(s.seed_error);
    return j;
}

json to_json(const ConnectionParameters& c) {
    return {{"label", to_string(c.label)}, {"d", opt(c.d)},     {"phi", opt(c.phi)},
            {"h", opt(c.h)},               {"rho", opt(c.rho)}, {"sigma", opt(c.sigma)}};
}

void write_trace_csv(std::ostream& os, const SolutionTrace& tr) {
    os << "re_t,im_t,re_y,im_y,re_yp,im_yp\n";
    for (auto& s : tr.samples)
        os << fmt17(s.t.real()) << ',' << fmt17(s.t.imag()) << ',' << fmt17(s.y.real()) << ',' << fmt17(s.y.imag())
           << ',' << fmt17(s.yp.real()) << ',' << fmt17(s.yp.imag()) << '\n';
}

void write_phase_csv(std::ostream& os, const PhaseDiagram& pd) {
    os << "p,H,label,failed\n";
    for (std::size_t i = 0; i < pd.H.size(); ++i)
        for (std::size_t j = 0; j < pd.p.size(); ++j)
            os << fmt17(pd.p[j]) << ',' << fmt17(pd.H[i]) << ',' << to_string(pd.at(i, j)) << ','
               << (pd.failed[i * pd.p.size() + j] ? 1 : 0) << '\n';
}

void write_phase_svg(std::ostream& os, const PhaseDiagram& pd) {
    const int cell = 4, margin = 40;
    const int np = static_cast<int>(pd.p.size()), nH = static_cast<int>(pd.H.size());
    const int w = np * cell, h = nH * cell;
    const double p0 = pd.p.front(), p1 = pd.p.back(), H0 = pd.H.front(), H1 = pd.H.back();
    auto X = [&](double p) { return margin + (np > 1 ? (p - p0) / (p1 - p0) * (w - cell) : 0) + cell / 2.0; };
    auto Y = [&](double H) { return margin + h - cell / 2.0 - (nH > 1 ? (H - H0) / (H1 - H0) * (h - cell) : 0); };
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w + 2 * margin << "\" height=\"" << h + 2 * margin
       << "\">\n";
    for (int i = 0; i < nH; ++i)
        for (int j = 0; j < np; ++j) {
            Label l = pd.at(i, j);
            const char* col = l == Label::A ? "#4a90d9" : l == Label::B ? "#2ca02c" : "#f2c14e";
            if (pd.failed[i * np + j]) col = "#999999";
            os << "<rect x=\"" << margin + j * cell << "\" y=\"" << margin + (nH - 1 - i) * cell << "\" width=\""
               << cell << "\" height=\"" << cell << "\" fill=\"" << col << "\"/>\n";
        }
    for (const auto& line : pd.polylines) {
        if (line.size() < 2) continue;
        os << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1\" points=\"";
        for (auto [p, H] : line) os << fmt17(X(p)) << ',' << fmt17(Y(H)) << ' ';
        os << "\"/>\n";
    }
    os << "<text x=\"" << margin << "\" y=\"" << margin + h + 25 << "\" font-size=\"12\">p in [" << fmt17(p0) << ", "
       << fmt17(p1) << "], H in [" << fmt17(H0) << ", " << fmt17(H1)
       << "]; A blue, B green, C yellow, failed grey</text>\n";
    os << "</svg>\n";
}

json polylines_json(const PhaseDiagram& pd) {
    json lines = json::array();
    for (const auto& line : pd.polylines) {
        json pts = json::array();
        for (auto [p, H] : line) pts.push_back({num(p), num(H)});
        lines.push_back(pts);
    }
    json bd = json::array();
    for (const auto& b : pd.boundary) bd.push_back({{"p", b.p}, {"H", b.H}, {"below", to_string(b.below)}, {"above", to_string(b.above)}});
    return {{"polylines", lines},
            {"boundary", bd},
            {"a_ceiling_grid", num(pd.a_ceiling_grid)},
            {"a_ceiling", num(pd.a_ceiling)}};
}

}  // namespace painleve
