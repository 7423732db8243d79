#include <algorithm>
#include <cmath>

#include "painleve/classifier.hpp"
#include "painleve/errors.hpp"
#include "painleve/parallel.hpp"

namespace painleve {

namespace {

std::vector<double> linspace(std::pair<double, double> r, int n) {
    std::vector<double> v(n);
    for (int k = 0; k < n; ++k) v[k] = n == 1 ? r.first : r.first + (r.second - r.first) * k / (n - 1);
    return v;
}

struct Cell {
    Label label = Label::C;
    bool failed = false;
};

Cell classify_cell(double p, double H, const ClassifyOptions& co) {
    Cell c;
    try {
        TypeReport r = classify(p, H, co);
        c.label = r.label;
        c.failed = r.status != TraceStatus::completed;
    } catch (const std::exception&) {
        c.failed = true;
    }
    return c;
}

// Bisects in H between a point labelled `lo_label` at H_lo and a different label at H_hi.
double bisect_H(double p, double H_lo, double H_hi, Label lo_label, const ClassifyOptions& co, double tol) {
    while (std::abs(H_hi - H_lo) > tol * std::max(1.0, std::abs(H_hi))) {
        double m = 0.5 * (H_lo + H_hi);
        if (classify_cell(p, m, co).label == lo_label) H_lo = m; else H_hi = m;
    }
    return 0.5 * (H_lo + H_hi);
}

// Topmost A -> non-A transition in the column at p, searched upward from H_start (an A point).
double top_boundary(double p, double H_start, double H_top, double dH, const ClassifyOptions& co, double tol) {
    double lo = H_start;
    if (classify_cell(p, lo, co).label != Label::A) return -INFINITY;
    double hi = lo + dH;
    while (hi < H_top && classify_cell(p, hi, co).label == Label::A) lo = hi, hi += dH;
    return bisect_H(p, lo, std::min(hi, H_top), Label::A, co, tol);
}

}  // namespace

PhaseDiagram phase_diagram(std::pair<double, double> p_range, std::pair<double, double> H_range, int np, int nH,
                           const PhaseDiagramOptions& opts) {
    if (np < 1 || nH < 1) throw Error("domain_error", "grid needs at least one point per axis", {{"np", np}, {"nH", nH}});
    if (!std::isfinite(p_range.first + p_range.second + H_range.first + H_range.second))
        throw Error("domain_error", "grid ranges must be finite");
    PhaseDiagram pd;
    pd.p = linspace(p_range, np);
    pd.H = linspace(H_range, nH);
    ClassifyOptions co = opts.classify;
    co.decide_only = true;
    co.detect_b = false;

    std::vector<Cell> cells(static_cast<std::size_t>(np) * nH);
    parallel_for(cells.size(), opts.workers, [&](std::size_t k) {
        cells[k] = classify_cell(pd.p[k % np], pd.H[k / np], co);
    });
    pd.labels.resize(cells.size());
    pd.failed.resize(cells.size());
    for (std::size_t k = 0; k < cells.size(); ++k) pd.labels[k] = cells[k].label, pd.failed[k] = cells[k].failed;

    pd.a_ceiling_grid = -INFINITY;
    std::vector<int> top_a(np, -1);
    for (int j = 0; j < np; ++j)
        for (int i = 0; i < nH; ++i)
            if (pd.at(i, j) == Label::A) top_a[j] = i;
    for (int j = 0; j < np; ++j)
        if (top_a[j] >= 0) pd.a_ceiling_grid = std::max(pd.a_ceiling_grid, pd.H[top_a[j]]);
    pd.a_ceiling = pd.a_ceiling_grid;
    if (!opts.refine || nH < 2) return pd;

    // vertical transitions, refined independently
    struct Job {
        int i, j;
    };
    std::vector<Job> jobs;
    for (int j = 0; j < np; ++j)
        for (int i = 0; i + 1 < nH; ++i)
            if (pd.at(i, j) != pd.at(i + 1, j) && !pd.failed[i * np + j] && !pd.failed[(i + 1) * np + j])
                jobs.push_back({i, j});
    std::vector<BoundaryPoint> pts(jobs.size());
    parallel_for(jobs.size(), opts.workers, [&](std::size_t k) {
        auto [i, j] = jobs[k];
        Label lo = pd.at(i, j), hi = pd.at(i + 1, j);
        pts[k] = {pd.p[j], bisect_H(pd.p[j], pd.H[i], pd.H[i + 1], lo, co, opts.bisect_tol), lo, hi};
    });
    pd.boundary = pts;

    // chain points of matching label pairs across neighbouring columns
    const double dH = pd.H[1] - pd.H[0];
    std::vector<std::vector<std::size_t>> by_col(np);
    for (std::size_t k = 0; k < jobs.size(); ++k) by_col[jobs[k].j].push_back(k);
    std::vector<int> line_of(jobs.size(), -1);
    for (int j = 0; j < np; ++j) {
        for (std::size_t k : by_col[j]) {
            if (line_of[k] < 0) {
                line_of[k] = static_cast<int>(pd.polylines.size());
                pd.polylines.push_back({{pts[k].p, pts[k].H}});
            }
            if (j + 1 >= np) continue;
            std::size_t best = jobs.size();
            double bd = 4 * dH;
            for (std::size_t m : by_col[j + 1]) {
                if (line_of[m] >= 0 || pts[m].below != pts[k].below || pts[m].above != pts[k].above) continue;
                double dist = std::abs(pts[m].H - pts[k].H);
                if (dist < bd) bd = dist, best = m;
            }
            if (best < jobs.size()) {
                line_of[best] = line_of[k];
                pd.polylines[line_of[k]].push_back({pts[best].p, pts[best].H});
            }
        }
    }

    // A ceiling: the column maximum of the refined top boundary, then a golden search in p around it
    int jbest = -1;
    double hbest = -INFINITY;
    for (const auto& b : pd.boundary) {
        if (b.below != Label::A || b.H < hbest) continue;
        bool top = true;
        for (const auto& c : pd.boundary)
            if (c.p == b.p && c.H > b.H && c.below == Label::A) top = false;
        if (!top) continue;
        hbest = b.H;
        jbest = static_cast<int>(std::lower_bound(pd.p.begin(), pd.p.end(), b.p) - pd.p.begin());
    }
    if (jbest < 0) return pd;
    pd.a_ceiling = hbest;
    if (np < 3) return pd;
    const double H_top = H_range.second;
    auto f = [&](double p) { return top_boundary(p, hbest - 0.5 * dH, H_top, 0.25 * dH, co, opts.bisect_tol); };
    double a = pd.p[std::max(0, jbest - 1)], b = pd.p[std::min(np - 1, jbest + 1)];
    const double g = (std::sqrt(5.0) - 1) / 2;
    double x1 = b - g * (b - a), x2 = a + g * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 30 && b - a > 1e-6 * std::max(1.0, std::abs(b)); ++it) {
        if (f1 > f2) {
            b = x2, x2 = x1, f2 = f1;
            x1 = b - g * (b - a), f1 = f(x1);
        } else {
            a = x1, x1 = x2, f1 = f2;
            x2 = a + g * (b - a), f2 = f(x2);
        }
    }
    pd.a_ceiling = std::max({hbest, f1, f2});
    return pd;
}

}  // namespace painleve
