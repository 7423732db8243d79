#include "painleve/stokes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "painleve/errors.hpp"

namespace painleve {

namespace {

using ld = long double;
using cld = std::complex<long double>;
constexpr double pi = std::numbers::pi;

// Quad-precision complex arithmetic for the transport; only + - * are needed.
using qf = __float128;
struct qc {
    qf re = 0, im = 0;
};
inline qc operator+(qc a, qc b) { return {a.re + b.re, a.im + b.im}; }
inline qc operator-(qc a, qc b) { return {a.re - b.re, a.im - b.im}; }
inline qc operator*(qc a, qc b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }
inline qc operator*(qf s, qc a) { return {s * a.re, s * a.im}; }
inline double mag(qc a) { return std::hypot(static_cast<double>(a.re), static_cast<double>(a.im)); }
inline qc inverse(qc a) {
    qf n = a.re * a.re + a.im * a.im;
    return {a.re / n, -a.im / n};
}
inline qc to_q(cld z) { return {static_cast<qf>(z.real()), static_cast<qf>(z.imag())}; }
inline qc to_q(cplx z) { return {static_cast<qf>(z.real()), static_cast<qf>(z.imag())}; }
inline cplx to_c(qc a) { return {static_cast<double>(a.re), static_cast<double>(a.im)}; }
inline qc times_i(qc a) { return {-a.im, a.re}; }
inline qc times_minus_i(qc a) { return {a.im, -a.re}; }

struct QState {
    qc Y, Yp;
    ld log_scale = 0;
};

void renormalize(QState& s) {
    double m = std::max(mag(s.Y), mag(s.Yp));
    if (m > 0x1p60 || (m < 0x1p-60 && m > 0)) {
        int e;
        std::frexp(m, &e);
        qf f = static_cast<qf>(std::ldexp(1.0, -e));
        s.Y = f * s.Y;
        s.Yp = f * s.Yp;
        s.log_scale += e * std::log(2.0L);
    }
}

// Taylor-series transport of Y'' = (4 l^3 + 2 p l - 28 H) Y along the segment a -> b.
void transport(double p, double H, qc a, qc b, QState& st) {
    const double L = mag(b - a);
    if (L == 0) return;
    const qc qa = a, qu = (qf(1) / static_cast<qf>(L)) * (b - a);
    const qf P2 = 2 * static_cast<qf>(p), H28 = 28 * static_cast<qf>(H);
    double done = 0;
    qc lam = qa;  // accumulated in quad so consecutive steps join exactly
    std::vector<qc> d;
    d.reserve(512);
    while (done < L) {
        qc lam2 = lam * lam;
        qc v0 = qf(4) * (lam2 * lam) + P2 * lam - qc{H28, 0};
        qc v1 = qf(12) * lam2 + qc{P2, 0};
        qc v2 = qf(12) * lam;
        qc v3{4, 0};
        double scale = std::max({std::sqrt(mag(v0)), std::cbrt(mag(v1)), std::pow(mag(v2), 0.25), 1.32});
        double hl = std::min(L - done, 4.0 / scale);
        bool last = hl == L - done;
        while (true) {
            qc h = static_cast<qf>(hl) * qu;
            if (last) h = b - lam;
            qc h2 = h * h;
            qc w0 = v0 * h2, w1 = v1 * (h2 * h), w2 = v2 * (h2 * h2), w3 = v3 * (h2 * h2 * h);
            d.clear();
            d.push_back(st.Y);
            d.push_back(st.Yp * h);
            qc sy = d[0] + d[1], sd = d[1];
            bool converged = false;
            int small = 0;
            for (int n = 0; n < 400; ++n) {
                qc acc = w0 * d[n];
                if (n >= 1) acc = acc + w1 * d[n - 1];
                if (n >= 2) acc = acc + w2 * d[n - 2];
                if (n >= 3) acc = acc + w3 * d[n - 3];
                qc next = (qf(1) / static_cast<qf>((n + 2) * (n + 1))) * acc;
                d.push_back(next);
                sy = sy + next;
                sd = sd + static_cast<qf>(n + 2) * next;
                double ref = mag(sy) + mag(sd);
                if (mag(next) * (n + 2) <= 1e-34 * ref) {
                    if (++small >= 4 && n >= 6) {
                        converged = true;
                        break;
                    }
                } else {
                    small = 0;
                }
            }
            if (converged) {
                st.Y = sy;
                st.Yp = sd * inverse(h);
                lam = lam + h;
                break;
            }
            hl *= 0.5;
            last = false;
        }
        done = last ? L : done + hl;
        renormalize(st);
    }
}

struct Seed {
    QState state;
    double R = 0;
    double error = 0;       // neglected term in Y'/Y
    double norm_error = 0;  // neglected term in log Y
    qc start;               // exact seed point r^2 e^{2 i j pi / 5}
};

qf qsqrt(qf a) {
    if (a <= 0) return 0;
    qf x = std::sqrt(static_cast<double>(a));
    for (int i = 0; i < 3; ++i) x = (x + a / x) / 2;
    return x;
}

// e^{i j pi / 5} to quad precision from the algebraic values of cos and sin of pi/5.
qc root_of_unity_10(int j) {
    const qf s5 = qsqrt(5);
    const qf c1 = (1 + s5) / 4, sn1 = qsqrt((5 - s5) / 8);
    const qf c2 = (s5 - 1) / 4, sn2 = qsqrt((5 + s5) / 8);
    const qf sg = j < 0 ? -1 : 1;
    switch (j < 0 ? -j : j) {
        case 0: return {1, 0};
        case 1: return {c1, sg * sn1};
        default: return {c2, sg * sn2};
    }
}

// WKB-normalized recessive data at r^2 e^{2 i j pi/5} with optimal truncation of the Riccati series.
// Y'/Y is summed in quad precision since any error there seeds the dominant solution.
bool wkb_seed(double p, double H, int j, double r, Seed& out) {
    const int M = 120;
    const qf eps = (j % 2 == 0) ? 1 : -1;
    std::vector<qf> w(M + 1, 0);
    w[0] = -2 * eps;
    for (int n = 1; n <= M; ++n) {
        qf q = n == 4 ? 2 * static_cast<qf>(p) : n == 6 ? -28 * static_cast<qf>(H) : 0;
        qf s = 0;
        for (int a = 1; a < n; ++a) s += w[a] * w[n - a];
        qf t = n >= 5 ? static_cast<qf>(8 - n) / 2 * w[n - 5] : 0;
        w[n] = (q - s - t) / (2 * w[0]);
    }
    const ld R = static_cast<ld>(r) * r;
    const ld phi = 2 * j * std::numbers::pi_v<ld> / 5;
    auto lampow = [&](int k) { return std::polar(std::pow(R, k / 2.0L), k * phi / 2); };
    auto term_size = [&](int m, int k) { return std::abs(static_cast<ld>(w[m])) * std::pow(R, k / 2.0L); };

    // logY = -eps theta - 3/4 log l + log(-i/sqrt 2) + sum_{m>=6} w_m l^{(5-m)/2} / ((5-m)/2)
    int mlog = M;
    ld best_log = INFINITY;
    for (int m = 6; m <= M; ++m) {
        if (w[m] == 0) continue;
        ld t = term_size(m, 5 - m) / std::abs((5 - m) / 2.0L);
        if (t < best_log) best_log = t, mlog = m;
    }
    cld logY = -static_cast<ld>(eps) * (0.8L * lampow(5) + static_cast<ld>(p) * lampow(1)) -
               0.75L * cld(std::log(R), phi) + cld(-0.5L * std::log(2.0L), -std::numbers::pi_v<ld> / 2);
    for (int m = 6; m < mlog; ++m) logY += static_cast<ld>(w[m]) * lampow(5 - m) / ((5 - m) / 2.0L);

    int mshape = M;
    ld best_shape = INFINITY;
    for (int m = 4; m <= M; ++m) {
        if (w[m] == 0) continue;
        ld t = term_size(m, 3 - m);
        if (t < best_shape) best_shape = t, mshape = m;
    }
    const qc z = static_cast<qf>(r) * root_of_unity_10(j);
    const qc zi = inverse(z);
    qc wv{0, 0}, zp = z * z * z;
    for (int m = 0; m < mshape; ++m) {
        wv = wv + w[m] * zp;
        zp = zp * zi;
    }
    ld shape_err = best_shape / static_cast<ld>(mag(wv));

    cld Y = std::polar(1.0L, logY.imag());
    out.state.Y = to_q(Y);
    out.state.Yp = wv * out.state.Y;
    out.state.log_scale = logY.real();
    out.R = static_cast<double>(R);
    out.start = z * z;
    out.error = static_cast<double>(shape_err);
    out.norm_error = static_cast<double>(best_log);
    return std::isfinite(out.error) && std::isfinite(out.norm_error);
}

Seed choose_seed(double p, double H, int j, const StokesOptions& opts) {
    double R = std::max({opts.R_min, 2.5 * std::sqrt(std::abs(p)), 2.5 * std::cbrt(7 * std::abs(H))});
    double r = std::sqrt(R);
    Seed s;
    for (int it = 0; it < 60; ++it, r *= 1.07) {
        if (wkb_seed(p, H, j, r, s) && s.error < opts.seed_tol && s.norm_error < 1e-17) return s;
    }
    throw Error("seed_error", "WKB seed error above budget at the largest starting radius",
                {{"p", p}, {"H", H}, {"sector", j}, {"R_start", s.R}, {"seed_error", s.error}});
}

QState recessive_at_origin(double p, double H, int j, const StokesOptions& opts, Seed& seed) {
    seed = choose_seed(p, H, j, opts);
    QState st = seed.state;
    transport(p, H, seed.start, qc{0, 0}, st);
    return st;
}

int wrap(int k) { return ((k + 2) % 5 + 5) % 5 - 2; }

}  // namespace

cplx RecessiveValue::value() const { return Y * std::exp(log_scale); }
cplx RecessiveValue::derivative() const { return Yp * std::exp(log_scale); }

RecessiveValue recessive_solution(double p, double H, int j, cplx lambda, const StokesOptions& opts) {
    if (j < -2 || j > 2) throw Error("domain_error", "sector index must lie in -2..2", {{"sector", j}});
    Seed seed = choose_seed(p, H, j, opts);
    QState st = seed.state;
    const qf frac = static_cast<qf>(std::min(std::abs(lambda), seed.R) / seed.R);
    const qc mid = frac * seed.start;
    transport(p, H, seed.start, mid, st);
    transport(p, H, mid, to_q(lambda), st);
    RecessiveValue v;
    v.Y = to_c(st.Y);
    v.Yp = to_c(st.Yp);
    v.log_scale = static_cast<double>(st.log_scale);
    v.R_start = seed.R;
    v.seed_error = seed.error;
    return v;
}

cplx StokesData::at(int k) const { return s[wrap(k) + 2]; }

double StokesData::max_constraint_residual() const {
    return *std::max_element(constraint_residual.begin(), constraint_residual.end());
}

double StokesData::max_reality_residual() const {
    return *std::max_element(reality_residual.begin(), reality_residual.end());
}

StokesData stokes_multipliers(double p, double H, const StokesOptions& opts) {
    StokesData out;
    QState u[7];  // u[j + 3], j = -3..3
    for (int j = -2; j <= 2; ++j) {
        Seed seed;
        u[j + 3] = recessive_at_origin(p, H, j, opts, seed);
        out.R_start = std::max(out.R_start, seed.R);
        out.seed_error = std::max(out.seed_error, seed.error);
    }
    // rays at -6 pi/5 and 6 pi/5 coincide with rays 2 and -2 up to the branch of l^{1/4}
    u[0] = {times_minus_i(u[5].Y), times_minus_i(u[5].Yp), u[5].log_scale};
    u[6] = {times_i(u[1].Y), times_i(u[1].Yp), u[1].log_scale};

    auto wr = [&](int a, int b, qc& W, double& cancel, ld& L) {
        const QState& A = u[a + 3];
        const QState& B = u[b + 3];
        W = A.Y * B.Yp - A.Yp * B.Y;
        cancel = mag(A.Y) * mag(B.Yp) + mag(A.Yp) * mag(B.Y);
        L = A.log_scale + B.log_scale;
    };

    for (int k = -2; k <= 2; ++k) {
        const double exact = k % 2 == 0 ? 2.0 : -2.0;
        qc W;
        double cancel;
        ld L;
        wr(k - 1, k + 1, W, cancel, L);
        double m = mag(W);
        ld logmag = std::log(static_cast<ld>(m)) + L - std::log(2.0L);
        double arg = std::atan2(static_cast<double>(W.im), static_cast<double>(W.re)) + (exact < 0 ? pi : 0);
        out.s[k + 2] = m == 0 ? cplx(0, 0) : std::polar(static_cast<double>(std::exp(logmag)), arg);
        out.error_bar[k + 2] = m == 0 ? INFINITY : 1e-30 * cancel / m;

        wr(k - 1, k, W, cancel, L);
        ld unit = std::exp(-L);
        qc diff = W - qc{static_cast<qf>(exact * unit), 0};
        double r = static_cast<double>(mag(diff) / std::max<ld>(2 * unit, cancel));
        out.normalization_residual = std::max(out.normalization_residual, r);
    }
    for (int k = -2; k <= 2; ++k) {
        cplx sk = out.at(k), prod = out.at(k + 2) * out.at(k + 3);
        double absres = std::abs(sk - cplx(0, 1) * (1.0 + prod));
        out.constraint_absolute[k + 2] = absres;
        out.constraint_residual[k + 2] = absres / std::max({1.0, std::abs(sk), std::abs(prod)});
        out.reality_residual[k + 2] = std::abs(out.at(-k) + std::conj(sk)) / std::max(1.0, std::abs(sk));
    }
    return out;
}

}  // namespace painleve
