#pragma once

// Dormand-Prince 8(5,3) for complex systems advanced in a real parameter s.
// Coefficients follow Hairer's DOP853.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>

namespace painleve {

template <std::size_t N>
using CState = std::array<std::complex<double>, N>;

struct StepControl {
    double rtol = 1e-12;
    double atol = 1e-12;
    double h_init = 0;  // 0 selects automatically
    double h_max = std::numeric_limits<double>::infinity();
    long max_steps = 1000000;
};

enum class StepStatus { completed, stopped, step_underflow, too_many_steps };

struct StepStats {
    long accepted = 0;
    long rejected = 0;
    double h_last = 0;
};

namespace dop853_detail {

constexpr double c2 = 0.526001519587677318785587544488E-01, c3 = 0.789002279381515978178381316732E-01,
                 c4 = 0.118350341907227396726757197510E+00, c5 = 0.281649658092772603273242802490E+00,
                 c6 = 0.333333333333333333333333333333E+00, c7 = 0.25E+00,
                 c8 = 0.307692307692307692307692307692E+00, c9 = 0.651282051282051282051282051282E+00,
                 c10 = 0.6E+00, c11 = 0.857142857142857142857142857142E+00;
constexpr double b1 = 5.42937341165687622380535766363E-2, b6 = 4.45031289275240888144113950566E0,
                 b7 = 1.89151789931450038304281599044E0, b8 = -5.8012039600105847814672114227E0,
                 b9 = 3.1116436695781989440891606237E-1, b10 = -1.52160949662516078556178806805E-1,
                 b11 = 2.01365400804030348374776537501E-1, b12 = 4.47106157277725905176885569043E-2;
constexpr double a21 = 5.26001519587677318785587544488E-2, a31 = 1.97250569845378994544595329183E-2,
                 a32 = 5.91751709536136983633785987549E-2, a41 = 2.95875854768068491816892993775E-2,
                 a43 = 8.87627564304205475450678981324E-2, a51 = 2.41365134159266685502369798665E-1,
                 a53 = -8.84549479328286085344864962717E-1, a54 = 9.24834003261792003115737966543E-1,
                 a61 = 3.7037037037037037037037037037E-2, a64 = 1.70828608729473871279604482173E-1,
                 a65 = 1.25467687566822425016691814123E-1, a71 = 3.7109375E-2,
                 a74 = 1.70252211019544039314978060272E-1, a75 = 6.02165389804559606850219397283E-2,
                 a76 = -1.7578125E-2;
constexpr double a81 = 3.70920001185047927108779319836E-2, a84 = 1.70383925712239993810214054705E-1,
                 a85 = 1.07262030446373284651809199168E-1, a86 = -1.53194377486244017527936158236E-2,
                 a87 = 8.27378916381402288758473766002E-3, a91 = 6.24110958716075717114429577812E-1,
                 a94 = -3.36089262944694129406857109825E0, a95 = -8.68219346841726006818189891453E-1,
                 a96 = 2.75920996994467083049415600797E1, a97 = 2.01540675504778934086186788979E1,
                 a98 = -4.34898841810699588477366255144E1, a101 = 4.77662536438264365890433908527E-1,
                 a104 = -2.48811461997166764192642586468E0, a105 = -5.90290826836842996371446475743E-1,
                 a106 = 2.12300514481811942347288949897E1, a107 = 1.52792336328824235832596922938E1,
                 a108 = -3.32882109689848629194453265587E1, a109 = -2.03312017085086261358222928593E-2;
constexpr double a111 = -9.3714243008598732571704021658E-1, a114 = 5.18637242884406370830023853209E0,
                 a115 = 1.09143734899672957818500254654E0, a116 = -8.14978701074692612513997267357E0,
                 a117 = -1.85200656599969598641566180701E1, a118 = 2.27394870993505042818970056734E1,
                 a119 = 2.49360555267965238987089396762E0, a1110 = -3.0467644718982195003823669022E0,
                 a121 = 2.27331014751653820792359768449E0, a124 = -1.05344954667372501984066689879E1,
                 a125 = -2.00087205822486249909675718444E0, a126 = -1.79589318631187989172765950534E1,
                 a127 = 2.79488845294199600508499808837E1, a128 = -2.85899827713502369474065508674E0,
                 a129 = -8.87285693353062954433549289258E0, a1210 = 1.23605671757943030647266201528E1,
                 a1211 = 6.43392746015763530355970484046E-1;
constexpr double bhh1 = 0.244094488188976377952755905512E+00, bhh2 = 0.733846688281611857341361741547E+00,
                 bhh3 = 0.220588235294117647058823529412E-01;
constexpr double er1 = 0.1312004499419488073250102996E-01, er6 = -0.1225156446376204440720569753E+01,
                 er7 = -0.4957589496572501915214079952E+00, er8 = 0.1664377182454986536961530415E+01,
                 er9 = -0.3503288487499736816886487290E+00, er10 = 0.3341791187130174790297318841E+00,
                 er11 = 0.8192320648511571246570742613E-01, er12 = -0.2235530786388629525884427845E-01;

}  // namespace dop853_detail

// Integrates dy/ds = f(s, y) from s0 to s1 (either direction). f(s, y, dy) writes dy.
// After every accepted step obs(s, y) is called; returning false stops the march.
template <std::size_t N, class F, class Obs>
StepStatus dop853(F&& f, double s0, double s1, CState<N>& y, const StepControl& ctl, Obs&& obs,
                  StepStats* stats = nullptr) {
    using namespace dop853_detail;
    using C = CState<N>;
    const double posneg = s1 >= s0 ? 1.0 : -1.0;
    const double span = std::abs(s1 - s0);
    StepStats st;
    if (span == 0) {
        if (stats) *stats = st;
        return StepStatus::completed;
    }
    const double hmax = std::min(ctl.h_max, span);

    auto scale = [&](std::size_t i, const C& a, const C& b) {
        return 1.0 / (ctl.atol + ctl.rtol * std::max(std::abs(a[i]), std::abs(b[i])));
    };

    C k1, k2, k3, k4, k5, k6, k7, k8, k9, k10, w1, ynew;
    double s = s0;
    f(s, y, k1);

    double h = ctl.h_init;
    if (h <= 0) {
        // initial step guess from first and second derivative sizes
        double dnf = 0, dny = 0;
        for (std::size_t i = 0; i < N; ++i) {
            double sk = scale(i, y, y);
            dnf += std::norm(k1[i]) * sk * sk;
            dny += std::norm(y[i]) * sk * sk;
        }
        h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : std::sqrt(dny / dnf) * 0.01;
        h = std::min(h, hmax);
        for (std::size_t i = 0; i < N; ++i) w1[i] = y[i] + posneg * h * k1[i];
        f(s + posneg * h, w1, k2);
        double der2 = 0;
        for (std::size_t i = 0; i < N; ++i) {
            double sk = scale(i, y, y);
            der2 += std::norm((k2[i] - k1[i]) * sk);
        }
        der2 = std::sqrt(der2) / h;
        double der12 = std::max(der2, std::sqrt(dnf));
        double h1 = der12 <= 1e-15 ? std::max(1e-6, h * 1e-3) : std::pow(0.01 / der12, 1.0 / 8);
        h = std::min({100 * h, h1, hmax});
    }
    h *= posneg;

    bool last = false, reject = false;
    const double expo1 = 1.0 / 8, facc1 = 1.0 / 0.333, facc2 = 1.0 / 6.0, safe = 0.9;

    while (true) {
        if (st.accepted + st.rejected > ctl.max_steps) {
            if (stats) *stats = st;
            return StepStatus::too_many_steps;
        }
        if (0.1 * std::abs(h) <= std::abs(s) * 2.3e-16 || std::abs(h) < 1e-300) {
            if (stats) *stats = st;
            return StepStatus::step_underflow;
        }
        if ((s + 1.01 * h - s1) * posneg > 0) {
            h = s1 - s;
            last = true;
        }

        for (std::size_t i = 0; i < N; ++i) w1[i] = y[i] + h * a21 * k1[i];
        f(s + c2 * h, w1, k2);
        for (std::size_t i = 0; i < N; ++i) w1[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        f(s + c3 * h, w1, k3);
        for (std::size_t i = 0; i < N; ++i) w1[i] = y[i] + h * (a41 * k1[i] + a43 * k3[i]);
        f(s + c4 * h, w1, k4);
        for (std::size_t i = 0; i < N; ++i) w1[i] = y[i] + h * (a51 * k1[i] + a53 * k3[i] + a54 * k4[i]);
        f(s + c5 * h, w1, k5);
        for (std::size_t i = 0; i < N; ++i) w1[i] = y[i] + h * (a61 * k1[i] + a64 * k4[i] + a65 * k5[i]);
        f(s + c6 * h, w1, k6);
        for (std::size_t i = 0; i < N; ++i)
            w1[i] = y[i] + h * (a71 * k1[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
        f(s + c7 * h, w1, k7);
        for (std::size_t i = 0; i < N; ++i)
            w1[i] = y[i] + h * (a81 * k1[i] + a84 * k4[i] + a85 * k5[i] + a86 * k6[i] + a87 * k7[i]);
        f(s + c8 * h, w1, k8);
        for (std::size_t i = 0; i < N; ++i)
            w1[i] = y[i] + h * (a91 * k1[i] + a94 * k4[i] + a95 * k5[i] + a96 * k6[i] + a97 * k7[i] + a98 * k8[i]);
        f(s + c9 * h, w1, k9);
        for (std::size_t i = 0; i < N; ++i)
            w1[i] = y[i] + h * (a101 * k1[i] + a104 * k4[i] + a105 * k5[i] + a106 * k6[i] + a107 * k7[i] +
                                a108 * k8[i] + a109 * k9[i]);
        f(s + c10 * h, w1, k10);
        for (std::size_t i = 0; i < N; ++i)
            w1[i] = y[i] + h * (a111 * k1[i] + a114 * k4[i] + a115 * k5[i] + a116 * k6[i] + a117 * k7[i] +
                                a118 * k8[i] + a119 * k9[i] + a1110 * k10[i]);
        f(s + c11 * h, w1, k2);
        double sph = s + h;
        for (std::size_t i = 0; i < N; ++i)
            w1[i] = y[i] + h * (a121 * k1[i] + a124 * k4[i] + a125 * k5[i] + a126 * k6[i] + a127 * k7[i] +
                                a128 * k8[i] + a129 * k9[i] + a1210 * k10[i] + a1211 * k2[i]);
        f(sph, w1, k3);
        for (std::size_t i = 0; i < N; ++i) {
            k4[i] = b1 * k1[i] + b6 * k6[i] + b7 * k7[i] + b8 * k8[i] + b9 * k9[i] + b10 * k10[i] +
                    b11 * k2[i] + b12 * k3[i];
            ynew[i] = y[i] + h * k4[i];
        }

        double err = 0, err2 = 0;
        bool finite = true;
        for (std::size_t i = 0; i < N; ++i) {
            if (!std::isfinite(ynew[i].real()) || !std::isfinite(ynew[i].imag())) finite = false;
            double sk = scale(i, y, ynew);
            err2 += std::norm((k4[i] - bhh1 * k1[i] - bhh2 * k9[i] - bhh3 * k3[i]) * sk);
            err += std::norm((er1 * k1[i] + er6 * k6[i] + er7 * k7[i] + er8 * k8[i] + er9 * k9[i] +
                              er10 * k10[i] + er11 * k2[i] + er12 * k3[i]) *
                             sk);
        }
        double deno = err + 0.01 * err2;
        err = std::abs(h) * err * std::sqrt(1.0 / (deno <= 0 ? N : deno * N));
        if (!finite || !std::isfinite(err)) err = 1e10;

        double fac11 = std::pow(err, expo1);
        double fac = std::max(facc2, std::min(facc1, fac11 / safe));
        double hnew = h / fac;

        if (err <= 1.0) {
            ++st.accepted;
            y = ynew;
            s = sph;
            f(s, y, k1);
            st.h_last = h;
            if (!obs(s, y)) {
                if (stats) *stats = st;
                return StepStatus::stopped;
            }
            if (last) {
                if (stats) *stats = st;
                return StepStatus::completed;
            }
            if (std::abs(hnew) > hmax) hnew = posneg * hmax;
            if (reject) hnew = posneg * std::min(std::abs(hnew), std::abs(h));
            reject = false;
        } else {
            hnew = h / std::min(facc1, fac11 / safe);
            reject = true;
            ++st.rejected;
            last = false;
        }
        h = hnew;
    }
}

}  // namespace painleve
