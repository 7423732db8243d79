#pragma once

// Reference tritronquee pole data: asymptotic (p, H) and integrated (p, H) for n = 1..10.
namespace ref {

struct TritronqueeRow {
    int n;
    double p_asym, H_asym, p_num, H_num;
};

inline constexpr TritronqueeRow kTritronquee[10] = {
    {1, 2.347592, -0.063998, 2.384169, -0.062139},    {2, 5.653529, -0.239172, 5.664603, -0.238306},
    {3, 8.507435, -0.441498, 8.513524, -0.440920},    {4, 11.135278, -0.661123, 11.139362, -0.660688},
    {5, 13.614968, -0.893832, 13.617995, -0.893476},  {6, 15.985888, -1.137197, 15.988269, -1.136886},
    {7, 18.271630, -1.389622, 18.273580, -1.389352},  {8, 20.487814, -1.649963, 20.489457, -1.649712},
    {9, 22.645492, -1.917359, 22.646906, -1.917144},  {10, 24.752867, -2.191134, 24.754104, -2.190936},
};

inline constexpr double kC0 = 2.004860503264124;
inline constexpr double kCeilingM = -0.036516259;
inline constexpr double kErrLawP = 0.0045148;
inline constexpr double kErrLawH = 0.0081;

}  // namespace ref
