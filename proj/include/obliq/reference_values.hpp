#pragma once

#include <array>
#include <cstddef>
#include <limits>
#include <utility>

// Published reference values for the built-in validation tables, embedded so
// the `tables` command can print computed-vs-reference deltas offline and the
// acceptance suite can pin its tolerances against fixed numbers.

namespace obliq::reference {

inline constexpr double kNA = std::numeric_limits<double>::quiet_NaN();
inline constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Tables 1 and 2: MLE slope and its obliqueness parameter on the grid
// ratio = Sxx/Syy in {1/2, 1, 2} (rows) x (kappa, rho) pairs (columns),
// kappa in {0.5, 1, 2} crossed with rho in {0.2, 0.4, 0.6, 0.8}.

inline constexpr std::array<double, 3> kGridRatios = {0.5, 1.0, 2.0};
inline constexpr std::array<double, 12> kGridKappas = {0.5, 0.5, 0.5, 0.5, 1.0, 1.0,
                                                       1.0, 1.0, 2.0, 2.0, 2.0, 2.0};
inline constexpr std::array<double, 12> kGridRhos = {0.2, 0.4, 0.6, 0.8, 0.2, 0.4,
                                                     0.6, 0.8, 0.2, 0.4, 0.6, 0.8};

inline constexpr double kTable1MleSlope[3][12] = {
    {5.396, 2.828, 2.016, 1.632, 3.799, 2.219, 1.750, 1.535, 1.414, 1.414, 1.414, 1.414},
    {2.686, 1.569, 1.237, 1.086, 1.000, 1.000, 1.000, 1.000, 0.372, 0.638, 0.808, 0.921},
    {0.707, 0.707, 0.707, 0.707, 0.263, 0.451, 0.571, 0.651, 0.185, 0.354, 0.496, 0.613},
};

inline constexpr double kTable2Lambda[3][12] = {
    {0.033, 0.111, 0.197, 0.273, 0.089, 0.223, 0.316, 0.375, 0.500, 0.500, 0.500, 0.500},
    {0.089, 0.223, 0.316, 0.375, 0.500, 0.500, 0.500, 0.500, 0.911, 0.777, 0.684, 0.625},
    {0.500, 0.500, 0.500, 0.500, 0.911, 0.776, 0.684, 0.625, 0.967, 0.889, 0.803, 0.727},
};

// ---------------------------------------------------------------------------
// Table 4: slope estimates for {rho = 0.5, Sxx = 1, Sxxxy = 10, Sxyyy = 5} as
// Syy sweeps the admissible range. Columns: Syy, vertical OLS slope, raw
// fourth-moment slope, horizontal OLS slope, moment ratio, MLE at that ratio.
// The first and last Syy are the (rounded) admissibility boundaries.

struct Table4Row {
    double syy, ver, beta_tilde, hor, kappa_tilde, mle;
};

inline constexpr std::array<Table4Row, 8> kTable4 = {{
    {0.1303, 0.1805, 0.7219, 0.7219, 0.0000, 0.7219},
    {0.2000, 0.2236, 0.7222, 0.8944, 0.0558, 0.7222},
    {0.4000, 0.3164, 0.7145, 1.2649, 0.3123, 0.7145},
    {0.6000, 0.3873, 0.6977, 1.5492, 0.7412, 0.6977},
    {0.8000, 0.4472, 0.6734, 1.7889, 1.4850, 0.6734},
    {1.0000, 0.5000, 0.6417, 2.0000, 3.0760, 0.6417},
    {1.2000, 0.5477, 0.6020, 2.1909, 9.6582, 0.6020},
    {1.3186, 0.5742, 0.5742, 2.2966, kInf, 0.5741},
}};

inline constexpr double kTable4Rho = 0.5;
inline constexpr double kTable4Sxx = 1.0;
inline constexpr double kTable4Sxxxy = 10.0;
inline constexpr double kTable4Sxyyy = 5.0;

// ---------------------------------------------------------------------------
// Table 5: percent bias of the MLE under assumed error ratios kappa# (rows)
// for true variance pairs (columns). Labels are sigma_tau^2 : sigma_delta^2,
// both in ascending kappa order; original run used R = 100.

inline constexpr std::size_t kTable5Size = 9;

// (sigma_tau^2, sigma_delta^2) per label, identical ordering for rows/columns.
inline constexpr std::pair<double, double> kTable5Ratios[kTable5Size] = {
    {1.0, 9.0}, {1.0, 4.0}, {4.0, 9.0}, {1.0, 1.0}, {4.0, 4.0},
    {9.0, 9.0}, {9.0, 4.0}, {4.0, 1.0}, {9.0, 1.0},
};

inline constexpr const char* kTable5Labels[kTable5Size] = {"1:9", "1:4", "4:9", "1:1", "4:4",
                                                           "9:9", "9:4", "4:1", "9:1"};

inline constexpr double kTable5PercentBias[kTable5Size][kTable5Size] = {
    {0.166, 0.502, 2.164, 0.870, 3.663, 7.995, 8.723, 3.592, 9.282},
    {-0.914, -0.012, 0.811, 0.666, 2.807, 6.087, 7.351, 3.067, 8.265},
    {-2.066, -0.564, -0.643, 0.445, 1.878, 3.999, 5.838, 2.496, 7.137},
    {-4.067, -1.541, -3.184, 0.051, 0.218, 0.266, 3.083, 1.467, 5.058},
    {-4.067, -1.541, -3.184, 0.051, 0.218, 0.266, 3.083, 1.467, 5.058},
    {-4.067, -1.541, -3.184, 0.051, 0.218, 0.266, 3.083, 1.467, 5.058},
    {-5.957, -2.495, -5.590, -0.342, -1.417, -3.330, 0.338, 0.437, 2.936},
    {-6.956, -3.016, -6.856, -0.561, -2.310, -5.230, -1.161, -0.136, 1.748},
    {-7.840, -3.489, -7.973, -0.763, -3.119, -6.899, -2.513, -0.663, 0.657},
};

// ---------------------------------------------------------------------------
// Tables 6-8: Monte Carlo study, X ~ Exp(10), beta1 = 1, beta0 = 0, n = 100,
// R = 1000. Row order: ver, ols* (synthetic average), hor, per, gm, mom,
// copas, md. Columns: MSE*10^-3, %bias, mean lambda, theta.

inline constexpr std::size_t kMcRowCount = 8;

inline constexpr const char* kMcRowLabels[kMcRowCount] = {"ver", "ols*", "hor", "per",
                                                          "gm",  "mom",  "copas", "md"};

struct McRow {
    double mse_scaled, percent_bias, lambda, theta_deg;
};

struct McStudy {
    double sigma_delta, sigma_tau;
    McRow rows[kMcRowCount];
};

inline constexpr McStudy kTable6 = {
    2.0,
    1.0,
    {
        {2.001, -3.843, 1.000, 46.12},
        {1.336, 2.518, kNA, kNA},
        {0.670, 1.193, 0.000, 136.12},
        {0.688, -1.396, 0.507, 89.99},
        {0.653, -1.360, 0.500, 90.78},
        {1.001, -0.830, 0.339, 108.27},
        {2.378, -2.410, 0.651, 74.47},
        {0.646, -1.336, 0.497, 91.06},
    },
};

inline constexpr McStudy kTable7 = {
    3.0,
    1.0,
    {
        {8.370, -8.459, 1.000, 47.53},
        {4.847, 4.831, kNA, kNA},
        {1.324, 1.203, 0.000, 137.53},
        {2.688, -3.954, 0.520, 89.60},
        {2.423, -3.760, 0.500, 92.19},
        {2.786, -1.807, 0.318, 110.94},
        {8.769, -7.347, 0.848, 58.14},
        {2.309, -3.584, 0.490, 93.196},
    },
};

inline constexpr McStudy kTable8 = {
    4.0,
    1.0,
    {
        {22.791, -14.376, 1.000, 49.43},
        {12.46, 7.858, kNA, kNA},
        {2.134, 1.339, 0.000, 139.43},
        {7.406, -7.480, 0.539, 89.95},
        {6.242, -6.880, 0.500, 94.08},
        {5.717, -2.813, 0.286, 114.51},
        {23.018, -13.848, 0.950, 52.71},
        {5.578, -6.288, 0.480, 96.04},
    },
};

}  // namespace obliq::reference
