#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "obliq/errors.hpp"
#include "obliq/estimators.hpp"
#include "obliq/measurement_error.hpp"
#include "obliq/oblique.hpp"
#include "obliq/reference_values.hpp"
#include "obliq/simulation.hpp"
#include "obliq/summary_stats.hpp"

// Builders that recompute each built-in validation table and pair every cell
// with its published reference value. Tables 1-4 are deterministic closed
// forms on fixed grids; tables 5-8 are Monte Carlo runs with fixed built-in
// seeds (the references were produced by a different generator, so those
// agree statistically, not digit for digit).

namespace obliq::tables {

struct ComparisonEntry {
    std::vector<std::string> key;
    double computed = 0.0;
    double published = 0.0;  // NaN when the reference table has no value
};

struct ComparisonTable {
    std::string name;
    std::string title;
    std::vector<std::string> key_columns;
    std::vector<ComparisonEntry> entries;
};

inline constexpr std::uint64_t kTable5Seed = 86753095;
inline constexpr std::uint64_t kTable6Seed = 86753096;
inline constexpr std::uint64_t kTable7Seed = 86753097;
inline constexpr std::uint64_t kTable8Seed = 86753098;

namespace detail {

inline std::string num_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

/// Stats for one cell of the Table 1/2 grid: Syy = 1, Sxx = ratio,
/// Sxy = rho * sqrt(ratio). n and the means are immaterial there.
inline SummaryStats grid_stats(double ratio, double rho) {
    return stats_from_moments(25, 0.0, 0.0, ratio, 1.0, rho * std::sqrt(ratio));
}

/// The published sweep quotes per-observation moments, so the statistics are
/// assembled with n = 1 (sums and averages coincide there).
inline SummaryStats table4_stats(double syy) {
    return stats_from_moments(1, 0.0, 0.0, reference::kTable4Sxx, syy,
                              reference::kTable4Rho * std::sqrt(reference::kTable4Sxx * syy),
                              reference::kTable4Sxxxy, reference::kTable4Sxyyy);
}

/// Raw fourth-moment slope of the Table 4 family as a function of
/// t = sqrt(Syy); used to pin the admissible-range boundaries exactly.
inline double table4_beta_tilde(double t) {
    const double sxy = reference::kTable4Rho * t;
    return std::sqrt((reference::kTable4Sxyyy - 3.0 * sxy * t * t) /
                     (reference::kTable4Sxxxy - 3.0 * sxy * reference::kTable4Sxx));
}

/// Solve f(t) = 0 by bisection on a sign-changing bracket, to full precision.
template <typename Fn>
inline double bisect(Fn&& f, double a, double b) {
    double fa = f(a);
    for (int i = 0; i < 200; ++i) {
        const double m = 0.5 * (a + b);
        if (m == a || m == b) break;
        const double fm = f(m);
        if ((fm < 0.0) == (fa < 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

/// Endpoints of the admissible Syy range for the Table 4 family: Syy where
/// the raw fourth-moment slope meets the horizontal (lower end) or vertical
/// (upper end) OLS slope. These round to the published 0.1303 and 1.3186.
inline double table4_boundary_syy(bool upper) {
    if (upper) {
        const double t = bisect([](double t) { return table4_beta_tilde(t) - 0.5 * t; }, 1.1, 1.2);
        return t * t;
    }
    const double t = bisect([](double t) { return table4_beta_tilde(t) - 2.0 * t; }, 0.3, 0.4);
    return t * t;
}

}  // namespace detail

/// Table 1: MLE slope over the {ratio, kappa, rho} grid.
inline ComparisonTable build_table1() {
    ComparisonTable t;
    t.name = "table1";
    t.title = "MLE slope for typical {rho, kappa, Sxx/Syy}";
    t.key_columns = {"sxx_over_syy", "kappa", "rho"};
    for (std::size_t i = 0; i < reference::kGridRatios.size(); ++i) {
        for (std::size_t j = 0; j < reference::kGridKappas.size(); ++j) {
            const SummaryStats s =
                detail::grid_stats(reference::kGridRatios[i], reference::kGridRhos[j]);
            ComparisonEntry e;
            e.key = {detail::num_label(reference::kGridRatios[i]),
                     detail::num_label(reference::kGridKappas[j]),
                     detail::num_label(reference::kGridRhos[j])};
            e.computed = mle(s, reference::kGridKappas[j]).beta1;
            e.published = reference::kTable1MleSlope[i][j];
            t.entries.push_back(std::move(e));
        }
    }
    return t;
}

/// Table 2: obliqueness parameter of the MLE slope over the same grid.
inline ComparisonTable build_table2() {
    ComparisonTable t;
    t.name = "table2";
    t.title = "Obliqueness lambda of the MLE slope for typical {rho, kappa, Sxx/Syy}";
    t.key_columns = {"sxx_over_syy", "kappa", "rho"};
    for (std::size_t i = 0; i < reference::kGridRatios.size(); ++i) {
        for (std::size_t j = 0; j < reference::kGridKappas.size(); ++j) {
            const SummaryStats s =
                detail::grid_stats(reference::kGridRatios[i], reference::kGridRhos[j]);
            ComparisonEntry e;
            e.key = {detail::num_label(reference::kGridRatios[i]),
                     detail::num_label(reference::kGridKappas[j]),
                     detail::num_label(reference::kGridRhos[j])};
            e.computed = lambda_for_slope(mle(s, reference::kGridKappas[j]).beta1, s);
            e.published = reference::kTable2Lambda[i][j];
            t.entries.push_back(std::move(e));
        }
    }
    return t;
}

/// Table 3 realized as an identity check: the closed-form error-variance
/// expressions per estimator (the "published" side) against the second-moment
/// formulas evaluated at that estimator's slope, on a reference data set.
inline ComparisonTable build_table3() {
    ComparisonTable t;
    t.name = "table3";
    t.title = "Error-variance moments per estimator: closed form vs direct evaluation";
    t.key_columns = {"estimator", "quantity"};
    const SummaryStats s = detail::table4_stats(1.0);
    const double kappa = 2.0;
    struct RowSpec {
        Method method;
        double slope;
    };
    const RowSpec rows[] = {
        {Method::VER, ols_vertical(s).beta1},   {Method::HOR, ols_horizontal(s).beta1},
        {Method::GM, geometric_mean(s).beta1},  {Method::PER, perpendicular(s).beta1},
        {Method::MLE, mle(s, kappa).beta1},
    };
    for (const RowSpec& row : rows) {
        const ErrorVarianceEstimates direct = madansky_variances(row.slope, s);
        const ErrorVarianceEstimates closed =
            table3_row(row.method, s,
                       row.method == Method::MLE ? std::optional<double>(kappa) : std::nullopt);
        const char* name = method_name(row.method);
        t.entries.push_back({{name, "sigma_delta_sq"}, direct.sigma_delta_sq,
                             closed.sigma_delta_sq});
        t.entries.push_back({{name, "sigma_tau_sq"}, direct.sigma_tau_sq, closed.sigma_tau_sq});
        t.entries.push_back({{name, "kappa_tilde"}, direct.kappa_tilde, closed.kappa_tilde});
    }
    return t;
}

/// Table 4: the slope-estimate sweep over the admissible Syy range, with the
/// first and last rows evaluated at the exact boundaries (the published Syy
/// values are those boundaries rounded to four decimals).
inline ComparisonTable build_table4() {
    ComparisonTable t;
    t.name = "table4";
    t.title = "Slope estimates with {rho = 0.5, Sxx = 1, Sxxxy = 10, Sxyyy = 5}";
    t.key_columns = {"syy", "quantity"};
    for (std::size_t i = 0; i < reference::kTable4.size(); ++i) {
        const reference::Table4Row& ref = reference::kTable4[i];
        double syy = ref.syy;
        if (i == 0) syy = detail::table4_boundary_syy(false);
        if (i + 1 == reference::kTable4.size()) syy = detail::table4_boundary_syy(true);
        const SummaryStats s = detail::table4_stats(syy);
        const std::string label = detail::num_label(ref.syy);

        const double ver = ols_vertical(s).beta1;
        const double hor = ols_horizontal(s).beta1;
        const double beta_tilde = moment_raw(s).beta1;
        const double mom = moment_clamped(s).beta1;
        const double ratio = kappa_tilde(mom, s);
        const double mle_slope = mle(s, ratio).beta1;

        t.entries.push_back({{label, "ver"}, ver, ref.ver});
        t.entries.push_back({{label, "beta_tilde"}, beta_tilde, ref.beta_tilde});
        t.entries.push_back({{label, "hor"}, hor, ref.hor});
        t.entries.push_back({{label, "kappa_tilde"}, ratio, ref.kappa_tilde});
        t.entries.push_back({{label, "mle"}, mle_slope, ref.mle});
    }
    return t;
}

/// Table 5: MLE percent bias under misspecified error ratios. The reference
/// run used R = 100; the default here is larger for stability.
inline ComparisonTable build_table5(std::size_t replications = 2000, unsigned threads = 0) {
    SimulationConfig config;
    config.x_distribution = XDistribution::Exponential;
    config.mu_x = 10.0;
    config.beta0 = 0.0;
    config.beta1 = 1.0;
    config.n = 100;
    config.replications = replications;
    config.seed = kTable5Seed;
    std::vector<std::pair<double, double>> columns;
    for (const auto& [tau_sq, delta_sq] : reference::kTable5Ratios) {
        config.assumed_kappas.push_back(tau_sq / delta_sq);
        columns.emplace_back(delta_sq, tau_sq);
    }
    // sigma fields are per-column; set to the first column for check().
    config.sigma_delta = std::sqrt(columns.front().first);
    config.sigma_tau = std::sqrt(columns.front().second);

    const KappaBiasMatrix matrix = run_kappa_misspecification(config, columns, threads);

    ComparisonTable t;
    t.name = "table5";
    t.title = "Percent bias of the MLE for assumed ratios kappa# against true kappa";
    t.key_columns = {"kappa_assumed", "kappa_true"};
    for (std::size_t r = 0; r < reference::kTable5Size; ++r) {
        for (std::size_t c = 0; c < reference::kTable5Size; ++c) {
            ComparisonEntry e;
            e.key = {reference::kTable5Labels[r], reference::kTable5Labels[c]};
            e.computed = matrix.percent_bias[r][c];
            e.published = reference::kTable5PercentBias[r][c];
            t.entries.push_back(std::move(e));
        }
    }
    return t;
}

/// One of the Tables 6-8 Monte Carlo studies.
inline ComparisonTable build_mc_table(const std::string& name, const reference::McStudy& ref,
                                      std::uint64_t seed, std::size_t replications = 1000,
                                      unsigned threads = 0) {
    SimulationConfig config;
    config.x_distribution = XDistribution::Exponential;
    config.mu_x = 10.0;
    config.beta0 = 0.0;
    config.beta1 = 1.0;
    config.sigma_delta = ref.sigma_delta;
    config.sigma_tau = ref.sigma_tau;
    config.n = 100;
    config.replications = replications;
    config.seed = seed;
    const SimulationReport report = run_study(config, threads);

    ComparisonTable t;
    t.name = name;
    t.title = "Monte Carlo MSE/bias study: sigma_delta = " +
              detail::num_label(ref.sigma_delta) + ", sigma_tau = " +
              detail::num_label(ref.sigma_tau);
    t.key_columns = {"estimator", "metric"};

    const auto push = [&](const char* label, const char* metric, double computed,
                          double published) {
        t.entries.push_back({{label, metric}, computed, published});
    };
    const auto find_row = [&](Method m) -> const EstimatorAggregate& {
        for (const auto& row : report.rows) {
            if (row.method == m) return row;
        }
        throw Error("build_mc_table: estimator row missing");
    };
    const Method order[] = {Method::VER, Method::HOR, Method::PER, Method::GM,
                            Method::MOM, Method::COPAS, Method::MD};
    for (std::size_t i = 0; i < reference::kMcRowCount; ++i) {
        const reference::McRow& r = ref.rows[i];
        const std::string label = reference::kMcRowLabels[i];
        if (label == "ols*") {
            push("ols*", "mse_x1e3", report.ols_star->mse_scaled, r.mse_scaled);
            push("ols*", "percent_bias", report.ols_star->mean_abs_percent_bias, r.percent_bias);
            continue;
        }
        Method m = Method::VER;
        for (Method candidate : order) {
            if (label == method_name(candidate)) m = candidate;
        }
        const EstimatorAggregate& row = find_row(m);
        push(label.c_str(), "mse_x1e3", row.mse_scaled, r.mse_scaled);
        push(label.c_str(), "percent_bias", row.percent_bias, r.percent_bias);
        push(label.c_str(), "lambda", row.mean_lambda.value_or(reference::kNA), r.lambda);
        push(label.c_str(), "theta_deg", row.mean_theta_deg.value_or(reference::kNA),
             r.theta_deg);
    }
    return t;
}

inline ComparisonTable build_table6(std::size_t replications = 1000, unsigned threads = 0) {
    return build_mc_table("table6", reference::kTable6, kTable6Seed, replications, threads);
}
inline ComparisonTable build_table7(std::size_t replications = 1000, unsigned threads = 0) {
    return build_mc_table("table7", reference::kTable7, kTable7Seed, replications, threads);
}
inline ComparisonTable build_table8(std::size_t replications = 1000, unsigned threads = 0) {
    return build_mc_table("table8", reference::kTable8, kTable8Seed, replications, threads);
}

/// Build any table by id (1-8). Throws OutOfRange for unknown ids.
inline ComparisonTable build_table(int id, unsigned threads = 0) {
    switch (id) {
        case 1: return build_table1();
        case 2: return build_table2();
        case 3: return build_table3();
        case 4: return build_table4();
        case 5: return build_table5(2000, threads);
        case 6: return build_table6(1000, threads);
        case 7: return build_table7(1000, threads);
        case 8: return build_table8(1000, threads);
        default: throw OutOfRange("unknown table id: " + std::to_string(id));
    }
}

}  // namespace obliq::tables
