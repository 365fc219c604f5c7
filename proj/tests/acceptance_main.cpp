// Acceptance suite: every criterion pinned at its stated tolerance, one
// PASS/FAIL line each. Exit code is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "obliq/obliq.hpp"
#include "oracles.hpp"

using namespace obliq;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& what, const std::string& detail) {
    std::printf("%s  criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", id, what.c_str(),
                detail.c_str());
    if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// --- criterion 1: Table 1 cells within 0.001, under a second -------------

void criterion1() {
    const auto start = std::chrono::steady_clock::now();
    const tables::ComparisonTable t = tables::build_table1();
    double worst = 0.0;
    for (const auto& e : t.entries) worst = std::max(worst, std::abs(e.computed - e.published));
    const double elapsed = seconds_since(start);
    char detail[128];
    std::snprintf(detail, sizeof(detail), "36 cells, worst |diff| = %.6f, %.3f s", worst,
                  elapsed);
    report(1, worst <= 1e-3 && elapsed < 1.0, "MLE slope grid reproduction", detail);
}

// --- criterion 2: Table 2 lambda cells within 0.001 ----------------------

void criterion2() {
    const auto start = std::chrono::steady_clock::now();
    const tables::ComparisonTable t = tables::build_table2();
    double worst = 0.0;
    int exact_half = 0;
    for (const auto& e : t.entries) {
        worst = std::max(worst, std::abs(e.computed - e.published));
        if (e.published == 0.5 && std::abs(e.computed - 0.5) <= 1e-3) ++exact_half;
    }
    const double elapsed = seconds_since(start);
    char detail[128];
    std::snprintf(detail, sizeof(detail),
                  "36 cells, worst |diff| = %.6f, %d/12 half-cells, %.3f s", worst, exact_half,
                  elapsed);
    report(2, worst <= 1e-3 && exact_half == 12 && elapsed < 1.0,
           "obliqueness parameter grid reproduction", detail);
}

// --- criterion 3: Table 4 sweep within 0.0005, infinity and circularity ---

void criterion3() {
    const tables::ComparisonTable t = tables::build_table4();
    double worst = 0.0;
    bool last_row_infinite = false;
    for (const auto& e : t.entries) {
        if (std::isinf(e.published)) {
            if (e.key[1] == "kappa_tilde" && std::isinf(e.computed) && e.computed > 0) {
                last_row_infinite = true;
            }
            continue;
        }
        worst = std::max(worst, std::abs(e.computed - e.published));
    }
    // circularity column: the recomputed MLE equals the raw fourth-moment
    // slope row by row
    double worst_circ = 0.0;
    for (std::size_t i = 0; i < t.entries.size(); i += 5) {
        const double beta_tilde = t.entries[i + 1].computed;
        const double mle_slope = t.entries[i + 4].computed;
        worst_circ = std::max(worst_circ, std::abs(mle_slope - beta_tilde));
    }
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "worst |diff| = %.6f, last-row ratio inf = %s, worst |mle - btilde| = %.2e",
                  worst, last_row_infinite ? "yes" : "no", worst_circ);
    report(3, worst <= 5e-4 && last_row_infinite && worst_circ <= 1e-3,
           "slope-sweep table reproduction", detail);
}

// --- criterion 4: closed-form variance rows vs direct evaluation ----------

void criterion4() {
    Rng rng(0xACCE9704, 0);
    double worst_rel = 0.0;
    double worst_per = 0.0, worst_mle = 0.0;
    const auto rel_gap = [](double a, double b) {
        if (std::isinf(a) && std::isinf(b)) return 0.0;
        return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-30});
    };
    for (int rep = 0; rep < 500; ++rep) {
        const SummaryStats s = oracles::random_stats(rng, true);
        const double kappa = std::exp(3.0 * (rng.uniform() - 0.5));
        const struct {
            Method m;
            double slope;
        } rows[] = {
            {Method::VER, ols_vertical(s).beta1},  {Method::HOR, ols_horizontal(s).beta1},
            {Method::GM, geometric_mean(s).beta1}, {Method::PER, perpendicular(s).beta1},
            {Method::MLE, mle(s, kappa).beta1},
        };
        for (const auto& row : rows) {
            const ErrorVarianceEstimates direct = madansky_variances(row.slope, s);
            const ErrorVarianceEstimates closed = table3_row(
                row.m, s, row.m == Method::MLE ? std::optional<double>(kappa) : std::nullopt);
            worst_rel = std::max(worst_rel, rel_gap(direct.sigma_delta_sq,
                                                    closed.sigma_delta_sq));
            worst_rel = std::max(worst_rel, rel_gap(direct.sigma_tau_sq, closed.sigma_tau_sq));
            worst_rel = std::max(worst_rel, rel_gap(direct.kappa_tilde, closed.kappa_tilde));
        }
        worst_per = std::max(worst_per,
                             std::abs(madansky_variances(perpendicular(s).beta1, s).kappa_tilde -
                                      1.0));
        worst_mle = std::max(worst_mle,
                             std::abs(madansky_variances(mle(s, kappa).beta1, s).kappa_tilde -
                                      kappa) /
                                 kappa);
    }
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "500 stats, worst rel = %.2e, per-ratio |d| = %.2e, mle-ratio rel = %.2e",
                  worst_rel, worst_per, worst_mle);
    report(4, worst_rel <= 1e-10 && worst_per <= 1e-10 && worst_mle <= 1e-10,
           "variance-row identity suite", detail);
}

// --- criterion 5: the three propositions as property suites ---------------

void criterion5() {
    Rng rng(0xACCE9705, 0);
    double worst_p4 = 0.0, worst_fixed = 0.0, worst_circ = 0.0;
    for (int rep = 0; rep < 1000; ++rep) {
        const SummaryStats s = oracles::random_stats(rng, true);
        const SummaryStats pos = s.sxy < 0.0 ? s.reflected_y() : s;

        // Proposition 1: the geometric-mean slope solves P4 at lambda = 1/2.
        const double gm = std::sqrt(pos.syy / pos.sxx);
        const double scale = std::sqrt(pos.syy / pos.sxx) * (1.0 + std::abs(pos.rho));
        worst_p4 = std::max(worst_p4, std::abs(p4_eval(gm, 0.5, pos)) / scale);

        // Proposition 2: sd-ratio fixed point at the geometric mean.
        const ErrorVarianceEstimates e = madansky_variances(geometric_mean(s).beta1, s);
        worst_fixed = std::max(
            worst_fixed,
            std::abs(std::sqrt(e.sigma_tau_sq / e.sigma_delta_sq) - std::abs(gm)) / gm);

        // Proposition 3: the moment ratio inverts the MLE formula.
        const double ver = pos.sxy / pos.sxx;
        const double hor = pos.syy / pos.sxy;
        const double b = ver + (0.001 + 0.998 * rng.uniform()) * (hor - ver);
        worst_circ = std::max(worst_circ, std::abs(mle_circularity(b, pos) - b) / b);
    }
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "1000 each: P4 residual = %.2e, sd-ratio rel = %.2e, circularity rel = %.2e",
                  worst_p4, worst_fixed, worst_circ);
    report(5, worst_p4 <= 1e-12 && worst_fixed <= 1e-10 && worst_circ <= 1e-9,
           "proposition property suites", detail);
}

// --- criterion 6: solver vs objective-grid oracle --------------------------

void criterion6() {
    Rng rng(0xACCE9706, 0);
    double worst_gap = 0.0, worst_round = 0.0;
    for (int rep = 0; rep < 200; ++rep) {
        const SummaryStats s = oracles::random_stats(rng);
        const double lambda = 0.02 + 0.96 * rng.uniform();
        const double ver = s.sxy / s.sxx;
        const double hor = s.syy / s.sxy;
        const double solved = solve_slope_for_lambda(lambda, s).beta1;
        const double oracle =
            oracles::argmin_slope_grid(lambda, s, std::min(ver, hor), std::max(ver, hor));
        worst_gap = std::max(worst_gap, std::abs(solved - oracle));
        worst_round = std::max(worst_round, std::abs(lambda_for_slope(solved, s) - lambda));
    }
    char detail[128];
    std::snprintf(detail, sizeof(detail),
                  "200 instances, worst |root - argmin| = %.2e, round-trip = %.2e", worst_gap,
                  worst_round);
    report(6, worst_gap <= 1e-6 && worst_round <= 1e-9, "objective-oracle equivalence", detail);
}

// --- criterion 7: Monte Carlo studies ---------------------------------------

struct McMetrics {
    double mse = 0.0, bias = 0.0;
};

void criterion7() {
    const auto start = std::chrono::steady_clock::now();
    bool ok = true;
    std::string issues;
    double worst_bias_gap = 0.0, worst_mse_ratio = 1.0;

    const tables::ComparisonTable studies[] = {tables::build_table6(), tables::build_table7(),
                                               tables::build_table8()};
    for (const auto& study : studies) {
        const auto metric = [&](const char* label, const char* name) {
            for (const auto& e : study.entries) {
                if (e.key[0] == label && e.key[1] == name) return e;
            }
            std::fprintf(stderr, "missing %s/%s\n", label, name);
            std::exit(70);
        };
        const auto get = [&](const char* label) {
            McMetrics m;
            m.mse = metric(label, "mse_x1e3").computed;
            m.bias = metric(label, "percent_bias").computed;
            return m;
        };
        for (const char* label : {"ver", "ols*", "hor", "per", "gm", "mom", "copas", "md"}) {
            const auto entry_mse = metric(label, "mse_x1e3");
            const auto entry_bias = metric(label, "percent_bias");
            const bool sign_ok = (entry_bias.computed < 0) == (entry_bias.published < 0);
            const double bias_gap = std::abs(entry_bias.computed - entry_bias.published);
            const double mse_ratio = entry_mse.computed / entry_mse.published;
            worst_bias_gap = std::max(worst_bias_gap, bias_gap);
            worst_mse_ratio = std::max(worst_mse_ratio, std::max(mse_ratio, 1.0 / mse_ratio));
            if (!sign_ok) {
                ok = false;
                issues += " sign(" + study.name + "/" + label + ")";
            }
            if (bias_gap > 1.5) {
                ok = false;
                issues += " bias(" + study.name + "/" + label + ")";
            }
            if (mse_ratio > 2.0 || mse_ratio < 0.5) {
                ok = false;
                issues += " mse(" + study.name + "/" + label + ")";
            }
        }
        const McMetrics mom = get("mom"), cop = get("copas"), md = get("md"), gm = get("gm");
        if (!(mom.mse < cop.mse && std::abs(mom.bias) < std::abs(cop.bias))) {
            ok = false;
            issues += " mom-vs-copas(" + study.name + ")";
        }
        if (!(md.mse <= gm.mse)) {
            ok = false;
            issues += " md-vs-gm(" + study.name + ")";
        }
    }
    const double elapsed = seconds_since(start);
    if (elapsed >= 120.0) {
        ok = false;
        issues += " runtime";
    }
    char detail[256];
    std::snprintf(detail, sizeof(detail),
                  "R=1000 x3, worst |bias diff| = %.3f pp, worst MSE ratio = %.2f, %.1f s%s%s",
                  worst_bias_gap, worst_mse_ratio, elapsed, issues.empty() ? "" : ", issues:",
                  issues.c_str());
    report(7, ok, "Monte Carlo study reproduction", detail);
}

// --- criterion 8: kappa misspecification matrix ----------------------------

void criterion8() {
    const tables::ComparisonTable t = tables::build_table5(2000);
    const std::size_t n = reference::kTable5Size;
    std::vector<std::vector<double>> m(n, std::vector<double>(n));
    for (std::size_t i = 0; i < t.entries.size(); ++i) {
        m[i / n][i % n] = t.entries[i].computed;
    }
    double worst_diag = 0.0;
    for (std::size_t d = 0; d < n; ++d) worst_diag = std::max(worst_diag, std::abs(m[d][d]));
    bool monotone = true;
    for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t r = 1; r < n; ++r) {
            if (m[r][c] > m[r - 1][c] + 1e-12) monotone = false;
        }
    }
    bool unit_rows_identical = true;
    for (std::size_t c = 0; c < n; ++c) {
        if (m[3][c] != m[4][c] || m[4][c] != m[5][c]) unit_rows_identical = false;
    }
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "R=2000, worst diagonal |bias| = %.3f, monotone columns = %s, unit rows = %s",
                  worst_diag, monotone ? "yes" : "no", unit_rows_identical ? "yes" : "no");
    report(8, worst_diag < 1.0 && monotone && unit_rows_identical,
           "kappa misspecification matrix", detail);
}

// --- criterion 9: dimensional correctness -----------------------------------

void criterion9() {
    Rng rng(0xACCE9709, 0);
    double worst = 0.0;
    bool all_ok = true;
    for (int rep = 0; rep < 500; ++rep) {
        const SummaryStats s = summarize(oracles::random_linear_sample(rng));
        if (s.sxy == 0.0 || std::abs(s.rho) > 0.999) continue;
        const double c = 0.1 + 9.9 * rng.uniform();
        const double d = 0.1 + 9.9 * rng.uniform();
        const SummaryStats t = stats_from_moments(s.n, c * s.x_bar, d * s.y_bar, c * c * s.sxx,
                                                  d * d * s.syy, c * d * s.sxy,
                                                  c * c * c * d * s.sxxxy,
                                                  c * d * d * d * s.sxyyy);
        const double f = d / c;
        const double kappa = std::exp(4.0 * (rng.uniform() - 0.5));
        const struct {
            double base, scaled;
        } pairs[] = {
            {ols_vertical(s).beta1, ols_vertical(t).beta1},
            {ols_horizontal(s).beta1, ols_horizontal(t).beta1},
            {geometric_mean(s).beta1, geometric_mean(t).beta1},
            {moment_raw(s).beta1, moment_raw(t).beta1},
            {moment_clamped(s).beta1, moment_clamped(t).beta1},
            {minimum_deviation(s).beta1, minimum_deviation(t).beta1},
            {mle(s, kappa).beta1, mle(t, f * f * kappa).beta1},
        };
        for (const auto& p : pairs) {
            const double rel = std::abs(p.scaled - f * p.base) / std::abs(f * p.base);
            worst = std::max(worst, rel);
            if (rel > 1e-8) all_ok = false;
        }
    }

    // the perpendicular estimator is the deliberate counterexample
    const SummaryStats base = stats_from_moments(5, 0, 0, 1.0, 2.0, 0.7);
    const SummaryStats stretched = stats_from_moments(5, 0, 0, 4.0, 2.0, 1.4);
    const double per_gap =
        std::abs(perpendicular(stretched).beta1 - 0.5 * perpendicular(base).beta1);
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "500 instances, worst rel = %.2e, perpendicular violation = %.4f", worst,
                  per_gap);
    report(9, all_ok && per_gap > 1e-3, "scale equivariance suite", detail);
}

}  // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    if (failures == 0) {
        std::printf("all acceptance criteria passed\n");
    } else {
        std::printf("%d acceptance criteria FAILED\n", failures);
    }
    return failures;
}
