#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "obliq/errors.hpp"

namespace obliq {

/// A paired sample of observed (x, y) values. The coordinates need not share
/// physical units; every estimator downstream consumes only SummaryStats.
struct PairedSample {
    std::vector<double> xs;
    std::vector<double> ys;

    std::size_t size() const { return xs.size(); }
};

/// Sufficient statistics of a paired sample: centered second- and
/// fourth-order sums plus the (stored, never recomputed) correlation.
struct SummaryStats {
    std::size_t n = 0;
    double x_bar = 0.0;
    double y_bar = 0.0;
    double sxx = 0.0;    // sum (x - x_bar)^2
    double syy = 0.0;    // sum (y - y_bar)^2
    double sxy = 0.0;    // sum (x - x_bar)(y - y_bar)
    double rho = 0.0;    // sxy / sqrt(sxx * syy), clamped into [-1, 1]
    double sxxxy = 0.0;  // sum (x - x_bar)^3 (y - y_bar)
    double sxyyy = 0.0;  // sum (x - x_bar)(y - y_bar)^3

    /// Statistics of the sample reflected through y -> -y. Used to reduce the
    /// negative-correlation case to the positive one in slope solvers.
    SummaryStats reflected_y() const {
        SummaryStats r = *this;
        r.y_bar = -y_bar;
        r.sxy = -sxy;
        r.rho = -rho;
        r.sxxxy = -sxxxy;
        r.sxyyy = -sxyyy;
        return r;
    }
};

/// Diagnostic classification of a SummaryStats instance. Pure flags; the
/// caller decides which ones are fatal for its purpose.
struct DiagnosticsFlags {
    bool horizontal_undefined = false;  // sxy == 0
    bool no_x_variation = false;        // sxx == 0
    bool no_y_variation = false;        // syy == 0
    bool collinear = false;             // |rho| == 1

    bool any() const {
        return horizontal_undefined || no_x_variation || no_y_variation || collinear;
    }
    /// Flags that make most estimators undefined (collinearity is not one of
    /// them: every estimator still returns the common exact-fit slope).
    bool degenerate() const { return horizontal_undefined || no_x_variation || no_y_variation; }
};

/// Assemble SummaryStats directly from moments. Convenience for summary-level
/// inputs (reference tables feed {rho, Sxx, Syy, ...} rather than raw data).
/// rho is derived from sxy when both spreads are positive.
inline SummaryStats stats_from_moments(std::size_t n, double x_bar, double y_bar, double sxx,
                                       double syy, double sxy, double sxxxy = 0.0,
                                       double sxyyy = 0.0) {
    if (sxx < 0.0 || syy < 0.0) {
        throw DegenerateStats("stats_from_moments: negative sum of squares");
    }
    if (sxy * sxy > sxx * syy * (1.0 + 1e-12)) {
        throw DegenerateStats("stats_from_moments: Sxy^2 exceeds Sxx*Syy");
    }
    SummaryStats s;
    s.n = n;
    s.x_bar = x_bar;
    s.y_bar = y_bar;
    s.sxx = sxx;
    s.syy = syy;
    s.sxy = sxy;
    s.rho = (sxx > 0.0 && syy > 0.0) ? std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0) : 0.0;
    s.sxxxy = sxxxy;
    s.sxyyy = sxyyy;
    return s;
}

/// Compute the sufficient statistics of a sample.
///
/// Two-pass centered accumulation: means first, then centered sums. The
/// fourth-order sums amplify round-off badly under raw-moment subtraction,
/// so the single-pass shortcut is deliberately not used.
inline SummaryStats summarize(const PairedSample& sample) {
    const std::size_t n = sample.xs.size();
    if (n != sample.ys.size()) {
        throw DegenerateSample("summarize: xs and ys differ in length");
    }
    if (n < 3) {
        throw DegenerateSample("summarize: need at least 3 points, got " + std::to_string(n));
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(sample.xs[i]) || !std::isfinite(sample.ys[i])) {
            throw DegenerateSample("summarize: non-finite value at index " + std::to_string(i));
        }
    }

    double sum_x = 0.0, sum_y = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sum_x += sample.xs[i];
        sum_y += sample.ys[i];
    }
    const double x_bar = sum_x / static_cast<double>(n);
    const double y_bar = sum_y / static_cast<double>(n);

    double sxx = 0.0, syy = 0.0, sxy = 0.0, sxxxy = 0.0, sxyyy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = sample.xs[i] - x_bar;
        const double dy = sample.ys[i] - y_bar;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
        sxxxy += dx * dx * dx * dy;
        sxyyy += dx * dy * dy * dy;
    }

    SummaryStats s;
    s.n = n;
    s.x_bar = x_bar;
    s.y_bar = y_bar;
    s.sxx = sxx;
    s.syy = syy;
    s.sxy = sxy;
    // Cauchy-Schwarz can be violated by an ulp on exactly collinear data;
    // clamp so |rho| <= 1 holds as an invariant.
    s.rho = (sxx > 0.0 && syy > 0.0) ? std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0) : 0.0;
    s.sxxxy = sxxxy;
    s.sxyyy = sxyyy;
    return s;
}

/// Classify degeneracies. Pure; raises no errors.
inline DiagnosticsFlags validate(const SummaryStats& stats) {
    DiagnosticsFlags f;
    f.horizontal_undefined = (stats.sxy == 0.0);
    f.no_x_variation = (stats.sxx == 0.0);
    f.no_y_variation = (stats.syy == 0.0);
    f.collinear = (stats.sxx > 0.0 && stats.syy > 0.0 && std::abs(stats.rho) == 1.0);
    return f;
}

}  // namespace obliq
