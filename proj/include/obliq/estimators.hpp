#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "obliq/errors.hpp"
#include "obliq/oblique.hpp"
#include "obliq/summary_stats.hpp"

// Every named slope estimator for the measurement error model. All of them
// consume SummaryStats, share the intercept rule beta0 = y_bar - beta1*x_bar,
// and (where defined) report the obliqueness lambda and projection angle of
// the equivalent oblique fit.

namespace obliq {

enum class Method { VER, HOR, GM, PER, MLE, COPAS, MOM_RAW, MOM, MD };

inline const char* method_name(Method m) {
    switch (m) {
        case Method::VER: return "ver";
        case Method::HOR: return "hor";
        case Method::GM: return "gm";
        case Method::PER: return "per";
        case Method::MLE: return "mle";
        case Method::COPAS: return "copas";
        case Method::MOM_RAW: return "mom_raw";
        case Method::MOM: return "mom";
        case Method::MD: return "md";
    }
    return "?";
}

/// One estimator's output. lambda/theta_deg are absent when the inputs are
/// degenerate for the lambda map (e.g. collinear data, or a raw fourth-moment
/// slope outside the admissible interval). notes carries diagnostic tags
/// ("CLAMPED_HIGH", "FALLBACK_GM", "TIE", ...), semicolon separated.
struct SlopeFit {
    Method method = Method::VER;
    double beta1 = std::numeric_limits<double>::quiet_NaN();
    double beta0 = std::numeric_limits<double>::quiet_NaN();
    std::optional<double> lambda;
    std::optional<double> theta_deg;
    std::string notes;
    bool ok = true;

    void add_note(const std::string& tag) {
        if (!notes.empty()) notes += ';';
        notes += tag;
    }
};

namespace detail {

inline std::optional<double> try_lambda_for_slope(double beta1, const SummaryStats& s) {
    try {
        return lambda_for_slope(beta1, s);
    } catch (const Error&) {
        return std::nullopt;
    }
}

inline std::optional<double> try_angle(std::optional<double> lambda, double beta1) {
    if (!lambda || !(std::abs(beta1) > 0.0) || !std::isfinite(beta1)) return std::nullopt;
    return oblique_angle(*lambda, beta1);
}

inline SlopeFit make_fit(Method m, double beta1, std::optional<double> lambda,
                         const SummaryStats& s) {
    SlopeFit f;
    f.method = m;
    f.beta1 = beta1;
    f.beta0 = s.y_bar - beta1 * s.x_bar;
    f.lambda = lambda;
    f.theta_deg = try_angle(lambda, beta1);
    return f;
}

inline double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

// Stable positive root of the quadratic numerator a + sqrt(a^2 + b), b >= 0.
// Avoids cancellation when a is negative and dominant.
inline double root_sum(double a, double b) {
    const double disc = std::sqrt(a * a + b);
    return a >= 0.0 ? a + disc : b / (disc - a);
}

}  // namespace detail

/// OLS(y|x): slope Sxy/Sxx, the lambda = 1 member of the oblique family.
inline SlopeFit ols_vertical(const SummaryStats& s) {
    if (!(s.sxx > 0.0)) throw DegenerateStats("ols_vertical: Sxx = 0");
    return detail::make_fit(Method::VER, s.sxy / s.sxx, 1.0, s);
}

/// OLS(x|y): slope Syy/Sxy, the lambda = 0 member.
inline SlopeFit ols_horizontal(const SummaryStats& s) {
    if (s.sxy == 0.0) throw HorizontalUndefined("ols_horizontal: Sxy = 0");
    return detail::make_fit(Method::HOR, s.syy / s.sxy, 0.0, s);
}

/// Geometric mean slope sign(Sxy) * sqrt(Syy/Sxx); oblique parameter 1/2.
inline SlopeFit geometric_mean(const SummaryStats& s) {
    if (!(s.sxx > 0.0) || !(s.syy > 0.0)) throw DegenerateStats("geometric_mean: zero spread");
    if (s.sxy == 0.0) throw SignAmbiguous("geometric_mean: Sxy = 0 leaves the sign undefined");
    const double beta1 = detail::sign(s.sxy) * std::sqrt(s.syy / s.sxx);
    return detail::make_fit(Method::GM, beta1, 0.5, s);
}

/// Perpendicular (orthogonal) slope. The stationarity quadratic
/// Sxy b^2 + (Sxx - Syy) b - Sxy = 0 has roots b and -1/b; the minimizing
/// root always carries the sign of Sxy and lies in the admissible interval,
/// and is the "+" branch of ((Syy-Sxx) +- sqrt((Syy-Sxx)^2 + 4 Sxy^2))/(2 Sxy).
inline SlopeFit perpendicular(const SummaryStats& s) {
    if (s.sxy == 0.0) throw HorizontalUndefined("perpendicular: Sxy = 0");
    const double a = s.syy - s.sxx;
    const double beta1 = detail::root_sum(a, 4.0 * s.sxy * s.sxy) / (2.0 * s.sxy);
    SlopeFit f = detail::make_fit(Method::PER, beta1, detail::try_lambda_for_slope(beta1, s), s);
    return f;
}

/// Copas rule: vertical OLS when the (centered) y-spread is smaller than the
/// x-spread, horizontal OLS when larger, i.e. |gm slope| below/above one.
/// The tie Syy = Sxx resolves to the geometric mean, the continuous
/// interpolant at that boundary.
inline SlopeFit copas(const SummaryStats& s) {
    if (!(s.sxx > 0.0) || !(s.syy > 0.0)) throw DegenerateStats("copas: zero spread");
    if (s.sxy == 0.0) throw HorizontalUndefined("copas: Sxy = 0");
    SlopeFit f;
    if (s.syy < s.sxx) {
        f = ols_vertical(s);
    } else if (s.syy > s.sxx) {
        f = ols_horizontal(s);
    } else {
        f = geometric_mean(s);
        f.add_note("TIE");
    }
    f.method = Method::COPAS;
    return f;
}

/// Fourth-moment slope. In per-observation moments s4 = S4/n, s2 = S2/n the
/// closed form is sqrt((sxyyy - 3 sxy syy) / (sxxxy - 3 sxy sxx)); with
/// centered sums that reads
///   sign(Sxy) * sqrt((n Sxyyy - 3 Sxy Syy) / (n Sxxxy - 3 Sxy Sxx)),
/// falling back to the geometric mean when the radicand is negative.
inline SlopeFit moment_raw(const SummaryStats& s) {
    const double n = static_cast<double>(s.n);
    const double den = n * s.sxxxy - 3.0 * s.sxy * s.sxx;
    const double num = n * s.sxyyy - 3.0 * s.sxy * s.syy;
    if (den == 0.0) throw DenominatorZero("moment_raw: n*Sxxxy - 3*Sxy*Sxx = 0");
    const double radicand = num / den;
    if (radicand < 0.0) {
        SlopeFit f = geometric_mean(s);
        f.method = Method::MOM_RAW;
        f.add_note("FALLBACK_GM");
        return f;
    }
    if (s.sxy == 0.0) throw SignAmbiguous("moment_raw: Sxy = 0 leaves the sign undefined");
    const double beta1 = detail::sign(s.sxy) * std::sqrt(radicand);
    return detail::make_fit(Method::MOM_RAW, beta1, detail::try_lambda_for_slope(beta1, s), s);
}

/// Fourth-moment slope clamped to the admissible interval (the slope range on
/// which both error-variance moment estimates stay nonnegative).
inline SlopeFit moment_clamped(const SummaryStats& s) {
    if (s.sxy == 0.0) throw SignAmbiguous("moment_clamped: Sxy = 0");
    SlopeFit raw = moment_raw(s);
    const double ver = s.sxy / s.sxx;
    const double hor = s.syy / s.sxy;
    const double lo = std::min(ver, hor);
    const double hi = std::max(ver, hor);
    SlopeFit f = raw;
    f.method = Method::MOM;
    if (raw.beta1 < lo || raw.beta1 > hi) {
        const double clamped = std::clamp(raw.beta1, lo, hi);
        // LOW = vertical-OLS end (smaller magnitude), HIGH = horizontal end.
        f = detail::make_fit(Method::MOM, clamped, detail::try_lambda_for_slope(clamped, s), s);
        f.notes = raw.notes;
        f.add_note(std::abs(clamped) <= std::abs(ver) * (1.0 + 1e-12) ? "CLAMPED_LOW"
                                                                      : "CLAMPED_HIGH");
    }
    return f;
}

/// Maximum likelihood slope for a known error-variance ratio kappa:
///   ((Syy - k Sxx) + sqrt((Syy - k Sxx)^2 + 4 k rho^2 Sxx Syy))
///     / (2 rho sqrt(Sxx Syy)).
/// The "+" numerator yields the sign-of-rho slope for either sign of rho.
/// kappa = 0 reduces exactly to the horizontal OLS slope and kappa = +inf is
/// taken as the vertical OLS limit, so the full closed range [0, +inf] of the
/// moment ratio is accepted.
inline SlopeFit mle(const SummaryStats& s, double kappa) {
    if (!(s.sxx > 0.0) || !(s.syy > 0.0)) throw DegenerateStats("mle: zero spread");
    if (s.rho == 0.0) throw RhoZero("mle: rho = 0");
    if (std::isnan(kappa) || kappa < 0.0) throw OutOfRange("mle: kappa must be >= 0");
    SlopeFit f;
    if (std::isinf(kappa)) {
        f = ols_vertical(s);
        f.method = Method::MLE;
        return f;
    }
    const double a = s.syy - kappa * s.sxx;
    const double b = 4.0 * kappa * s.rho * s.rho * s.sxx * s.syy;
    const double beta1 = detail::root_sum(a, b) / (2.0 * s.rho * std::sqrt(s.sxx * s.syy));
    return detail::make_fit(Method::MLE, beta1, detail::try_lambda_for_slope(beta1, s), s);
}

/// Minimum deviation slope: take the clamped fourth-moment slope, move to the
/// lambda that minimizes the oblique objective for it, and refit the slope as
/// the P4 root at that lambda.
inline SlopeFit minimum_deviation(const SummaryStats& s) {
    SlopeFit mom = moment_clamped(s);
    const double lam = lambda_min_deviation(mom.beta1, s);
    const ObliqueSolution sol = solve_slope_for_lambda(lam, s);
    SlopeFit f = detail::make_fit(Method::MD, sol.beta1, lam, s);
    f.notes = mom.notes;
    return f;
}

/// Run every estimator, converting per-method errors into notes rather than
/// failing the aggregate. MLE uses assumed_kappa when supplied; otherwise the
/// moment ratio kappa_tilde at the clamped fourth-moment slope when that is
/// computable (the self-consistent choice: the resulting MLE slope is the
/// moment slope itself).
inline std::vector<SlopeFit> estimate_all(const SummaryStats& s,
                                          std::optional<double> assumed_kappa = std::nullopt);
// (defined in measurement_error.hpp, which supplies the moment ratio)

}  // namespace obliq
