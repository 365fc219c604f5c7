#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "obliq/errors.hpp"
#include "obliq/summary_stats.hpp"

// The geometric core of the library.
//
// A data point projects onto the fitted line y = beta0 + beta1*x along a
// direction that interpolates between horizontal (lambda = 0) and vertical
// (lambda = 1). The weighted squared-error objective
//
//     SSE_o(beta0, beta1, lambda) = (1-lambda)^2 Syy SSE_h + lambda^2 Sxx SSE_v
//
// is minimized over beta0 by beta0 = y_bar - beta1*x_bar; the remaining
// stationarity condition in beta1 is a degree-four polynomial P4 whose
// sign-of-Sxy root is the fitted slope. For each lambda in [0,1] the root
// sweeps the closed interval between the two ordinary least squares slopes
// (vertical-error slope Sxy/Sxx at lambda = 1, horizontal-error slope
// Syy/Sxy at lambda = 0), and the map lambda <-> slope is a bijection with
// a closed-form inverse.

namespace obliq {

/// Slope/intercept pair produced by minimizing the oblique objective at a
/// fixed obliqueness lambda, together with the projection angle.
struct ObliqueSolution {
    double lambda = 0.0;
    double beta1 = 0.0;
    double beta0 = 0.0;
    double theta_deg = 0.0;
};

namespace detail {

inline void require_spread(const SummaryStats& s) {
    if (!(s.sxx > 0.0) || !(s.syy > 0.0)) {
        throw DegenerateStats("oblique: requires Sxx > 0 and Syy > 0");
    }
}

}  // namespace detail

/// Oblique objective in reduced-plus-offset form,
///   ((1-l)^2 Syy / b1^2 + l^2 Sxx) * (Q + n d^2),
/// with Q = Syy - 2 b1 Sxy + b1^2 Sxx and d = y_bar - beta0 - beta1 x_bar.
/// At the optimal intercept (d = 0) this is the reduced form exactly.
inline double sse_oblique(double beta0, double beta1, double lambda, const SummaryStats& s) {
    if (beta1 == 0.0) {
        throw InvalidSlope("sse_oblique: beta1 = 0 leaves the horizontal error undefined");
    }
    const double q = s.syy - 2.0 * beta1 * s.sxy + beta1 * beta1 * s.sxx;
    const double d = s.y_bar - beta0 - beta1 * s.x_bar;
    const double weight =
        (1.0 - lambda) * (1.0 - lambda) * s.syy / (beta1 * beta1) + lambda * lambda * s.sxx;
    return weight * (q + static_cast<double>(s.n) * d * d);
}

/// Evaluate the slope-stationarity polynomial
///   P4(b) = l^2 sqrt(Sxx/Syy)(Sxx/Syy) b^4 - l^2 (Sxx/Syy) rho b^3
///         + (1-l)^2 rho b - (1-l)^2 sqrt(Syy/Sxx).
inline double p4_eval(double beta1, double lambda, const SummaryStats& s) {
    detail::require_spread(s);
    const double r = s.sxx / s.syy;
    const double sq = std::sqrt(r);
    const double l2 = lambda * lambda;
    const double m2 = (1.0 - lambda) * (1.0 - lambda);
    const double b = beta1;
    return ((l2 * sq * r * b - l2 * r * s.rho) * b * b + m2 * s.rho) * b - m2 / sq;
}

/// lambda minimizing the oblique objective for a FIXED slope:
/// the stationary point of SSE_o in lambda is Syy / (Syy + beta1^2 Sxx).
inline double lambda_min_deviation(double beta1, const SummaryStats& s) {
    if (!(s.sxx + s.syy > 0.0)) {
        throw DegenerateStats("lambda_min_deviation: Sxx + Syy must be positive");
    }
    if (!std::isfinite(beta1)) {
        throw InvalidSlope("lambda_min_deviation: beta1 must be finite");
    }
    return s.syy / (s.syy + beta1 * beta1 * s.sxx);
}

/// Projection angle theta_lambda in degrees, in (0, 180).
///
/// theta is the angle at the oblique foot between the ray toward the data
/// point and the forward direction of the fitted line,
///   cos(theta) = (l b^2 - (1-l)) / (sqrt((1-l)^2 + l^2 b^2) sqrt(1 + b^2)),
/// oriented per-point so the vertical projection of a slope-one line measures
/// 45 degrees and the horizontal one 135. Negative slopes are reflected
/// (theta uses |beta1|).
inline double oblique_angle(double lambda, double beta1) {
    const double b = std::abs(beta1);
    if (!(b > 0.0) || !std::isfinite(b)) {
        throw InvalidSlope("oblique_angle: requires a nonzero finite slope");
    }
    const double m = 1.0 - lambda;
    const double num = lambda * b * b - m;
    const double den = std::sqrt(m * m + lambda * lambda * b * b) * std::sqrt(1.0 + b * b);
    const double c = std::clamp(num / den, -1.0, 1.0);
    return std::acos(c) * 180.0 / std::numbers::pi;
}

/// Closed-form inverse of the lambda -> slope map.
///
/// Writing P4 = l^2 T1 - (1-l)^2 T2 with
///   T1 = (Sxx/Syy) b^3 (sqrt(Sxx/Syy) b - rho),  T2 = sqrt(Syy/Sxx) - rho b,
/// both factors are nonnegative exactly on the admissible slope interval, and
/// the unique root is l/(1-l) = sqrt(T2/T1). T1 = 0 (slope = Sxy/Sxx) maps to
/// lambda = 1, T2 = 0 (slope = Syy/Sxy) to lambda = 0.
inline double lambda_for_slope(double beta1, const SummaryStats& s) {
    detail::require_spread(s);
    if (s.sxy == 0.0) {
        throw DegenerateStats("lambda_for_slope: Sxy = 0");
    }
    if (s.sxy < 0.0) {
        return lambda_for_slope(-beta1, s.reflected_y());
    }
    if (!(beta1 > 0.0)) {
        throw OutOfRange("lambda_for_slope: slope must carry the sign of Sxy");
    }
    if (std::abs(s.rho) == 1.0) {
        throw DegenerateStats("lambda_for_slope: collinear data leave lambda unconstrained");
    }

    const double r = s.sxx / s.syy;
    const double sq = std::sqrt(r);
    double t1 = r * beta1 * beta1 * beta1 * (sq * beta1 - s.rho);
    double t2 = 1.0 / sq - s.rho * beta1;

    // Absorb boundary round-off: the endpoints themselves evaluate T1 or T2
    // to an ulp-sized residual of either sign.
    const double scale1 = r * beta1 * beta1 * beta1 * (sq * beta1 + std::abs(s.rho));
    const double scale2 = 1.0 / sq + std::abs(s.rho) * beta1;
    if (t1 < 0.0 && t1 >= -1e-12 * scale1) t1 = 0.0;
    if (t2 < 0.0 && t2 >= -1e-12 * scale2) t2 = 0.0;
    if (t1 < 0.0 || t2 < 0.0) {
        throw OutOfRange("lambda_for_slope: slope outside the admissible interval");
    }

    if (t1 == 0.0) return 1.0;  // slope at the vertical-OLS end
    if (t2 == 0.0) return 0.0;  // slope at the horizontal-OLS end
    const double ratio = std::sqrt(t2 / t1);
    return ratio / (1.0 + ratio);
}

/// Solve P4(beta1; lambda) = 0 for the root carrying the sign of Sxy.
///
/// The root is bracketed by the two OLS slopes, with P4 < 0 at the
/// vertical-OLS end and P4 > 0 at the horizontal-OLS end (positive-Sxy
/// regime), so a bisection/secant hybrid converges unconditionally.
/// lambda = 0 and lambda = 1 short-circuit to the closed-form OLS slopes.
/// Negative Sxy is handled by reflecting y, solving, and negating back.
inline ObliqueSolution solve_slope_for_lambda(double lambda, const SummaryStats& s) {
    detail::require_spread(s);
    if (s.sxy == 0.0) {
        throw DegenerateStats("solve_slope_for_lambda: Sxy = 0");
    }
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
        throw OutOfRange("solve_slope_for_lambda: lambda must lie in [0, 1]");
    }
    if (s.sxy < 0.0) {
        ObliqueSolution sol = solve_slope_for_lambda(lambda, s.reflected_y());
        sol.beta1 = -sol.beta1;
        sol.beta0 = s.y_bar - sol.beta1 * s.x_bar;
        return sol;
    }

    const auto finish = [&](double beta1) {
        ObliqueSolution sol;
        sol.lambda = lambda;
        sol.beta1 = beta1;
        sol.beta0 = s.y_bar - beta1 * s.x_bar;
        sol.theta_deg = oblique_angle(lambda, beta1);
        return sol;
    };

    const double ver = s.sxy / s.sxx;
    const double hor = s.syy / s.sxy;
    if (lambda == 1.0) return finish(ver);
    if (lambda == 0.0) return finish(hor);
    if (ver == hor || std::abs(s.rho) == 1.0) {
        // Collinear data collapse the bracket to a single point.
        return finish(ver);
    }

    double a = std::min(ver, hor);
    double b = std::max(ver, hor);
    double fa = p4_eval(a, lambda, s);
    double fb = p4_eval(b, lambda, s);
    // Endpoint residuals are analytically signed (fa < 0 < fb); if round-off
    // flipped one, the root sits numerically at that endpoint.
    if (fa == 0.0 || fa > 0.0) return finish(a);
    if (fb == 0.0 || fb < 0.0) return finish(b);

    constexpr double kRelTol = 1e-12;
    constexpr int kMaxIter = 200;
    for (int iter = 0; iter < kMaxIter; ++iter) {
        // Secant through the bracket endpoints, with a forced bisection every
        // other step so the bracket provably halves at least once per pair.
        double x = a - fa * (b - a) / (fb - fa);
        if ((iter & 1) != 0 || !(x > a && x < b)) {
            x = 0.5 * (a + b);
        }
        if (x == a || x == b) return finish(x);  // bracket at machine resolution
        const double fx = p4_eval(x, lambda, s);
        if (fx == 0.0) return finish(x);
        if (fx < 0.0) {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
        if (b - a <= kRelTol * std::max(std::abs(a), std::abs(b))) {
            return finish(0.5 * (a + b));
        }
    }
    throw NoConvergence("solve_slope_for_lambda: no convergence after 200 iterations");
}

}  // namespace obliq
