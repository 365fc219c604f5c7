#pragma once

#include <cmath>
#include <limits>
#include <optional>

#include "obliq/errors.hpp"
#include "obliq/estimators.hpp"
#include "obliq/summary_stats.hpp"

// Second-moment estimation of the error variances. For a candidate slope b,
//
//     sigma_delta^2 ~ Sxx/n - Sxy/(n b),   sigma_tau^2 ~ Syy/n - b Sxy/n,
//
// both nonnegative exactly when b lies in the closed admissible interval
// between the two OLS slopes (sign-adjusted). Their ratio kappa_tilde runs
// monotonically from +inf at the vertical-OLS end to 0 at the horizontal end,
// and feeding it back into the maximum likelihood slope reproduces b itself.

namespace obliq {

/// Moment estimates of the two error variances at a candidate slope, their
/// ratio, and whether the slope is admissible (both variances nonnegative).
struct ErrorVarianceEstimates {
    double sigma_delta_sq = 0.0;
    double sigma_tau_sq = 0.0;
    double kappa_tilde = 0.0;  // may be +inf; NaN only in the collinear 0/0 case
    bool admissible = false;
};

/// Evaluate the second-moment error-variance estimators at a slope.
/// Round-off at the interval boundary is absorbed: a variance within
/// 1e-12*(Sxx+Syy)/n of zero (either sign) is snapped to exactly zero, so a
/// slope sitting on an OLS endpoint yields the 0 / +inf ratio deterministically.
/// Ratio conventions: 0/positive = 0 and positive/0 = +inf.
inline ErrorVarianceEstimates madansky_variances(double beta1, const SummaryStats& s) {
    if (beta1 == 0.0) throw InvalidSlope("madansky_variances: beta1 = 0");
    if (s.n == 0) throw DegenerateStats("madansky_variances: n = 0");
    const double n = static_cast<double>(s.n);
    double sd2 = s.sxx / n - s.sxy / (n * beta1);
    double st2 = s.syy / n - beta1 * s.sxy / n;
    const double tol = 1e-12 * (s.sxx + s.syy) / n;
    if (std::abs(sd2) <= tol) sd2 = 0.0;
    if (std::abs(st2) <= tol) st2 = 0.0;

    ErrorVarianceEstimates e;
    e.sigma_delta_sq = sd2;
    e.sigma_tau_sq = st2;
    e.admissible = (sd2 >= 0.0 && st2 >= 0.0);
    if (sd2 > 0.0) {
        e.kappa_tilde = st2 / sd2;
    } else if (st2 > 0.0) {
        e.kappa_tilde = std::numeric_limits<double>::infinity();
    } else {
        // Both zero: collinear data, every ratio fits.
        e.kappa_tilde = std::numeric_limits<double>::quiet_NaN();
    }
    return e;
}

/// Moment estimate of the error-variance ratio induced by a candidate slope.
/// Computed as the ratio of the variance estimators directly so it agrees
/// with madansky_variances bit for bit. Boundary slopes return 0 / +inf.
inline double kappa_tilde(double beta1, const SummaryStats& s) {
    const ErrorVarianceEstimates e = madansky_variances(beta1, s);
    if (!e.admissible) {
        throw OutOfRange("kappa_tilde: slope outside the closed admissible interval");
    }
    return e.kappa_tilde;
}

/// Feed the moment ratio of a slope back through the maximum likelihood
/// formula. For any admissible interior slope this returns the slope itself.
inline double mle_circularity(double beta1, const SummaryStats& s) {
    return mle(s, kappa_tilde(beta1, s)).beta1;
}

/// Closed-form error-variance rows for the canonical estimators, one row per
/// method. Must agree with madansky_variances evaluated at the method's
/// slope; kept as an independent algebraic route for exactly that check.
inline ErrorVarianceEstimates table3_row(Method method, const SummaryStats& s,
                                         std::optional<double> kappa = std::nullopt) {
    if (!(s.sxx > 0.0) || !(s.syy > 0.0) || s.n == 0) {
        throw DegenerateStats("table3_row: requires positive spreads and n > 0");
    }
    const double n = static_cast<double>(s.n);
    const double rho2 = s.rho * s.rho;
    const double abs_rho = std::abs(s.rho);
    ErrorVarianceEstimates e;
    e.admissible = true;
    switch (method) {
        case Method::VER:
            e.sigma_delta_sq = 0.0;
            e.sigma_tau_sq = (1.0 - rho2) * s.syy / n;
            e.kappa_tilde = std::numeric_limits<double>::infinity();
            return e;
        case Method::HOR:
            e.sigma_delta_sq = (1.0 - rho2) * s.sxx / n;
            e.sigma_tau_sq = 0.0;
            e.kappa_tilde = 0.0;
            return e;
        case Method::GM:
            e.sigma_delta_sq = (1.0 - abs_rho) * s.sxx / n;
            e.sigma_tau_sq = (1.0 - abs_rho) * s.syy / n;
            e.kappa_tilde = s.syy / s.sxx;
            return e;
        case Method::PER: {
            const double d = s.sxx - s.syy;
            const double root = std::sqrt(d * d + 4.0 * rho2 * s.sxx * s.syy);
            e.sigma_delta_sq = 0.5 * (s.sxx + s.syy - root) / n;
            e.sigma_tau_sq = e.sigma_delta_sq;
            e.kappa_tilde = 1.0;
            return e;
        }
        case Method::MLE: {
            if (!kappa || !(*kappa > 0.0) || !std::isfinite(*kappa)) {
                throw OutOfRange("table3_row: MLE row needs a finite positive kappa");
            }
            const double k = *kappa;
            const double dd = s.sxx - s.syy / k;
            const double dt = k * s.sxx - s.syy;
            e.sigma_delta_sq =
                0.5 * (s.sxx + s.syy / k - std::sqrt(dd * dd + 4.0 * rho2 * s.sxx * s.syy / k)) / n;
            e.sigma_tau_sq =
                0.5 * (k * s.sxx + s.syy - std::sqrt(dt * dt + 4.0 * rho2 * k * s.sxx * s.syy)) / n;
            e.kappa_tilde = k;
            return e;
        }
        default:
            throw OutOfRange("table3_row: no closed form for this method");
    }
}

inline std::vector<SlopeFit> estimate_all(const SummaryStats& s,
                                          std::optional<double> assumed_kappa) {
    std::vector<SlopeFit> fits;
    const auto attempt = [&](Method m, auto&& fn) {
        try {
            fits.push_back(fn());
        } catch (const Error& err) {
            SlopeFit f;
            f.method = m;
            f.ok = false;
            f.add_note(std::string("ERROR: ") + err.what());
            fits.push_back(f);
        }
    };
    attempt(Method::VER, [&] { return ols_vertical(s); });
    attempt(Method::HOR, [&] { return ols_horizontal(s); });
    attempt(Method::GM, [&] { return geometric_mean(s); });
    attempt(Method::PER, [&] { return perpendicular(s); });
    attempt(Method::MLE, [&] {
        double k;
        if (assumed_kappa) {
            k = *assumed_kappa;
        } else {
            k = kappa_tilde(moment_clamped(s).beta1, s);
            if (std::isnan(k)) throw OutOfRange("estimate_all: moment ratio undefined");
        }
        return mle(s, k);
    });
    attempt(Method::COPAS, [&] { return copas(s); });
    attempt(Method::MOM_RAW, [&] { return moment_raw(s); });
    attempt(Method::MOM, [&] { return moment_clamped(s); });
    attempt(Method::MD, [&] { return minimum_deviation(s); });
    return fits;
}

}  // namespace obliq
