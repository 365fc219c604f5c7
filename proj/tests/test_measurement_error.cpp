#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "obliq/estimators.hpp"
#include "obliq/measurement_error.hpp"
#include "obliq/rng.hpp"
#include "obliq/summary_stats.hpp"
#include "oracles.hpp"

using namespace obliq;

namespace {

SummaryStats sweep_stats(double syy) {
    return stats_from_moments(1, 0.0, 0.0, 1.0, syy, 0.5 * std::sqrt(syy), 10.0, 5.0);
}

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

TEST_CASE("madansky variances at the canonical slopes") {
    Rng rng(301, 0);
    for (int rep = 0; rep < 30; ++rep) {
        const SummaryStats s = oracles::random_stats(rng);
        const double n = static_cast<double>(s.n);

        const ErrorVarianceEstimates at_ver = madansky_variances(ols_vertical(s).beta1, s);
        CHECK(at_ver.sigma_delta_sq == 0.0);
        CHECK(at_ver.sigma_tau_sq ==
              Catch::Approx((1.0 - s.rho * s.rho) * s.syy / n).epsilon(1e-10));
        CHECK(at_ver.kappa_tilde == kInf);
        CHECK(at_ver.admissible);

        const ErrorVarianceEstimates at_gm = madansky_variances(geometric_mean(s).beta1, s);
        CHECK(at_gm.sigma_delta_sq == Catch::Approx((1.0 - s.rho) * s.sxx / n).epsilon(1e-10));
        CHECK(at_gm.sigma_tau_sq == Catch::Approx((1.0 - s.rho) * s.syy / n).epsilon(1e-10));
        CHECK(at_gm.kappa_tilde == Catch::Approx(s.syy / s.sxx).epsilon(1e-10));

        // outside the admissible interval one variance goes negative
        const double outside = 1.5 * ols_horizontal(s).beta1;
        const ErrorVarianceEstimates bad = madansky_variances(outside, s);
        CHECK_FALSE(bad.admissible);
        CHECK(bad.sigma_tau_sq < 0.0);
    }
    CHECK_THROWS_AS(madansky_variances(0.0, sweep_stats(1.0)), InvalidSlope);
}

TEST_CASE("kappa_tilde reproduces the reference sweep cells") {
    SECTION("Syy = 0.8") {
        const SummaryStats s = sweep_stats(0.8);
        const double bt = moment_raw(s).beta1;
        CHECK(bt == Catch::Approx(0.6734).margin(5e-5));
        CHECK(kappa_tilde(bt, s) == Catch::Approx(1.4850).margin(5e-5));
    }
    SECTION("Syy = 1.0") {
        const SummaryStats s = sweep_stats(1.0);
        const double bt = moment_raw(s).beta1;
        // exact formula value; the reference table prints 3.0760
        CHECK(kappa_tilde(bt, s) == Catch::Approx(3.0757981).margin(1e-6));
        CHECK(kappa_tilde(bt, s) == Catch::Approx(3.0760).margin(5e-4));
    }
    SECTION("boundary conventions and range checking") {
        const SummaryStats s = sweep_stats(1.0);
        CHECK(kappa_tilde(ols_horizontal(s).beta1, s) == 0.0);
        CHECK(kappa_tilde(ols_vertical(s).beta1, s) == kInf);
        CHECK_THROWS_AS(kappa_tilde(3.0, s), OutOfRange);
        CHECK_THROWS_AS(kappa_tilde(0.1, s), OutOfRange);
    }
    SECTION("agrees with the variance ratio bit for bit") {
        Rng rng(303, 0);
        for (int rep = 0; rep < 50; ++rep) {
            const SummaryStats s = oracles::random_stats(rng);
            const double ver = s.sxy / s.sxx;
            const double hor = s.syy / s.sxy;
            const double b = ver + (0.05 + 0.9 * rng.uniform()) * (hor - ver);
            CHECK(kappa_tilde(b, s) == madansky_variances(b, s).kappa_tilde);
        }
    }
}

TEST_CASE("kappa_tilde is strictly decreasing from +inf to 0") {
    Rng rng(305, 0);
    for (int rep = 0; rep < 20; ++rep) {
        const SummaryStats s = oracles::random_stats(rng);
        const double ver = s.sxy / s.sxx;
        const double hor = s.syy / s.sxy;
        double prev = kInf;
        for (int k = 1; k <= 40; ++k) {
            const double b = ver + (hor - ver) * static_cast<double>(k) / 41.0;
            const double kt = kappa_tilde(b, s);
            CHECK(kt < prev);
            CHECK(kt > 0.0);
            prev = kt;
        }
    }
}

TEST_CASE("circularity: feeding the moment ratio back returns the slope") {
    SECTION("reference sweep rows") {
        CHECK(mle_circularity(0.6020, sweep_stats(1.2)) == Catch::Approx(0.6020).epsilon(1e-9));
        const SummaryStats s = sweep_stats(1.0);
        const double gm = geometric_mean(s).beta1;
        CHECK(mle_circularity(gm, s) == Catch::Approx(gm).epsilon(1e-9));
    }
    SECTION("any admissible interior slope is a fixed point") {
        Rng rng(307, 0);
        for (int rep = 0; rep < 200; ++rep) {
            const SummaryStats s = oracles::random_stats(rng, true);
            const SummaryStats pos = s.sxy < 0.0 ? s.reflected_y() : s;
            const double ver = pos.sxy / pos.sxx;
            const double hor = pos.syy / pos.sxy;
            const double b = ver + (0.001 + 0.998 * rng.uniform()) * (hor - ver);
            CHECK(mle_circularity(b, pos) == Catch::Approx(b).epsilon(1e-9));
        }
    }
}

TEST_CASE("closed-form variance rows match direct evaluation") {
    Rng rng(311, 0);
    for (int rep = 0; rep < 50; ++rep) {
        const SummaryStats s = oracles::random_stats(rng, true);
        const double kappa = std::exp(3.0 * (rng.uniform() - 0.5));
        const auto close = [&](double a, double b) {
            if (std::isinf(a) && std::isinf(b)) return true;
            return std::abs(a - b) <= 1e-10 * std::max({std::abs(a), std::abs(b), 1e-30});
        };

        const struct {
            Method method;
            double slope;
        } rows[] = {
            {Method::VER, ols_vertical(s).beta1},  {Method::HOR, ols_horizontal(s).beta1},
            {Method::GM, geometric_mean(s).beta1}, {Method::PER, perpendicular(s).beta1},
            {Method::MLE, mle(s, kappa).beta1},
        };
        for (const auto& row : rows) {
            const ErrorVarianceEstimates direct = madansky_variances(row.slope, s);
            const ErrorVarianceEstimates closed =
                table3_row(row.method, s,
                           row.method == Method::MLE ? std::optional<double>(kappa)
                                                     : std::nullopt);
            CHECK(close(direct.sigma_delta_sq, closed.sigma_delta_sq));
            CHECK(close(direct.sigma_tau_sq, closed.sigma_tau_sq));
            CHECK(close(direct.kappa_tilde, closed.kappa_tilde));
        }
        // the perpendicular ratio is 1 and the MLE ratio is kappa, exactly
        CHECK(madansky_variances(perpendicular(s).beta1, s).kappa_tilde ==
              Catch::Approx(1.0).epsilon(1e-10));
        CHECK(madansky_variances(mle(s, kappa).beta1, s).kappa_tilde ==
              Catch::Approx(kappa).epsilon(1e-10));
    }
    CHECK_THROWS_AS(table3_row(Method::MLE, sweep_stats(1.0), std::nullopt), OutOfRange);
    CHECK_THROWS_AS(table3_row(Method::COPAS, sweep_stats(1.0), std::nullopt), OutOfRange);
}

TEST_CASE("geometric mean is the fixed point of the sd ratio") {
    Rng rng(313, 0);
    for (int rep = 0; rep < 100; ++rep) {
        const SummaryStats s = oracles::random_stats(rng, true);
        const double gm = geometric_mean(s).beta1;
        const ErrorVarianceEstimates e = madansky_variances(gm, s);
        const double sd_ratio = std::sqrt(e.sigma_tau_sq / e.sigma_delta_sq);
        CHECK(sd_ratio == Catch::Approx(std::abs(gm)).epsilon(1e-10));
    }
}
