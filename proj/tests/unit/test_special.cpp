#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/distributions/non_central_chi_squared.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "ampcdf/special.hpp"

using namespace ampcdf::special;

namespace {

// Q1(a, b) = P[ncchi2(2, a^2) > b^2].
double marcum_boost(double a, double b) {
    boost::math::non_central_chi_squared_distribution<double> dist(2.0, a * a);
    return boost::math::cdf(boost::math::complement(dist, b * b));
}

// Rician CDF by composite Simpson on [0, x] with the plain (unscaled)
// density in long double, whose exponent range covers these arguments.
double rician_cdf_quadrature(double x, double nu, double s) {
    constexpr int n = 20000;
    const long double h = static_cast<long double>(x) / n;
    const long double s2 = static_cast<long double>(s) * s;
    long double sum = 0.0L;
    for (int i = 0; i <= n; ++i) {
        const long double t = h * i;
        const long double w = (i == 0 || i == n) ? 1.0L : (i % 2 == 1 ? 4.0L : 2.0L);
        const long double f = t / s2 * std::exp(-(t * t + static_cast<long double>(nu) * nu) / (2 * s2)) *
                              boost::math::cyl_bessel_i(0, t * nu / s2);
        sum += w * f;
    }
    return static_cast<double>(sum * h / 3.0L);
}

} // namespace

TEST_CASE("scaled Bessel functions match the unscaled definition") {
    for (double t : {0.0, 1e-3, 0.5, 1.0, 5.0, 17.3, 29.9, 30.1, 45.0, 120.0, 600.0}) {
        CAPTURE(t);
        CHECK(bessel_i0e(t) == doctest::Approx(boost::math::cyl_bessel_i(0, t) * std::exp(-t)).epsilon(1e-13));
        CHECK(bessel_i1e(t) == doctest::Approx(boost::math::cyl_bessel_i(1, t) * std::exp(-t)).epsilon(1e-13));
    }
    // Beyond exp overflow the asymptotic form still behaves like 1/sqrt(2 pi t).
    CHECK(bessel_i0e(1e6) == doctest::Approx(1.0 / std::sqrt(2 * std::numbers::pi * 1e6)).epsilon(1e-6));
}

TEST_CASE("log Poisson pmf agrees with lgamma form") {
    for (double k : {1.0, 3.0, 14.0, 15.0, 100.0, 12345.0}) {
        for (double mean : {0.5, 3.0, 20.0, 110.0, 12000.0}) {
            const double direct = k * std::log(mean) - mean - std::lgamma(k + 1.0);
            CHECK(log_poisson_pmf(k, mean) == doctest::Approx(direct).epsilon(1e-11));
        }
    }
    CHECK(log_poisson_pmf(0.0, 2.5) == -2.5);
}

TEST_CASE("regularized upper gamma matches boost") {
    for (double a : {1.0, 2.0, 7.0, 50.0, 1000.0, 250000.0}) {
        for (double ratio : {0.01, 0.5, 0.9, 1.0, 1.1, 2.0, 5.0}) {
            const double x = a * ratio;
            CAPTURE(a);
            CAPTURE(x);
            CHECK(std::abs(gamma_q(a, x) - boost::math::gamma_q(a, x)) < 1e-11);
        }
    }
    CHECK(gamma_q(3.0, 0.0) == 1.0);
    CHECK_THROWS_AS(gamma_q(0.0, 1.0), std::invalid_argument);
}

TEST_CASE("Marcum Q1 special values") {
    CHECK(marcum_q1(2.0, 0.0) == 1.0);
    CHECK(marcum_q1(0.0, 1.5) == doctest::Approx(std::exp(-1.125)).epsilon(1e-15));
    CHECK(marcum_q1(1.0, 80.0) == 0.0);
    CHECK(marcum_q1(80.0, 1.0) == 1.0);
    CHECK_THROWS_AS(marcum_q1(-1.0, 1.0), std::invalid_argument);
}

TEST_CASE("Marcum Q1 matches boost non-central chi-squared within 1e-10") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> log_a(-3.0, 2.5);
    std::normal_distribution<double> offset(0.0, 3.0);
    for (int i = 0; i < 400; ++i) {
        const double a = std::pow(10.0, log_a(rng));
        const double b = std::max(1e-6, a + offset(rng));
        CAPTURE(a);
        CAPTURE(b);
        CHECK(std::abs(marcum_q1(a, b) - marcum_boost(a, b)) < 1e-10);
    }
    // Large-argument regime reached by high-SNR references (a up to ~1e3).
    for (double a : {400.0, 1000.0, 1800.0}) {
        for (double d : {-6.0, -1.0, 0.0, 0.5, 2.0, 8.0}) {
            CAPTURE(a);
            CAPTURE(d);
            CHECK(std::abs(marcum_q1(a, a + d) - marcum_boost(a, a + d)) < 1e-10);
        }
    }
}

TEST_CASE("Rician CDF matches quadrature of the density") {
    for (double nu : {0.0, 0.3, 1.0, 1.4}) {
        for (double s : {0.05, 0.2, 0.6}) {
            for (double x : {0.1, 0.7, 1.0, 1.3, 2.0}) {
                CAPTURE(nu);
                CAPTURE(s);
                CAPTURE(x);
                CHECK(std::abs(rician_cdf(x, nu, s) - rician_cdf_quadrature(x, nu, s)) < 1e-10);
            }
        }
    }
}

TEST_CASE("Rician density is normalized and stable at high SNR") {
    for (double s : {0.3, 1e-2, 1e-4}) {
        const double nu = 1.2;
        const double lo = std::max(0.0, nu - 12 * s);
        const double hi = nu + 12 * s;
        constexpr int n = 4000;
        const double h = (hi - lo) / n;
        double mass = 0.0;
        for (int i = 0; i <= n; ++i) {
            const double w = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
            mass += w * rician_pdf(lo + h * i, nu, s);
        }
        CHECK(mass * h / 3.0 == doctest::Approx(1.0).epsilon(1e-9));
    }
    CHECK(rician_pdf(-1.0, 1.0, 0.1) == 0.0);
    CHECK(rician_cdf(0.0, 1.0, 0.1) == 0.0);
}
