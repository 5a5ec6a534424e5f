#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cardinal/bessel.hpp"

#include <cmath>
#include <stdexcept>

using namespace cardinal;

namespace {

// Independent oracle: K_nu(z) = int_0^inf e^{-z cosh t} cosh(nu t) dt,
// fine-step trapezoid with a step unrelated to the implementation's.
double bessel_k_oracle(double nu, double z) {
    const double step = std::min(0.05, 0.15 / std::sqrt(z));
    double sum = 0.5 * std::exp(-z);
    for (int n = 1;; ++n) {
        const double t = n * step;
        const double c = std::cosh(t);
        sum += std::exp(-z * c) * std::cosh(nu * t);
        if (z * (c - 1.0) - nu * t > 70.0) break;
    }
    return sum * step;
}

// J0 power series in long double; converges for the moderate z used below.
double j0_series_oracle(double z) {
    const long double q = 0.25L * (long double)z * z;
    long double sum = 1.0L, term = 1.0L;
    for (int k = 1; k < 200; ++k) {
        term *= -q / ((long double)k * k);
        sum += term;
        if (std::abs((double)term) < 1e-22) break;
    }
    return (double)sum;
}

} // namespace

TEST_CASE("half-integer K: closed forms") {
    // K_{1/2}(z) = sqrt(pi/(2z)) e^{-z}
    const double k_half_1 = bessel_k(BesselOrder::from_half_odd(1), 1.0);
    CHECK(k_half_1 == doctest::Approx(std::sqrt(M_PI / 2.0) * std::exp(-1.0)).epsilon(1e-14));
    CHECK(k_half_1 == doctest::Approx(0.461068504447894558).epsilon(1e-14));

    // K_{3/2}(z) = sqrt(pi/(2z)) e^{-z} (1 + 1/z); at z = 2 equals (3/2) sqrt(pi/4) e^{-2}
    const double k_32_2 = bessel_k(BesselOrder::from_half_odd(3), 2.0);
    CHECK(k_32_2 == doctest::Approx(1.5 * std::sqrt(M_PI / 4.0) * std::exp(-2.0)).epsilon(1e-14));

    // against the integral-representation oracle over a wide range
    for (double z : {1e-2, 0.5, 1.0, 3.0, 10.0, 100.0}) {
        for (int tn : {1, 3, 5, 7}) {
            const double ref = bessel_k_oracle(0.5 * tn, z);
            CHECK(bessel_k(BesselOrder::from_half_odd(tn), z) ==
                  doctest::Approx(ref).epsilon(1e-12));
        }
    }
}

TEST_CASE("integer K: reference values and oracle sweep") {
    // frozen high-precision references
    CHECK(bessel_k(BesselOrder::from_integer(0), 0.5) == doctest::Approx(0.924419071227665862).epsilon(1e-13));
    CHECK(bessel_k(BesselOrder::from_integer(0), 1.0) == doctest::Approx(0.421024438240708333).epsilon(1e-13));
    CHECK(bessel_k(BesselOrder::from_integer(1), 1.0) == doctest::Approx(0.601907230197234575).epsilon(1e-13));
    CHECK(bessel_k(BesselOrder::from_integer(2), 1.7) == doctest::Approx(0.411805127708858305).epsilon(1e-13));
    CHECK(bessel_k(BesselOrder::from_integer(0), 2.5) == doctest::Approx(0.062347553200366186).epsilon(1e-13));
    CHECK(bessel_k(BesselOrder::from_integer(1), 10.0) == doctest::Approx(1.86487734538255846e-5).epsilon(1e-13));
    CHECK(bessel_k(BesselOrder::from_integer(0), 100.0) == doctest::Approx(4.65662822917590202e-45).epsilon(1e-13));
    CHECK(bessel_k(BesselOrder::from_integer(3), 7.0) == doctest::Approx(7.71075153566890162e-4).epsilon(1e-13));

    for (double z : {1e-6, 1e-3, 0.1, 0.7, 1.9, 2.1, 5.0, 30.0, 300.0, 700.0}) {
        for (int n : {0, 1, 2, 3}) {
            const double ref = bessel_k_oracle(n, z);
            CHECK(bessel_k(BesselOrder::from_integer(n), z) ==
                  doctest::Approx(ref).epsilon(1e-12));
        }
    }
}

TEST_CASE("small-argument limit z^nu K_nu(z) -> 2^{nu-1} Gamma(nu)") {
    // (nu=1, z->0+): z K_1(z) -> 1
    const double z = 1e-7;
    CHECK(z * bessel_k(BesselOrder::from_integer(1), z) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(scaled_bessel_k(BesselOrder::from_integer(1), 0.0) == doctest::Approx(1.0));
    CHECK(scaled_bessel_k(BesselOrder::from_half_odd(1), 0.0) ==
          doctest::Approx(std::sqrt(M_PI / 2.0)).epsilon(1e-15));
}

TEST_CASE("z^nu K_nu strictly decreasing in z") {
    for (int tn : {1, 2, 3, 4, 5, 6}) {
        const BesselOrder nu{tn};
        double prev = scaled_bessel_k(nu, 1e-4);
        for (int i = 1; i <= 400; ++i) {
            const double z = 50.0 * i / 400.0;
            const double v = scaled_bessel_k(nu, z);
            CHECK(v < prev);
            prev = v;
        }
    }
}

TEST_CASE("recurrence K_{nu+1} = K_{nu-1} + (2 nu / z) K_nu") {
    for (int i = 0; i <= 100; ++i) {
        const double z = 0.1 + (50.0 - 0.1) * i / 100.0;
        // integer triples (0,1,2), (1,2,3) and half-integer (1/2,3/2,5/2), (3/2,5/2,7/2)
        for (int tn : {2, 4, 1, 3}) {
            const double km = bessel_k(BesselOrder{tn - 2 < 0 ? 2 - tn : tn - 2}, z);
            const double kc = bessel_k(BesselOrder{tn}, z);
            const double kp = bessel_k(BesselOrder{tn + 2}, z);
            CHECK(kp == doctest::Approx(km + (static_cast<double>(tn) / z) * kc).epsilon(1e-10));
        }
    }
}

TEST_CASE("half-integer closed form vs quadrature code path") {
    // the generic integral path must agree with the terminating form to 1e-12
    for (double z : {2.5, 5.0, 20.0, 80.0}) {
        for (int tn : {1, 3, 5}) {
            const double closed = bessel_k(BesselOrder::from_half_odd(tn), z);
            const double quad = bessel_k_oracle(0.5 * tn, z);
            CHECK(quad == doctest::Approx(closed).epsilon(1e-12));
        }
    }
}

TEST_CASE("K saturates to zero instead of underflowing") {
    CHECK(bessel_k(BesselOrder::from_integer(0), 800.0) == 0.0);
    CHECK(bessel_k(BesselOrder::from_half_odd(3), 1e4) == 0.0);
}

TEST_CASE("K domain and order errors") {
    CHECK_THROWS_AS(bessel_k(BesselOrder::from_integer(0), 0.0), std::domain_error);
    CHECK_THROWS_AS(bessel_k(BesselOrder::from_integer(0), -1.0), std::domain_error);
    CHECK_THROWS_AS(bessel_k(BesselOrder::from_half_odd(-1), 1.0), std::invalid_argument);
    CHECK_THROWS_AS(bessel_k(BesselOrder::from_integer(7), 1.0), std::invalid_argument);
}

TEST_CASE("J closed forms and reference values") {
    CHECK(bessel_j(BesselOrder::from_half_odd(1), M_PI) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(bessel_j(BesselOrder::from_integer(0), 0.0) == 1.0);
    CHECK(bessel_j(BesselOrder::from_integer(0), 1.0) == doctest::Approx(0.765197686557966551).epsilon(1e-12));
    CHECK(bessel_j(BesselOrder::from_integer(0), 16.5) == doctest::Approx(-0.19638069293686103).epsilon(1e-11));
    CHECK(bessel_j(BesselOrder::from_integer(0), 100.0) == doctest::Approx(0.0199858503042231224).epsilon(1e-10));
    CHECK(bessel_j(BesselOrder::from_integer(0), 5000.0) == doctest::Approx(-0.00664898425144834789).epsilon(1e-9));
    CHECK(bessel_j(BesselOrder::from_half_odd(-1), 2.0) ==
          doctest::Approx(std::sqrt(2.0 / (M_PI * 2.0)) * std::cos(2.0)).epsilon(1e-15));
    CHECK_THROWS_AS(bessel_j(BesselOrder::from_integer(0), -0.5), std::domain_error);
    CHECK_THROWS_AS(bessel_j(BesselOrder::from_integer(1), 1.0), std::invalid_argument);
}

TEST_CASE("first zero of J0 located by bisection on the series oracle") {
    double lo = 2.0, hi = 3.0;
    for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (j0_series_oracle(mid) > 0.0) lo = mid;
        else hi = mid;
    }
    const double zero = 0.5 * (lo + hi);
    CHECK(zero == doctest::Approx(2.404825557695773).epsilon(1e-12));
    CHECK(std::abs(bessel_j(BesselOrder::from_integer(0), 2.404825557695773)) < 1e-9);
}
