#include "cardinal/bessel.hpp"
#include "cardinal/constants.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace cardinal {

std::string BesselOrder::str() const {
    if (is_integer()) return std::to_string(twice_nu / 2);
    return std::to_string(twice_nu) + "/2";
}

namespace {

constexpr double kEulerGamma = 0.57721566490153286060651209;

// K_{n+1/2}(z) = sqrt(pi/(2z)) e^{-z} sum_{k=0}^{n} (n+k)! / (k! (n-k)! (2z)^k)
double bessel_k_half_odd(int n, double z) {
    double poly = 1.0;
    double term = 1.0;
    for (int k = 1; k <= n; ++k) {
        // ratio of consecutive coefficients: (n+k)(n-k+1) / (2k z)
        term *= static_cast<double>((n + k) * (n - k + 1)) / (2.0 * k * z);
        poly += term;
    }
    return std::sqrt(M_PI / (2.0 * z)) * std::exp(-z) * poly;
}

// Small-argument log series for K_0 and K_1 (DLMF 10.31).  Converges for
// all z but is only used for z < 2 where there is no cancellation.
void bessel_k01_series(double z, double& k0, double& k1) {
    const double q = 0.25 * z * z;
    const double lg = std::log(0.5 * z);

    double i0 = 1.0, i1 = 0.5 * z;
    double s0 = 0.0, s1 = 0.5 * z; // s1 carries the k = 0 term (2H_0 + 1) t_0
    double t0 = 1.0;               // q^k / (k!)^2
    double t1 = 0.5 * z;           // (z/2) q^k / (k! (k+1)!)
    double hk = 0.0;               // harmonic number H_k
    for (int k = 1; k < 60; ++k) {
        t0 *= q / (static_cast<double>(k) * k);
        t1 *= q / (static_cast<double>(k) * (k + 1));
        hk += 1.0 / k;
        i0 += t0;
        i1 += t1;
        s0 += hk * t0;
        // psi(k+1) + psi(k+2) = 2 H_k + 1/(k+1) - 2 gamma
        s1 += (2.0 * hk + 1.0 / (k + 1)) * t1;
        if (t0 < 1e-18 * i0) break;
    }
    k0 = -(lg + kEulerGamma) * i0 + s0;
    k1 = 1.0 / z + (lg + kEulerGamma) * i1 - 0.5 * s1;
}

// Trapezoid rule on K_nu(z) = int_0^inf e^{-z cosh t} cosh(nu t) dt.
// The integrand is even and analytic; step scales like 1/sqrt(z) to keep
// the discretization error below 1e-13 relative across z in [2, 740].
double bessel_k_trapezoid(double nu, double z) {
    const double step = std::min(0.20, 0.60 / std::sqrt(z));
    double sum = 0.5 * std::exp(-z);
    for (int n = 1;; ++n) {
        const double t = n * step;
        const double c = std::cosh(t);
        sum += std::exp(-z * c) * std::cosh(nu * t);
        if (z * (c - 1.0) - nu * t > 60.0) break;
    }
    return sum * step;
}

double bessel_k_integer(int n, double z) {
    n = std::abs(n);
    if (z < tol::bessel_switch_z) {
        double k0, k1;
        bessel_k01_series(z, k0, k1);
        if (n == 0) return k0;
        if (n == 1) return k1;
        // upward recurrence is stable for K
        double km = k0, kc = k1;
        for (int j = 1; j < n; ++j) {
            const double kn = km + (2.0 * j / z) * kc;
            km = kc;
            kc = kn;
        }
        return kc;
    }
    return bessel_k_trapezoid(static_cast<double>(n), z);
}

double bessel_j0(double z) {
    if (z <= 16.0) {
        const double q = 0.25 * z * z;
        double sum = 1.0, term = 1.0;
        for (int k = 1; k < 80; ++k) {
            term *= -q / (static_cast<double>(k) * k);
            sum += term;
            if (std::abs(term) < 1e-18 * std::max(1.0, std::abs(sum))) break;
        }
        return sum;
    }
    // Hankel expansion, truncated at the smallest term
    double p = 1.0, q = 0.0;
    double coeff = 1.0; // c_k = prod (2j-1)^2 / (k! 8^k), with alternating signs folded in
    double zk = 1.0;
    double prev = 1.0;
    for (int k = 1; k < 30; ++k) {
        coeff *= static_cast<double>((2 * k - 1) * (2 * k - 1)) / (8.0 * k);
        zk /= z;
        const double term = coeff * zk;
        if (term > prev) break;
        prev = term;
        const int r = k % 4;
        if (r == 1) q -= term;
        else if (r == 2) p -= term;
        else if (r == 3) q += term;
        else p += term;
        if (term < 1e-17) break;
    }
    const double chi = z - 0.25 * M_PI;
    return std::sqrt(2.0 / (M_PI * z)) * (p * std::cos(chi) - q * std::sin(chi));
}

} // namespace

double bessel_k(BesselOrder order, double z) {
    if (!(z > 0.0)) throw std::domain_error("bessel_k: z must be positive");
    if (order.twice_nu < 0 || (!order.is_integer() && order.twice_nu < 1))
        throw std::invalid_argument("bessel_k: unsupported order " + order.str());
    if (order.twice_nu > 9)
        throw std::invalid_argument("bessel_k: unsupported order " + order.str());
    if (z > 746.0) return 0.0; // e^{-z} underflows; the correct kernel-tail limit
    if (order.is_integer()) return bessel_k_integer(order.twice_nu / 2, z);
    return bessel_k_half_odd((order.twice_nu - 1) / 2, z);
}

double bessel_j(BesselOrder order, double z) {
    if (z < 0.0) throw std::domain_error("bessel_j: z must be non-negative");
    switch (order.twice_nu) {
        case 0:
            return bessel_j0(z);
        case 1: // J_{1/2}(z) = sqrt(2/(pi z)) sin z
            if (z == 0.0) return 0.0;
            return std::sqrt(2.0 / (M_PI * z)) * std::sin(z);
        case -1: // J_{-1/2}(z) = sqrt(2/(pi z)) cos z
            if (z == 0.0) throw std::domain_error("bessel_j: J_{-1/2} is singular at 0");
            return std::sqrt(2.0 / (M_PI * z)) * std::cos(z);
        default:
            throw std::invalid_argument("bessel_j: unsupported order " + order.str());
    }
}

double scaled_bessel_k(BesselOrder order, double z) {
    if (order.twice_nu <= 0)
        throw std::invalid_argument("scaled_bessel_k: order must be positive");
    const double nu = order.value();
    if (z == 0.0) return std::pow(2.0, nu - 1.0) * std::tgamma(nu);
    if (z > 746.0) return 0.0;
    return std::pow(z, nu) * bessel_k(order, z);
}

} // namespace cardinal
