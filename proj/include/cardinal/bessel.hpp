#ifndef CARDINAL_BESSEL_HPP
#define CARDINAL_BESSEL_HPP

#include <string>

namespace cardinal {

// Order stored as 2*nu so integer and half-integer orders are exact.
struct BesselOrder {
    int twice_nu;

    static BesselOrder from_integer(int n) { return {2 * n}; }
    static BesselOrder from_half_odd(int twice) { return {twice}; }
    // nu = m - d/2 for the Matern kernel of smoothness m in dimension d
    static BesselOrder matern(int m, int d) { return {2 * m - d}; }

    bool is_integer() const { return twice_nu % 2 == 0; }
    double value() const { return 0.5 * twice_nu; }
    std::string str() const;
};

// Modified Bessel function of the third kind K_nu(z), z > 0.
// Half-integer orders use the terminating exponential-polynomial form.
// Integer orders: log series for z < 2, exponentially convergent
// cosh-integral trapezoid rule for z >= 2. Saturates to 0 once e^{-z}
// underflows.
double bessel_k(BesselOrder order, double z);

// Bessel function of the first kind, orders nu in {-1/2, 0, 1/2} only.
double bessel_j(BesselOrder order, double z);

// z^nu K_nu(z) with the continuity value 2^{nu-1} Gamma(nu) at z = 0.
// This is the Matern radial profile; nu > 0 required.
double scaled_bessel_k(BesselOrder order, double z);

} // namespace cardinal

#endif
