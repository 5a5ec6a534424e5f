#ifndef CARDINAL_KERNELS_HPP
#define CARDINAL_KERNELS_HPP

#include "cardinal/lattice.hpp"

#include <functional>
#include <string>
#include <vector>

namespace cardinal {

enum class KernelFamily { matern, m_harmonic, eta2, psi2, psi32 };

// Which kernel, its parameters, and the empirical decay certificate
// |Phi(x)| <= C0 e^{-alpha ||x||}.
struct KernelSpec {
    KernelFamily family = KernelFamily::matern;
    int m = 1; // smoothness order
    int d = 1; // ambient dimension
    double decay_rate_alpha = 0.9;
    double decay_amplitude_C0 = 0.0; // fitted lazily when 0

    void validate() const; // throws std::invalid_argument on a bad spec

    // Stable string id used by the CLI and report files,
    // e.g. "matern:m=2,d=2", "eta2", "psi32".
    std::string id() const;
    static KernelSpec parse(const std::string& id);

    static KernelSpec matern(int m, int d);
    static KernelSpec compact(KernelFamily family); // eta2 / psi2 / psi32

    bool compactly_supported() const { return family != KernelFamily::matern; }
    // Radius beyond which the kernel is zero (infinity for Matern).
    double support_radius() const;
};

// Radial profile of the kernel: Phi(x) = kernel_radial(spec, ||x||).
double kernel_radial(const KernelSpec& spec, double r);

double matern_eval(const KernelSpec& spec, const Point& x);
double matern_scaled_eval(const KernelSpec& spec, double h, const Point& y);

// m-harmonic kernel: ||x||^{2m-d} ln||x|| (even d) or ||x||^{2m-d} (odd d),
// continuously extended by 0 at the origin.
double m_harmonic_eval(int m, int d, const Point& x);

double eta2_eval(double t);
double psi2_eval(double t);
double psi32_eval(double t);

// Normalization rho_{m,d} of the Matern Fourier transform
// Phi_hat(t) = rho_{m,d} (1+||t||^2)^{-m}   (convention: int Phi e^{-ixt} dx).
// Computed once per (m,d) by radial quadrature and cached.
double matern_rho(int m, int d);

struct RadialProfile {
    std::function<double(double)> profile;
    int d = 1;
    double support_radius = 0.0; // infinity() for decaying profiles
    double normalization_rho = 0.0;
    double decay_alpha = 0.0;    // > 0 for exponentially decaying profiles
};

// Fourier-transform profile of the scaled Matern kernel Phi_h:
// r -> rho_{m,d} h^{2m-d} (h^2 + r^2)^{-m}.
RadialProfile matern_ft_profile(const KernelSpec& spec, double h);

// Radial d-dimensional Fourier transform
//   (F_d psi)(r) = r^{1-d/2} int_0^inf psi(t) t^{d/2} J_{d/2-1}(rt) dt.
// Note F_d equals (2pi)^{-d/2} times the e^{-ixt} transform convention above.
double radial_ft(const RadialProfile& psi, int d, double r);

RadialProfile kernel_profile(const KernelSpec& spec);

// Fitted amplitude C0 of the decay certificate (max of |Phi| e^{alpha r}
// over a sampled annulus).
double fit_decay_amplitude(const KernelSpec& spec, double alpha,
                           double r_max = 50.0, int samples = 10000);

// Perturbation-kernel structure (F_d psi)(r) = C r^{-2m} lambda(r) with
// lambda(r) = 1 + sum a_j (r_j r)^{1-d/2} J_{d/2-1}(r_j r).
struct PerturbationProfile {
    int d = 2;
    int m = 2;
    double scale_C = 1.0;
    std::vector<double> nodes;
    std::vector<double> coeffs;
    double limit_beta = 0.0;

    double lambda(double r) const;
    double transform(double r) const { // C r^{-2m} lambda(r)
        return scale_C * std::pow(r, -2.0 * m) * lambda(r);
    }
};

// Least-squares fit of the Bessel-series coefficients {a_j} of F_2 eta_2
// from sampled values of radial_ft(eta2).
PerturbationProfile fit_eta2_perturbation();

} // namespace cardinal

#endif
