#ifndef CARDINAL_CONSTANTS_HPP
#define CARDINAL_CONSTANTS_HPP

// Central tolerance/knob table. Every numeric threshold used by the library
// defaults lives here so that tests and the CLI agree on one set of values.

namespace cardinal::tol {

// Special functions
inline constexpr double bessel_k_rel = 1e-12;     // target over z in [1e-8, 700]
inline constexpr double bessel_j_rel = 1e-10;     // envelope-relative, z <= 1e4
inline constexpr double bessel_switch_z = 2.0;    // series below, quadrature above

// Kernels
inline constexpr double decay_alpha_default = 0.9;   // empirical alpha of the decay certificate
inline constexpr double radial_ft_abs = 1e-8;
inline constexpr double rho_quad_rel = 1e-12;

// Symbol grids
inline constexpr double symbol_tol = 1e-10;          // relative truncation target
inline constexpr double route_agreement_rel = 1e-8;
inline constexpr int    grid_size_default = 64;
inline constexpr int    grid_size_cap = 1024;
inline constexpr double poisson_route_h_max = 0.25;  // Poisson preferred for h <= 1/4

// Lagrange machinery
inline constexpr double coeff_tol = 1e-10;
inline constexpr double cardinal_check_tol = 1e-8;
inline constexpr double eval_floor = 1e-13;          // |chi| below this is noise
inline constexpr double fourier_eval_abs = 1e-6;

// Interpolation experiments
inline constexpr double window_tol = 1e-10;          // truncation budget for the halo
inline constexpr int    error_offsets_per_cell = 7;
inline constexpr int    lebesgue_samples_per_axis = 33;

} // namespace cardinal::tol

#endif
