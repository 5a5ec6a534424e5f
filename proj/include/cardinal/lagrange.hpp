#ifndef CARDINAL_LAGRANGE_HPP
#define CARDINAL_LAGRANGE_HPP

#include "cardinal/constants.hpp"
#include "cardinal/kernels.hpp"
#include "cardinal/lattice.hpp"
#include "cardinal/symbol.hpp"

#include <vector>

namespace cardinal {

// Lagrange function of cardinal interpolation on the scaled lattice:
// chi(y) = sum_k a_k Phi(h(y-k)), with {a_k} the Fourier coefficients of the
// reciprocal symbol, truncated to the box ||k||_inf <= radius.
struct LagrangeFunction {
    KernelSpec spec;
    double h = 1.0;
    int radius = 0;
    std::vector<double> coeffs; // (2 radius + 1)^d, row-major, indices -radius..radius
    double coefficient_tail = 0.0;
    int grid_size = 0;          // symbol grid size that passed aliasing control
    double cardinal_defect = 0.0;

    double coeff(const Coord& k) const { return coeffs[box_index(spec.d, radius, k)]; }
};

// Inverse DFT of 1/sigma with grid doubling until both the boundary
// coefficients and the change against the previous grid drop below tol.
// Throws AliasingError when the grid cap is reached first, and
// IllPosedInterpolationError when the symbol is not positive.
LagrangeFunction lagrange_coefficients(const SymbolGrid& grid,
                                       double tol = tol::coeff_tol);

double lagrange_eval(const LagrangeFunction& L, const Point& y);

// chi(u + n) for ||n||_inf <= W in one FFT convolution pass.
std::vector<double> lattice_slice(const LagrangeFunction& L, const Point& u, int W);

struct FourierQuadConfig {
    int points_per_axis = 0; // 0: per-dimension default
    int cell_cap = 0;        // 0: per-dimension default
    double target_abs = tol::fourier_eval_abs;
};

// Independent evaluation route: quadrature of the inverse Fourier
// representation (2pi)^{-d} int e^{iyt} omega(t,h)(h^2+||t||^2)^{-m} dt,
// reusing the periodic omega across cells. h = 0 gives the limit-kernel
// Lagrange function. Throws AccuracyError when the tail budget is infeasible.
double lagrange_eval_fourier(const KernelSpec& spec, double h, const Point& y,
                             const FourierQuadConfig& cfg = {});

struct DecayFit {
    double amplitude_A = 0.0;
    double rate_B = 0.0;
    double residual = 0.0; // rms in log scale
    double r_min = 0.0;    // annulus actually used (ell_1 radius)
    double r_max = 0.0;
    int samples_used = 0;
};

// Least-squares exponential envelope |chi(y)| ~ A e^{-B |y|_1} over lattice
// and half-integer sample points in the annulus; samples below the noise
// floor are dropped. The inner radius shrinks by halving (down to 0.25) if a
// compactly supported chi leaves fewer than 10 usable samples.
DecayFit fit_decay(const LagrangeFunction& L, double r_min = 2.0,
                   double r_max = 30.0, double floor_abs = tol::eval_floor);

} // namespace cardinal

#endif
