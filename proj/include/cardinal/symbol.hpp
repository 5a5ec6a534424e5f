#ifndef CARDINAL_SYMBOL_HPP
#define CARDINAL_SYMBOL_HPP

#include "cardinal/constants.hpp"
#include "cardinal/kernels.hpp"
#include "cardinal/lattice.hpp"

#include <vector>

namespace cardinal {

enum class SymbolRoute { spatial, poisson };

// Samples of the cardinal symbol sigma(t,h) (or its inverse) on the uniform
// grid t_l = 2 pi l / M, l in {0..M-1}^d, row-major. Immutable after
// construction.
struct SymbolGrid {
    KernelSpec spec;
    double h = 1.0;
    int grid_size = tol::grid_size_default; // M per axis, power of two
    std::vector<double> values;
    SymbolRoute route = SymbolRoute::spatial;
    int truncation_radius = 0;
    double tail_bound = 0.0;
    bool infinite_origin = false; // h = 0: the lattice sum diverges at t = 0
    bool is_inverse = false;

    int d() const { return spec.d; }
    int m() const { return spec.m; }
    double value(const Coord& l) const;
    // Centered grid node, components in [-pi, pi).
    Point node(const Coord& l) const;
};

// sigma(t_l,h) = sum_k Phi(hk) e^{ik.t_l}, truncated where the decay
// certificate bounds the tail below tol (relative to a symbol lower bound).
// Exact finite sum for compactly supported kernels. Throws
// RouteInfeasibleError when the required radius exceeds the cap (small h).
SymbolGrid symbol_spatial(const KernelSpec& spec, double h, int M,
                          double tol = tol::symbol_tol);

// sigma via rho h^{2m-d} sum_k (h^2+||t+2pi k||^2)^{-m}; h = 0 gives the
// un-normalized lattice sum sum_k ||t+2pi k||^{-2m} with the t = 0 node
// flagged infinite. Lattice tails beyond ||k||_inf <= K are replaced by
// exterior box integrals with a curvature correction.
SymbolGrid symbol_poisson(const KernelSpec& spec, double h, int M,
                          double tol = tol::symbol_tol);

// Route default: spatial for compact kernels and h > 1/4, Poisson otherwise.
SymbolGrid symbol_auto(const KernelSpec& spec, double h, int M,
                       double tol = tol::symbol_tol);

// omega(t,h) = rho h^{2m-d} / sigma(t,h); for h = 0 the plain reciprocal with
// omega(0,0) = 0. Throws CorruptedGridError on non-positive symbol values.
SymbolGrid inverse_symbol(const SymbolGrid& grid);

// Pointwise omega(t,h) = q^m / (1 + q^m G) with q = h^2 + ||t||^2 and G the
// tail-corrected lattice sum over k != 0; the form stays finite through the
// h = 0 zero at t = 0. t is folded to the centered period cell.
double inverse_symbol_value(const KernelSpec& spec, double h, const Point& t);

struct SynthesisCheck {
    double measured_sup = 0.0;
    double proof_bound = 0.0;
};

// Aliasing-ratio sup over ||t|| <= delta versus the analytic bound
// h^{2m}(1+delta^2)^m sum_{j!=0} (2pi||j||-delta)^{-2m}, same truncation.
SynthesisCheck synthesis_condition(const KernelSpec& spec, double h,
                                   double delta, int K_sum);

// Integral of (c2+||u||^2)^{-mu}, 2 mu = twice_mu, over the complement of the
// box prod_i [t_i - L, t_i + L]. Exposed for tests.
double exterior_box_integral(int d, int twice_mu, double c2, const Point& t,
                             double L);

} // namespace cardinal

#endif
