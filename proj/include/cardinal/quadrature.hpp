#ifndef CARDINAL_QUADRATURE_HPP
#define CARDINAL_QUADRATURE_HPP

#include <Eigen/Core>
#include <functional>

namespace cardinal {

// Gauss-Legendre rule on [-1, 1]; nodes/weights cached per n.
struct GaussLegendre {
    Eigen::ArrayXd nodes;
    Eigen::ArrayXd weights;
    static const GaussLegendre& get(int n);
};

double gauss_integrate(const std::function<double(double)>& f, double a, double b,
                       int n = 32);

// Panel-composite Gauss rule.
double gauss_integrate_panels(const std::function<double(double)>& f, double a,
                              double b, int npanels, int n = 16);

// Closed-form tail integral  int_b^inf (c2 + x^2)^{-mu} dx  for mu = twice_mu/2,
// twice_mu >= 2. Used for lattice-sum tail corrections.
double algebraic_tail_integral(double c2, double b, int twice_mu);

} // namespace cardinal

#endif
