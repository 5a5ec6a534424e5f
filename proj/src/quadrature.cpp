#include "cardinal/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace cardinal {

namespace {

GaussLegendre compute_rule(int n) {
    GaussLegendre rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    // Newton iteration from the Chebyshev initial guess
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

} // namespace

const GaussLegendre& GaussLegendre::get(int n) {
    static std::map<int, GaussLegendre> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, compute_rule(n)).first;
    return it->second;
}

double gauss_integrate(const std::function<double(double)>& f, double a, double b,
                       int n) {
    const auto& rule = GaussLegendre::get(n);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return half * sum;
}

double gauss_integrate_panels(const std::function<double(double)>& f, double a,
                              double b, int npanels, int n) {
    double sum = 0.0;
    const double len = (b - a) / npanels;
    for (int p = 0; p < npanels; ++p)
        sum += gauss_integrate(f, a + p * len, a + (p + 1) * len, n);
    return sum;
}

double algebraic_tail_integral(double c2, double b, int twice_mu) {
    if (twice_mu < 2) throw std::invalid_argument("algebraic_tail_integral: mu must be >= 1");
    if (b <= 0.0) throw std::invalid_argument("algebraic_tail_integral: b must be positive");
    if (c2 <= 0.0) {
        // degenerate c = 0: int_b^inf x^{-2mu} dx
        const double mu = 0.5 * twice_mu;
        return std::pow(b, 1.0 - 2.0 * mu) / (2.0 * mu - 1.0);
    }
    // x = c cot(phi) maps the tail to c^{1-2mu} int_0^{atan(c/b)} sin^{2mu-2}
    // phi dphi; the integrand is entire and the small interval near 0 is
    // parameterized directly, so a fixed Gauss rule is accurate in every
    // regime. (A naive upward recurrence in mu is unstable for c << b.)
    const double mu = 0.5 * twice_mu;
    const double c = std::sqrt(c2);
    const double phi0 = std::atan2(c, b);
    const auto& rule = GaussLegendre::get(32);
    double sum = 0.0;
    for (int i = 0; i < 32; ++i) {
        const double phi = 0.5 * phi0 * (1.0 + rule.nodes[i]);
        sum += rule.weights[i] * std::pow(std::sin(phi), 2.0 * mu - 2.0);
    }
    return 0.5 * phi0 * sum * std::pow(c, 1.0 - 2.0 * mu);
}

} // namespace cardinal
