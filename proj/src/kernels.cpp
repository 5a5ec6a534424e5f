#include "cardinal/kernels.hpp"

#include "cardinal/bessel.hpp"
#include "cardinal/constants.hpp"
#include "cardinal/quadrature.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace cardinal {

void KernelSpec::validate() const {
    if (m <= 0 || d <= 0 || d > 3) throw std::invalid_argument("KernelSpec: need m >= 1, 1 <= d <= 3");
    if (family == KernelFamily::matern || family == KernelFamily::m_harmonic) {
        if (2 * m <= d) throw std::invalid_argument("KernelSpec: need 2m > d for " + id());
    }
    if (family == KernelFamily::eta2 && !(d == 2 && m == 2))
        throw std::invalid_argument("KernelSpec: eta2 requires d=2, m=2");
    if (family == KernelFamily::psi2 && !(d == 1 && m == 2))
        throw std::invalid_argument("KernelSpec: psi2 requires d=1, m=2");
    if (family == KernelFamily::psi32 && !(d == 3 && m == 2))
        throw std::invalid_argument("KernelSpec: psi32 requires d=3, m=2");
    if (!(decay_rate_alpha > 0.0 && decay_rate_alpha <= 1.0))
        throw std::invalid_argument("KernelSpec: decay_rate_alpha must lie in (0,1]");
}

std::string KernelSpec::id() const {
    switch (family) {
        case KernelFamily::matern: {
            std::ostringstream os;
            os << "matern:m=" << m << ",d=" << d;
            return os.str();
        }
        case KernelFamily::m_harmonic: {
            std::ostringstream os;
            os << "mharmonic:m=" << m << ",d=" << d;
            return os.str();
        }
        case KernelFamily::eta2: return "eta2";
        case KernelFamily::psi2: return "psi2";
        case KernelFamily::psi32: return "psi32";
    }
    return "?";
}

KernelSpec KernelSpec::matern(int m, int d) {
    KernelSpec s;
    s.family = KernelFamily::matern;
    s.m = m;
    s.d = d;
    s.validate();
    return s;
}

KernelSpec KernelSpec::compact(KernelFamily family) {
    KernelSpec s;
    s.family = family;
    switch (family) {
        case KernelFamily::eta2: s.m = 2; s.d = 2; break;
        case KernelFamily::psi2: s.m = 2; s.d = 1; break;
        case KernelFamily::psi32: s.m = 2; s.d = 3; break;
        default: throw std::invalid_argument("KernelSpec::compact: not a compact family");
    }
    s.validate();
    return s;
}

KernelSpec KernelSpec::parse(const std::string& id) {
    if (id == "eta2") return compact(KernelFamily::eta2);
    if (id == "psi2") return compact(KernelFamily::psi2);
    if (id == "psi32") return compact(KernelFamily::psi32);
    auto parse_md = [&](const std::string& params, KernelFamily fam) {
        int m = -1, d = -1;
        std::stringstream ss(params);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            if (tok.rfind("m=", 0) == 0) m = std::stoi(tok.substr(2));
            else if (tok.rfind("d=", 0) == 0) d = std::stoi(tok.substr(2));
            else throw std::invalid_argument("KernelSpec::parse: bad token '" + tok + "' in " + id);
        }
        if (m < 0 || d < 0) throw std::invalid_argument("KernelSpec::parse: need m= and d= in " + id);
        KernelSpec s;
        s.family = fam;
        s.m = m;
        s.d = d;
        s.validate();
        return s;
    };
    if (id.rfind("matern:", 0) == 0) return parse_md(id.substr(7), KernelFamily::matern);
    if (id.rfind("mharmonic:", 0) == 0) return parse_md(id.substr(10), KernelFamily::m_harmonic);
    throw std::invalid_argument(
        "unknown kernel id '" + id +
        "' (supported: matern:m=<m>,d=<d>, mharmonic:m=<m>,d=<d>, eta2, psi2, psi32)");
}

double KernelSpec::support_radius() const {
    if (compactly_supported()) return 2.0;
    return std::numeric_limits<double>::infinity();
}

double eta2_eval(double t) {
    if (t < 0.0) throw std::domain_error("eta2: negative argument");
    static const double ln2 = std::log(2.0);
    if (t == 0.0) return 4.0 * ln2 / 3.0; // limit of the first piece, t^2 ln t -> 0
    if (t <= 1.0)
        return (4.0 * ln2 + (ln2 - 3.0) * t * t + 3.0 * t * t * std::log(t)) / 3.0;
    if (t <= 2.0)
        return ((4.0 * ln2 - 4.0) - 4.0 * std::log(t) + (ln2 + 1.0) * t * t -
                t * t * std::log(t)) / 3.0;
    return 0.0;
}

double psi2_eval(double t) {
    if (t < 0.0) throw std::domain_error("psi2: negative argument");
    if (t <= 1.0) return 8.0 + t * t * (-24.0 + t * (24.0 - 7.0 * t));
    if (t <= 2.0) {
        const double u = 2.0 - t;
        return u * u * u * u;
    }
    return 0.0;
}

double psi32_eval(double t) {
    // psi_{3,2} = -psi_2'(t)/t, differentiated piecewise in closed form
    if (t < 0.0) throw std::domain_error("psi32: negative argument");
    if (t == 0.0) return 48.0;
    if (t <= 1.0) return 48.0 - 72.0 * t + 28.0 * t * t;
    if (t <= 2.0) {
        const double u = 2.0 - t;
        return 4.0 * u * u * u / t;
    }
    return 0.0;
}

double kernel_radial(const KernelSpec& spec, double r) {
    switch (spec.family) {
        case KernelFamily::matern:
            return scaled_bessel_k(BesselOrder::matern(spec.m, spec.d), r);
        case KernelFamily::m_harmonic: {
            if (r == 0.0) return 0.0;
            const double p = std::pow(r, 2.0 * spec.m - spec.d);
            return (spec.d % 2 == 0) ? p * std::log(r) : p;
        }
        case KernelFamily::eta2: return eta2_eval(r);
        case KernelFamily::psi2: return psi2_eval(r);
        case KernelFamily::psi32: return psi32_eval(r);
    }
    return 0.0;
}

double matern_eval(const KernelSpec& spec, const Point& x) {
    spec.validate();
    return kernel_radial(spec, norm(spec.d, x));
}

double matern_scaled_eval(const KernelSpec& spec, double h, const Point& y) {
    if (!(h > 0.0)) throw std::domain_error("matern_scaled_eval: h must be positive");
    Point hy{0.0, 0.0, 0.0};
    for (int ax = 0; ax < spec.d; ++ax) hy[ax] = h * y[ax];
    return matern_eval(spec, hy);
}

double m_harmonic_eval(int m, int d, const Point& x) {
    KernelSpec s;
    s.family = KernelFamily::m_harmonic;
    s.m = m;
    s.d = d;
    s.validate();
    return kernel_radial(s, norm(d, x));
}

double matern_rho(int m, int d) {
    static std::map<std::pair<int, int>, double> cache;
    static std::mutex mu;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find({m, d});
        if (it != cache.end()) return it->second;
    }
    // rho = Phi_hat(0) = s_{d-1} int_0^inf Phi(r) r^{d-1} dr
    const KernelSpec spec = KernelSpec::matern(m, d);
    const double sphere = 2.0 * std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d);
    const double rho =
        sphere * gauss_integrate_panels(
                     [&](double r) { return kernel_radial(spec, r) * std::pow(r, d - 1); },
                     0.0, 60.0, 240, 24);
    std::lock_guard<std::mutex> lock(mu);
    cache.insert({{m, d}, rho});
    return rho;
}

RadialProfile matern_ft_profile(const KernelSpec& spec, double h) {
    spec.validate();
    if (!(h > 0.0 && h <= 1.0)) throw std::domain_error("matern_ft_profile: h must be in (0,1]");
    const double rho = matern_rho(spec.m, spec.d);
    const double scale = rho * std::pow(h, 2.0 * spec.m - spec.d);
    const int m = spec.m;
    RadialProfile out;
    out.profile = [scale, h, m](double r) {
        return scale * std::pow(h * h + r * r, -static_cast<double>(m));
    };
    out.d = spec.d;
    out.support_radius = std::numeric_limits<double>::infinity();
    out.normalization_rho = rho;
    return out;
}

RadialProfile kernel_profile(const KernelSpec& spec) {
    spec.validate();
    RadialProfile out;
    KernelSpec copy = spec;
    out.profile = [copy](double r) { return kernel_radial(copy, r); };
    out.d = spec.d;
    out.support_radius = spec.support_radius();
    if (!spec.compactly_supported()) out.decay_alpha = spec.decay_rate_alpha;
    return out;
}

double radial_ft(const RadialProfile& psi, int d, double r) {
    if (!(r > 0.0)) throw std::domain_error("radial_ft: r must be positive");
    double limit = psi.support_radius;
    if (!std::isfinite(limit)) {
        if (!(psi.decay_alpha > 0.0))
            throw std::invalid_argument("radial_ft: profile is not integrable "
                                        "(no support radius, no decay rate)");
        limit = 50.0 / psi.decay_alpha;
    }
    // enough panels to resolve both the profile and the oscillation
    const int npanels = std::max(4, static_cast<int>(std::ceil(limit * (1.0 + r / M_PI))));
    std::function<double(double)> f;
    switch (d) {
        case 1:
            f = [&](double t) { return psi.profile(t) * std::cos(r * t); };
            return std::sqrt(2.0 / M_PI) * gauss_integrate_panels(f, 0.0, limit, npanels);
        case 2:
            f = [&](double t) {
                return psi.profile(t) * t * bessel_j(BesselOrder::from_integer(0), r * t);
            };
            return gauss_integrate_panels(f, 0.0, limit, npanels);
        case 3:
            f = [&](double t) { return psi.profile(t) * t * std::sin(r * t); };
            return std::sqrt(2.0 / M_PI) / r * gauss_integrate_panels(f, 0.0, limit, npanels);
        default:
            throw std::invalid_argument("radial_ft: d must be 1, 2 or 3");
    }
}

double fit_decay_amplitude(const KernelSpec& spec, double alpha, double r_max,
                           int samples) {
    double c0 = 0.0;
    for (int i = 1; i <= samples; ++i) {
        const double r = r_max * i / samples;
        c0 = std::max(c0, std::abs(kernel_radial(spec, r)) * std::exp(alpha * r));
    }
    return std::max(c0, std::abs(kernel_radial(spec, 0.0)));
}

double PerturbationProfile::lambda(double r) const {
    double s = 1.0;
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        const double x = nodes[j] * r;
        double basis;
        switch (d) {
            case 1: basis = (x == 0.0) ? std::sqrt(2.0 / M_PI)
                                       : std::sqrt(2.0 / M_PI) * std::cos(x); break;
            case 2: basis = bessel_j(BesselOrder::from_integer(0), x); break;
            case 3: basis = (x == 0.0) ? std::sqrt(2.0 / M_PI)
                                       : std::sqrt(2.0 / M_PI) * std::sin(x) / x; break;
            default: throw std::invalid_argument("PerturbationProfile: d must be 1..3");
        }
        s += coeffs[j] * basis;
    }
    return s;
}

PerturbationProfile fit_eta2_perturbation() {
    const RadialProfile eta = kernel_profile(KernelSpec::compact(KernelFamily::eta2));
    PerturbationProfile out;
    out.d = 2;
    out.m = 2;
    out.scale_C = 4.0; // 4^{m-1} [(m-1)!]^2 with m = 2
    out.nodes = {1.0, 2.0};

    const int n = 48;
    Eigen::MatrixXd A(n, 2);
    Eigen::VectorXd b(n);
    for (int i = 0; i < n; ++i) {
        const double r = 0.5 + 7.5 * i / (n - 1);
        const double v = radial_ft(eta, 2, r);
        // v = C r^{-4} (1 + a1 J0(r) + a2 J0(2r)), fitted in these units so
        // that quadrature error is not amplified by r^4
        const double w = out.scale_C * std::pow(r, -4.0);
        A(i, 0) = w * bessel_j(BesselOrder::from_integer(0), r);
        A(i, 1) = w * bessel_j(BesselOrder::from_integer(0), 2.0 * r);
        b(i) = v - w;
    }
    const Eigen::Vector2d a = A.colPivHouseholderQr().solve(b);
    out.coeffs = {a(0), a(1)};
    // r -> 0 limit of C r^{-4} lambda(r) from the J0 series
    out.limit_beta = out.scale_C * (a(0) + 16.0 * a(1)) / 64.0;
    return out;
}

} // namespace cardinal
