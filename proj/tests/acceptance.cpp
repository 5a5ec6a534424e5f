// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include "cardinal/interp.hpp"
#include "cardinal/kernels.hpp"
#include "cardinal/lagrange.hpp"
#include "cardinal/symbol.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

using namespace cardinal;

namespace {

int failures = 0;

void run(int n, const std::string& what, double limit_s,
         const std::function<bool(std::string&)>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    std::string detail;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs >= limit_s) {
        ok = false;
        if (!detail.empty()) detail += "; ";
        detail += "over time budget";
    }
    std::printf("%s criterion-%d %s (%.1fs/%.0fs%s%s)\n", ok ? "PASS" : "FAIL", n,
                what.c_str(), secs, limit_s, detail.empty() ? "" : "; ",
                detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

double sigma_closed_d1m1(double t, double h) {
    const double e = std::exp(-h);
    return std::sqrt(M_PI / 2.0) * (1.0 - e * e) /
           (1.0 - 2.0 * e * std::cos(t) + e * e);
}

std::vector<std::pair<int, int>> valid_dm() {
    std::vector<std::pair<int, int>> v;
    for (int d : {1, 2})
        for (int m : {1, 2, 3})
            if (2 * m > d) v.emplace_back(d, m);
    return v;
}

} // namespace

int main() {
    run(1, "closed-form kernels d=1 m=1,2", 1.0, [](std::string& detail) {
        const double c = std::sqrt(M_PI / 2.0);
        double worst = 0.0;
        for (int i = 1; i <= 1000; ++i) {
            const double x = 8.0 * i / 1000.0;
            const double r1 = c * std::exp(-x);
            const double r2 = c * std::exp(-x) * (1.0 + x);
            worst = std::max(worst, std::abs(kernel_radial(KernelSpec::matern(1, 1), x) - r1) / r1);
            worst = std::max(worst, std::abs(kernel_radial(KernelSpec::matern(2, 1), x) - r2) / r2);
        }
        char buf[48];
        std::snprintf(buf, sizeof(buf), "max rel err %.2e", worst);
        detail = buf;
        return worst <= 1e-12;
    });

    run(2, "spatial vs lattice-sum symbol routes agree to 1e-8", 30.0,
        [](std::string& detail) {
            double worst = 0.0;
            for (const auto& [d, m] : valid_dm()) {
                for (double h : {1.0, 0.5, 0.25, 0.125}) {
                    const auto spec = KernelSpec::matern(m, d);
                    const auto sp = symbol_spatial(spec, h, 64);
                    const auto po = symbol_poisson(spec, h, 64);
                    for (std::size_t i = 0; i < sp.values.size(); ++i)
                        worst = std::max(worst, std::abs(sp.values[i] - po.values[i]) /
                                                    std::abs(po.values[i]));
                }
            }
            char buf[48];
            std::snprintf(buf, sizeof(buf), "max rel diff %.2e", worst);
            detail = buf;
            return worst <= 1e-8;
        });

    run(3, "d=1 m=1 analytic symbol, coefficients, midpoint value", 5.0,
        [](std::string& detail) {
            double worst = 0.0;
            for (double h : {1.0, 0.5, 0.125}) {
                const auto g = symbol_auto(KernelSpec::matern(1, 1), h, 64);
                for_each_grid_node(1, 64, [&](const Coord& l, std::int64_t idx) {
                    const double ref = sigma_closed_d1m1(g.node(l)[0], h);
                    worst = std::max(worst, std::abs(g.values[idx] - ref) / ref);
                });
                const auto L = lagrange_coefficients(g);
                const double e = std::exp(-h);
                const double den = std::sqrt(M_PI / 2.0) * (1.0 - e * e);
                worst = std::max(worst, std::abs(L.coeff({0, 0, 0}) - (1.0 + e * e) / den));
                worst = std::max(worst, std::abs(L.coeff({1, 0, 0}) + e / den));
                worst = std::max(worst, std::abs(L.coeff({-1, 0, 0}) + e / den));
                for (int k = 2; k <= std::min(L.radius, 6); ++k)
                    worst = std::max(worst, std::abs(L.coeff({k, 0, 0})));
                const double mid = 1.0 / (2.0 * std::cosh(0.5 * h));
                worst = std::max(worst,
                                 std::abs(lagrange_eval(L, {0.5, 0.0, 0.0}) - mid));
            }
            char buf[48];
            std::snprintf(buf, sizeof(buf), "max err %.2e", worst);
            detail = buf;
            return worst <= 1e-10;
        });

    run(4, "cardinal conditions |chi(j) - delta| <= 1e-8 on the full matrix", 60.0,
        [](std::string& detail) {
            double worst = 0.0;
            for (const auto& [d, m] : valid_dm()) {
                for (double h : {1.0, 0.5, 0.25, 0.125, 0.0625}) {
                    const auto g = symbol_auto(KernelSpec::matern(m, d), h,
                                               d == 1 ? 64 : 32);
                    // extended-precision defect of chi(j) - delta over ||j||_inf <= 5
                    const auto L = lagrange_coefficients(g);
                    worst = std::max(worst, L.cardinal_defect);
                }
            }
            char buf[48];
            std::snprintf(buf, sizeof(buf), "max defect %.2e", worst);
            detail = buf;
            return worst <= 1e-8;
        });

    const std::vector<double> sweep{1.0, 0.5, 0.25, 0.125, 0.0625, 0.03125};
    const std::vector<std::pair<int, int>> uniform_dm{{1, 1}, {1, 2}, {2, 2}};

    run(5, "scale-uniform exponential decay of the Lagrange function", 120.0,
        [&](std::string& detail) {
            bool ok = true;
            for (const auto& [d, m] : uniform_dm) {
                double bmin = 1e300, amin = 1e300, amax = 0.0;
                for (double h : sweep) {
                    const auto L = lagrange_coefficients(
                        symbol_auto(KernelSpec::matern(m, d), h, d == 1 ? 64 : 32));
                    const auto fit = fit_decay(L);
                    bmin = std::min(bmin, fit.rate_B);
                    amin = std::min(amin, fit.amplitude_A);
                    amax = std::max(amax, fit.amplitude_A);
                }
                char buf[96];
                std::snprintf(buf, sizeof(buf), "[d=%d m=%d Bmin=%.3f Aratio=%.2f]",
                              d, m, bmin, amax / amin);
                detail += buf;
                ok = ok && bmin >= 0.2 && amax / amin <= 10.0;
            }
            return ok;
        });

    run(6, "uniformly bounded Lebesgue constants across scales", 120.0,
        [&](std::string& detail) {
            bool ok = true;
            for (const auto& [d, m] : uniform_dm) {
                double lmin = 1e300, lmax = 0.0;
                for (double h : sweep) {
                    const auto L = lagrange_coefficients(
                        symbol_auto(KernelSpec::matern(m, d), h, d == 1 ? 64 : 32));
                    const auto est = lebesgue_constant(L, fit_decay(L));
                    lmin = std::min(lmin, est.value);
                    lmax = std::max(lmax, est.value);
                }
                char buf[96];
                std::snprintf(buf, sizeof(buf), "[d=%d m=%d range %.3f..%.3f]", d, m,
                              lmin, lmax);
                detail += buf;
                ok = ok && lmax / lmin <= 2.0 && lmax <= 10.0;
            }
            return ok;
        });

    run(7, "O(h^2m) convergence on a Gaussian target", 300.0,
        [](std::string& detail) {
            const auto f = TestFunction::gaussian();
            const std::vector<double> hs{0.5, 0.25, 0.125, 0.0625, 0.03125};
            bool ok = true;
            for (const auto& [d, m, band] :
                 std::vector<std::tuple<int, int, double>>{
                     {1, 1, 0.3}, {1, 2, 0.3}, {2, 2, 0.5}}) {
                const auto rep = convergence_study(KernelSpec::matern(m, d), f, hs);
                char buf[96];
                std::snprintf(buf, sizeof(buf), "[d=%d m=%d slope=%.3f]", d, m,
                              rep.slope_defined ? rep.slope : 0.0);
                detail += buf;
                ok = ok && rep.slope_defined && std::abs(rep.slope - 2.0 * m) <= band;
            }
            return ok;
        });

    run(8, "aliasing-ratio bound and h^2m scaling of the measured sup", 30.0,
        [&](std::string& detail) {
            bool ok = true;
            double worst_var = 0.0;
            for (const auto& [d, m] : valid_dm()) {
                double nmin = 1e300, nmax = 0.0;
                for (double h : sweep) {
                    const auto c =
                        synthesis_condition(KernelSpec::matern(m, d), h, 0.5, 40);
                    ok = ok && c.measured_sup <= c.proof_bound;
                    const double n = c.measured_sup / std::pow(h, 2.0 * m);
                    nmin = std::min(nmin, n);
                    nmax = std::max(nmax, n);
                }
                worst_var = std::max(worst_var, (nmax - nmin) / nmin);
            }
            char buf[64];
            std::snprintf(buf, sizeof(buf), "max normalized-sup variation %.1f%%",
                          100.0 * worst_var);
            detail = buf;
            return ok && worst_var < 0.2;
        });

    run(9, "compactly supported kernel battery", 60.0, [](std::string& detail) {
        bool ok = true;
        const double ln2 = std::log(2.0);
        // knot smoothness of the C^2 log-polynomial kernel
        for (double knot : {1.0, 2.0})
            ok = ok && std::abs(eta2_eval(knot - 1e-12) - eta2_eval(knot + 1e-12)) <= 1e-10;
        const double d1l = (2.0 * (ln2 - 3.0) + 3.0) / 3.0;
        const double d1r = (-4.0 + 2.0 * (ln2 + 1.0) - 1.0) / 3.0;
        const double d2l = (2.0 * (ln2 - 3.0) + 9.0) / 3.0;
        const double d2r = (4.0 + 2.0 * (ln2 + 1.0) - 3.0) / 3.0;
        ok = ok && std::abs(d1l - d1r) <= 1e-10 && std::abs(d2l - d2r) <= 1e-10;
        // support and knot checks of the quartic pair
        ok = ok && psi2_eval(2.0) == 0.0 && psi2_eval(2.5) == 0.0;
        ok = ok && std::abs(psi2_eval(1.0) - 1.0) <= 1e-12;
        ok = ok && psi32_eval(2.0) == 0.0 && std::abs(psi32_eval(0.0) - 48.0) <= 1e-12;
        ok = ok && std::abs(psi32_eval(1.0) - 4.0) <= 1e-12;
        // transform positivity on (0, 60]
        const auto peta = kernel_profile(KernelSpec::compact(KernelFamily::eta2));
        const auto ppsi2 = kernel_profile(KernelSpec::compact(KernelFamily::psi2));
        double min_ft = 1e300;
        for (int i = 1; i <= 1000; ++i) {
            const double r = 60.0 * i / 1000.0;
            min_ft = std::min(min_ft, radial_ft(peta, 2, r));
            min_ft = std::min(min_ft, radial_ft(ppsi2, 1, r));
        }
        ok = ok && min_ft > 0.0;
        // dimension walk: the d=3 transform of psi32 equals the d=1 transform of psi2
        const auto ppsi32 = kernel_profile(KernelSpec::compact(KernelFamily::psi32));
        double worst_walk = 0.0;
        for (int i = 1; i <= 60; ++i) {
            const double r = 0.5 * i;
            worst_walk = std::max(worst_walk, std::abs(radial_ft(ppsi32, 3, r) -
                                                       radial_ft(ppsi2, 1, r)));
        }
        ok = ok && worst_walk <= 1e-6;
        // fitted Bessel-series coefficients reproduce the transform
        const auto pert = fit_eta2_perturbation();
        double worst_fit = 0.0;
        for (int i = 1; i <= 200; ++i) {
            const double r = 0.75 + 59.25 * i / 200.0;
            worst_fit = std::max(worst_fit,
                                 std::abs(pert.transform(r) - radial_ft(peta, 2, r)));
        }
        ok = ok && worst_fit <= 1e-6;
        char buf[96];
        std::snprintf(buf, sizeof(buf), "walk err %.2e, fit err %.2e, min ft %.2e",
                      worst_walk, worst_fit, min_ft);
        detail = buf;
        return ok;
    });

    run(10, "compact-kernel convergence rate (d=2, slope >= 3.6)", 300.0,
        [](std::string& detail) {
            const auto rep = compact_kernel_study(
                KernelSpec::compact(KernelFamily::eta2), TestFunction::gaussian(),
                {0.5, 0.25, 0.125, 0.0625});
            char buf[48];
            std::snprintf(buf, sizeof(buf), "slope=%.3f",
                          rep.slope_defined ? rep.slope : 0.0);
            detail = buf;
            return rep.slope_defined && rep.slope >= 3.6;
        });

    std::printf("%d/10 criteria passed\n", 10 - failures);
    return failures == 0 ? 0 : 1;
}
