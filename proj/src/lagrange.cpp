#include "cardinal/lagrange.hpp"

#include "cardinal/errors.hpp"
#include "cardinal/fft.hpp"
#include "cardinal/parallel.hpp"
#include "cardinal/quadrature.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <sstream>

namespace cardinal {

namespace {

double pow_di(double x, int n) {
    double r = 1.0, b = x;
    for (int e = n; e > 0; e >>= 1) {
        if (e & 1) r *= b;
        b *= b;
    }
    return r;
}

int coeff_grid_cap(int d) {
    switch (d) {
    case 1: return 2048;
    case 2: return 1024;
    default: return 128;
    }
}

// Coefficients of 1/sigma on the grid, FFT index order. 1/sigma reaches
// pi^{2m} h^{-(2m-d)}/rho at the cell corner, so a double transform would
// bury the small coefficients; carry the transform in extended precision.
std::vector<double> reciprocal_coefficients(const SymbolGrid& g) {
    const int d = g.d(), M = g.grid_size;
    for (double v : g.values)
        if (!(v > 0.0))
            throw IllPosedInterpolationError(
                "symbol not positive; cardinal interpolation is ill-posed");
    std::vector<long double> rec(g.values.size());
    for (std::size_t i = 0; i < rec.size(); ++i) rec[i] = 1.0L / g.values[i];
    std::vector<double> re, im;
    dft_nd_extended(rec, d, M, -1, re, im);
    const double scale = 1.0 / static_cast<double>(rec.size());
    double max_re = 0.0, max_im = 0.0;
    for (std::size_t i = 0; i < re.size(); ++i) {
        max_re = std::max(max_re, std::abs(re[i]));
        max_im = std::max(max_im, std::abs(im[i]));
        re[i] *= scale;
    }
    if (max_im > 1e-10 * max_re)
        throw CorruptedGridError("reciprocal symbol transform not real");
    return re;
}

// c is an M^d array of frequencies in FFT order; fetch k in [-M/2, M/2).
double coeff_fetch(const std::vector<double>& c, int d, int M, const Coord& k) {
    std::int64_t idx = 0;
    for (int ax = 0; ax < d; ++ax) idx = idx * M + ((k[ax] % M) + M) % M;
    return c[idx];
}

SymbolGrid rebuild_symbol(const SymbolGrid& like, int M) {
    if (like.route == SymbolRoute::spatial)
        return symbol_spatial(like.spec, like.h, M);
    return symbol_poisson(like.spec, like.h, M);
}

double scaled_kernel(const KernelSpec& spec, double h, double r) {
    return kernel_radial(spec, h * r);
}

} // namespace

LagrangeFunction lagrange_coefficients(const SymbolGrid& grid, double tol) {
    if (grid.is_inverse)
        throw std::invalid_argument("need the symbol grid, not its inverse");
    if (!(grid.h > 0.0)) throw std::domain_error("coefficients need h > 0");

    const int d = grid.d();
    const int cap = coeff_grid_cap(d);
    SymbolGrid cur = grid;
    std::vector<double> c_cur = reciprocal_coefficients(cur);
    // extended-precision transform noise floor: eps_ld * sup(1/sigma) * sqrt(M^d)
    auto noise_floor = [&](const SymbolGrid& g) {
        double sup_rec = 0.0;
        for (double v : g.values) sup_rec = std::max(sup_rec, 1.0 / v);
        const double eps_ld = 1.0842e-19;
        return 8.0 * eps_ld * sup_rec *
               std::sqrt(static_cast<double>(g.values.size()));
    };
    double tol_eff = std::max(tol, noise_floor(cur));
    double achieved = std::numeric_limits<double>::infinity();
    while (true) {
        const int M2 = 2 * cur.grid_size;
        if (M2 > cap) {
            std::ostringstream os;
            os << "aliasing control stalled at grid " << cur.grid_size
               << " (reached " << achieved << ")";
            throw AliasingError(os.str(), achieved);
        }
        SymbolGrid nxt = rebuild_symbol(cur, M2);
        std::vector<double> c_nxt = reciprocal_coefficients(nxt);
        double boundary = 0.0, change = 0.0;
        const int Mh = cur.grid_size / 2;
        for_each_in_box(d, Mh, [&](const Coord& k, std::int64_t) {
            const double delta = std::abs(coeff_fetch(c_nxt, d, M2, k) -
                                          coeff_fetch(c_cur, d, cur.grid_size, k));
            change = std::max(change, delta);
        });
        for_each_in_box(d, M2 / 2 - 1, [&](const Coord& k, std::int64_t) {
            if (chebyshev_norm(d, k) != M2 / 2 - 1) return;
            boundary = std::max(boundary, std::abs(coeff_fetch(c_nxt, d, M2, k)));
        });
        cur = std::move(nxt);
        c_cur = std::move(c_nxt);
        tol_eff = std::max(tol, noise_floor(cur));
        achieved = std::max(boundary, change);
        if (achieved < tol_eff) break;
    }

    const int M = cur.grid_size;
    // the coefficients are even in k; average the pair to make that exact
    auto fetch = [&](const Coord& k) {
        const Coord nk{-k[0], -k[1], -k[2]};
        return 0.5 * (coeff_fetch(c_cur, d, M, k) + coeff_fetch(c_cur, d, M, nk));
    };
    int rc = 1;
    for_each_in_box(d, M / 2 - 1, [&](const Coord& k, std::int64_t) {
        if (std::abs(fetch(k)) >= tol_eff) rc = std::max(rc, chebyshev_norm(d, k));
    });
    double tail = 0.0;
    for_each_in_box(d, M / 2 - 1, [&](const Coord& k, std::int64_t) {
        if (chebyshev_norm(d, k) > rc) tail += std::abs(fetch(k));
    });

    LagrangeFunction L;
    L.spec = grid.spec;
    L.h = grid.h;
    L.radius = rc;
    L.grid_size = M;
    L.coefficient_tail = tail;
    L.coeffs.resize(pow_int(2 * rc + 1, d));
    for_each_in_box(d, rc, [&](const Coord& k, std::int64_t idx) {
        L.coeffs[idx] = fetch(k);
    });

    // defect check in extended precision: the coefficients cancel to O(1)
    // from magnitudes up to h^{-(2m-d)}, so a double FFT slice is too noisy
    const int rt = rc + 5;
    std::vector<long double> table(pow_int(2 * rt + 1, d));
    std::vector<Coord> tn(table.size());
    for_each_in_box(d, rt, [&](const Coord& p, std::int64_t idx) { tn[idx] = p; });
    parallel_for(static_cast<std::int64_t>(table.size()), [&](std::int64_t idx) {
        Point z{0.0, 0.0, 0.0};
        for (int ax = 0; ax < d; ++ax) z[ax] = tn[idx][ax];
        table[idx] = scaled_kernel(L.spec, L.h, norm(d, z));
    });
    double defect = 0.0;
    for_each_in_box(d, 5, [&](const Coord& j, std::int64_t) {
        long double s = 0.0L;
        for_each_in_box(d, rc, [&](const Coord& k, std::int64_t idx) {
            Coord p;
            for (int ax = 0; ax < d; ++ax) p[ax] = j[ax] - k[ax];
            s += static_cast<long double>(L.coeffs[idx]) * table[box_index(d, rt, p)];
        });
        const double want = chebyshev_norm(d, j) == 0 ? 1.0 : 0.0;
        defect = std::max(defect, std::abs(static_cast<double>(s) - want));
    });
    L.cardinal_defect = defect;
    if (defect > tol::cardinal_check_tol) {
        std::ostringstream os;
        os << "cardinal conditions violated (defect " << defect << ")";
        throw AccuracyError(os.str(), defect);
    }
    return L;
}

double lagrange_eval(const LagrangeFunction& L, const Point& y) {
    const int d = L.spec.d;
    double sum = 0.0;
    for_each_in_box(d, L.radius, [&](const Coord& k, std::int64_t idx) {
        Point z = y;
        for (int ax = 0; ax < d; ++ax) z[ax] -= k[ax];
        sum += L.coeffs[idx] * scaled_kernel(L.spec, L.h, norm(d, z));
    });
    return sum;
}

std::vector<double> lattice_slice(const LagrangeFunction& L, const Point& u, int W) {
    if (W < 0) throw std::invalid_argument("lattice_slice: W must be >= 0");
    const int d = L.spec.d;
    const int rphi = L.radius + W;
    std::vector<double> phi(pow_int(2 * rphi + 1, d));
    std::vector<Coord> nodes(phi.size());
    for_each_in_box(d, rphi, [&](const Coord& n, std::int64_t idx) { nodes[idx] = n; });
    parallel_for(static_cast<std::int64_t>(phi.size()), [&](std::int64_t idx) {
        Point z = u;
        for (int ax = 0; ax < d; ++ax) z[ax] += nodes[idx][ax];
        phi[idx] = scaled_kernel(L.spec, L.h, norm(d, z));
    });
    return convolve_nd(L.coeffs, L.radius, phi, rphi, d, W);
}

double lagrange_eval_fourier(const KernelSpec& spec, double h, const Point& y,
                             const FourierQuadConfig& cfg) {
    spec.validate();
    if (spec.family != KernelFamily::matern)
        throw std::invalid_argument("Fourier route requires the Matern transform");
    if (h < 0.0 || h > 1.0) throw std::domain_error("scale h out of range");
    const int d = spec.d, m = spec.m;
    const double h2 = h * h;
    const int n = cfg.points_per_axis > 0 ? cfg.points_per_axis : (d == 1 ? 16 : 10);
    const int cap = cfg.cell_cap > 0 ? cfg.cell_cap : (d == 1 ? 20000 : (d == 2 ? 1600 : 64));

    // Tensor quadrature nodes of the centered period cell and omega there.
    const auto& rule = GaussLegendre::get(n);
    const std::int64_t nn = pow_int(n, d);
    std::vector<Point> tq(nn);
    std::vector<double> wq(nn), omega(nn);
    for (std::int64_t i = 0; i < nn; ++i) {
        std::int64_t rem = i;
        double w = 1.0;
        Point t{0.0, 0.0, 0.0};
        for (int ax = d - 1; ax >= 0; --ax) {
            const int j = static_cast<int>(rem % n);
            rem /= n;
            t[ax] = M_PI * rule.nodes[j];
            w *= M_PI * rule.weights[j];
        }
        tq[i] = t;
        wq[i] = w;
    }
    parallel_for(nn, [&](std::int64_t i) {
        omega[i] = inverse_symbol_value(spec, h, tq[i]);
    });

    double sup_omega = 0.0;
    for (std::int64_t i = 0; i < nn; ++i) sup_omega = std::max(sup_omega, omega[i]);

    auto tail_bound = [&](int kc) {
        const Point origin{0.0, 0.0, 0.0};
        return sup_omega / pow_di(2.0 * M_PI, d) *
               exterior_box_integral(d, 2 * m, h2, origin, (2.0 * kc + 1.0) * M_PI);
    };
    int kc = 1;
    while (kc < cap && tail_bound(kc) >= 0.5 * cfg.target_abs) kc *= 2;
    if (tail_bound(kc) >= 0.5 * cfg.target_abs) {
        std::ostringstream os;
        os << "Fourier-route tail budget infeasible (bound " << tail_bound(kc)
           << " at cell radius " << kc << ")";
        throw AccuracyError(os.str(), tail_bound(kc));
    }
    int lo = kc / 2, hi = kc;
    while (hi - lo > 1) {
        const int mid = lo + (hi - lo) / 2;
        if (tail_bound(mid) < 0.5 * cfg.target_abs) hi = mid;
        else lo = mid;
    }
    kc = hi;

    std::vector<double> partial(nn, 0.0);
    parallel_for(nn, [&](std::int64_t i) {
        const Point& t = tq[i];
        double yt = 0.0;
        for (int ax = 0; ax < d; ++ax) yt += y[ax] * t[ax];
        double s = 0.0;
        for_each_in_box(d, kc, [&](const Coord& k, std::int64_t) {
            double q = h2, yk = 0.0;
            for (int ax = 0; ax < d; ++ax) {
                const double u = t[ax] + 2.0 * M_PI * k[ax];
                q += u * u;
                yk += y[ax] * k[ax];
            }
            s += std::cos(yt + 2.0 * M_PI * yk) / pow_di(q, m);
        });
        partial[i] = wq[i] * omega[i] * s;
    });
    double total = 0.0;
    for (std::int64_t i = 0; i < nn; ++i) total += partial[i];
    return total / pow_di(2.0 * M_PI, d);
}

DecayFit fit_decay(const LagrangeFunction& L, double r_min, double r_max,
                   double floor_abs) {
    if (!(r_min > 0.0) || !(r_max > r_min))
        throw std::invalid_argument("fit_decay: bad annulus");
    const int d = L.spec.d;
    const int W = static_cast<int>(std::ceil(r_max)) + 1;
    const double floor =
        std::max(floor_abs, 10.0 * L.coefficient_tail * scaled_kernel(L.spec, L.h, 0.0));

    // chi on a refined lattice, one slice per fractional offset; the offset
    // density escalates when a near-compact chi starves the annulus
    std::vector<double> radii, logs;
    double inner = r_min;
    int nuse = 0;
    auto usable = [&](double rmin_cur) {
        int count = 0;
        for (double r : radii)
            if (r >= rmin_cur) ++count;
        return count;
    };
    for (int density : {2, 4, 8}) {
        radii.clear();
        logs.clear();
        const std::int64_t noff = pow_int(density, d);
        for (std::int64_t off = 0; off < noff; ++off) {
            std::int64_t rem = off;
            Point u{0.0, 0.0, 0.0};
            for (int ax = d - 1; ax >= 0; --ax) {
                u[ax] = static_cast<double>(rem % density) / density;
                rem /= density;
            }
            const auto slice = lattice_slice(L, u, W);
            for_each_in_box(d, W, [&](const Coord& j, std::int64_t idx) {
                Point z = u;
                for (int ax = 0; ax < d; ++ax) z[ax] += j[ax];
                const double r = norm_l1(d, z);
                const double v = std::abs(slice[idx]);
                if (r < r_max && v > floor) {
                    radii.push_back(r);
                    logs.push_back(std::log(v));
                }
            });
        }
        inner = r_min;
        while (usable(inner) < 10 && inner > 0.25)
            inner = std::max(0.25, 0.5 * inner);
        nuse = usable(inner);
        if (nuse >= 10) break;
    }
    if (nuse < 10)
        throw InsufficientDataError("fewer than 10 samples above the noise floor");

    Eigen::MatrixXd A(nuse, 2);
    Eigen::VectorXd b(nuse);
    int row = 0;
    double used_max = 0.0;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (radii[i] < inner) continue;
        A(row, 0) = 1.0;
        A(row, 1) = radii[i];
        b(row) = logs[i];
        used_max = std::max(used_max, radii[i]);
        ++row;
    }
    const Eigen::Vector2d sol = A.colPivHouseholderQr().solve(b);
    DecayFit fit;
    fit.amplitude_A = std::exp(sol(0));
    fit.rate_B = -sol(1);
    fit.residual = std::sqrt((A * sol - b).squaredNorm() / nuse);
    fit.r_min = inner;
    fit.r_max = used_max;
    fit.samples_used = nuse;
    return fit;
}

} // namespace cardinal
