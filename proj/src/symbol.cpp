#include "cardinal/symbol.hpp"

#include "cardinal/errors.hpp"
#include "cardinal/fft.hpp"
#include "cardinal/parallel.hpp"
#include "cardinal/quadrature.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <vector>

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

int spatial_cap(int d) {
    switch (d) {
    case 1: return 16384;
    case 2: return 2048;
    default: return 256;
    }
}

double shell_count(int d, double j) {
    return pow_di(2.0 * j + 1.0, d) - pow_di(2.0 * j - 1.0, d);
}

// Upper bound on c0 * sum_{||k||_inf > K} e^{-ah ||k||_inf} via shells plus a
// geometric remainder (the shell ratio is decreasing).
double spatial_tail_bound(int d, double c0, double ah, int K, double stop_below) {
    const double q = std::exp(-ah);
    double sum = 0.0;
    for (int j = K + 1; j < K + 2000000; ++j) {
        const double s = shell_count(d, j);
        const double term = c0 * s * std::exp(-ah * j);
        const double ratio = q * shell_count(d, j + 1.0) / s;
        sum += term;
        if (ratio < 0.999 && term * ratio / (1.0 - ratio) < 0.01 * stop_below) {
            sum += term * ratio / (1.0 - ratio);
            break;
        }
        if (sum > 1e300) break;
    }
    return sum;
}

// Lower bound on the Matern symbol over the cell (the k = 0 Poisson term at
// the worst node t = (pi,...,pi)); scales relative tolerances to absolute.
double symbol_lower_bound(const KernelSpec& spec, double h) {
    const double rho = matern_rho(spec.m, spec.d);
    return rho * std::pow(h, 2.0 * spec.m - spec.d) /
           pow_di(h * h + spec.d * M_PI * M_PI, spec.m);
}

void mirror_symmetrize(std::vector<double>& values, int d, int M) {
    for_each_grid_node(d, M, [&](const Coord& l, std::int64_t idx) {
        Coord ml{0, 0, 0};
        for (int ax = 0; ax < d; ++ax) ml[ax] = l[ax] == 0 ? 0 : M - l[ax];
        std::int64_t midx = 0;
        for (int ax = 0; ax < d; ++ax) midx = midx * M + ml[ax];
        if (midx < idx) values[idx] = values[midx];
    });
}

void check_grid_args(double h, double h_min, int M) {
    if (h < h_min || h > 1.0) throw std::domain_error("scale h out of range");
    if (M < 2 || !is_power_of_two(M))
        throw std::invalid_argument("grid size must be a power of two >= 2");
}

double sqrt_pi() { return std::sqrt(M_PI); }

// Product of p successive full-axis integration factors starting at order mu.
double full_axis_chain(int twice_mu, int p) {
    double f = 1.0;
    for (int i = 0; i < p; ++i) {
        const double mu = 0.5 * (twice_mu - i);
        f *= sqrt_pi() * std::tgamma(mu - 0.5) / std::tgamma(mu);
    }
    return f;
}

struct PoissonParams {
    int d;
    int m;
    double h2;
};

double direct_lattice_sum(const PoissonParams& pp, const Point& t, int K,
                          bool* diverged) {
    double s = 0.0;
    for_each_in_box(pp.d, K, [&](const Coord& k, std::int64_t) {
        double q = pp.h2;
        for (int ax = 0; ax < pp.d; ++ax) {
            const double u = t[ax] + 2.0 * M_PI * k[ax];
            q += u * u;
        }
        if (q == 0.0) {
            if (diverged) *diverged = true;
            return;
        }
        s += 1.0 / pow_di(q, pp.m);
    });
    return s;
}

// Lattice tail sum_{||k||_inf > K} via the exterior integral with the
// leading curvature (Laplacian) correction of the midpoint rule.
double lattice_tail(const PoissonParams& pp, const Point& t, int K) {
    const double L = (2.0 * K + 1.0) * M_PI;
    const double cell = pow_di(2.0 * M_PI, pp.d);
    const double e0 = exterior_box_integral(pp.d, 2 * pp.m, pp.h2, t, L);
    const double ca = 4.0 * pp.m * (pp.m + 1.0) - 2.0 * pp.m * pp.d;
    const double cb = -4.0 * pp.m * (pp.m + 1.0) * pp.h2;
    double lap = ca * exterior_box_integral(pp.d, 2 * pp.m + 2, pp.h2, t, L);
    if (cb != 0.0)
        lap += cb * exterior_box_integral(pp.d, 2 * pp.m + 4, pp.h2, t, L);
    const double w2 = 4.0 * M_PI * M_PI;
    return (e0 - (w2 / 24.0) * lap) / cell;
}

double poisson_node_value(const PoissonParams& pp, const Point& t, int K,
                          bool* diverged) {
    return direct_lattice_sum(pp, t, K, diverged) + lattice_tail(pp, t, K);
}

// Barycentric Chebyshev-Lobatto interpolant of the lattice tail over the
// canonical cell [0, pi]^d (the symbol is even per axis). The tail varies on
// the scale L = (2K+1)pi >> pi, so a low degree carries far more accuracy
// than the correction itself contributes.
struct TailInterp {
    int d;
    int n;
    std::vector<double> x, wb, vals;

    TailInterp(const PoissonParams& pp, int K, int degree = 8)
        : d(pp.d), n(degree), x(degree + 1), wb(degree + 1) {
        for (int i = 0; i <= n; ++i) {
            x[i] = 0.5 * M_PI * (1.0 - std::cos(M_PI * i / n));
            wb[i] = (i % 2 == 0 ? 1.0 : -1.0) * (i == 0 || i == n ? 0.5 : 1.0);
        }
        const std::int64_t total = pow_int(n + 1, d);
        vals.resize(total);
        std::vector<Point> nodes(total);
        for (std::int64_t idx = 0; idx < total; ++idx) {
            std::int64_t rem = idx;
            Point t{0.0, 0.0, 0.0};
            for (int ax = d - 1; ax >= 0; --ax) {
                t[ax] = x[rem % (n + 1)];
                rem /= n + 1;
            }
            nodes[idx] = t;
        }
        parallel_for(total, [&](std::int64_t idx) {
            vals[idx] = lattice_tail(pp, nodes[idx], K);
        });
    }

    double operator()(const Point& t) const {
        double card[3][16];
        for (int ax = 0; ax < d; ++ax) {
            const double u = std::abs(t[ax]);
            int hit = -1;
            double denom = 0.0;
            for (int i = 0; i <= n; ++i) {
                if (u == x[i]) {
                    hit = i;
                    break;
                }
                const double c = wb[i] / (u - x[i]);
                card[ax][i] = c;
                denom += c;
            }
            if (hit >= 0) {
                for (int i = 0; i <= n; ++i) card[ax][i] = i == hit ? 1.0 : 0.0;
            } else {
                for (int i = 0; i <= n; ++i) card[ax][i] /= denom;
            }
        }
        double s = 0.0;
        const std::int64_t total = pow_int(n + 1, d);
        for (std::int64_t idx = 0; idx < total; ++idx) {
            std::int64_t rem = idx;
            double w = 1.0;
            for (int ax = d - 1; ax >= 0; --ax) {
                w *= card[ax][rem % (n + 1)];
                rem /= n + 1;
            }
            s += w * vals[idx];
        }
        return s;
    }
};

std::vector<int> poisson_schedule(int d) {
    switch (d) {
    case 1: return {50, 100, 200, 400, 800, 1600, 3200};
    case 2: return {12, 18, 27, 40, 60, 90, 135};
    default: return {5, 8, 12, 18, 27};
    }
}

std::vector<Point> poisson_probes(int d, int M, bool skip_origin) {
    const double e = 2.0 * M_PI / M;
    std::vector<Point> probes;
    if (!skip_origin) probes.push_back({0.0, 0.0, 0.0});
    Point near{0.0, 0.0, 0.0}, corner{0.0, 0.0, 0.0}, face{0.0, 0.0, 0.0};
    for (int ax = 0; ax < d; ++ax) {
        near[ax] = e;
        corner[ax] = -M_PI;
    }
    face[0] = -M_PI;
    probes.push_back(near);
    probes.push_back(corner);
    probes.push_back(face);
    if (d >= 2) {
        Point mixed{-M_PI, M_PI / 2.0, 0.0};
        if (d == 3) mixed[2] = e;
        probes.push_back(mixed);
    }
    return probes;
}

} // namespace

double SymbolGrid::value(const Coord& l) const {
    std::int64_t idx = 0;
    for (int ax = 0; ax < d(); ++ax) idx = idx * grid_size + l[ax];
    return values[idx];
}

Point SymbolGrid::node(const Coord& l) const {
    Point t{0.0, 0.0, 0.0};
    for (int ax = 0; ax < d(); ++ax) {
        t[ax] = 2.0 * M_PI * l[ax] / grid_size;
        if (t[ax] >= M_PI) t[ax] -= 2.0 * M_PI;
    }
    return t;
}

double exterior_box_integral(int d, int twice_mu, double c2, const Point& t,
                             double L) {
    if (twice_mu <= d) throw std::invalid_argument("exterior integral diverges");
    double total = 0.0;
    for (int j = 0; j < d; ++j) {
        const int p = d - 1 - j;
        const double cf = full_axis_chain(twice_mu, p);
        const int tnu = twice_mu - p;
        const double tj = t[j];
        auto tails = [&](double a2) {
            return algebraic_tail_integral(a2, L + tj, tnu) +
                   algebraic_tail_integral(a2, L - tj, tnu);
        };
        if (j == 0) {
            total += cf * tails(c2);
        } else if (j == 1) {
            total += cf * gauss_integrate_panels(
                              [&](double u0) { return tails(c2 + u0 * u0); },
                              t[0] - L, t[0] + L, 32, 12);
        } else {
            total += cf * gauss_integrate_panels(
                              [&](double u0) {
                                  return gauss_integrate_panels(
                                      [&](double u1) {
                                          return tails(c2 + u0 * u0 + u1 * u1);
                                      },
                                      t[1] - L, t[1] + L, 16, 8);
                              },
                              t[0] - L, t[0] + L, 16, 8);
        }
    }
    return total;
}

SymbolGrid symbol_spatial(const KernelSpec& spec, double h, int M, double tol) {
    spec.validate();
    check_grid_args(h, std::numeric_limits<double>::min(), M);
    const int d = spec.d;

    int K = 0;
    double tail = 0.0;
    if (spec.compactly_supported()) {
        K = static_cast<int>(std::ceil(spec.support_radius() / h));
    } else {
        const double alpha = spec.decay_rate_alpha;
        const double c0 = spec.decay_amplitude_C0 > 0.0
                              ? spec.decay_amplitude_C0
                              : fit_decay_amplitude(spec, alpha);
        const double ah = alpha * h;
        const double tol_abs = tol * symbol_lower_bound(spec, h);
        const int cap = spatial_cap(d);
        auto bound_at = [&](int r) {
            return spatial_tail_bound(d, c0, ah, r, tol_abs);
        };
        int lo = 0, hi = 1;
        while (hi < cap && bound_at(hi) >= tol_abs) {
            lo = hi;
            hi = std::min(cap, 2 * hi);
        }
        double bound = bound_at(hi);
        if (bound < tol_abs) {
            while (hi - lo > 1) { // smallest feasible radius
                const int mid = lo + (hi - lo) / 2;
                if (bound_at(mid) < tol_abs) hi = mid;
                else lo = mid;
            }
            K = hi;
            bound = bound_at(K);
        } else {
            K = cap;
        }
        if (bound >= tol_abs) {
            std::ostringstream os;
            os << "spatial symbol sum needs radius > " << cap << " at h = " << h
               << "; use the Poisson route";
            throw RouteInfeasibleError(os.str());
        }
        tail = bound;
    }

    // Fold Phi(hk) into residues mod M, then transform. The residues and the
    // transform are carried in extended precision: the symbol's dynamic range
    // across the cell can exceed what double accumulation resolves.
    const std::int64_t n = pow_int(M, d);
    std::vector<long double> folded(n, 0.0L);
    const std::size_t cache_size =
        d == 1 ? static_cast<std::size_t>(K) + 1
               : static_cast<std::size_t>(d) * K * K + 1;
    std::vector<double> cache(cache_size, std::numeric_limits<double>::quiet_NaN());
    for_each_in_box(d, K, [&](const Coord& k, std::int64_t) {
        std::int64_t n2 = 0;
        for (int ax = 0; ax < d; ++ax)
            n2 += static_cast<std::int64_t>(k[ax]) * k[ax];
        const std::size_t key = d == 1 ? static_cast<std::size_t>(k[0] < 0 ? -k[0] : k[0])
                                       : static_cast<std::size_t>(n2);
        double v = cache[key];
        if (std::isnan(v)) {
            v = kernel_radial(spec, h * std::sqrt(static_cast<double>(n2)));
            cache[key] = v;
        }
        std::int64_t idx = 0;
        for (int ax = 0; ax < d; ++ax) idx = idx * M + ((k[ax] % M) + M) % M;
        folded[idx] += v;
    });

    std::vector<double> re, im;
    dft_nd_extended(folded, d, M, +1, re, im);

    SymbolGrid grid;
    grid.spec = spec;
    grid.h = h;
    grid.grid_size = M;
    grid.route = SymbolRoute::spatial;
    grid.truncation_radius = K;
    grid.tail_bound = tail;
    grid.values.resize(n);
    double max_re = 0.0, max_im = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
        grid.values[i] = re[i];
        max_re = std::max(max_re, std::abs(re[i]));
        max_im = std::max(max_im, std::abs(im[i]));
    }
    if (max_im > 1e-12 * max_re)
        throw CorruptedGridError("spatial symbol has a non-negligible imaginary part");
    mirror_symmetrize(grid.values, d, M);
    if (spec.family == KernelFamily::matern) {
        for (double v : grid.values)
            if (!(v > 0.0))
                throw CorruptedGridError("spatial symbol lost positivity");
    }
    return grid;
}

SymbolGrid symbol_poisson(const KernelSpec& spec, double h, int M, double tol) {
    spec.validate();
    if (spec.family != KernelFamily::matern)
        throw std::invalid_argument("Poisson route requires the Matern transform");
    check_grid_args(h, 0.0, M);
    const int d = spec.d, m = spec.m;
    const PoissonParams pp{d, m, h * h};
    const double scale =
        h > 0.0 ? matern_rho(m, d) * std::pow(h, 2.0 * m - d) : 1.0;

    // Pick the truncation radius on probe nodes, then build the full grid.
    const auto schedule = poisson_schedule(d);
    const auto probes = poisson_probes(d, M, h == 0.0);
    std::vector<double> prev(probes.size(), 0.0);
    int K = schedule.back();
    double achieved = std::numeric_limits<double>::infinity();
    for (std::size_t step = 0; step < schedule.size(); ++step) {
        double worst = 0.0;
        for (std::size_t i = 0; i < probes.size(); ++i) {
            const double v = poisson_node_value(pp, probes[i], schedule[step], nullptr);
            if (step > 0) worst = std::max(worst, std::abs(v - prev[i]) / std::abs(v));
            prev[i] = v;
        }
        if (step > 0) {
            achieved = worst;
            if (worst < tol) {
                K = schedule[step];
                break;
            }
        }
    }
    if (!(achieved < tol)) {
        std::ostringstream os;
        os << "Poisson symbol truncation stalled at relative change " << achieved;
        throw TruncationError(os.str(), achieved);
    }

    SymbolGrid grid;
    grid.spec = spec;
    grid.h = h;
    grid.grid_size = M;
    grid.route = SymbolRoute::poisson;
    grid.truncation_radius = K;
    grid.tail_bound = achieved;
    const std::int64_t n = pow_int(M, d);
    grid.values.assign(n, 0.0);
    // evenness per axis: compute the canonical nodes l_ax <= M/2 only
    const TailInterp tail(pp, K);
    std::vector<Coord> canon;
    for_each_grid_node(d, M, [&](const Coord& l, std::int64_t) {
        for (int ax = 0; ax < d; ++ax)
            if (l[ax] > M / 2) return;
        canon.push_back(l);
    });
    std::vector<char> diverged(canon.size(), 0);
    std::vector<double> cvals(canon.size());
    parallel_for(static_cast<std::int64_t>(canon.size()), [&](std::int64_t i) {
        const Point t = grid.node(canon[i]);
        bool div = false;
        const double v = direct_lattice_sum(pp, t, K, &div) + tail(t);
        if (div) {
            diverged[i] = 1;
            cvals[i] = std::numeric_limits<double>::infinity();
        } else {
            cvals[i] = scale * v;
        }
    });
    for (std::size_t i = 0; i < canon.size(); ++i) {
        if (!diverged[i]) continue;
        if (h > 0.0 || chebyshev_norm(d, canon[i]) != 0)
            throw CorruptedGridError("unexpected divergent symbol node");
        grid.infinite_origin = true;
    }
    for (std::size_t i = 0; i < canon.size(); ++i) {
        std::int64_t idx = 0;
        for (int ax = 0; ax < d; ++ax) idx = idx * M + canon[i][ax];
        grid.values[idx] = cvals[i];
    }
    for_each_grid_node(d, M, [&](const Coord& l, std::int64_t idx) {
        std::int64_t cidx = 0;
        for (int ax = 0; ax < d; ++ax) {
            const int c = l[ax] == 0 ? 0 : std::min(l[ax], M - l[ax]);
            cidx = cidx * M + c;
        }
        if (cidx != idx) grid.values[idx] = grid.values[cidx];
    });
    for (std::int64_t i = 0; i < n; ++i)
        if (!(grid.values[i] > 0.0))
            throw CorruptedGridError("Poisson symbol lost positivity");
    return grid;
}

SymbolGrid symbol_auto(const KernelSpec& spec, double h, int M, double tol) {
    if (spec.compactly_supported()) return symbol_spatial(spec, h, M, tol);
    if (h <= tol::poisson_route_h_max) return symbol_poisson(spec, h, M, tol);
    return symbol_spatial(spec, h, M, tol);
}

SymbolGrid inverse_symbol(const SymbolGrid& grid) {
    if (grid.is_inverse)
        throw std::invalid_argument("grid already holds inverse-symbol values");
    if (grid.spec.family != KernelFamily::matern)
        throw std::invalid_argument("inverse symbol requires the Matern transform");
    SymbolGrid inv = grid;
    inv.is_inverse = true;
    const double num =
        grid.h > 0.0
            ? matern_rho(grid.m(), grid.d()) * std::pow(grid.h, 2.0 * grid.m() - grid.d())
            : 1.0;
    for (std::size_t i = 0; i < inv.values.size(); ++i) {
        const double s = grid.values[i];
        if (std::isinf(s)) {
            inv.values[i] = 0.0; // the h = 0 zero at t = 0
            continue;
        }
        if (!(s > 0.0)) throw CorruptedGridError("non-positive symbol value");
        inv.values[i] = num / s;
    }
    return inv;
}

double inverse_symbol_value(const KernelSpec& spec, double h, const Point& t) {
    spec.validate();
    if (spec.family != KernelFamily::matern)
        throw std::invalid_argument("inverse symbol requires the Matern transform");
    if (h < 0.0 || h > 1.0) throw std::domain_error("scale h out of range");
    const int d = spec.d, m = spec.m;
    Point tc{0.0, 0.0, 0.0};
    for (int ax = 0; ax < d; ++ax)
        tc[ax] = t[ax] - 2.0 * M_PI * std::round(t[ax] / (2.0 * M_PI));
    const PoissonParams pp{d, m, h * h};
    const int K = d == 1 ? 400 : (d == 2 ? 60 : 18);
    double g = 0.0;
    for_each_in_box(d, K, [&](const Coord& k, std::int64_t) {
        if (chebyshev_norm(d, k) == 0) return;
        double q = pp.h2;
        for (int ax = 0; ax < d; ++ax) {
            const double u = tc[ax] + 2.0 * M_PI * k[ax];
            q += u * u;
        }
        g += 1.0 / pow_di(q, m);
    });
    g += lattice_tail(pp, tc, K);
    const double q0 = pp.h2 + norm2(d, tc);
    const double qm = pow_di(q0, m);
    return qm / (1.0 + qm * g);
}

SynthesisCheck synthesis_condition(const KernelSpec& spec, double h, double delta,
                                   int K_sum) {
    spec.validate();
    if (spec.family != KernelFamily::matern)
        throw std::invalid_argument("synthesis condition requires the Matern transform");
    if (!(delta > 0.0) || delta >= M_PI) throw std::domain_error("delta must be in (0, pi)");
    if (!(h > 0.0) || h > 1.0) throw std::domain_error("scale h out of range");
    if (K_sum < 1) throw std::invalid_argument("K_sum must be positive");
    const int d = spec.d, m = spec.m;
    const double h2 = h * h;

    std::vector<Point> dirs;
    dirs.push_back({1.0, 0.0, 0.0});
    if (d >= 2) {
        dirs.push_back({0.0, 1.0, 0.0});
        const double s = 1.0 / std::sqrt(2.0);
        dirs.push_back({s, s, 0.0});
        dirs.push_back({s, -s, 0.0});
    }
    if (d == 3) {
        dirs.push_back({0.0, 0.0, 1.0});
        const double s = 1.0 / std::sqrt(3.0);
        dirs.push_back({s, s, s});
        dirs.push_back({s, -s, s});
    }

    SynthesisCheck out;
    const int radial_samples = 32;
    for (const auto& u : dirs) {
        for (int i = 0; i <= radial_samples; ++i) {
            const double r = delta * i / radial_samples;
            Point ht{0.0, 0.0, 0.0};
            for (int ax = 0; ax < d; ++ax) ht[ax] = h * r * u[ax];
            const double base = h2 * (1.0 + r * r);
            double sum = 0.0;
            for_each_in_box(d, K_sum, [&](const Coord& k, std::int64_t) {
                if (chebyshev_norm(d, k) == 0) return;
                double q = h2;
                for (int ax = 0; ax < d; ++ax) {
                    const double v = ht[ax] + 2.0 * M_PI * k[ax];
                    q += v * v;
                }
                sum += pow_di(base / q, m);
            });
            out.measured_sup = std::max(out.measured_sup, sum);
        }
    }

    double bound_sum = 0.0;
    for_each_in_box(d, K_sum, [&](const Coord& k, std::int64_t) {
        if (chebyshev_norm(d, k) == 0) return;
        double n2 = 0.0;
        for (int ax = 0; ax < d; ++ax) n2 += static_cast<double>(k[ax]) * k[ax];
        bound_sum += std::pow(2.0 * M_PI * std::sqrt(n2) - delta, -2.0 * m);
    });
    out.proof_bound = pow_di(h, 2 * m) * pow_di(1.0 + delta * delta, m) * bound_sum;
    return out;
}

} // namespace cardinal
