#include "cardinal/interp.hpp"

#include "cardinal/errors.hpp"
#include "cardinal/fft.hpp"
#include "cardinal/parallel.hpp"
#include "cardinal/symbol.hpp"

#include "json.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace cardinal {

namespace {

std::string family_name(const KernelSpec& spec) {
    switch (spec.family) {
    case KernelFamily::matern: return "matern";
    case KernelFamily::m_harmonic: return "mharmonic";
    case KernelFamily::eta2: return "eta2";
    case KernelFamily::psi2: return "psi2";
    default: return "psi32";
    }
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void check_h_list(const std::vector<double>& h_list) {
    if (h_list.empty()) throw std::invalid_argument("empty scale list");
    double prev = std::numeric_limits<double>::infinity();
    for (double h : h_list) {
        if (!(h > 0.0) || h > 1.0 || h >= prev)
            throw std::invalid_argument("scales must be decreasing in (0, 1]");
        prev = h;
    }
}

int default_grid(int d) { return d == 1 ? 64 : (d == 2 ? 32 : 16); }

std::int64_t window_index(const DataWindow& w, const Coord& j) {
    std::int64_t idx = 0;
    for (int ax = 0; ax < w.d; ++ax)
        idx = idx * (w.hi[ax] - w.lo[ax] + 1) + (j[ax] - w.lo[ax]);
    return idx;
}

} // namespace

DataWindow DataWindow::sample(const std::function<double(const Point&)>& f, int d,
                              double h, const Point& center, double radius) {
    if (d < 1 || d > 3) throw std::invalid_argument("dimension must be 1..3");
    if (!(h > 0.0) || !(radius > 0.0))
        throw std::invalid_argument("window needs h > 0 and radius > 0");
    DataWindow w;
    w.d = d;
    w.h = h;
    w.center = center;
    w.radius = radius;
    std::int64_t n = 1;
    for (int ax = 0; ax < d; ++ax) {
        w.lo[ax] = static_cast<int>(std::ceil((center[ax] - radius) / h - 1e-12));
        w.hi[ax] = static_cast<int>(std::floor((center[ax] + radius) / h + 1e-12));
        n *= w.hi[ax] - w.lo[ax] + 1;
    }
    w.values.resize(n);
    for (std::int64_t idx = 0; idx < n; ++idx) {
        std::int64_t rem = idx;
        Point x{0.0, 0.0, 0.0};
        for (int ax = d - 1; ax >= 0; --ax) {
            const int side = w.hi[ax] - w.lo[ax] + 1;
            x[ax] = h * (w.lo[ax] + static_cast<int>(rem % side));
            rem /= side;
        }
        w.values[idx] = f(x);
    }
    return w;
}

bool DataWindow::contains(const Coord& j) const {
    for (int ax = 0; ax < d; ++ax)
        if (j[ax] < lo[ax] || j[ax] > hi[ax]) return false;
    return true;
}

double DataWindow::value(const Coord& j) const {
    if (!contains(j)) throw OutOfWindowError("lattice node outside the data window");
    return values[window_index(*this, j)];
}

TestFunction TestFunction::gaussian() {
    TestFunction f;
    f.name = "gaussian";
    f.evaluator = [](const Point& x) {
        return std::exp(-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]));
    };
    f.admissible = true;
    return f;
}

int halo_width(const DecayFit& fit, double tol) {
    if (!(fit.rate_B > 0.0) || !(tol > 0.0))
        throw std::invalid_argument("halo needs a positive decay rate and tol");
    const double w = (std::log(std::max(fit.amplitude_A, 1.0)) - std::log(tol)) /
                     fit.rate_B;
    return std::max(1, std::min(400, static_cast<int>(std::ceil(w))));
}

double interpolate(const LagrangeFunction& L, const DataWindow& data,
                   const Point& x, int W) {
    const int d = L.spec.d;
    if (data.d != d || data.h != L.h)
        throw std::invalid_argument("data window does not match the Lagrange function");
    if (W < 1) throw std::invalid_argument("halo width must be >= 1");
    Coord j0{0, 0, 0};
    for (int ax = 0; ax < d; ++ax) {
        j0[ax] = static_cast<int>(std::llround(x[ax] / L.h));
        if (j0[ax] - W < data.lo[ax] || j0[ax] + W > data.hi[ax])
            throw OutOfWindowError("evaluation point too close to the window edge");
    }
    // regroup sum_j f_j chi(x/h - j) as sum_p (a * f)_p Phi(x - hp)
    const int rc = L.radius, rp = W + rc;
    std::vector<long double> c(pow_int(2 * rp + 1, d), 0.0L);
    for_each_in_box(d, W, [&](const Coord& dj, std::int64_t) {
        Coord j;
        for (int ax = 0; ax < d; ++ax) j[ax] = j0[ax] + dj[ax];
        const long double fj = data.values[window_index(data, j)];
        for_each_in_box(d, rc, [&](const Coord& k, std::int64_t kidx) {
            Coord p;
            for (int ax = 0; ax < d; ++ax) p[ax] = dj[ax] + k[ax];
            c[box_index(d, rp, p)] += fj * L.coeffs[kidx];
        });
    });
    std::vector<double> phi(c.size());
    std::vector<Coord> pn(c.size());
    for_each_in_box(d, rp, [&](const Coord& p, std::int64_t idx) { pn[idx] = p; });
    parallel_for(static_cast<std::int64_t>(c.size()), [&](std::int64_t idx) {
        Point z{0.0, 0.0, 0.0};
        for (int ax = 0; ax < d; ++ax)
            z[ax] = x[ax] / L.h - (j0[ax] + pn[idx][ax]);
        phi[idx] = kernel_radial(L.spec, L.h * norm(d, z));
    });
    long double s = 0.0L;
    for (std::size_t i = 0; i < c.size(); ++i) s += c[i] * phi[i];
    return static_cast<double>(s);
}

LebesgueEstimate lebesgue_constant(const LagrangeFunction& L, const DecayFit& fit,
                                   int samples_per_axis) {
    const int d = L.spec.d;
    if (samples_per_axis < 2) throw std::invalid_argument("need >= 2 samples per axis");
    const int W = std::min(halo_width(fit, 1e-6), 60);

    auto lam = [&](const Point& y) {
        const auto slice = lattice_slice(L, y, W);
        double s = 0.0;
        for (double v : slice) s += std::abs(v);
        return s;
    };

    const int S = samples_per_axis;
    double best = 0.0;
    Point best_y{0.0, 0.0, 0.0};
    const std::int64_t n = pow_int(S, d);
    for (std::int64_t idx = 0; idx < n; ++idx) {
        std::int64_t rem = idx;
        Point y{0.0, 0.0, 0.0};
        for (int ax = d - 1; ax >= 0; --ax) {
            y[ax] = static_cast<double>(rem % S) / (S - 1);
            rem /= S;
        }
        const double v = lam(y);
        if (v > best) {
            best = v;
            best_y = y;
        }
    }
    double step = 1.0 / (S - 1);
    for (int round = 0; round < 3; ++round) {
        step *= 0.25;
        Point center = best_y;
        for_each_in_box(d, 2, [&](const Coord& i, std::int64_t) {
            if (chebyshev_norm(d, i) == 0) return;
            Point y = center;
            for (int ax = 0; ax < d; ++ax) y[ax] += step * i[ax];
            const double v = lam(y);
            if (v > best) {
                best = v;
                best_y = y;
            }
        });
    }

    // decay-envelope bound on the dropped halo tail
    double tail = 0.0;
    for (int s = W + 1; s < 100000; ++s) {
        const double shell = static_cast<double>(pow_int(2 * s + 1, d) -
                                                 pow_int(2 * s - 1, d));
        const double term = fit.amplitude_A * shell * std::exp(-fit.rate_B * s);
        tail += term;
        if (term < 1e-18 * (1.0 + tail)) break;
    }

    LebesgueEstimate est;
    est.value = best;
    est.tail_uncertainty = tail;
    est.maximizer = best_y;
    return est;
}

namespace {

ExperimentReport run_study(const KernelSpec& spec, const TestFunction* f,
                           const std::vector<double>& h_list,
                           const StudyConfig& cfg, const std::string& study,
                           bool spatial_route, bool with_errors) {
    spec.validate();
    check_h_list(h_list);
    if (with_errors && (!f || !f->admissible))
        throw std::invalid_argument("study needs an admissible test function");

    const int d = spec.d;
    ExperimentReport rep;
    rep.kernel_id = spec.id();
    rep.d = d;
    rep.m = spec.m;
    rep.study = study;
    rep.config = cfg;

    const double eps_floor =
        std::max(100.0 * std::numeric_limits<double>::epsilon(),
                 10.0 * cfg.truncation_tol);
    for (double h : h_list) {
        const int M0 = cfg.grid_size > 0 ? cfg.grid_size : default_grid(d);
        const SymbolGrid g = spatial_route
                                 ? symbol_spatial(spec, h, M0, cfg.symbol_tol)
                                 : symbol_auto(spec, h, M0, cfg.symbol_tol);
        const auto L = lagrange_coefficients(g, cfg.coeff_tol);
        const auto fit = fit_decay(L);

        ScaleRow row;
        row.h = h;
        row.decay_A = fit.amplitude_A;
        row.decay_B = fit.rate_B;
        row.grid_size = L.grid_size;
        row.radius = L.radius;
        row.halo = halo_width(fit, cfg.truncation_tol);

        if (with_errors) {
            const int W = row.halo;
            const int N = static_cast<int>(std::floor(cfg.eval_halfwidth / h + 1e-9));
            // for compact kernels the interpolant is regrouped as
            // (data * a) * Phi: the kernel table has radius ceil(support/h)
            // and the coefficient halo never enters a convolution
            const bool compact = spec.compactly_supported();
            const int Rphi =
                compact ? static_cast<int>(std::ceil(spec.support_radius() / h)) + 1
                        : 0;
            const int rcoef = N + Rphi;
            const int rdata = compact ? rcoef + L.radius : N + W;
            std::vector<double> data(pow_int(2 * rdata + 1, d));
            std::vector<Coord> dn(data.size());
            for_each_in_box(d, rdata,
                            [&](const Coord& j, std::int64_t idx) { dn[idx] = j; });
            parallel_for(static_cast<std::int64_t>(data.size()), [&](std::int64_t idx) {
                Point x{0.0, 0.0, 0.0};
                for (int ax = 0; ax < d; ++ax) x[ax] = h * dn[idx][ax];
                data[idx] = f->evaluator(x);
            });
            std::vector<double> coef;
            if (compact)
                coef = convolve_nd(data, rdata, L.coeffs, L.radius, d, rcoef);

            const int P = cfg.offsets_per_cell;
            double sup = 0.0;
            const std::int64_t noff = pow_int(P + 1, d);
            for (std::int64_t off = 0; off < noff; ++off) {
                if (off == 0) continue; // error vanishes on the lattice
                std::int64_t rem = off;
                Point o{0.0, 0.0, 0.0};
                for (int ax = d - 1; ax >= 0; --ax) {
                    o[ax] = static_cast<double>(rem % (P + 1)) / (P + 1);
                    rem /= P + 1;
                }
                std::vector<double> out;
                if (compact) {
                    std::vector<double> phi(pow_int(2 * Rphi + 1, d));
                    std::vector<Coord> pn(phi.size());
                    for_each_in_box(d, Rphi, [&](const Coord& q, std::int64_t idx) {
                        pn[idx] = q;
                    });
                    parallel_for(static_cast<std::int64_t>(phi.size()),
                                 [&](std::int64_t idx) {
                                     Point z{0.0, 0.0, 0.0};
                                     for (int ax = 0; ax < d; ++ax)
                                         z[ax] = o[ax] + pn[idx][ax];
                                     phi[idx] = kernel_radial(spec, h * norm(d, z));
                                 });
                    out = convolve_nd(coef, rcoef, phi, Rphi, d, N);
                } else {
                    const auto slice = lattice_slice(L, o, W);
                    out = convolve_nd(data, rdata, slice, W, d, N);
                }
                for_each_in_box(d, N, [&](const Coord& nidx, std::int64_t oi) {
                    Point x{0.0, 0.0, 0.0};
                    bool inside = true;
                    for (int ax = 0; ax < d; ++ax) {
                        x[ax] = h * (nidx[ax] + o[ax]);
                        inside = inside &&
                                 std::abs(x[ax]) <= cfg.eval_halfwidth + 1e-12;
                    }
                    if (!inside) return;
                    sup = std::max(sup, std::abs(f->evaluator(x) - out[oi]));
                });
            }
            row.sup_error = sup;
            row.error_floored = sup < eps_floor;
        }

        if (cfg.with_lebesgue || study == "lebesgue") {
            const auto leb = lebesgue_constant(L, fit);
            row.lebesgue = leb.value;
            row.lebesgue_tail = leb.tail_uncertainty;
        }

        rep.rows.push_back(row);
        if (row.error_floored) {
            std::ostringstream os;
            os << "error at h = " << h
               << " reached the truncation/roundoff floor; remaining scales dropped";
            rep.warnings.push_back(os.str());
            break;
        }
    }

    if (with_errors) {
        std::vector<double> lh, le;
        for (const auto& row : rep.rows)
            if (!row.error_floored && row.sup_error > 0.0) {
                lh.push_back(std::log(row.h));
                le.push_back(std::log(row.sup_error));
            }
        if (lh.size() >= 2) {
            Eigen::MatrixXd A(lh.size(), 2);
            Eigen::VectorXd b(lh.size());
            for (std::size_t i = 0; i < lh.size(); ++i) {
                A(i, 0) = 1.0;
                A(i, 1) = lh[i];
                b(i) = le[i];
            }
            const Eigen::Vector2d sol = A.colPivHouseholderQr().solve(b);
            rep.slope = sol(1);
            rep.slope_defined = true;
        } else {
            rep.warnings.push_back("too few usable scales; slope undefined");
        }
    }
    return rep;
}

} // namespace

ExperimentReport convergence_study(const KernelSpec& spec, const TestFunction& f,
                                   const std::vector<double>& h_list,
                                   const StudyConfig& cfg) {
    if (spec.family != KernelFamily::matern)
        throw std::invalid_argument("convergence study runs on Matern kernels");
    return run_study(spec, &f, h_list, cfg, "converge", false, true);
}

ExperimentReport compact_kernel_study(const KernelSpec& spec, const TestFunction& f,
                                      const std::vector<double>& h_list,
                                      const StudyConfig& cfg) {
    if (!spec.compactly_supported())
        throw std::invalid_argument("compact study needs a compactly supported kernel");
    return run_study(spec, &f, h_list, cfg, "compact", true, true);
}

ExperimentReport lebesgue_study(const KernelSpec& spec,
                                const std::vector<double>& h_list,
                                const StudyConfig& cfg) {
    return run_study(spec, nullptr, h_list, cfg, "lebesgue",
                     spec.compactly_supported(), false);
}

std::string ExperimentReport::basename() const {
    std::ostringstream os;
    os << kernel_id.substr(0, kernel_id.find(':')) << "_" << d << "d_m" << m << "_"
       << study;
    std::string s = os.str();
    return s;
}

std::string ExperimentReport::csv() const {
    std::ostringstream os;
    os << "h,sup_error,error_floored,lebesgue,lebesgue_tail,decay_A,decay_B,"
          "grid_size,radius,halo\n";
    for (const auto& r : rows) {
        os << fmt17(r.h) << ',' << fmt17(r.sup_error) << ','
           << (r.error_floored ? 1 : 0) << ',' << fmt17(r.lebesgue) << ','
           << fmt17(r.lebesgue_tail) << ',' << fmt17(r.decay_A) << ','
           << fmt17(r.decay_B) << ',' << r.grid_size << ',' << r.radius << ','
           << r.halo << '\n';
    }
    return os.str();
}

std::string ExperimentReport::json() const {
    nlohmann::ordered_json j;
    j["kernel"] = kernel_id;
    j["d"] = d;
    j["m"] = m;
    j["study"] = study;
    j["config"] = {{"eval_halfwidth", config.eval_halfwidth},
                   {"offsets_per_cell", config.offsets_per_cell},
                   {"truncation_tol", config.truncation_tol},
                   {"grid_size", config.grid_size},
                   {"with_lebesgue", config.with_lebesgue},
                   {"symbol_tol", config.symbol_tol},
                   {"coeff_tol", config.coeff_tol}};
    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
        j["rows"].push_back({{"h", r.h},
                             {"sup_error", r.sup_error},
                             {"error_floored", r.error_floored},
                             {"lebesgue", r.lebesgue},
                             {"lebesgue_tail", r.lebesgue_tail},
                             {"decay_A", r.decay_A},
                             {"decay_B", r.decay_B},
                             {"grid_size", r.grid_size},
                             {"radius", r.radius},
                             {"halo", r.halo}});
    }
    j["slope"] = slope;
    j["slope_defined"] = slope_defined;
    j["warnings"] = warnings;
    return j.dump(2);
}

} // namespace cardinal
