#include "CLI11.hpp"

#include "cardinal/constants.hpp"
#include "cardinal/errors.hpp"
#include "cardinal/interp.hpp"
#include "cardinal/kernels.hpp"
#include "cardinal/lagrange.hpp"
#include "cardinal/parallel.hpp"
#include "cardinal/symbol.hpp"

#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace cardinal;
namespace fs = std::filesystem;

struct Options {
    std::string kernel = "matern:m=1,d=1";
    std::string h_spec = "0.5";
    int grid = 0;
    double tol = tol::symbol_tol;
    std::string out = ".";
    int threads = 0;
};

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double parse_fraction(const std::string& s) {
    const auto slash = s.find('/');
    if (slash == std::string::npos) return std::stod(s);
    const double num = std::stod(s.substr(0, slash));
    const double den = std::stod(s.substr(slash + 1));
    if (den == 0.0) throw std::invalid_argument("zero denominator in scale");
    return num / den;
}

// "1,0.5,1/4" -> listed scales; "1..1/32" -> dyadic halving sweep.
std::vector<double> parse_h_list(const std::string& s) {
    std::vector<double> hs;
    const auto range = s.find("..");
    if (range != std::string::npos) {
        const double from = parse_fraction(s.substr(0, range));
        const double to = parse_fraction(s.substr(range + 2));
        if (!(from > 0.0) || !(to > 0.0) || to > from)
            throw std::invalid_argument("dyadic range must be from >= to > 0");
        for (double h = from; h >= to * (1.0 - 1e-12); h *= 0.5) hs.push_back(h);
        return hs;
    }
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) hs.push_back(parse_fraction(item));
    if (hs.empty()) throw std::invalid_argument("empty scale list");
    return hs;
}

void write_file(const fs::path& p, const std::string& content) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    f << content;
}

std::string base_name(const KernelSpec& spec, const std::string& study) {
    std::ostringstream os;
    os << spec.id().substr(0, spec.id().find(':')) << "_" << spec.d << "d_m"
       << spec.m << "_" << study;
    return os.str();
}

StudyConfig study_config(const Options& opt) {
    StudyConfig cfg;
    cfg.grid_size = opt.grid;
    cfg.symbol_tol = opt.tol;
    return cfg;
}

int cmd_symbol(const Options& opt) {
    const auto spec = KernelSpec::parse(opt.kernel);
    const auto hs = parse_h_list(opt.h_spec);
    const int d = spec.d;
    const int M = opt.grid > 0 ? opt.grid : tol::grid_size_default;

    std::ostringstream csv;
    csv << "h";
    for (int ax = 0; ax < d; ++ax) csv << ",l" << ax;
    for (int ax = 0; ax < d; ++ax) csv << ",t" << ax;
    csv << ",sigma,omega\n";
    nlohmann::ordered_json meta;
    meta["kernel"] = spec.id();
    meta["d"] = d;
    meta["m"] = spec.m;
    meta["grid_size"] = M;
    meta["tol"] = opt.tol;
    meta["scales"] = nlohmann::ordered_json::array();
    for (double h : hs) {
        const auto g = symbol_auto(spec, h, M, opt.tol);
        const auto w = inverse_symbol(g);
        for_each_grid_node(d, M, [&](const Coord& l, std::int64_t idx) {
            csv << fmt17(h);
            for (int ax = 0; ax < d; ++ax) csv << ',' << l[ax];
            const Point t = g.node(l);
            for (int ax = 0; ax < d; ++ax) csv << ',' << fmt17(t[ax]);
            csv << ',' << fmt17(g.values[idx]) << ',' << fmt17(w.values[idx])
                << '\n';
        });
        meta["scales"].push_back(
            {{"h", h},
             {"route", g.route == SymbolRoute::spatial ? "spatial" : "poisson"},
             {"truncation_radius", g.truncation_radius},
             {"tail_bound", g.tail_bound},
             {"infinite_origin", g.infinite_origin}});
    }
    const std::string base = base_name(spec, "symbol");
    write_file(fs::path(opt.out) / (base + ".csv"), csv.str());
    write_file(fs::path(opt.out) / (base + ".json"), meta.dump(2));
    std::cout << "wrote " << base << ".csv/.json (" << hs.size() << " scale"
              << (hs.size() == 1 ? "" : "s") << ")\n";
    return 0;
}

int cmd_lagrange(const Options& opt) {
    const auto spec = KernelSpec::parse(opt.kernel);
    const auto hs = parse_h_list(opt.h_spec);
    const int d = spec.d;
    const int M = opt.grid > 0 ? opt.grid : (d == 1 ? 64 : (d == 2 ? 32 : 16));

    std::ostringstream csv;
    csv << "h";
    for (int ax = 0; ax < d; ++ax) csv << ",k" << ax;
    csv << ",coeff\n";
    nlohmann::ordered_json meta;
    meta["kernel"] = spec.id();
    meta["d"] = d;
    meta["m"] = spec.m;
    meta["tol"] = opt.tol;
    meta["scales"] = nlohmann::ordered_json::array();
    for (double h : hs) {
        const auto g = symbol_auto(spec, h, M, opt.tol);
        const auto L = lagrange_coefficients(g);
        const auto fit = fit_decay(L);
        for_each_in_box(d, L.radius, [&](const Coord& k, std::int64_t idx) {
            csv << fmt17(h);
            for (int ax = 0; ax < d; ++ax) csv << ',' << k[ax];
            csv << ',' << fmt17(L.coeffs[idx]) << '\n';
        });
        meta["scales"].push_back({{"h", h},
                                  {"grid_size", L.grid_size},
                                  {"radius", L.radius},
                                  {"coefficient_tail", L.coefficient_tail},
                                  {"cardinal_defect", L.cardinal_defect},
                                  {"decay_A", fit.amplitude_A},
                                  {"decay_B", fit.rate_B},
                                  {"decay_residual", fit.residual},
                                  {"fit_r_min", fit.r_min},
                                  {"fit_r_max", fit.r_max},
                                  {"fit_samples", fit.samples_used}});
    }
    const std::string base = base_name(spec, "lagrange");
    write_file(fs::path(opt.out) / (base + ".csv"), csv.str());
    write_file(fs::path(opt.out) / (base + ".json"), meta.dump(2));
    std::cout << "wrote " << base << ".csv/.json\n";
    return 0;
}

int cmd_lebesgue(const Options& opt) {
    const auto spec = KernelSpec::parse(opt.kernel);
    const auto rep = lebesgue_study(spec, parse_h_list(opt.h_spec), study_config(opt));
    write_file(fs::path(opt.out) / (rep.basename() + ".csv"), rep.csv());
    write_file(fs::path(opt.out) / (rep.basename() + ".json"), rep.json());
    double lmin = 1e300, lmax = 0.0;
    for (const auto& row : rep.rows) {
        lmin = std::min(lmin, row.lebesgue);
        lmax = std::max(lmax, row.lebesgue);
    }
    std::cout << "wrote " << rep.basename() << ".csv/.json; Lebesgue range ["
              << lmin << ", " << lmax << "], max/min = " << lmax / lmin
              << (lmax / lmin <= 2.0 ? " (uniform)" : " (NOT uniform)") << "\n";
    return 0;
}

int cmd_converge(const Options& opt) {
    const auto spec = KernelSpec::parse(opt.kernel);
    const auto f = TestFunction::gaussian();
    const auto hs = parse_h_list(opt.h_spec);
    const auto rep = spec.compactly_supported()
                         ? compact_kernel_study(spec, f, hs, study_config(opt))
                         : convergence_study(spec, f, hs, study_config(opt));
    write_file(fs::path(opt.out) / (rep.basename() + ".csv"), rep.csv());
    write_file(fs::path(opt.out) / (rep.basename() + ".json"), rep.json());
    std::cout << "wrote " << rep.basename() << ".csv/.json; slope = ";
    if (rep.slope_defined)
        std::cout << rep.slope << "\n";
    else
        std::cout << "undefined\n";
    for (const auto& w : rep.warnings) std::cout << "warning: " << w << "\n";
    return 0;
}

void add_check(nlohmann::ordered_json& checks, bool& all_pass,
               const std::string& name, double value, double threshold) {
    const bool pass = value <= threshold;
    checks.push_back({{"check", name},
                      {"value", value},
                      {"threshold", threshold},
                      {"pass", pass}});
    all_pass = all_pass && pass;
}

int cmd_kernels(const Options& opt) {
    const auto spec = KernelSpec::parse(opt.kernel);
    nlohmann::ordered_json j;
    j["kernel"] = spec.id();
    auto checks = nlohmann::ordered_json::array();
    bool all_pass = true;

    // radial profile table
    std::ostringstream csv;
    csv << "r,phi,transform\n";
    const auto prof = kernel_profile(spec);
    for (int i = 0; i <= 384; ++i) {
        const double r = 6.0 * i / 384.0;
        const double ft = r > 0.0 ? radial_ft(prof, spec.d, r) : 0.0;
        csv << fmt17(r) << ',' << fmt17(kernel_radial(spec, r)) << ','
            << fmt17(ft) << '\n';
    }

    switch (spec.family) {
    case KernelFamily::matern: {
        if (spec.d == 1 && spec.m <= 2) {
            const double c = std::sqrt(M_PI / 2.0);
            double worst = 0.0;
            for (int i = 1; i <= 1000; ++i) {
                const double x = 8.0 * i / 1000.0;
                const double ref = spec.m == 1 ? c * std::exp(-x)
                                               : c * std::exp(-x) * (1.0 + x);
                worst = std::max(worst,
                                 std::abs(kernel_radial(spec, x) - ref) / ref);
            }
            add_check(checks, all_pass, "closed_form_rel", worst, 1e-12);
        }
        double worst_ft = 0.0;
        const double rho = matern_rho(spec.m, spec.d);
        const double conv = std::pow(2.0 * M_PI, -0.5 * spec.d);
        for (double r : {0.5, 2.0, 7.0, 20.0}) {
            const double ref = conv * rho * std::pow(1.0 + r * r, -double(spec.m));
            worst_ft = std::max(worst_ft, std::abs(radial_ft(prof, spec.d, r) - ref));
        }
        add_check(checks, all_pass, "transform_abs", worst_ft, 1e-6);
        break;
    }
    case KernelFamily::eta2: {
        const double ln2 = std::log(2.0);
        add_check(checks, all_pass, "value_at_0",
                  std::abs(eta2_eval(0.0) - 4.0 * ln2 / 3.0), 1e-12);
        add_check(checks, all_pass, "value_at_1",
                  std::abs(eta2_eval(1.0) - (5.0 * ln2 - 3.0) / 3.0), 1e-12);
        double worst_jump = 0.0;
        for (double knot : {1.0, 2.0})
            worst_jump = std::max(worst_jump,
                                  std::abs(eta2_eval(knot - 1e-12) -
                                           eta2_eval(knot + 1e-12)));
        add_check(checks, all_pass, "knot_continuity", worst_jump, 1e-10);
        // exact one-sided first/second derivatives of the two branches at t=1
        const double d1l = (2.0 * (ln2 - 3.0) + 3.0) / 3.0;
        const double d1r = (-4.0 + 2.0 * (ln2 + 1.0) - 1.0) / 3.0;
        const double d2l = (2.0 * (ln2 - 3.0) + 9.0) / 3.0;
        const double d2r = (4.0 + 2.0 * (ln2 + 1.0) - 3.0) / 3.0;
        add_check(checks, all_pass, "c1_jump_at_1", std::abs(d1l - d1r), 1e-14);
        add_check(checks, all_pass, "c2_jump_at_1", std::abs(d2l - d2r), 1e-14);
        double min_ft = 1e300;
        for (int i = 1; i <= 1000; ++i)
            min_ft = std::min(min_ft, radial_ft(prof, 2, 60.0 * i / 1000.0));
        add_check(checks, all_pass, "transform_positivity", -min_ft, 0.0);
        const auto pert = fit_eta2_perturbation();
        double worst_fit = 0.0;
        for (double r : {0.8, 1.7, 3.3, 9.5, 25.0, 55.0})
            worst_fit = std::max(worst_fit,
                                 std::abs(pert.transform(r) - radial_ft(prof, 2, r)));
        add_check(checks, all_pass, "fitted_transform_abs", worst_fit, 1e-6);
        break;
    }
    case KernelFamily::psi2:
    case KernelFamily::psi32: {
        const bool is32 = spec.family == KernelFamily::psi32;
        add_check(checks, all_pass, "support_radius",
                  std::abs(spec.support_radius() - 2.0), 0.0);
        if (is32) {
            add_check(checks, all_pass, "value_at_0", std::abs(psi32_eval(0.0) - 48.0),
                      1e-12);
            const auto p1 = kernel_profile(KernelSpec::compact(KernelFamily::psi2));
            double worst = 0.0;
            for (int i = 1; i <= 60; ++i) {
                const double r = 30.0 * i / 60.0;
                worst = std::max(worst,
                                 std::abs(radial_ft(prof, 3, r) - radial_ft(p1, 1, r)));
            }
            add_check(checks, all_pass, "dimension_walk_abs", worst, 1e-6);
        } else {
            add_check(checks, all_pass, "value_at_1", std::abs(psi2_eval(1.0) - 1.0),
                      1e-12);
            double min_ft = 1e300;
            for (int i = 1; i <= 1000; ++i)
                min_ft = std::min(min_ft, radial_ft(prof, 1, 60.0 * i / 1000.0));
            add_check(checks, all_pass, "transform_positivity", -min_ft, 0.0);
        }
        break;
    }
    default:
        throw std::invalid_argument("no battery for this kernel family");
    }

    j["checks"] = checks;
    j["all_pass"] = all_pass;
    const std::string fam = spec.id().substr(0, spec.id().find(':'));
    write_file(fs::path(opt.out) / (fam + "_profile.csv"), csv.str());
    write_file(fs::path(opt.out) / (fam + "_kernels.json"), j.dump(2));
    std::cout << "wrote " << fam << "_profile.csv and " << fam
              << "_kernels.json; " << (all_pass ? "all checks pass" : "CHECKS FAILED")
              << "\n";
    return all_pass ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cardinal interpolation on scaled lattices: symbols, Lagrange "
                 "functions, Lebesgue constants, convergence experiments"};
    app.set_help_flag("--help", "print this help message and exit");
    app.set_config("--config");
    app.require_subcommand(1);

    Options opt;
    app.add_option("--kernel", opt.kernel,
                   "kernel id: matern:m=M,d=D | eta2 | psi2 | psi32")
        ->capture_default_str();
    app.add_option("--h", opt.h_spec,
                   "scales: comma list (1,0.5,1/4) or dyadic range (1..1/32)")
        ->capture_default_str();
    app.add_option("--grid", opt.grid, "symbol grid size per axis (power of two)");
    app.add_option("--tol", opt.tol, "symbol truncation tolerance")
        ->capture_default_str();
    app.add_option("--out", opt.out, "output directory")->capture_default_str();
    app.add_option("--threads", opt.threads,
                   "worker threads (default: MATERN_CARDINAL_THREADS or hardware)");

    auto* sc_symbol = app.add_subcommand("symbol", "tabulate the cardinal symbol and its inverse");
    auto* sc_lagrange = app.add_subcommand("lagrange", "Lagrange coefficients and decay fits");
    auto* sc_lebesgue = app.add_subcommand("lebesgue", "Lebesgue constant sweep");
    auto* sc_converge = app.add_subcommand("converge", "convergence-rate study (Gaussian target)");
    auto* sc_kernels = app.add_subcommand("kernels", "kernel profile tables and verification battery");
    for (auto* sc : {sc_symbol, sc_lagrange, sc_lebesgue, sc_converge, sc_kernels})
        sc->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        int threads = opt.threads;
        if (threads <= 0) {
            if (const char* env = std::getenv("MATERN_CARDINAL_THREADS"))
                threads = std::atoi(env);
        }
        if (threads > 0) cardinal::set_thread_count(threads);
        std::filesystem::create_directories(opt.out);

        if (sc_symbol->parsed()) return cmd_symbol(opt);
        if (sc_lagrange->parsed()) return cmd_lagrange(opt);
        if (sc_lebesgue->parsed()) return cmd_lebesgue(opt);
        if (sc_converge->parsed()) return cmd_converge(opt);
        return cmd_kernels(opt);
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what()
                  << "\nsupported kernels: matern:m=M,d=D, eta2, psi2, psi32\n";
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "accuracy budget failure: " << e.what() << "\n";
        return 2;
    }
}
