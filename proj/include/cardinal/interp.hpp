#ifndef CARDINAL_INTERP_HPP
#define CARDINAL_INTERP_HPP

#include "cardinal/constants.hpp"
#include "cardinal/kernels.hpp"
#include "cardinal/lagrange.hpp"
#include "cardinal/lattice.hpp"

#include <functional>
#include <string>
#include <vector>

namespace cardinal {

// Lattice samples f(hj) on the box ||hj - center||_inf <= radius.
struct DataWindow {
    int d = 1;
    double h = 1.0;
    Point center{0.0, 0.0, 0.0};
    double radius = 0.0;
    Coord lo{0, 0, 0};
    Coord hi{0, 0, 0};
    std::vector<double> values; // row-major over the box

    static DataWindow sample(const std::function<double(const Point&)>& f, int d,
                             double h, const Point& center, double radius);
    bool contains(const Coord& j) const;
    double value(const Coord& j) const; // throws OutOfWindowError
};

struct TestFunction {
    std::string name;
    std::function<double(const Point&)> evaluator;
    bool admissible = false; // integrable (1+||.||^2)^m-weighted transform

    static TestFunction gaussian(); // e^{-||x||^2}, transform Gaussian
};

// Halo width from the fitted decay envelope: smallest W with A e^{-BW} <= tol.
int halo_width(const DecayFit& fit, double tol = tol::window_tol);

// Truncated interpolant sum_{||j - j0||_inf <= W} f(hj) chi(x/h - j) with j0
// the nearest lattice node; the data window must cover the halo.
double interpolate(const LagrangeFunction& L, const DataWindow& data,
                   const Point& x, int W);

struct LebesgueEstimate {
    double value = 0.0;            // lower bound from sampled sup
    double tail_uncertainty = 0.0; // decay-envelope bound on the dropped tail
    Point maximizer{0.0, 0.0, 0.0};
};

// sup over y in [0,1)^d of sum_j |chi(y-j)|, sampled S per axis and refined
// around the maximizer; the halo tail is reported, not added.
LebesgueEstimate lebesgue_constant(const LagrangeFunction& L, const DecayFit& fit,
                                   int samples_per_axis = tol::lebesgue_samples_per_axis);

struct StudyConfig {
    double eval_halfwidth = 1.0; // physical half-width of the error window
    int offsets_per_cell = tol::error_offsets_per_cell;
    double truncation_tol = tol::window_tol;
    int grid_size = 0;           // 0: per-dimension default
    bool with_lebesgue = false;
    double symbol_tol = tol::symbol_tol;
    double coeff_tol = tol::coeff_tol;
};

struct ScaleRow {
    double h = 0.0;
    double sup_error = 0.0;
    bool error_floored = false; // below 100x machine epsilon
    double lebesgue = 0.0;
    double lebesgue_tail = 0.0;
    double decay_A = 0.0;
    double decay_B = 0.0;
    int grid_size = 0;
    int radius = 0;
    int halo = 0;
};

struct ExperimentReport {
    std::string kernel_id;
    int d = 1;
    int m = 1;
    std::string study; // "converge", "compact", "lebesgue"
    std::vector<ScaleRow> rows;
    double slope = 0.0;
    bool slope_defined = false;
    std::vector<std::string> warnings;
    StudyConfig config;

    std::string basename() const; // {kernel}_{d}d_m{m}_{study}
    std::string csv() const;      // per-h rows, 17 significant digits
    std::string json() const;     // full, self-describing
};

// sup |f - I_h f| over a dyadic offset grid of the central window per h,
// with the log-log least-squares slope. Throws std::invalid_argument for a
// non-admissible f or a non-decreasing h list.
ExperimentReport convergence_study(const KernelSpec& spec, const TestFunction& f,
                                   const std::vector<double>& h_list,
                                   const StudyConfig& cfg = {});

// Same error sweep for a compactly supported kernel (exact spatial symbol);
// the interpolation error upper-bounds the distance to the translate span.
ExperimentReport compact_kernel_study(const KernelSpec& spec, const TestFunction& f,
                                      const std::vector<double>& h_list,
                                      const StudyConfig& cfg = {});

// Lebesgue-constant sweep (no error column).
ExperimentReport lebesgue_study(const KernelSpec& spec,
                                const std::vector<double>& h_list,
                                const StudyConfig& cfg = {});

} // namespace cardinal

#endif
