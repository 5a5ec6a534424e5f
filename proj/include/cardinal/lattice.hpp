#ifndef CARDINAL_LATTICE_HPP
#define CARDINAL_LATTICE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>

namespace cardinal {

// d <= 3 throughout; points are carried as fixed arrays with a runtime d.
using Coord = std::array<int, 3>;
using Point = std::array<double, 3>;

inline std::int64_t pow_int(int base, int exp) {
    std::int64_t r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

// Iterate k over the box {-r..r}^d (row-major, first axis slowest).
template <typename F>
void for_each_in_box(int d, int r, F&& f) {
    const int side = 2 * r + 1;
    Coord k{0, 0, 0};
    const std::int64_t n = pow_int(side, d);
    for (std::int64_t idx = 0; idx < n; ++idx) {
        std::int64_t rem = idx;
        for (int ax = d - 1; ax >= 0; --ax) {
            k[ax] = static_cast<int>(rem % side) - r;
            rem /= side;
        }
        f(k, idx);
    }
}

// Iterate l over {0..M-1}^d.
template <typename F>
void for_each_grid_node(int d, int M, F&& f) {
    Coord l{0, 0, 0};
    const std::int64_t n = pow_int(M, d);
    for (std::int64_t idx = 0; idx < n; ++idx) {
        std::int64_t rem = idx;
        for (int ax = d - 1; ax >= 0; --ax) {
            l[ax] = static_cast<int>(rem % M);
            rem /= M;
        }
        f(l, idx);
    }
}

inline std::int64_t box_index(int d, int r, const Coord& k) {
    const int side = 2 * r + 1;
    std::int64_t idx = 0;
    for (int ax = 0; ax < d; ++ax) idx = idx * side + (k[ax] + r);
    return idx;
}

inline int chebyshev_norm(int d, const Coord& k) {
    int m = 0;
    for (int ax = 0; ax < d; ++ax) m = std::max(m, k[ax] < 0 ? -k[ax] : k[ax]);
    return m;
}

inline double norm2(int d, const Point& p) {
    double s = 0.0;
    for (int ax = 0; ax < d; ++ax) s += p[ax] * p[ax];
    return s;
}

inline double norm(int d, const Point& p) {
    double s = 0.0;
    for (int ax = 0; ax < d; ++ax) s += p[ax] * p[ax];
    return s > 0.0 ? std::sqrt(s) : 0.0;
}

inline double norm_l1(int d, const Point& p) {
    double s = 0.0;
    for (int ax = 0; ax < d; ++ax) s += p[ax] < 0 ? -p[ax] : p[ax];
    return s;
}

} // namespace cardinal

#endif
