#include "cardinal/fft.hpp"

#include "cardinal/parallel.hpp"

#include <cmath>
#include <stdexcept>

namespace cardinal {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

int next_power_of_two(int n) {
    int p = 1;
    while (p < n) p <<= 1;
    return p;
}

void fft_inplace(std::vector<cdouble>& a, int sign) {
    const int n = static_cast<int>(a.size());
    if (!is_power_of_two(n)) throw std::invalid_argument("fft: size must be a power of two");
    for (int i = 1, j = 0; i < n; ++i) {
        int bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (int len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * M_PI / len;
        const cdouble wl(std::cos(ang), std::sin(ang));
        for (int i = 0; i < n; i += len) {
            cdouble w(1.0, 0.0);
            for (int k = 0; k < len / 2; ++k) {
                const cdouble u = a[i + k];
                const cdouble v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

void fft_nd(std::vector<cdouble>& a, int d, int M, int sign) {
    int stride = 1;
    const int total = static_cast<int>(a.size());
    const int nlines = total / M;
    for (int axis = d - 1; axis >= 0; --axis) {
        // lines are disjoint; transform them in parallel
        parallel_for(nlines, [&](std::int64_t l) {
            const int block = static_cast<int>(l) / stride;
            const int offset = static_cast<int>(l) % stride;
            const int base = block * stride * M + offset;
            std::vector<cdouble> line(M);
            for (int i = 0; i < M; ++i) line[i] = a[base + i * stride];
            fft_inplace(line, sign);
            for (int i = 0; i < M; ++i) a[base + i * stride] = line[i];
        });
        stride *= M;
    }
}

void dft_nd_extended(const std::vector<long double>& in, int d, int M, int sign,
                     std::vector<double>& out_re, std::vector<double>& out_im) {
    using cld = std::complex<long double>;
    const std::size_t total = in.size();
    std::vector<cld> w(M), buf(in.begin(), in.end());
    for (int r = 0; r < M; ++r) {
        const long double ang =
            sign * 2.0L * 3.14159265358979323846264338327950288L * r / M;
        w[r] = cld(cosl(ang), sinl(ang));
    }
    std::size_t stride = 1;
    const std::size_t nlines = total / M;
    for (int axis = d - 1; axis >= 0; --axis) {
        const std::size_t block = stride * M;
        // lines are disjoint; transform them in parallel
        parallel_for(static_cast<std::int64_t>(nlines), [&](std::int64_t ln) {
            const std::size_t b = (static_cast<std::size_t>(ln) / stride) * block;
            const std::size_t o = static_cast<std::size_t>(ln) % stride;
            const std::size_t base = b + o;
            std::vector<cld> line(M), out(M);
            for (int i = 0; i < M; ++i) line[i] = buf[base + i * stride];
            for (int j = 0; j < M; ++j) {
                cld s(0.0L, 0.0L);
                std::size_t idx = 0;
                for (int r = 0; r < M; ++r) {
                    s += line[r] * w[idx];
                    idx += j;
                    if (idx >= static_cast<std::size_t>(M)) idx -= M;
                }
                out[j] = s;
            }
            for (int i = 0; i < M; ++i) buf[base + i * stride] = out[i];
        });
        stride *= M;
    }
    out_re.resize(total);
    out_im.resize(total);
    for (std::size_t i = 0; i < total; ++i) {
        out_re[i] = static_cast<double>(buf[i].real());
        out_im[i] = static_cast<double>(buf[i].imag());
    }
}

std::vector<double> convolve_nd(const std::vector<double>& a, int ra,
                                const std::vector<double>& b, int rb, int d,
                                int rout) {
    const int need = 2 * (ra + rb) + 1;
    const int M = next_power_of_two(need);
    int total = 1;
    for (int i = 0; i < d; ++i) total *= M;
    std::vector<cdouble> fa(total, 0.0), fb(total, 0.0);

    auto scatter = [&](const std::vector<double>& src, int r, std::vector<cdouble>& dst) {
        const int side = 2 * r + 1;
        int n = 1;
        for (int i = 0; i < d; ++i) n *= side;
        for (int idx = 0; idx < n; ++idx) {
            int rem = idx, pos = 0;
            for (int ax = 0; ax < d; ++ax) {
                int stride_src = 1;
                for (int j = ax + 1; j < d; ++j) stride_src *= side;
                const int c = rem / stride_src - r; // coordinate in [-r, r]
                rem %= stride_src;
                pos = pos * M + ((c % M) + M) % M;
            }
            dst[pos] += src[idx];
        }
    };
    scatter(a, ra, fa);
    scatter(b, rb, fb);
    fft_nd(fa, d, M, -1);
    fft_nd(fb, d, M, -1);
    for (int i = 0; i < total; ++i) fa[i] *= fb[i];
    fft_nd(fa, d, M, +1);
    const double scale = 1.0 / total;

    const int side_out = 2 * rout + 1;
    int nout = 1;
    for (int i = 0; i < d; ++i) nout *= side_out;
    std::vector<double> out(nout);
    for (int idx = 0; idx < nout; ++idx) {
        int rem = idx, pos = 0;
        for (int ax = 0; ax < d; ++ax) {
            int stride_out = 1;
            for (int j = ax + 1; j < d; ++j) stride_out *= side_out;
            const int c = rem / stride_out - rout;
            rem %= stride_out;
            pos = pos * M + ((c % M) + M) % M;
        }
        out[idx] = fa[pos].real() * scale;
    }
    return out;
}

} // namespace cardinal
