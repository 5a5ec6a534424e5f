#ifndef CARDINAL_FFT_HPP
#define CARDINAL_FFT_HPP

#include <complex>
#include <vector>

namespace cardinal {

using cdouble = std::complex<double>;

// In-place radix-2 FFT; n must be a power of two.
// sign = -1: forward (e^{-i...}), sign = +1: inverse without the 1/n factor.
void fft_inplace(std::vector<cdouble>& a, int sign);

// Separable d-dimensional transform of a row-major M^d array (last axis fastest).
void fft_nd(std::vector<cdouble>& a, int d, int M, int sign);

// Naive separable DFT of real data carried in extended precision end to end;
// sign as in fft_nd. Used where a transform of widely scaled positive data
// would otherwise lose its smallest outputs to cancellation.
void dft_nd_extended(const std::vector<long double>& in, int d, int M, int sign,
                     std::vector<double>& out_re, std::vector<double>& out_im);

bool is_power_of_two(int n);
int next_power_of_two(int n);

// Linear d-dimensional convolution of two cubic arrays with half-sizes ra, rb
// (side 2r+1, indices -r..r, row-major). Returns the central part with
// half-size rout <= ra + rb.
std::vector<double> convolve_nd(const std::vector<double>& a, int ra,
                                const std::vector<double>& b, int rb, int d,
                                int rout);

} // namespace cardinal

#endif
