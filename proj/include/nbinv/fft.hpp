#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace nbinv {

// Radix-2 helpers for trigonometric-polynomial arithmetic: linear convolution
// of coefficient arrays and evaluation/recovery on uniform circle grids.

std::size_t next_pow2(std::size_t n);

// In-place iterative radix-2 transform. Forward: X_k = sum_j x_j e^{-2pi i jk/N}.
// Inverse applies the conjugate kernel and divides by N. N must be a power of 2.
void fft_pow2(std::vector<std::complex<double>>& a, bool inverse);

// Linear convolution; switches to FFT for large inputs.
std::vector<std::complex<double>> convolve(
    const std::vector<std::complex<double>>& a,
    const std::vector<std::complex<double>>& b);

// Values f(2*pi*j/G) of f(t) = sum_{q=-d}^{d} c[q+d] e^{iqt}, j = 0..G-1.
// G must be a power of 2 with G >= 2d+1.
std::vector<std::complex<double>> eval_on_circle(
    const std::vector<std::complex<double>>& coeffs, std::size_t grid);

// Recovers c_q = (1/G) sum_j v_j e^{-2pi i qj/G} for |q| <= d. Exact when the
// samples come from a trig polynomial of degree <= (G-1)/2.
std::vector<std::complex<double>> coeffs_from_circle(
    const std::vector<std::complex<double>>& values, std::size_t half_width);

} // namespace nbinv
