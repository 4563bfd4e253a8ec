#include "nbinv/fft.hpp"

#include "nbinv/errors.hpp"

#include <cmath>

namespace nbinv {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
using C = std::complex<double>;
} // namespace

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

void fft_pow2(std::vector<C>& a, bool inverse) {
    const std::size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0)
        raise(ErrorCode::DimensionMismatch, "fft_pow2: size must be a power of two");

    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? kTwoPi : -kTwoPi) / static_cast<double>(len);
        const C wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            C w{1.0, 0.0};
            for (std::size_t j = 0; j < len / 2; ++j) {
                C u = a[i + j];
                C v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
    if (inverse) {
        const double inv_n = 1.0 / static_cast<double>(n);
        for (auto& x : a) x *= inv_n;
    }
}

std::vector<C> convolve(const std::vector<C>& a, const std::vector<C>& b) {
    if (a.empty() || b.empty()) return {};
    const std::size_t out_size = a.size() + b.size() - 1;
    // Direct products stay exact for typical element sizes; FFT only when the
    // quadratic cost bites (long power accumulators).
    if (std::min(a.size(), b.size()) <= 160) {
        std::vector<C> out(out_size, C{0.0, 0.0});
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (a[i] == C{0.0, 0.0}) continue;
            for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
        }
        return out;
    }
    const std::size_t n = next_pow2(out_size);
    std::vector<C> fa(a.begin(), a.end());
    std::vector<C> fb(b.begin(), b.end());
    fa.resize(n);
    fb.resize(n);
    fft_pow2(fa, false);
    fft_pow2(fb, false);
    for (std::size_t i = 0; i < n; ++i) fa[i] *= fb[i];
    fft_pow2(fa, true);
    fa.resize(out_size);
    return fa;
}

std::vector<C> eval_on_circle(const std::vector<C>& coeffs, std::size_t grid) {
    if (coeffs.size() % 2 == 0)
        raise(ErrorCode::DimensionMismatch, "eval_on_circle: coefficient array must have odd length");
    const std::size_t d = coeffs.size() / 2;
    if (grid < coeffs.size() || (grid & (grid - 1)) != 0)
        raise(ErrorCode::DimensionMismatch, "eval_on_circle: grid must be a power of two >= 2d+1");
    std::vector<C> bins(grid, C{0.0, 0.0});
    for (std::size_t idx = 0; idx < coeffs.size(); ++idx) {
        const long q = static_cast<long>(idx) - static_cast<long>(d);
        const std::size_t bin = static_cast<std::size_t>((q % static_cast<long>(grid) + static_cast<long>(grid)) % static_cast<long>(grid));
        bins[bin] += coeffs[idx];
    }
    // v_j = sum_q c_q e^{+2pi i qj/G} is an inverse transform without the 1/G.
    fft_pow2(bins, true);
    for (auto& v : bins) v *= static_cast<double>(grid);
    return bins;
}

std::vector<C> coeffs_from_circle(const std::vector<C>& values, std::size_t half_width) {
    const std::size_t grid = values.size();
    if (grid == 0 || (grid & (grid - 1)) != 0)
        raise(ErrorCode::DimensionMismatch, "coeffs_from_circle: grid must be a power of two");
    if (2 * half_width + 1 > grid)
        raise(ErrorCode::DimensionMismatch, "coeffs_from_circle: grid too coarse for degree");
    std::vector<C> bins(values);
    fft_pow2(bins, false);
    const double inv_g = 1.0 / static_cast<double>(grid);
    std::vector<C> out(2 * half_width + 1);
    for (std::size_t idx = 0; idx < out.size(); ++idx) {
        const long q = static_cast<long>(idx) - static_cast<long>(half_width);
        const std::size_t bin = static_cast<std::size_t>((q % static_cast<long>(grid) + static_cast<long>(grid)) % static_cast<long>(grid));
        out[idx] = bins[bin] * inv_g;
    }
    return out;
}

} // namespace nbinv
