#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <string>

namespace nbinv {

// Deterministic random source. mt19937_64 has a fully specified stream and the
// gaussian transform below is our own, so a seed replays to identical values
// on every platform/build.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // uniform in [0, 1)
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // standard normal via Box-Muller, one spare cached
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        while (u1 <= 0.0) u1 = uniform();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double theta = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    std::complex<double> gaussian_complex() {
        double re = gaussian();
        double im = gaussian();
        return {re, im};
    }

    std::size_t index(std::size_t bound) {
        return static_cast<std::size_t>(next_u64() % bound);
    }

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// splitmix64; used to derive independent per-trial seeds from a master seed.
inline std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, const std::string& tag,
                                 std::uint64_t index) {
    std::uint64_t h = master;
    for (unsigned char c : tag) h = mix_seed(h ^ c);
    return mix_seed(h ^ (0x517cc1b727220a95ull * (index + 1)));
}

} // namespace nbinv
