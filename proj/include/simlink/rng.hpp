#pragma once

#include <cstdint>
#include <complex>
#include <random>

namespace simlink {

// splitmix64; used to derive independent sub-stream seeds from
// (seed, stream id, draw index) tuples so parallel draws stay reproducible.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0) {
    return splitmix64(splitmix64(base ^ (a * 0x9e3779b97f4a7c15ULL)) ^ b);
}

inline std::mt19937_64 make_engine(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0) {
    return std::mt19937_64(derive_seed(base, a, b));
}

// Circularly-symmetric complex Gaussian, unit variance (0.5 per component).
template <typename Engine>
std::complex<double> complex_gaussian(Engine& eng) {
    std::normal_distribution<double> n(0.0, 1.0);
    const double re = n(eng);
    const double im = n(eng);
    return {re / std::sqrt(2.0), im / std::sqrt(2.0)};
}

}  // namespace simlink
