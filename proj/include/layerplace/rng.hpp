#ifndef LAYERPLACE_RNG_HPP
#define LAYERPLACE_RNG_HPP

// Deterministic randomness helpers.
//
// std::mt19937_64's output sequence is pinned by the standard, but the
// standard *distributions* are not, so everything that must reproduce
// byte-identically across toolchains (uniform deviates, shuffles, seed
// derivation) is spelled out here instead of going through <random>
// distribution objects.

#include <cstdint>
#include <random>
#include <vector>

namespace layerplace {

// splitmix64 step; the usual finalizer used to spread seed material.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Derives an independent stream seed from (base, a, b). Used for per-trial
// and per-restart seeds: derive_seed(master, row, trial).
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0) {
    std::uint64_t s = base;
    std::uint64_t z = splitmix64(s);
    s = z ^ (a * 0x9e3779b97f4a7c15ull + 0x7f4a7c15u);
    z = splitmix64(s);
    s = z ^ (b * 0xbf58476d1ce4e5b9ull + 0x1ce4e5b9u);
    return splitmix64(s);
}

// Uniform double in [0, 1) from the top 53 bits of one engine draw.
inline double uniform01(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

inline double uniform_in(std::mt19937_64& gen, double lo, double hi) {
    return lo + (hi - lo) * uniform01(gen);
}

// Engine draw reduced modulo n. The modulo bias is < n / 2^64, irrelevant
// here; what matters is that the result is identical on every platform.
inline std::size_t uniform_index(std::mt19937_64& gen, std::size_t n) {
    return static_cast<std::size_t>(gen() % static_cast<std::uint64_t>(n));
}

// Fisher-Yates with the modulo draw above.
template <typename T>
void deterministic_shuffle(std::vector<T>& v, std::mt19937_64& gen) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = uniform_index(gen, i);
        std::swap(v[i - 1], v[j]);
    }
}

} // namespace layerplace

#endif
