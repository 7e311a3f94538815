#pragma once

#include <cstdint>
#include <random>

namespace stlwsm {

/// SplitMix64 finalizer, used to derive well-separated engine seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seedable, splittable generator with a platform-independent output stream.
///
/// The engine is std::mt19937_64 (its output sequence is fixed by the C++
/// standard) seeded with splitmix64(seed). Uniform and normal variates are
/// derived here rather than through <random> distributions, whose algorithms
/// are implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

    /// Independent child stream; a pure function of (seed, stream).
    Rng split(std::uint64_t stream) const {
        return Rng(splitmix64(seed_ ^ splitmix64(stream + 0x632be59bd9b4e019ULL)));
    }

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Standard normal via the Marsaglia polar method.
    double normal();

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

} // namespace stlwsm
