#include "stlwsm/phantom.hpp"
#include "stlwsm/random.hpp"

#include <cmath>
#include <vector>

namespace stlwsm {

namespace {

std::vector<double> profile(std::size_t n, Rng& rng) {
    const double pi = std::acos(-1.0);
    const double f1 = 0.5 + 1.5 * rng.uniform();
    const double f2 = 1.5 + 2.0 * rng.uniform();
    const double p1 = 2 * pi * rng.uniform();
    const double p2 = 2 * pi * rng.uniform();
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(n);
        const double s = 0.7 * std::sin(2 * pi * f1 * t + p1) + 0.3 * std::sin(2 * pi * f2 * t + p2);
        out[i] = 0.5 + 0.4 * s; // |s| <= 1
    }
    return out;
}

} // namespace

Image rank1_phantom(std::size_t size, std::uint64_t variant) {
    Rng rng(0x5eed0000ULL + variant);
    const auto u = profile(size, rng);
    const auto v = profile(size, rng);
    Image img(size, size, 1);
    for (std::size_t r = 0; r < size; ++r)
        for (std::size_t c = 0; c < size; ++c)
            img.at(r, c) = 40.0 + 180.0 * u[r] * v[c];
    return img;
}

Image rank1_phantom_color(std::size_t size, std::uint64_t variant) {
    Image img(size, size, 3);
    for (std::size_t c = 0; c < 3; ++c)
        img.set_channel(c, rank1_phantom(size, variant * 3 + c + 100));
    return img;
}

} // namespace stlwsm
