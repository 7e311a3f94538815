#pragma once

#include "stlwsm/image.hpp"

#include <cstddef>
#include <cstdint>

namespace stlwsm {

/// Smooth rank-1 test image 40 + 180 * u(row) * v(col) with u, v in [0.1, 0.9]
/// built from low-frequency sinusoids. `variant` selects frequencies and
/// phases; the image is exactly rank 1 before any quantization.
Image rank1_phantom(std::size_t size, std::uint64_t variant = 0);

/// Three-channel version: channel k is rank1_phantom with its own variant,
/// so the channels differ.
Image rank1_phantom_color(std::size_t size, std::uint64_t variant = 0);

} // namespace stlwsm
