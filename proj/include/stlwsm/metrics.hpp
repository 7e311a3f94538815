#pragma once

#include "stlwsm/image.hpp"

#include <cmath>

namespace stlwsm {

enum class PsnrMode {
    Standard, ///< 10 log10(255^2 / MSE)
    Paper,    ///< 10 log10(255 / MSE), the variant printed in the source tables
};

struct MetricPair {
    double psnr = 0.0;
    double ssim = 0.0;
};

/// Window side used by ssim(); uniform weights, stride 1.
inline constexpr std::size_t kSsimWindow = 8;
inline constexpr double kSsimC1 = (0.01 * 255.0) * (0.01 * 255.0);
inline constexpr double kSsimC2 = (0.03 * 255.0) * (0.03 * 255.0);

double mse(const Image& a, const Image& b);

/// Mean squared error over the pixels where `mask.kept == select_kept`, all channels.
double mse_where(const Image& a, const Image& b, const PixelMask& mask, bool select_kept);

/// +infinity marks identical inputs (MSE = 0).
double psnr_from_mse(double mse_value, PsnrMode mode = PsnrMode::Standard);
double psnr(const Image& a, const Image& b, PsnrMode mode = PsnrMode::Standard);
inline bool is_identical_marker(double psnr_db) { return std::isinf(psnr_db) && psnr_db > 0; }

/// Mean local SSIM over all 8x8 windows (clipped to the image when smaller);
/// averaged over channels for colour images.
double ssim(const Image& a, const Image& b);

MetricPair compare(const Image& reference, const Image& test, PsnrMode mode = PsnrMode::Standard);

} // namespace stlwsm
