#include "stlwsm/metrics.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace stlwsm {

namespace {

void require_same_shape(const Image& a, const Image& b, const char* who) {
    if (!a.same_shape(b))
        throw std::invalid_argument(std::string(who) + ": image dimensions differ");
}

double ssim_plane(const Image& a, const Image& b, std::size_t c) {
    const std::size_t wh = std::min(kSsimWindow, a.height());
    const std::size_t ww = std::min(kSsimWindow, a.width());
    const double n = static_cast<double>(wh * ww);
    double total = 0.0;
    std::size_t windows = 0;
    for (std::size_t r0 = 0; r0 + wh <= a.height(); ++r0) {
        for (std::size_t c0 = 0; c0 + ww <= a.width(); ++c0) {
            double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
            for (std::size_t r = r0; r < r0 + wh; ++r) {
                for (std::size_t q = c0; q < c0 + ww; ++q) {
                    const double x = a.at(c, r, q), y = b.at(c, r, q);
                    sa += x;
                    sb += y;
                    saa += x * x;
                    sbb += y * y;
                    sab += x * y;
                }
            }
            const double mx = sa / n, my = sb / n;
            const double vx = std::max(0.0, saa / n - mx * mx);
            const double vy = std::max(0.0, sbb / n - my * my);
            const double cxy = sab / n - mx * my;
            total += ((2 * mx * my + kSsimC1) * (2 * cxy + kSsimC2)) /
                     ((mx * mx + my * my + kSsimC1) * (vx + vy + kSsimC2));
            ++windows;
        }
    }
    return total / static_cast<double>(windows);
}

} // namespace

double mse(const Image& a, const Image& b) {
    require_same_shape(a, b, "mse");
    if (a.size() == 0)
        throw std::invalid_argument("mse: empty image");
    double acc = 0.0;
    const auto da = a.data(), db = b.data();
    for (std::size_t i = 0; i < da.size(); ++i) {
        const double d = da[i] - db[i];
        acc += d * d;
    }
    return acc / static_cast<double>(da.size());
}

double mse_where(const Image& a, const Image& b, const PixelMask& mask, bool select_kept) {
    require_same_shape(a, b, "mse_where");
    if (mask.width() != a.width() || mask.height() != a.height())
        throw std::invalid_argument("mse_where: mask dimensions differ");
    double acc = 0.0;
    std::size_t count = 0;
    for (std::size_t c = 0; c < a.channels(); ++c)
        for (std::size_t r = 0; r < a.height(); ++r)
            for (std::size_t q = 0; q < a.width(); ++q)
                if (mask.kept(r, q) == select_kept) {
                    const double d = a.at(c, r, q) - b.at(c, r, q);
                    acc += d * d;
                    ++count;
                }
    if (count == 0)
        throw std::invalid_argument("mse_where: selection is empty");
    return acc / static_cast<double>(count);
}

double psnr_from_mse(double mse_value, PsnrMode mode) {
    if (mse_value == 0.0)
        return std::numeric_limits<double>::infinity();
    const double peak = mode == PsnrMode::Standard ? 255.0 * 255.0 : 255.0;
    return 10.0 * std::log10(peak / mse_value);
}

double psnr(const Image& a, const Image& b, PsnrMode mode) {
    return psnr_from_mse(mse(a, b), mode);
}

double ssim(const Image& a, const Image& b) {
    require_same_shape(a, b, "ssim");
    if (a.size() == 0)
        throw std::invalid_argument("ssim: empty image");
    double acc = 0.0;
    for (std::size_t c = 0; c < a.channels(); ++c)
        acc += ssim_plane(a, b, c);
    return acc / static_cast<double>(a.channels());
}

MetricPair compare(const Image& reference, const Image& test, PsnrMode mode) {
    return {psnr(reference, test, mode), ssim(reference, test)};
}

} // namespace stlwsm
