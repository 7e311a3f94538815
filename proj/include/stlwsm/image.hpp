#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <vector>

namespace stlwsm {

/// Real-valued image, channel-planar: sample (c, row, col) lives at
/// data[(c * height + row) * width + col]. Nominal range is [0, 255].
class Image {
public:
    Image() = default;
    Image(std::size_t width, std::size_t height, std::size_t channels, double fill = 0.0);
    Image(std::size_t width, std::size_t height, std::size_t channels, std::vector<double> data);

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    std::size_t channels() const noexcept { return channels_; }
    std::size_t pixels() const noexcept { return width_ * height_; }
    std::size_t size() const noexcept { return data_.size(); }

    double& at(std::size_t c, std::size_t row, std::size_t col) {
        return data_[(c * height_ + row) * width_ + col];
    }
    double at(std::size_t c, std::size_t row, std::size_t col) const {
        return data_[(c * height_ + row) * width_ + col];
    }
    double& at(std::size_t row, std::size_t col) { return at(0, row, col); }
    double at(std::size_t row, std::size_t col) const { return at(0, row, col); }

    std::span<double> data() noexcept { return data_; }
    std::span<const double> data() const noexcept { return data_; }

    /// Single-channel copy of channel c.
    Image channel(std::size_t c) const;
    void set_channel(std::size_t c, const Image& plane);

    bool same_shape(const Image& other) const noexcept {
        return width_ == other.width_ && height_ == other.height_ &&
               channels_ == other.channels_;
    }

    friend bool operator==(const Image&, const Image&) = default;

private:
    std::size_t width_ = 0;
    std::size_t height_ = 0;
    std::size_t channels_ = 0;
    std::vector<double> data_;
};

/// Per-pixel observation mask; true means the pixel was observed.
class PixelMask {
public:
    PixelMask() = default;
    PixelMask(std::size_t width, std::size_t height, bool kept = true)
        : width_(width), height_(height), kept_(width * height, kept) {}

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    bool kept(std::size_t row, std::size_t col) const { return kept_[row * width_ + col] != 0; }
    void set(std::size_t row, std::size_t col, bool k) { kept_[row * width_ + col] = k ? 1 : 0; }

    std::size_t missing_count() const noexcept;
    /// Realized fraction of dropped pixels.
    double missing_fraction() const noexcept;

    friend bool operator==(const PixelMask&, const PixelMask&) = default;

private:
    std::size_t width_ = 0;
    std::size_t height_ = 0;
    std::vector<std::uint8_t> kept_;
};

class ImageFormatError : public std::runtime_error {
public:
    enum class Kind { MalformedHeader, TruncatedPayload, UnsupportedMaxval };
    ImageFormatError(Kind kind, std::size_t offset, const std::string& what);
    Kind kind() const noexcept { return kind_; }
    std::size_t offset() const noexcept { return offset_; }

private:
    Kind kind_;
    std::size_t offset_;
};

/// Reads binary PGM (P5) or PPM (P6) with maxval 255. PPM pixels are
/// de-interleaved into three planes.
Image load_image(const std::filesystem::path& path);
Image decode_pnm(std::span<const std::uint8_t> bytes);

/// Writes P5 for one channel or P6 for three. Samples must already be
/// integral values in [0, 255] (see clamp_quantize).
void save_image(const Image& img, const std::filesystem::path& path);
std::vector<std::uint8_t> encode_pnm(const Image& img);

/// img + N(0, sigma^2) i.i.d. per sample, unclamped.
Image add_gaussian_noise(const Image& img, double sigma, std::uint64_t seed);

/// Drops each pixel independently with probability missing_rate.
PixelMask make_mask(std::size_t width, std::size_t height, double missing_rate,
                    std::uint64_t seed);

/// Mask stored as a P5 file: 255 for kept pixels, 0 for missing ones.
void save_mask(const PixelMask& mask, const std::filesystem::path& path);
PixelMask load_mask(const std::filesystem::path& path);

/// Multiplies every channel by the mask (missing samples become 0).
Image apply_mask(const Image& img, const PixelMask& mask);

/// Clamp to [0, 255], then round half away from zero.
Image clamp_quantize(const Image& img);

} // namespace stlwsm
