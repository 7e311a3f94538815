#include "stlwsm/image.hpp"
#include "stlwsm/random.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string>

namespace stlwsm {

Image::Image(std::size_t width, std::size_t height, std::size_t channels, double fill)
    : width_(width), height_(height), channels_(channels),
      data_(width * height * channels, fill) {
    if (channels != 1 && channels != 3)
        throw std::invalid_argument("Image: channels must be 1 or 3");
}

Image::Image(std::size_t width, std::size_t height, std::size_t channels, std::vector<double> data)
    : width_(width), height_(height), channels_(channels), data_(std::move(data)) {
    if (channels != 1 && channels != 3)
        throw std::invalid_argument("Image: channels must be 1 or 3");
    if (data_.size() != width * height * channels)
        throw std::invalid_argument("Image: data length does not match dimensions");
    if (!std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); }))
        throw std::invalid_argument("Image: non-finite sample");
}

Image Image::channel(std::size_t c) const {
    if (c >= channels_)
        throw std::out_of_range("Image::channel: index out of range");
    const auto first = data_.begin() + static_cast<std::ptrdiff_t>(c * pixels());
    return Image(width_, height_, 1,
                 std::vector<double>(first, first + static_cast<std::ptrdiff_t>(pixels())));
}

void Image::set_channel(std::size_t c, const Image& plane) {
    if (c >= channels_ || plane.width() != width_ || plane.height() != height_ ||
        plane.channels() != 1)
        throw std::invalid_argument("Image::set_channel: shape mismatch");
    std::copy(plane.data().begin(), plane.data().end(),
              data_.begin() + static_cast<std::ptrdiff_t>(c * pixels()));
}

std::size_t PixelMask::missing_count() const noexcept {
    return static_cast<std::size_t>(std::count(kept_.begin(), kept_.end(), std::uint8_t{0}));
}

double PixelMask::missing_fraction() const noexcept {
    return kept_.empty() ? 0.0
                         : static_cast<double>(missing_count()) / static_cast<double>(kept_.size());
}

ImageFormatError::ImageFormatError(Kind kind, std::size_t offset, const std::string& what)
    : std::runtime_error(what + " (byte offset " + std::to_string(offset) + ")"),
      kind_(kind), offset_(offset) {}

namespace {

using Kind = ImageFormatError::Kind;

struct HeaderReader {
    std::span<const std::uint8_t> bytes;
    std::size_t pos = 0;

    void skip_space_and_comments() {
        while (pos < bytes.size()) {
            if (std::isspace(bytes[pos])) {
                ++pos;
            } else if (bytes[pos] == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n')
                    ++pos;
            } else {
                break;
            }
        }
    }

    std::size_t read_uint(const char* field) {
        skip_space_and_comments();
        const std::size_t start = pos;
        std::size_t value = 0;
        while (pos < bytes.size() && std::isdigit(bytes[pos])) {
            value = value * 10 + static_cast<std::size_t>(bytes[pos] - '0');
            if (value > (1u << 24))
                throw ImageFormatError(Kind::MalformedHeader, start,
                                       std::string("PNM header: ") + field + " too large");
            ++pos;
        }
        if (pos == start)
            throw ImageFormatError(Kind::MalformedHeader, start,
                                   std::string("PNM header: expected ") + field);
        return value;
    }
};

} // namespace

Image decode_pnm(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '6'))
        throw ImageFormatError(Kind::MalformedHeader, 0, "PNM header: expected magic P5 or P6");
    const std::size_t channels = bytes[1] == '5' ? 1 : 3;

    HeaderReader rd{bytes, 2};
    if (rd.pos >= bytes.size() || !std::isspace(bytes[rd.pos]))
        throw ImageFormatError(Kind::MalformedHeader, rd.pos, "PNM header: missing whitespace after magic");
    const std::size_t width = rd.read_uint("width");
    const std::size_t height = rd.read_uint("height");
    rd.skip_space_and_comments();
    const std::size_t maxval_at = rd.pos;
    const std::size_t maxval = rd.read_uint("maxval");
    if (width == 0 || height == 0)
        throw ImageFormatError(Kind::MalformedHeader, maxval_at, "PNM header: zero dimension");
    if (maxval != 255)
        throw ImageFormatError(Kind::UnsupportedMaxval, maxval_at,
                               "PNM header: unsupported maxval " + std::to_string(maxval));
    if (rd.pos >= bytes.size() || !std::isspace(bytes[rd.pos]))
        throw ImageFormatError(Kind::MalformedHeader, rd.pos, "PNM header: missing whitespace after maxval");
    const std::size_t payload = rd.pos + 1;

    const std::size_t n = width * height;
    if (bytes.size() - payload < n * channels)
        throw ImageFormatError(Kind::TruncatedPayload, bytes.size(),
                               "PNM payload: expected " + std::to_string(n * channels) +
                                   " bytes, found " + std::to_string(bytes.size() - payload));

    std::vector<double> data(n * channels);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t c = 0; c < channels; ++c)
            data[c * n + i] = bytes[payload + i * channels + c];
    return Image(width, height, channels, std::move(data));
}

Image load_image(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("load_image: cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return decode_pnm(bytes);
}

std::vector<std::uint8_t> encode_pnm(const Image& img) {
    if (img.channels() != 1 && img.channels() != 3)
        throw std::invalid_argument("encode_pnm: channels must be 1 or 3");
    const std::string header = std::string(img.channels() == 1 ? "P5" : "P6") + "\n" +
                               std::to_string(img.width()) + " " +
                               std::to_string(img.height()) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    const std::size_t n = img.pixels();
    const auto data = img.data();
    out.reserve(out.size() + img.size());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < img.channels(); ++c) {
            const double v = data[c * n + i];
            if (!(v >= 0.0 && v <= 255.0) || v != std::round(v))
                throw std::invalid_argument("encode_pnm: sample not an integer in [0,255]; "
                                            "call clamp_quantize first");
            out.push_back(static_cast<std::uint8_t>(v));
        }
    }
    return out;
}

void save_image(const Image& img, const std::filesystem::path& path) {
    const auto bytes = encode_pnm(img);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("save_image: cannot open " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw std::runtime_error("save_image: write failed for " + path.string());
}

Image add_gaussian_noise(const Image& img, double sigma, std::uint64_t seed) {
    if (!(sigma >= 0.0))
        throw std::invalid_argument("add_gaussian_noise: sigma must be non-negative");
    std::vector<double> data(img.data().begin(), img.data().end());
    if (sigma > 0.0) {
        Rng rng(seed);
        for (double& v : data)
            v += sigma * rng.normal();
    }
    return Image(img.width(), img.height(), img.channels(), std::move(data));
}

PixelMask make_mask(std::size_t width, std::size_t height, double missing_rate, std::uint64_t seed) {
    if (!(missing_rate >= 0.0 && missing_rate <= 1.0))
        throw std::invalid_argument("make_mask: missing_rate must lie in [0, 1]");
    PixelMask mask(width, height);
    Rng rng(seed);
    for (std::size_t r = 0; r < height; ++r)
        for (std::size_t c = 0; c < width; ++c)
            mask.set(r, c, !(rng.uniform() < missing_rate));
    return mask;
}

void save_mask(const PixelMask& mask, const std::filesystem::path& path) {
    Image img(mask.width(), mask.height(), 1);
    for (std::size_t r = 0; r < mask.height(); ++r)
        for (std::size_t c = 0; c < mask.width(); ++c)
            img.at(r, c) = mask.kept(r, c) ? 255.0 : 0.0;
    save_image(img, path);
}

PixelMask load_mask(const std::filesystem::path& path) {
    const Image img = load_image(path);
    if (img.channels() != 1)
        throw std::runtime_error("load_mask: mask must be a single-channel PGM");
    PixelMask mask(img.width(), img.height());
    for (std::size_t r = 0; r < img.height(); ++r)
        for (std::size_t c = 0; c < img.width(); ++c)
            mask.set(r, c, img.at(r, c) >= 128.0);
    return mask;
}

Image apply_mask(const Image& img, const PixelMask& mask) {
    if (img.width() != mask.width() || img.height() != mask.height())
        throw std::invalid_argument("apply_mask: dimension mismatch");
    Image out = img;
    for (std::size_t c = 0; c < img.channels(); ++c)
        for (std::size_t r = 0; r < img.height(); ++r)
            for (std::size_t col = 0; col < img.width(); ++col)
                if (!mask.kept(r, col))
                    out.at(c, r, col) = 0.0;
    return out;
}

Image clamp_quantize(const Image& img) {
    std::vector<double> data(img.data().begin(), img.data().end());
    for (double& v : data)
        v = std::round(std::clamp(v, 0.0, 255.0));
    return Image(img.width(), img.height(), img.channels(), std::move(data));
}

} // namespace stlwsm
