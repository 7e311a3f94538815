#include "stlwsm/image.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>

using namespace stlwsm;
namespace fs = std::filesystem;

namespace {

std::vector<std::uint8_t> bytes_of(const std::string& s) { return {s.begin(), s.end()}; }

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "stlwsm_test_image";
    fs::create_directories(dir);
    return dir / name;
}

std::vector<std::uint8_t> read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

Image ramp(std::size_t w, std::size_t h, std::size_t ch) {
    Image img(w, h, ch);
    for (std::size_t i = 0; i < img.size(); ++i)
        img.data()[i] = static_cast<double>((i * 37) % 256);
    return img;
}

} // namespace

TEST(Pnm, DecodesP5) {
    const Image img = decode_pnm(bytes_of(std::string("P5\n2 2\n255\n") + '\x00' + '\x80' + '\xff' + '\x40'));
    ASSERT_EQ(img.width(), 2u);
    ASSERT_EQ(img.channels(), 1u);
    EXPECT_EQ(img.at(0, 0), 0.0);
    EXPECT_EQ(img.at(0, 1), 128.0);
    EXPECT_EQ(img.at(1, 0), 255.0);
    EXPECT_EQ(img.at(1, 1), 64.0);
}

TEST(Pnm, DecodesP6ChannelPlanar) {
    const std::string payload = {1, 2, 3, 4, 5, 6, 7, 8, 9};
    const Image img = decode_pnm(bytes_of("P6\n3 1\n255\n" + payload));
    ASSERT_EQ(img.channels(), 3u);
    EXPECT_EQ(img.at(0, 0, 0), 1.0);
    EXPECT_EQ(img.at(1, 0, 0), 2.0);
    EXPECT_EQ(img.at(2, 0, 2), 9.0);
    EXPECT_EQ(img.at(0, 0, 1), 4.0);
}

TEST(Pnm, HeaderCommentsAndWhitespace) {
    const Image img = decode_pnm(bytes_of("P5 # c\n1\t1 # d\n255\n\x07"));
    EXPECT_EQ(img.at(0, 0), 7.0);
}

TEST(Pnm, DistinctErrorsWithOffsets) {
    auto kind_of = [](const std::string& s) {
        try {
            decode_pnm(bytes_of(s));
        } catch (const ImageFormatError& e) {
            return std::pair{e.kind(), e.offset()};
        }
        return std::pair{ImageFormatError::Kind::MalformedHeader, std::size_t(-1)};
    };
    EXPECT_EQ(kind_of("P7\n1 1\n255\n\x01").first, ImageFormatError::Kind::MalformedHeader);
    EXPECT_EQ(kind_of("P7\n1 1\n255\n\x01").second, 0u);
    const auto trunc = kind_of("P5\n2 2\n255\n\x01\x02");
    EXPECT_EQ(trunc.first, ImageFormatError::Kind::TruncatedPayload);
    EXPECT_EQ(trunc.second, 13u);
    const auto maxval = kind_of("P5\n1 1\n65535\n\x01\x02");
    EXPECT_EQ(maxval.first, ImageFormatError::Kind::UnsupportedMaxval);
    EXPECT_EQ(maxval.second, 7u);
    EXPECT_EQ(kind_of("P5\nx 1\n255\n").first, ImageFormatError::Kind::MalformedHeader);
}

TEST(Pnm, SaveFormats) {
    const auto one = encode_pnm(Image(1, 1, 1, 255.0));
    EXPECT_EQ(one, bytes_of("P5\n1 1\n255\n\xff"));
    const auto flat = encode_pnm(Image(3, 2, 1, 128.0));
    EXPECT_EQ(flat.size(), 11u + 6u);
    for (std::size_t i = 11; i < flat.size(); ++i)
        EXPECT_EQ(flat[i], 128);
    EXPECT_THROW(encode_pnm(Image(1, 1, 1, 12.5)), std::invalid_argument);
    EXPECT_THROW(encode_pnm(Image(1, 1, 1, 256.0)), std::invalid_argument);
}

TEST(Pnm, FileRoundTripIsByteExact) {
    for (std::size_t ch : {1u, 3u}) {
        const Image img = ramp(17, 9, ch);
        const fs::path a = scratch("rt_a" + std::to_string(ch)), b = scratch("rt_b" + std::to_string(ch));
        save_image(img, a);
        const Image back = load_image(a);
        EXPECT_EQ(back, img);
        save_image(back, b);
        EXPECT_EQ(read_file(a), read_file(b));
    }
}

TEST(Pnm, MissingFile) {
    EXPECT_THROW(load_image(scratch("does_not_exist.pgm")), std::runtime_error);
}

TEST(Noise, ZeroSigmaIsIdentity) {
    const Image img = ramp(8, 8, 1);
    EXPECT_EQ(add_gaussian_noise(img, 0.0, 3), img);
}

TEST(Noise, StatisticsAndDeterminism) {
    const Image img(256, 256, 1, 100.0);
    const Image a = add_gaussian_noise(img, 20.0, 42);
    EXPECT_EQ(a, add_gaussian_noise(img, 20.0, 42));
    EXPECT_NE(a, add_gaussian_noise(img, 20.0, 43));
    double sum = 0, sq = 0;
    for (double v : a.data()) {
        sum += v - 100.0;
        sq += (v - 100.0) * (v - 100.0);
    }
    const double n = static_cast<double>(a.size());
    const double mean = sum / n;
    EXPECT_LT(std::abs(mean), 4 * 20.0 / std::sqrt(n));
    EXPECT_NEAR(std::sqrt(sq / n - mean * mean), 20.0, 0.5);
}

TEST(Noise, NotClampedAndRejectsNegativeSigma) {
    const Image a = add_gaussian_noise(Image(64, 64, 1, 0.0), 30.0, 1);
    double lo = 0;
    for (double v : a.data())
        lo = std::min(lo, v);
    EXPECT_LT(lo, 0.0);
    EXPECT_THROW(add_gaussian_noise(a, -1.0, 1), std::invalid_argument);
}

TEST(Mask, Extremes) {
    EXPECT_EQ(make_mask(10, 10, 0.0, 1).missing_count(), 0u);
    EXPECT_EQ(make_mask(10, 10, 1.0, 1).missing_count(), 100u);
    EXPECT_THROW(make_mask(10, 10, 1.5, 1), std::invalid_argument);
    EXPECT_THROW(make_mask(10, 10, -0.1, 1), std::invalid_argument);
}

TEST(Mask, RealizedRateAndPurity) {
    const PixelMask m = make_mask(512, 512, 0.3, 9);
    EXPECT_NEAR(m.missing_fraction(), 0.3, 0.01);
    EXPECT_EQ(m, make_mask(512, 512, 0.3, 9));
    EXPECT_NE(m, make_mask(512, 512, 0.3, 10));
}

TEST(Mask, FileRoundTripAndApply) {
    const PixelMask m = make_mask(13, 7, 0.4, 2);
    const fs::path p = scratch("mask.pgm");
    save_mask(m, p);
    EXPECT_EQ(load_mask(p), m);

    const Image img = ramp(13, 7, 3);
    const Image masked = apply_mask(img, m);
    for (std::size_t c = 0; c < 3; ++c)
        for (std::size_t r = 0; r < 7; ++r)
            for (std::size_t k = 0; k < 13; ++k)
                EXPECT_EQ(masked.at(c, r, k), m.kept(r, k) ? img.at(c, r, k) : 0.0);
}

TEST(Quantize, ClampAndRound) {
    const Image img(4, 1, 1, std::vector<double>{-3.2, 270.0, 127.5, 12.49});
    const Image q = clamp_quantize(img);
    EXPECT_EQ(q.at(0, 0), 0.0);
    EXPECT_EQ(q.at(0, 1), 255.0);
    EXPECT_EQ(q.at(0, 2), 128.0);
    EXPECT_EQ(q.at(0, 3), 12.0);
    const Image integral = ramp(5, 5, 1);
    EXPECT_EQ(clamp_quantize(integral), integral);
}

TEST(ImageType, InvariantsEnforced) {
    EXPECT_THROW(Image(2, 2, 2), std::invalid_argument);
    EXPECT_THROW(Image(2, 2, 1, std::vector<double>(3)), std::invalid_argument);
    EXPECT_THROW(Image(1, 1, 1, std::vector<double>{NAN}), std::invalid_argument);
    const Image img = ramp(4, 3, 3);
    Image copy(4, 3, 3);
    for (std::size_t c = 0; c < 3; ++c)
        copy.set_channel(c, img.channel(c));
    EXPECT_EQ(copy, img);
}
