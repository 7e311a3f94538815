#include "stlwsm/lowrank.hpp"
#include "stlwsm/metrics.hpp"
#include "stlwsm/phantom.hpp"
#include "stlwsm/pipeline.hpp"
#include "stlwsm/random.hpp"
#include "stlwsm/transform.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace stlwsm;

namespace {

Image textured(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    Image img(n, n, 1);
    for (double& v : img.data())
        v = 30.0 + 190.0 * rng.uniform();
    return img;
}

DenoiseConfig small_config() {
    DenoiseConfig cfg = DenoiseConfig::for_sigma(20);
    cfg.group_size = 20;
    cfg.outer_iters = 2;
    return cfg;
}

} // namespace

TEST(Schedule, TableRowsAndBoundaries) {
    EXPECT_EQ(schedule_for(20), (ScheduleRow{6, 70, 0.54}));
    EXPECT_EQ(schedule_for(50), (ScheduleRow{8, 120, 0.58}));
    EXPECT_EQ(schedule_for(75), (ScheduleRow{9, 140, 0.58}));
    EXPECT_EQ(schedule_for(1), (ScheduleRow{6, 70, 0.54}));
    EXPECT_EQ(schedule_for(20.0001), (ScheduleRow{7, 90, 0.56}));
    EXPECT_EQ(schedule_for(40), (ScheduleRow{7, 90, 0.56}));
    EXPECT_EQ(schedule_for(60), (ScheduleRow{8, 120, 0.58}));
    EXPECT_EQ(schedule_for(60.5), (ScheduleRow{9, 140, 0.58}));
    EXPECT_THROW(schedule_for(0), std::invalid_argument);
    EXPECT_THROW(schedule_for(-5), std::invalid_argument);
}

TEST(Config, DefaultsAndValidation) {
    const DenoiseConfig cfg = DenoiseConfig::for_sigma(30);
    EXPECT_EQ(cfg.patch_side, 7u);
    EXPECT_EQ(cfg.outer_iters, 3u);
    EXPECT_EQ(cfg.effective_sparsity(), 5u); // ceil(0.1 * 49)
    EXPECT_EQ(cfg.effective_reference_stride(), 3u);
    EXPECT_NO_THROW(cfg.validate());

    DenoiseConfig bad = cfg;
    bad.delta = 1.0;
    EXPECT_THROW(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.outer_iters = 0;
    EXPECT_THROW(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.sparsity = 50;
    EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(RestoreGroup, ComposesPublicOperations) {
    Rng rng(1);
    Matrix x(36, 30);
    for (Eigen::Index i = 0; i < x.size(); ++i)
        x.data()[i] = rng.uniform();
    const DenoiseConfig cfg = DenoiseConfig::for_sigma(20);
    const GroupUpdate got = restore_group(x, dct_matrix(36), cfg);

    const std::size_t s = cfg.effective_sparsity();
    const Matrix w = update_transform(x, sparse_code(dct_matrix(36), x, s), cfg.lambda);
    const Matrix recon = reconstruct(w, sparse_code(w, x, s));
    const Matrix expected = weighted_svt_self(recon, cfg.c, 30);
    EXPECT_LT((got.transform - w).norm(), 1e-10);
    EXPECT_LT((got.estimate - expected).norm(), 1e-8 * expected.norm());
}

TEST(Denoise, NoiseFreeDegenerateConfigIsIdentity) {
    const Image clean = textured(24, 2);
    DenoiseConfig cfg = small_config();
    cfg.sparsity = 36;
    cfg.c = 1e-20;
    cfg.delta = 0.0;
    const Restored r = denoise(clean, cfg);
    double err = 0;
    for (std::size_t i = 0; i < clean.size(); ++i)
        err = std::max(err, std::abs(r.image.data()[i] - clean.data()[i]));
    EXPECT_LT(err, 1e-6);
}

TEST(Denoise, SerialAndParallelBitIdentical) {
    const Image noisy = add_gaussian_noise(textured(32, 3), 20, 3);
    DenoiseConfig cfg = small_config();
    cfg.execution = Execution::Serial;
    const Image serial = denoise(noisy, cfg).image;
    cfg.execution = Execution::Parallel;
    EXPECT_EQ(denoise(noisy, cfg).image, serial);
}

TEST(Denoise, ReportAndTrace) {
    const Image clean = rank1_phantom(32, 1);
    const Image noisy = add_gaussian_noise(clean, 20, 4);
    const DenoiseConfig cfg = small_config();
    const Restored r = denoise(noisy, cfg, &clean);
    EXPECT_EQ(r.report.iterations, 2u);
    ASSERT_EQ(r.report.psnr_trace.size(), 2u);
    EXPECT_DOUBLE_EQ(r.report.psnr_trace.back(), r.report.psnr_out);
    EXPECT_DOUBLE_EQ(r.report.psnr_in, psnr(clean, noisy));
    EXPECT_GT(r.report.psnr_out, r.report.psnr_in);
    EXPECT_GT(r.report.ssim_out, r.report.ssim_in);
    EXPECT_GE(r.report.seconds, 0.0);

    const Restored blind = denoise(noisy, cfg);
    EXPECT_TRUE(std::isnan(blind.report.psnr_trace[0]));
    EXPECT_EQ(blind.image, r.image);
}

TEST(Denoise, RejectsBadInputs) {
    const DenoiseConfig cfg = small_config();
    EXPECT_THROW(denoise(Image(4, 4, 1), cfg), std::invalid_argument);
    EXPECT_THROW(denoise(Image(16, 16, 3), cfg), std::invalid_argument);
    EXPECT_THROW(denoise_color(Image(16, 16, 1), cfg), std::invalid_argument);
}

TEST(DenoiseColor, ChannelIndependence) {
    const Image gray = add_gaussian_noise(textured(24, 5), 20, 5);
    Image rgb(24, 24, 3);
    for (std::size_t c = 0; c < 3; ++c)
        rgb.set_channel(c, gray);
    const DenoiseConfig cfg = small_config();
    const Image out = denoise_color(rgb, cfg).image;
    const Image single = denoise(gray, cfg).image;
    for (std::size_t c = 0; c < 3; ++c)
        EXPECT_EQ(out.channel(c), single);
}

TEST(DenoiseColor, PermutationEquivariant) {
    const Image noisy = add_gaussian_noise(rank1_phantom_color(24, 2), 20, 6);
    Image perm(24, 24, 3);
    const std::size_t order[3] = {2, 0, 1};
    for (std::size_t c = 0; c < 3; ++c)
        perm.set_channel(c, noisy.channel(order[c]));
    const DenoiseConfig cfg = small_config();
    const Image a = denoise_color(noisy, cfg).image, b = denoise_color(perm, cfg).image;
    for (std::size_t c = 0; c < 3; ++c)
        EXPECT_EQ(b.channel(c), a.channel(order[c]));
}

TEST(DenoiseColor, PhantomGain) {
    const Image clean = rank1_phantom_color(64, 3);
    const Image noisy = add_gaussian_noise(clean, 20, 7);
    const Restored r = denoise_color(noisy, DenoiseConfig::for_sigma(20), &clean);
    EXPECT_GE(r.report.psnr_out - r.report.psnr_in, 4.0);
    EXPECT_EQ(r.report.psnr_trace.size(), 3u);
    EXPECT_NEAR(r.report.psnr_trace.back(), r.report.psnr_out, 1e-9);
}

TEST(Fill, ConstantImageSingleHole) {
    Image img(5, 5, 1, 42.0);
    PixelMask m(5, 5);
    m.set(2, 2, false);
    img.at(2, 2) = 0.0;
    EXPECT_EQ(neighborhood_fill(img, m).at(2, 2), 42.0);
}

TEST(Fill, PropagatesIntoLargeHoles) {
    Image img(9, 9, 1, 10.0);
    PixelMask m(9, 9, false);
    m.set(0, 0, true);
    const Image out = neighborhood_fill(img, m);
    for (double v : out.data())
        EXPECT_EQ(v, 10.0);
    EXPECT_THROW(neighborhood_fill(img, PixelMask(9, 9, false)), std::invalid_argument);
}

TEST(Inpaint, NothingMissingIsIdentity) {
    const Image img = textured(24, 8);
    const Restored r = inpaint(img, PixelMask(24, 24), inpaint_config(0.0));
    EXPECT_EQ(r.image, img);
}

TEST(Inpaint, KeptPixelsExactAndDeterministic) {
    const Image clean = rank1_phantom_color(32, 4);
    const PixelMask m = make_mask(32, 32, 0.3, 9);
    const Image degraded = apply_mask(clean, m);
    DenoiseConfig cfg = inpaint_config(0.3);
    cfg.outer_iters = 2;
    const Restored r = inpaint(degraded, m, cfg, &clean);
    for (std::size_t c = 0; c < 3; ++c)
        for (std::size_t y = 0; y < 32; ++y)
            for (std::size_t x = 0; x < 32; ++x)
                if (m.kept(y, x))
                    ASSERT_EQ(r.image.at(c, y, x), degraded.at(c, y, x));
    EXPECT_EQ(inpaint(degraded, m, cfg).image, r.image);
    EXPECT_GT(r.report.psnr_out, psnr(clean, neighborhood_fill(degraded, m)));
}

TEST(Inpaint, ConfigFollowsRate) {
    EXPECT_EQ(inpaint_config(0.3).patch_side, 7u);
    EXPECT_EQ(inpaint_config(0.1).patch_side, 6u);
    EXPECT_EQ(inpaint_config(0.5).patch_side, 8u);
    EXPECT_EQ(inpaint_config(0.3).delta, 0.0);
    EXPECT_THROW(inpaint_config(1.2), std::invalid_argument);
}
