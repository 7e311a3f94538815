#include "stlwsm/pipeline.hpp"

#include "stlwsm/lowrank.hpp"
#include "stlwsm/metrics.hpp"
#include "stlwsm/transform.hpp"

#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace stlwsm {

ScheduleRow schedule_for(double sigma) {
    if (!(sigma > 0.0))
        throw std::invalid_argument("schedule_for: sigma must be positive");
    if (sigma <= 20.0)
        return {6, 70, 0.54};
    if (sigma <= 40.0)
        return {7, 90, 0.56};
    if (sigma <= 60.0)
        return {8, 120, 0.58};
    return {9, 140, 0.58};
}

DenoiseConfig DenoiseConfig::for_sigma(double sigma) {
    const ScheduleRow row = schedule_for(sigma);
    DenoiseConfig cfg;
    cfg.sigma = sigma;
    cfg.patch_side = row.patch_side;
    cfg.group_size = row.group_size;
    cfg.lambda = row.lambda;
    return cfg;
}

std::size_t DenoiseConfig::effective_sparsity() const {
    if (sparsity != 0)
        return sparsity;
    const std::size_t p = patch_side * patch_side;
    return (p + 9) / 10;
}

std::size_t DenoiseConfig::effective_reference_stride() const {
    if (reference_stride != 0)
        return reference_stride;
    return std::max<std::size_t>(1, patch_side / 2);
}

void DenoiseConfig::validate() const {
    if (outer_iters < 1)
        throw std::invalid_argument("DenoiseConfig: outer_iters must be at least 1");
    if (!(delta >= 0.0 && delta < 1.0))
        throw std::invalid_argument("DenoiseConfig: delta must lie in [0, 1)");
    if (transform_iters < 1)
        throw std::invalid_argument("DenoiseConfig: transform_iters must be at least 1");
    if (patch_side == 0 || group_size == 0 || step == 0)
        throw std::invalid_argument("DenoiseConfig: patch side, group size and step must be positive");
    if (!(lambda > 0.0))
        throw std::invalid_argument("DenoiseConfig: lambda must be positive");
    if (!(c > 0.0))
        throw std::invalid_argument("DenoiseConfig: c must be positive");
    if (!(intensity_scale > 0.0))
        throw std::invalid_argument("DenoiseConfig: intensity_scale must be positive");
    if (effective_sparsity() > patch_side * patch_side)
        throw std::invalid_argument("DenoiseConfig: sparsity exceeds the patch vector length");
}

GroupUpdate restore_group(const Matrix& x, const Matrix& initial_transform,
                          const DenoiseConfig& cfg) {
    Vector mean;
    const Matrix* data = &x;
    Matrix centered;
    if (cfg.subtract_group_mean) {
        mean = x.rowwise().mean();
        centered = x.colwise() - mean;
        data = &centered;
    }

    const std::size_t s = cfg.effective_sparsity();
    Matrix mu = sparse_code(initial_transform, *data, s);
    TransformUpdate up = update_transform_factored(*data, mu, cfg.lambda);
    for (std::size_t k = 1; k < cfg.transform_iters; ++k) {
        mu = sparse_code(up.w, *data, s);
        up = update_transform_factored(*data, mu, cfg.lambda);
    }
    // The code subproblem is solved against the updated transform.
    if (cfg.recode_after_update)
        mu = sparse_code(up.w, *data, s);
    GroupUpdate out;
    out.transform = std::move(up.w);

    // W is invertible, so W^+ mu = W^{-1} mu; the factored inverse saves an SVD.
    const SvdResult f = svd_full(up.w_inverse * mu);
    const WeightVector w = compute_weights(f.s, cfg.c, static_cast<std::size_t>(x.cols()));
    out.estimate = weighted_svt(f, w);
    for (Eigen::Index k = 0; k < f.s.size(); ++k)
        out.rank += f.s(k) > w.weights(k) ? 1 : 0;
    if (cfg.subtract_group_mean)
        out.estimate.colwise() += mean;
    return out;
}

namespace {

Image scaled(const Image& img, double factor) {
    std::vector<double> data(img.data().begin(), img.data().end());
    for (double& v : data)
        v *= factor;
    return Image(img.width(), img.height(), img.channels(), std::move(data));
}

// a + t * (b - a)
Image blend(const Image& a, const Image& b, double t) {
    std::vector<double> data(a.size());
    const auto da = a.data(), db = b.data();
    for (std::size_t i = 0; i < data.size(); ++i)
        data[i] = da[i] + t * (db[i] - da[i]);
    return Image(a.width(), a.height(), a.channels(), std::move(data));
}

double elapsed_seconds(std::chrono::steady_clock::time_point since) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - since).count();
}

void require_fits(const Image& img, const DenoiseConfig& cfg) {
    if (cfg.patch_side > std::min(img.width(), img.height()))
        throw std::invalid_argument("image " + std::to_string(img.width()) + "x" +
                                    std::to_string(img.height()) + " is smaller than the " +
                                    std::to_string(cfg.patch_side) + "-pixel patch");
}

} // namespace

Image restore_pass(const Image& input, const DenoiseConfig& cfg, std::vector<Matrix>& transforms) {
    const PatchSet ps = extract_patches(input, cfg.patch_side, cfg.step);
    const std::vector<std::size_t> refs = reference_indices(ps, cfg.effective_reference_stride());
    if (transforms.size() != refs.size())
        transforms.assign(refs.size(), Matrix());

    const std::size_t m = std::min(cfg.group_size, ps.count());
    const Matrix dct = dct_matrix(ps.dim());

    std::vector<PatchGroup> groups(refs.size());
    std::vector<GroupEstimate> estimates(refs.size());

    auto work = [&](std::size_t i) {
        groups[i] = group_similar(ps, refs[i], m, cfg.search_radius);
        const Matrix& init = (!cfg.warm_start || transforms[i].size() == 0) ? dct : transforms[i];
        GroupUpdate up = restore_group(groups[i].data, init, cfg);
        transforms[i] = std::move(up.transform);
        estimates[i].group = &groups[i];
        estimates[i].data = std::move(up.estimate);
        estimates[i].weight = cfg.weighted_aggregation ? 1.0 / (1.0 + static_cast<double>(up.rank)) : 1.0;
    };

    const auto n = static_cast<std::ptrdiff_t>(refs.size());
    if (cfg.execution == Execution::Serial) {
        for (std::ptrdiff_t i = 0; i < n; ++i)
            work(static_cast<std::size_t>(i));
    } else {
        std::exception_ptr failure;
        std::mutex failure_mutex;
#pragma omp parallel for schedule(dynamic, 8)
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            try {
                work(static_cast<std::size_t>(i));
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
            }
        }
        if (failure)
            std::rethrow_exception(failure);
    }

    // Serial merge in reference order keeps the result independent of the
    // thread count.
    return aggregate(ps, estimates, &input);
}

Restored denoise(const Image& noisy, const DenoiseConfig& cfg, const Image* clean) {
    if (noisy.channels() != 1)
        throw std::invalid_argument("denoise: single-channel image required (see denoise_color)");
    if (clean && !clean->same_shape(noisy))
        throw std::invalid_argument("denoise: reference image shape differs");
    cfg.validate();
    require_fits(noisy, cfg);

    const auto start = std::chrono::steady_clock::now();
    const Image observed = scaled(noisy, cfg.intensity_scale);
    Image estimate = observed;
    std::vector<Matrix> transforms;

    Restored out;
    for (std::size_t it = 0; it < cfg.outer_iters; ++it) {
        const Image input = it == 0 ? observed : blend(estimate, observed, cfg.delta);
        estimate = restore_pass(input, cfg, transforms);
        out.report.psnr_trace.push_back(
            clean ? psnr(*clean, scaled(estimate, 1.0 / cfg.intensity_scale))
                  : std::numeric_limits<double>::quiet_NaN());
    }

    out.image = scaled(estimate, 1.0 / cfg.intensity_scale);
    out.report.iterations = cfg.outer_iters;
    out.report.seconds = elapsed_seconds(start);
    if (clean) {
        out.report.psnr_in = psnr(*clean, noisy);
        out.report.ssim_in = ssim(*clean, noisy);
        out.report.psnr_out = psnr(*clean, out.image);
        out.report.ssim_out = ssim(*clean, out.image);
    }
    return out;
}

Restored denoise_color(const Image& noisy, const DenoiseConfig& cfg, const Image* clean) {
    if (noisy.channels() != 3)
        throw std::invalid_argument("denoise_color: three-channel image required, got " +
                                    std::to_string(noisy.channels()));
    if (clean && !clean->same_shape(noisy))
        throw std::invalid_argument("denoise_color: reference image shape differs");

    const auto start = std::chrono::steady_clock::now();
    Restored out;
    out.image = Image(noisy.width(), noisy.height(), 3);
    std::vector<std::vector<double>> traces;
    for (std::size_t c = 0; c < 3; ++c) {
        const Image plane = noisy.channel(c);
        const Image ref_plane = clean ? clean->channel(c) : Image();
        Restored r = denoise(plane, cfg, clean ? &ref_plane : nullptr);
        out.image.set_channel(c, r.image);
        traces.push_back(std::move(r.report.psnr_trace));
    }

    out.report.iterations = cfg.outer_iters;
    out.report.seconds = elapsed_seconds(start);
    // Pooled PSNR per iteration: average the per-channel MSEs.
    for (std::size_t it = 0; it < cfg.outer_iters; ++it) {
        if (!clean) {
            out.report.psnr_trace.push_back(std::numeric_limits<double>::quiet_NaN());
            continue;
        }
        double pooled = 0.0;
        for (const auto& t : traces)
            pooled += 255.0 * 255.0 / std::pow(10.0, t[it] / 10.0);
        out.report.psnr_trace.push_back(psnr_from_mse(pooled / 3.0));
    }
    if (clean) {
        out.report.psnr_in = psnr(*clean, noisy);
        out.report.ssim_in = ssim(*clean, noisy);
        out.report.psnr_out = psnr(*clean, out.image);
        out.report.ssim_out = ssim(*clean, out.image);
    }
    return out;
}

Image neighborhood_fill(const Image& degraded, const PixelMask& mask) {
    if (mask.width() != degraded.width() || mask.height() != degraded.height())
        throw std::invalid_argument("neighborhood_fill: mask dimensions differ");
    if (mask.missing_count() == mask.width() * mask.height())
        throw std::invalid_argument("neighborhood_fill: every pixel is masked");

    const std::size_t w = degraded.width(), h = degraded.height();
    Image out = degraded;
    std::vector<std::uint8_t> known(w * h);
    for (std::size_t r = 0; r < h; ++r)
        for (std::size_t c = 0; c < w; ++c)
            known[r * w + c] = mask.kept(r, c) ? 1 : 0;

    bool pending = true;
    while (pending) {
        pending = false;
        std::vector<std::uint8_t> next = known;
        for (std::size_t r = 0; r < h; ++r) {
            for (std::size_t c = 0; c < w; ++c) {
                if (known[r * w + c])
                    continue;
                std::size_t count = 0;
                std::vector<double> acc(degraded.channels(), 0.0);
                for (std::size_t rr = r > 0 ? r - 1 : 0; rr <= std::min(r + 1, h - 1); ++rr)
                    for (std::size_t cc = c > 0 ? c - 1 : 0; cc <= std::min(c + 1, w - 1); ++cc)
                        if (known[rr * w + cc]) {
                            ++count;
                            for (std::size_t ch = 0; ch < degraded.channels(); ++ch)
                                acc[ch] += out.at(ch, rr, cc);
                        }
                if (count == 0) {
                    pending = true;
                    continue;
                }
                // Values filled in this sweep only become visible next sweep.
                for (std::size_t ch = 0; ch < degraded.channels(); ++ch)
                    out.at(ch, r, c) = acc[ch] / static_cast<double>(count);
                next[r * w + c] = 1;
            }
        }
        known = std::move(next);
    }
    return out;
}

DenoiseConfig inpaint_config(double missing_rate) {
    if (!(missing_rate >= 0.0 && missing_rate <= 1.0))
        throw std::invalid_argument("inpaint_config: missing rate must lie in [0, 1]");
    DenoiseConfig cfg = DenoiseConfig::for_sigma(std::max(missing_rate * 100.0, 1.0));
    cfg.delta = 0.0;
    cfg.c = kDefaultInpaintWeightScale;
    return cfg;
}

Restored inpaint(const Image& degraded, const PixelMask& mask, const DenoiseConfig& cfg,
                 const Image* clean) {
    if (mask.width() != degraded.width() || mask.height() != degraded.height())
        throw std::invalid_argument("inpaint: mask dimensions differ");
    if (clean && !clean->same_shape(degraded))
        throw std::invalid_argument("inpaint: reference image shape differs");
    cfg.validate();
    require_fits(degraded, cfg);

    const auto start = std::chrono::steady_clock::now();
    const Image filled = neighborhood_fill(degraded, mask);

    auto project = [&](Image& img) {
        for (std::size_t ch = 0; ch < img.channels(); ++ch)
            for (std::size_t r = 0; r < img.height(); ++r)
                for (std::size_t c = 0; c < img.width(); ++c)
                    if (mask.kept(r, c))
                        img.at(ch, r, c) = degraded.at(ch, r, c);
    };

    Restored out;
    out.image = filled;
    std::vector<std::vector<Matrix>> transforms(degraded.channels());
    const bool anything_missing = mask.missing_count() > 0;
    for (std::size_t it = 0; it < cfg.outer_iters; ++it) {
        if (anything_missing) {
            for (std::size_t ch = 0; ch < degraded.channels(); ++ch) {
                const Image plane = scaled(out.image.channel(ch), cfg.intensity_scale);
                const Image restored = restore_pass(plane, cfg, transforms[ch]);
                out.image.set_channel(ch, scaled(restored, 1.0 / cfg.intensity_scale));
            }
        }
        project(out.image);
        out.report.psnr_trace.push_back(clean ? psnr(*clean, out.image)
                                              : std::numeric_limits<double>::quiet_NaN());
    }

    out.report.iterations = cfg.outer_iters;
    out.report.seconds = elapsed_seconds(start);
    if (clean) {
        out.report.psnr_in = psnr(*clean, degraded);
        out.report.ssim_in = ssim(*clean, degraded);
        out.report.psnr_out = psnr(*clean, out.image);
        out.report.ssim_out = ssim(*clean, out.image);
    }
    return out;
}

} // namespace stlwsm
