#pragma once

#include "stlwsm/image.hpp"
#include "stlwsm/numerics.hpp"
#include "stlwsm/patching.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace stlwsm {

/// One row of the noise-level parameter table. `patch_side` is the window
/// side; patch vectors have patch_side^2 entries.
struct ScheduleRow {
    std::size_t patch_side = 0;
    std::size_t group_size = 0;
    double lambda = 0.0;
    friend bool operator==(const ScheduleRow&, const ScheduleRow&) = default;
};

ScheduleRow schedule_for(double sigma);

enum class Execution { Serial, Parallel };

/// Default weight scale for the singular value shrinkage (see
/// tools/calibrate_c.cpp for how it was picked).
inline constexpr double kDefaultWeightScale = 0.03;
inline constexpr double kDefaultRelaxation = 0.7;
/// Inpainting has no noise to suppress, so its shrinkage is much weaker.
inline constexpr double kDefaultInpaintWeightScale = 0.001;

struct DenoiseConfig {
    double sigma = 20.0;
    std::size_t outer_iters = 3;

    std::size_t patch_side = 6;
    std::size_t group_size = 70;
    double lambda = 0.54;

    /// Kept coefficients per patch column; 0 selects ceil(0.1 * side^2).
    std::size_t sparsity = 0;
    double c = kDefaultWeightScale;
    /// Sliding-window stride for candidate patches.
    std::size_t step = 1;
    /// Reference stride in grid positions; 0 selects floor(side / 2).
    std::size_t reference_stride = 0;
    std::size_t search_radius = 40;
    /// Fraction of the residual (input - estimate) fed back each iteration.
    double delta = kDefaultRelaxation;
    std::uint64_t seed = 0;

    /// Intensities are multiplied by this before restoration and divided
    /// after; the shrinkage weights are not scale-invariant.
    double intensity_scale = 1.0 / 255.0;
    /// Reuse each group's learned transform in the next outer iteration
    /// (off: start every iteration from the DCT).
    bool warm_start = true;
    /// Alternations of sparse coding and transform update per group and pass.
    std::size_t transform_iters = 1;
    /// Re-threshold the code with the updated transform before reconstruction
    /// (off: reconstruct from the code of the previous transform).
    bool recode_after_update = true;
    /// Subtract the group mean patch before coding (off: raw patch vectors).
    bool subtract_group_mean = false;
    /// Weight each group's contribution by 1 / (1 + kept rank) when aggregating.
    bool weighted_aggregation = false;

    Execution execution = Execution::Parallel;

    /// Table defaults for the given noise level.
    static DenoiseConfig for_sigma(double sigma);

    std::size_t effective_sparsity() const;
    std::size_t effective_reference_stride() const;
    void validate() const;
};

struct RestoreReport {
    double psnr_in = 0.0;
    double psnr_out = 0.0;
    double ssim_in = 0.0;
    double ssim_out = 0.0;
    std::size_t iterations = 0;
    double seconds = 0.0;
    /// PSNR of the estimate after each iteration (NaN without a reference).
    std::vector<double> psnr_trace;
};

struct Restored {
    Image image;
    RestoreReport report;
};

/// Per-group result of one pass: the learned transform and the shrunk
/// image-domain group.
struct GroupUpdate {
    Matrix transform;
    Matrix estimate;
    std::size_t rank = 0;
};

/// Sparse code, transform update, reconstruction and weighted shrinkage for
/// one group of patches (columns of `x`, already in working intensity units).
GroupUpdate restore_group(const Matrix& x, const Matrix& initial_transform,
                          const DenoiseConfig& cfg);

/// One outer iteration over all reference groups of `input`. `transforms`
/// holds the per-reference warm start (empty matrices select the DCT) and
/// is updated in place.
Image restore_pass(const Image& input, const DenoiseConfig& cfg, std::vector<Matrix>& transforms);

/// Denoises a single-channel image. With `clean`, the report carries
/// PSNR/SSIM figures and the per-iteration trace.
Restored denoise(const Image& noisy, const DenoiseConfig& cfg, const Image* clean = nullptr);

/// Channel-wise denoising of a three-channel image; metrics pool all channels.
Restored denoise_color(const Image& noisy, const DenoiseConfig& cfg, const Image* clean = nullptr);

/// Fills masked pixels by repeated 3x3 averaging of already-known neighbours.
Image neighborhood_fill(const Image& degraded, const PixelMask& mask);

/// Inpainting: neighbourhood fill, then the restoration loop with the
/// observed pixels reset after every iteration. Works on 1 or 3 channels.
Restored inpaint(const Image& degraded, const PixelMask& mask, const DenoiseConfig& cfg,
                 const Image* clean = nullptr);

/// Table defaults for inpainting at a missing rate in (0, 1].
DenoiseConfig inpaint_config(double missing_rate);

} // namespace stlwsm
