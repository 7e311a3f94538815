// Grid search for the shrinkage weight scale c and the relaxation delta.
//
// For each (c, delta) pair this reports the phantom-suite behaviour the
// restoration loop is expected to satisfy (gain, monotone first three
// iterations, settled by iteration 3) and the PSNR on a held-out natural
// image at sigma = 20. The defaults in pipeline.hpp come from this table.

#include "stlwsm/image.hpp"
#include "stlwsm/metrics.hpp"
#include "stlwsm/phantom.hpp"
#include "stlwsm/pipeline.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

using namespace stlwsm;

int main(int argc, char** argv) {
    CLI::App app{"Calibrate the weight scale c and relaxation delta"};
    std::string held_out;
    std::vector<double> cs{0.5, 1.0, 1.5, 2.0, 2.5, 3.0};
    std::vector<double> deltas{0.1};
    std::size_t phantoms = 3;
    double sigma = 20.0;
    std::uint64_t seed = 2024;
    double missing_rate = 0.0;
    app.add_option("--image", held_out, "Held-out clean PGM (skipped when empty)");
    app.add_option("--c", cs, "Candidate c values")->delimiter(',');
    app.add_option("--delta", deltas, "Candidate delta values")->delimiter(',');
    app.add_option("--phantoms", phantoms, "Number of 64x64 phantoms");
    app.add_option("--sigma", sigma, "Noise level");
    app.add_option("--seed", seed, "Noise seed");
    app.add_option("--missing-rate", missing_rate,
                   "Calibrate inpainting at this missing rate instead of denoising");
    CLI11_PARSE(app, argc, argv);

    Image natural;
    if (!held_out.empty())
        natural = load_image(held_out);

    if (missing_rate > 0.0) {
        // Gain is PSNR over the missing pixels relative to the neighbourhood fill.
        std::printf("%8s %10s %12s\n", "c", "min_gain", "heldout_gain");
        for (double c : cs) {
            auto gain = [&](const Image& clean, std::uint64_t s) {
                const PixelMask mask = make_mask(clean.width(), clean.height(), missing_rate, s);
                const Image degraded = apply_mask(clean, mask);
                DenoiseConfig cfg = inpaint_config(missing_rate);
                cfg.c = c;
                const Restored r = inpaint(degraded, mask, cfg, &clean);
                const Image fill = neighborhood_fill(degraded, mask);
                return psnr_from_mse(mse_where(clean, r.image, mask, false)) -
                       psnr_from_mse(mse_where(clean, fill, mask, false));
            };
            double min_gain = INFINITY;
            for (std::size_t k = 0; k < phantoms; ++k)
                min_gain = std::min(min_gain, gain(rank1_phantom(64, k), seed + k));
            const double heldout = held_out.empty() ? NAN : gain(natural, seed);
            std::printf("%8.4f %10.2f %12.2f\n", c, min_gain, heldout);
            std::fflush(stdout);
        }
        return 0;
    }

    std::printf("%8s %6s %10s %9s %12s %12s\n", "c", "delta", "min_gain", "monotone",
                "max|p3-p10|", "heldout_psnr");
    for (double c : cs) {
        for (double delta : deltas) {
            double min_gain = INFINITY, worst_settle = 0.0;
            bool monotone = true;
            for (std::size_t k = 0; k < phantoms; ++k) {
                const Image clean = rank1_phantom(64, k);
                const Image noisy = add_gaussian_noise(clean, sigma, seed + k);
                DenoiseConfig cfg = DenoiseConfig::for_sigma(sigma);
                cfg.c = c;
                cfg.delta = delta;
                cfg.outer_iters = 10;
                const Restored r = denoise(noisy, cfg, &clean);
                const auto& t = r.report.psnr_trace;
                min_gain = std::min(min_gain, t[2] - r.report.psnr_in);
                monotone = monotone && t[0] <= t[1] && t[1] <= t[2];
                worst_settle = std::max(worst_settle, std::abs(t[2] - t[9]));
            }
            double heldout = NAN;
            if (!held_out.empty()) {
                DenoiseConfig cfg = DenoiseConfig::for_sigma(sigma);
                cfg.c = c;
                cfg.delta = delta;
                const Image noisy = add_gaussian_noise(natural, sigma, seed);
                heldout = denoise(noisy, cfg, &natural).report.psnr_out;
            }
            std::printf("%8.3f %6.2f %10.2f %9s %12.3f %12.2f\n", c, delta, min_gain,
                        monotone ? "yes" : "no", worst_settle, heldout);
            std::fflush(stdout);
        }
    }
    return 0;
}
