#include "stlwsm/cli.hpp"

#include "stlwsm/image.hpp"
#include "stlwsm/metrics.hpp"
#include "stlwsm/numerics.hpp"
#include "stlwsm/pipeline.hpp"
#include "stlwsm/random.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

namespace fs = std::filesystem;

namespace stlwsm::cli {

std::string format_metric(double value) {
    if (std::isinf(value))
        return value > 0 ? "inf" : "-inf";
    if (std::isnan(value))
        return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", value);
    return buf;
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos)
        return field;
    std::string out = "\"";
    for (char ch : field) {
        if (ch == '"')
            out += '"';
        out += ch;
    }
    return out + "\"";
}

std::string format_bench_row(const BenchRow& row) {
    char level[32], seconds[32];
    std::snprintf(level, sizeof level, "%g", row.level);
    std::snprintf(seconds, sizeof seconds, "%.3f", row.seconds);
    std::ostringstream os;
    os << csv_escape(row.image_name) << ',' << level << ',' << csv_escape(row.method_label) << ','
       << format_metric(row.psnr_in) << ',' << format_metric(row.psnr_out) << ','
       << format_metric(row.ssim_in) << ',' << format_metric(row.ssim_out) << ',' << seconds << ','
       << row.iterations << ',' << row.seed;
    return os.str();
}

unsigned long long run_seed(unsigned long long seed, const std::string& image_name, double level) {
    std::uint64_t h = 0xcbf29ce484222325ULL; // FNV-1a
    for (unsigned char ch : image_name) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return splitmix64(seed ^ splitmix64(h ^ splitmix64(std::bit_cast<std::uint64_t>(level))));
}

namespace {

struct Overrides {
    std::optional<std::size_t> iters;
    std::optional<std::size_t> step;
    std::optional<std::size_t> sparsity;
    std::optional<double> c;
    std::optional<double> delta;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--iters", iters, "Outer iterations")->check(CLI::PositiveNumber);
        cmd->add_option("--step", step, "Patch extraction stride in pixels")->check(CLI::PositiveNumber);
        cmd->add_option("--s", sparsity, "Kept transform coefficients per patch");
        cmd->add_option("--c", c, "Weight scale of the singular value shrinkage")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--delta", delta, "Residual feedback between iterations, in [0,1)");
    }

    void apply(DenoiseConfig& cfg) const {
        if (iters)
            cfg.outer_iters = *iters;
        if (step)
            cfg.step = *step;
        if (sparsity)
            cfg.sparsity = *sparsity;
        if (c)
            cfg.c = *c;
        if (delta)
            cfg.delta = *delta;
    }
};

Restored restore_any(const Image& noisy, const DenoiseConfig& cfg, const Image* clean) {
    return noisy.channels() == 3 ? denoise_color(noisy, cfg, clean) : denoise(noisy, cfg, clean);
}

// --- denoise ---------------------------------------------------------------

struct DenoiseArgs {
    std::string input, output, clean;
    double sigma = 0.0;
    std::uint64_t seed = 0;
    bool add_noise = false;
    Overrides overrides;
};

int cmd_denoise(const DenoiseArgs& a, std::ostream& out) {
    const Image input = load_image(a.input);
    std::optional<Image> clean;
    Image noisy = input;
    if (a.add_noise) {
        clean = input;
        noisy = add_gaussian_noise(input, a.sigma, a.seed);
    } else if (!a.clean.empty()) {
        clean = load_image(a.clean);
    }

    DenoiseConfig cfg = DenoiseConfig::for_sigma(a.sigma);
    cfg.seed = a.seed;
    a.overrides.apply(cfg);

    const Restored r = restore_any(noisy, cfg, nullptr);
    const Image result = clamp_quantize(r.image);
    save_image(result, a.output);

    if (clean) {
        const MetricPair m = compare(*clean, result);
        out << "PSNR_out=" << format_metric(m.psnr) << " SSIM_out=" << format_metric(m.ssim) << '\n';
    }
    return kOk;
}

// --- inpaint ---------------------------------------------------------------

struct InpaintArgs {
    std::string input, output, mask_in, mask_out, clean;
    std::optional<double> missing_rate;
    std::uint64_t seed = 0;
    bool degrade = false;
    Overrides overrides;
};

int cmd_inpaint(const InpaintArgs& a, std::ostream& out, std::ostream& err) {
    if (!a.missing_rate && a.mask_in.empty()) {
        err << "inpaint: one of --missing-rate or --mask is required\n";
        return kUsage;
    }
    const Image input = load_image(a.input);
    const PixelMask mask = a.mask_in.empty()
                               ? make_mask(input.width(), input.height(), *a.missing_rate, a.seed)
                               : load_mask(a.mask_in);
    if (mask.width() != input.width() || mask.height() != input.height())
        throw std::invalid_argument("inpaint: mask is " + std::to_string(mask.width()) + "x" +
                                    std::to_string(mask.height()) + ", image is " +
                                    std::to_string(input.width()) + "x" +
                                    std::to_string(input.height()));

    std::optional<Image> clean;
    Image degraded = input;
    if (a.degrade) {
        clean = input;
        degraded = apply_mask(input, mask);
    } else if (!a.clean.empty()) {
        clean = load_image(a.clean);
    }

    DenoiseConfig cfg = inpaint_config(a.missing_rate.value_or(mask.missing_fraction()));
    cfg.seed = a.seed;
    a.overrides.apply(cfg);

    const Restored r = inpaint(degraded, mask, cfg, nullptr);
    const Image result = clamp_quantize(r.image);
    save_image(result, a.output);
    save_mask(mask, a.mask_out.empty() ? a.output + ".mask.pgm" : a.mask_out);

    out << "missing_fraction=" << format_metric(mask.missing_fraction()) << '\n';
    if (clean) {
        const MetricPair m = compare(*clean, result);
        out << "PSNR_out=" << format_metric(m.psnr) << " SSIM_out=" << format_metric(m.ssim) << '\n';
    }
    return kOk;
}

// --- metrics ---------------------------------------------------------------

struct MetricsArgs {
    std::string ref, test;
    PsnrMode mode = PsnrMode::Standard;
};

int cmd_metrics(const MetricsArgs& a, std::ostream& out) {
    const Image ref = load_image(a.ref);
    const Image test = load_image(a.test);
    if (!ref.same_shape(test))
        throw std::invalid_argument("metrics: images differ in size or channel count");
    const MetricPair m = compare(ref, test, a.mode);
    out << "PSNR=" << format_metric(m.psnr) << " SSIM=" << format_metric(m.ssim) << '\n';
    return kOk;
}

// --- bench -----------------------------------------------------------------

struct BenchArgs {
    std::string dataset, out_csv, trace_dir, method = "STLWSM";
    std::vector<double> sigmas = kDefaultBenchSigmas;
    std::uint64_t seed = 0;
    Overrides overrides;
};

std::vector<fs::path> dataset_images(const fs::path& dir) {
    if (!fs::is_directory(dir))
        throw std::runtime_error("bench: dataset directory " + dir.string() + " does not exist");
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        const auto ext = entry.path().extension().string();
        if (entry.is_regular_file() && (ext == ".pgm" || ext == ".ppm"))
            files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end(),
              [](const fs::path& x, const fs::path& y) { return x.filename() < y.filename(); });
    return files;
}

int cmd_bench(const BenchArgs& a, std::ostream& out, std::ostream& err) {
    const auto files = dataset_images(a.dataset);
    if (files.empty()) {
        err << "bench: no .pgm or .ppm images in " << a.dataset << '\n';
        return kDataError;
    }
    std::vector<double> sigmas = a.sigmas;
    std::sort(sigmas.begin(), sigmas.end());

    const fs::path trace_dir = a.trace_dir.empty() ? fs::path(a.out_csv + ".traces") : fs::path(a.trace_dir);
    fs::create_directories(trace_dir);

    std::ofstream csv(a.out_csv, std::ios::binary | std::ios::trunc);
    if (!csv)
        throw std::runtime_error("bench: cannot write " + a.out_csv);
    csv << kBenchHeader << '\n';

    for (const fs::path& file : files) {
        const Image clean = load_image(file);
        const std::string name = file.filename().string();
        for (double sigma : sigmas) {
            BenchRow row;
            row.image_name = name;
            row.level = sigma;
            row.method_label = a.method;
            row.seed = run_seed(a.seed, name, sigma);

            DenoiseConfig cfg = DenoiseConfig::for_sigma(sigma);
            cfg.seed = row.seed;
            a.overrides.apply(cfg);

            const Image noisy = add_gaussian_noise(clean, sigma, row.seed);
            const Restored r = restore_any(noisy, cfg, &clean);
            const Image result = clamp_quantize(r.image);

            row.psnr_in = r.report.psnr_in;
            row.ssim_in = r.report.ssim_in;
            row.psnr_out = psnr(clean, result);
            row.ssim_out = ssim(clean, result);
            row.seconds = r.report.seconds;
            row.iterations = r.report.iterations;
            csv << format_bench_row(row) << '\n';

            char trace_name[256];
            std::snprintf(trace_name, sizeof trace_name, "%s_sigma%g.csv", file.stem().string().c_str(), sigma);
            std::ofstream trace(trace_dir / trace_name, std::ios::binary | std::ios::trunc);
            trace << "iteration,psnr\n";
            for (std::size_t it = 0; it < r.report.psnr_trace.size(); ++it)
                trace << it + 1 << ',' << format_metric(r.report.psnr_trace[it]) << '\n';

            out << name << " sigma=" << sigma << " PSNR " << format_metric(row.psnr_in) << " -> "
                << format_metric(row.psnr_out) << '\n';
        }
    }
    return kOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Patch-group image restoration: sparsifying transform learning with weighted "
                 "singular value shrinkage"};
    app.require_subcommand(1);

    DenoiseArgs dn;
    auto* denoise_cmd = app.add_subcommand("denoise", "Remove additive Gaussian noise");
    denoise_cmd->add_option("--input", dn.input, "Noisy PGM/PPM (or clean, with --add-noise)")->required();
    denoise_cmd->add_option("--output", dn.output, "Restored image path")->required();
    denoise_cmd->add_option("--sigma", dn.sigma, "Noise standard deviation")->required()->check(CLI::PositiveNumber);
    denoise_cmd->add_option("--seed", dn.seed, "Seed for --add-noise");
    denoise_cmd->add_option("--clean", dn.clean, "Ground truth for reporting PSNR/SSIM");
    denoise_cmd->add_flag("--add-noise", dn.add_noise, "Treat --input as clean and corrupt it first");
    dn.overrides.add_to(denoise_cmd);

    InpaintArgs ip;
    auto* inpaint_cmd = app.add_subcommand("inpaint", "Fill randomly missing pixels");
    inpaint_cmd->add_option("--input", ip.input, "Image with missing pixels (or clean, with --degrade)")->required();
    inpaint_cmd->add_option("--output", ip.output, "Restored image path")->required();
    inpaint_cmd->add_option("--missing-rate", ip.missing_rate, "Fraction of dropped pixels")
        ->check(CLI::Range(0.0, 1.0));
    inpaint_cmd->add_option("--seed", ip.seed, "Mask seed");
    inpaint_cmd->add_option("--mask", ip.mask_in, "Reuse this mask (P5, 255 = observed)");
    inpaint_cmd->add_option("--mask-out", ip.mask_out, "Where to save the mask (default <output>.mask.pgm)");
    inpaint_cmd->add_option("--clean", ip.clean, "Ground truth for reporting PSNR/SSIM");
    inpaint_cmd->add_flag("--degrade", ip.degrade, "Treat --input as clean and apply the mask first");
    ip.overrides.add_to(inpaint_cmd);

    MetricsArgs mt;
    std::string mode = "standard";
    auto* metrics_cmd = app.add_subcommand("metrics", "PSNR and SSIM between two images");
    metrics_cmd->add_option("--ref", mt.ref, "Reference image")->required();
    metrics_cmd->add_option("--test", mt.test, "Test image")->required();
    metrics_cmd->add_option("--psnr-mode", mode, "standard (255^2/MSE) or paper (255/MSE)")
        ->check(CLI::IsMember({"standard", "paper"}));

    BenchArgs bn;
    auto* bench_cmd = app.add_subcommand("bench", "Corrupt, restore and score a directory of clean images");
    bench_cmd->add_option("--dataset", bn.dataset, "Directory of clean PGM/PPM images")->required();
    bench_cmd->add_option("--sigmas", bn.sigmas, "Comma-separated noise levels")->delimiter(',');
    bench_cmd->add_option("--out", bn.out_csv, "CSV output path")->required();
    bench_cmd->add_option("--seed", bn.seed, "Shared noise seed");
    bench_cmd->add_option("--trace-dir", bn.trace_dir, "Per-run PSNR traces (default <out>.traces)");
    bench_cmd->add_option("--method", bn.method, "Method label written to the CSV");
    bn.overrides.add_to(bench_cmd);

    std::vector<std::string> storage{"stlwsm"};
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : storage)
        argv.push_back(s.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        CLI::App* target = &app;
        for (CLI::App* sub : app.get_subcommands())
            target = sub;
        out << target->help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        CLI::App* target = &app;
        for (CLI::App* sub : {denoise_cmd, inpaint_cmd, metrics_cmd, bench_cmd})
            if (sub->parsed())
                target = sub;
        err << "error: " << e.what() << "\n" << target->help();
        return kUsage;
    }

    try {
        if (denoise_cmd->parsed())
            return cmd_denoise(dn, out);
        if (inpaint_cmd->parsed())
            return cmd_inpaint(ip, out, err);
        if (metrics_cmd->parsed()) {
            mt.mode = mode == "paper" ? PsnrMode::Paper : PsnrMode::Standard;
            return cmd_metrics(mt, out);
        }
        if (bench_cmd->parsed())
            return cmd_bench(bn, out, err);
        return kUsage;
    } catch (const SvdNoConvergence& e) {
        err << "error: " << e.what() << '\n';
        return kInternal;
    } catch (const NotPositiveDefinite& e) {
        err << "error: " << e.what() << '\n';
        return kInternal;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kDataError;
    } catch (const std::runtime_error& e) {
        err << "error: " << e.what() << '\n';
        return kDataError;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kInternal;
    }
}

} // namespace stlwsm::cli
