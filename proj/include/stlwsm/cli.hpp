#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace stlwsm::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 2,
    kDataError = 3,
    kInternal = 4,
};

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name: e.g. {"denoise", "--input", "a.pgm", ...}.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Header of the benchmark CSV; column order is fixed.
inline constexpr const char* kBenchHeader =
    "image,level,method,psnr_in,psnr_out,ssim_in,ssim_out,seconds,iterations,seed";

/// Noise levels swept by `bench` when --sigmas is not given.
inline const std::vector<double> kDefaultBenchSigmas{15, 20, 30, 40, 50, 75};

struct BenchRow {
    std::string image_name;
    double level = 0.0;
    std::string method_label;
    double psnr_in = 0.0;
    double psnr_out = 0.0;
    double ssim_in = 0.0;
    double ssim_out = 0.0;
    double seconds = 0.0;
    std::size_t iterations = 0;
    unsigned long long seed = 0;
};

std::string format_bench_row(const BenchRow& row);

/// RFC 4180 quoting for a single field.
std::string csv_escape(const std::string& field);

/// Noise seed for one (image, level) run, derived from the shared seed so
/// that it does not depend on processing order.
unsigned long long run_seed(unsigned long long seed, const std::string& image_name, double level);

/// Fixed-precision rendering used in all command output; "inf" for +infinity.
std::string format_metric(double value);

} // namespace stlwsm::cli
