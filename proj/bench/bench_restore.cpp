// Serial vs OpenMP restoration pass, plus the per-group kernels it is built from.

#include "stlwsm/lowrank.hpp"
#include "stlwsm/phantom.hpp"
#include "stlwsm/pipeline.hpp"
#include "stlwsm/random.hpp"
#include "stlwsm/transform.hpp"

#include <benchmark/benchmark.h>

using namespace stlwsm;

namespace {

Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
    Rng rng(seed);
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i)
        m.data()[i] = rng.normal();
    return m;
}

void restore_pass_bench(benchmark::State& state, Execution mode) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const Image noisy = add_gaussian_noise(rank1_phantom(n, 1), 20.0, 1);
    DenoiseConfig cfg = DenoiseConfig::for_sigma(20.0);
    cfg.execution = mode;
    Image scaled = noisy;
    for (double& v : scaled.data())
        v *= cfg.intensity_scale;
    for (auto _ : state) {
        std::vector<Matrix> transforms;
        benchmark::DoNotOptimize(restore_pass(scaled, cfg, transforms));
    }
}

void BM_RestorePassSerial(benchmark::State& s) { restore_pass_bench(s, Execution::Serial); }
void BM_RestorePassParallel(benchmark::State& s) { restore_pass_bench(s, Execution::Parallel); }

void BM_RestoreGroup(benchmark::State& state) {
    const auto side = state.range(0);
    const ScheduleRow row = schedule_for(side == 6 ? 20 : side == 7 ? 30 : side == 8 ? 50 : 75);
    const Matrix x = random_matrix(side * side, static_cast<Eigen::Index>(row.group_size), 2) * 0.1;
    DenoiseConfig cfg;
    cfg.patch_side = static_cast<std::size_t>(side);
    cfg.group_size = row.group_size;
    cfg.lambda = row.lambda;
    const Matrix dct = dct_matrix(static_cast<std::size_t>(side * side));
    for (auto _ : state)
        benchmark::DoNotOptimize(restore_group(x, dct, cfg));
}

void BM_UpdateTransform(benchmark::State& state) {
    const auto p = state.range(0);
    const Matrix x = random_matrix(p, 2 * p, 3);
    const Matrix mu = sparse_code(dct_matrix(static_cast<std::size_t>(p)), x, static_cast<std::size_t>((p + 9) / 10));
    for (auto _ : state)
        benchmark::DoNotOptimize(update_transform_factored(x, mu, 0.54));
}

void BM_Svd(benchmark::State& state) {
    const auto p = state.range(0);
    const Matrix x = random_matrix(p, 2 * p, 4);
    for (auto _ : state)
        benchmark::DoNotOptimize(svd_full(x));
}

} // namespace

BENCHMARK(BM_RestorePassSerial)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RestorePassParallel)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RestoreGroup)->DenseRange(6, 9)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_UpdateTransform)->Arg(36)->Arg(81)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Svd)->Arg(36)->Arg(81)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
