// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include "densor/class_a.hpp"
#include "densor/mc.hpp"
#include "densor/sampled.hpp"
#include "densor/waterfill.hpp"

namespace {

const densor::KernelModel& unit_model() {
    static const densor::KernelModel model = densor::KernelModel::gauss_markov(1.0, 1.0, 1.0);
    return model;
}

const densor::ClassAParams& unit_params() {
    static const densor::ClassAParams params = densor::gm_class_a_params(1.0, 1.0, 1.0);
    return params;
}

void BM_BuildSampledCovariance(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(densor::build_sampled_covariance(unit_model(), n));
    }
}
BENCHMARK(BM_BuildSampledCovariance)->Arg(100)->Arg(400)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_AchievablePoint(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const densor::SampledCovariance cov = densor::build_sampled_covariance(unit_model(), n);
    for (auto _ : state) {
        benchmark::DoNotOptimize(densor::achievable_rd_point(unit_model(), cov, 0.01, 8));
    }
}
BENCHMARK(BM_AchievablePoint)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_DpOfRate(benchmark::State& state) {
    const densor::ClassAParams& params = unit_params();
    for (auto _ : state) {
        benchmark::DoNotOptimize(densor::dp_of_rate(params, 6.9, 100000));
    }
}
BENCHMARK(BM_DpOfRate)->Unit(benchmark::kMillisecond);

void BM_SeparationTrials(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            densor::simulate_separation_scheme(unit_model(), 20, 0.1, 1000, 380, 7));
    }
}
BENCHMARK(BM_SeparationTrials)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
