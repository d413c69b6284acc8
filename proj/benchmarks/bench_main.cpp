// Copyright 2026 The eprbec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "eprbec/criteria.hpp"
#include "eprbec/experiment.hpp"
#include "eprbec/sampler.hpp"
#include "eprbec/spin_core.hpp"
#include "eprbec/splitter.hpp"

using namespace eprbec;

static void BM_ApplyRotation(benchmark::State &state) {
    const DickeState s = make_coherent_state(static_cast<int>(state.range(0)), kPi / 2, 0.0);
    const Vec3 axis = Vec3(1, 2, 3).normalized();
    for (auto _ : state) benchmark::DoNotOptimize(apply_rotation(s, axis, 0.7));
}
BENCHMARK(BM_ApplyRotation)->Arg(100)->Arg(1400)->Unit(benchmark::kMillisecond);

static void BM_ApplyOat(benchmark::State &state) {
    const DickeState s = make_coherent_state(1400, kPi / 2, 0.0);
    OATSpec spec;
    spec.chi_t = 0.01;
    spec.rotation_angle = 0.3;
    for (auto _ : state) benchmark::DoNotOptimize(apply_oat(s, spec));
}
BENCHMARK(BM_ApplyOat)->Unit(benchmark::kMillisecond);

static void BM_SampleGaussian(benchmark::State &state) {
    const PreparedState p = prepare_state(lab_config());
    NoiseModel noise = lab_config().noise;
    const auto shots = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(sample_gaussian(p.joint, {Basis::y, Basis::y, 0.0}, noise, shots, 3));
    state.SetItemsProcessed(state.iterations() * shots);
}
BENCHMARK(BM_SampleGaussian)->Arg(4400);

static void BM_SplitExact(benchmark::State &state) {
    const DickeState s = make_coherent_state(static_cast<int>(state.range(0)), kPi / 2, 0.0);
    for (auto _ : state) benchmark::DoNotOptimize(split_exact(s, 0.5));
}
BENCHMARK(BM_SplitExact)->Arg(8)->Arg(16);

static void BM_EvaluateBlock(benchmark::State &state) {
    RunConfig cfg = lab_config();
    cfg.n_blocks = 1;
    const Dataset d = run_experiment(cfg);
    const CorrectionPolicy policy;
    for (auto _ : state) benchmark::DoNotOptimize(evaluate_block(d.records, policy));
}
BENCHMARK(BM_EvaluateBlock);

static void BM_AnalyzeLabRun(benchmark::State &state) {
    const Dataset d = run_experiment(lab_config());
    for (auto _ : state) benchmark::DoNotOptimize(analyze(d.records, AnalysisOptions{}));
}
BENCHMARK(BM_AnalyzeLabRun)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
