/*
   Copyright 2026 The stochconv Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include <benchmark/benchmark.h>

#include <memory>

#include "stochconv/dilation.hpp"
#include "stochconv/ensemble.hpp"
#include "stochconv/matrix_functions.hpp"
#include "stochconv/renorm.hpp"
#include "stochconv/strategies.hpp"

using namespace stochconv;

static void BM_Expm(benchmark::State& st) {
    const int d = int(st.range(0));
    const Mat a = random_sectorial_matrix(d, 7);
    for (auto _ : st) benchmark::DoNotOptimize(expm(a));
}
BENCHMARK(BM_Expm)->Arg(4)->Arg(16)->Arg(64);

static void BM_LyapunovRenorm(benchmark::State& st) {
    const Generator gen = MatrixGenerator(random_sectorial_matrix(int(st.range(0)), 3), 2.0);
    for (auto _ : st) benchmark::DoNotOptimize(lyapunov_renorm(gen).residual);
}
BENCHMARK(BM_LyapunovRenorm)->Arg(4)->Arg(16);

static void BM_SquareFunctionNorm(benchmark::State& st) {
    const int d = int(st.range(0));
    Mat f = Mat::Random(d, d);
    const GammaOperator op(f, LqSpace(3.0, d));
    for (auto _ : st) benchmark::DoNotOptimize(square_function_norm(op));
}
BENCHMARK(BM_SquareFunctionNorm)->Arg(8)->Arg(64);

// Paths per second for each scheme; items = path steps.
static void BM_Ensemble(benchmark::State& st) {
    const auto scheme = Scheme(st.range(0));
    const int d = int(st.range(1));
    const TimeGrid grid = TimeGrid::uniform(1.0, 64);
    const StepProcess g = StepProcess::constant(grid, GammaOperator::diagonal(Vec::Ones(d), LqSpace(2.0, d)));
    EnsembleSpec spec;
    spec.scheme = scheme;
    spec.generator = SpectralGenerator::heat(d, 2.0);
    spec.paths = 256;
    spec.seed = 1;
    for (auto _ : st) benchmark::DoNotOptimize(run_ensemble(spec, g).sup[0][0]);
    st.SetItemsProcessed(st.iterations() * std::int64_t(spec.paths) * grid.steps());
}
BENCHMARK(BM_Ensemble)
    ->Args({int(Scheme::Exact), 1})
    ->Args({int(Scheme::Exact), 64})
    ->Args({int(Scheme::ExponentialEuler), 64})
    ->Args({int(Scheme::Ito), 64});

static void BM_AdaptedEnsemble(benchmark::State& st) {
    const int d = int(st.range(0));
    const TimeGrid grid = TimeGrid::uniform(1.0, 64);
    const StepProcess g = StepProcess::adapted(grid, maximal_family(d, 2.0)[3]);
    EnsembleSpec spec;
    spec.generator = SpectralGenerator::heat(d, 2.0);
    spec.paths = 128;
    for (auto _ : st) benchmark::DoNotOptimize(run_ensemble(spec, g).sup[0][0]);
    st.SetItemsProcessed(st.iterations() * std::int64_t(spec.paths) * grid.steps());
}
BENCHMARK(BM_AdaptedEnsemble)->Arg(16)->Arg(64);

static void BM_DilationPath(benchmark::State& st) {
    const int d = int(st.range(0));
    const TimeGrid grid = TimeGrid::uniform(1.0, 64);
    const Generator gen = SpectralGenerator::heat(d, 2.0);
    const DilationRep rep(gen, 1.0 / 64, 1.0);
    const StepProcess g = StepProcess::constant(grid, GammaOperator::diagonal(Vec::Ones(d), LqSpace(2.0, d)));
    std::uint64_t path = 0;
    for (auto _ : st) {
        const WienerPath w = sample_wiener(grid, d, 5, path++);
        benchmark::DoNotOptimize(convolve_via_dilation(rep, g, w).z_norm.back());
    }
}
BENCHMARK(BM_DilationPath)->Arg(8)->Arg(32);

BENCHMARK_MAIN();
