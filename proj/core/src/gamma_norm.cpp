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

#include "stochconv/gamma_norm.hpp"

#include <cmath>

#include "stochconv/parallel.hpp"
#include "stochconv/rng.hpp"
#include "stochconv/simulate.hpp"

namespace stochconv {

namespace {

constexpr std::size_t kMinSamples = 1000;

Estimate sqrt_of_mean(const std::vector<double>& y) {
    const BatchMean bm = batch_means(y);
    Estimate e;
    e.value = std::sqrt(std::max(0.0, bm.mean));
    e.ci_low = std::sqrt(std::max(0.0, bm.mean - bm.half_width));
    e.ci_high = std::sqrt(std::max(0.0, bm.mean + bm.half_width));
    e.n = y.size();
    return e;
}

Estimate gaussian_sum_norm(const Mat& f, double q, std::size_t n, std::uint64_t seed, int threads) {
    if (n < kMinSamples) throw std::invalid_argument("gamma norm estimate needs n ≥ 1000 samples");
    std::vector<double> y(n);
    const long m = long(f.cols());
    parallel_for(n, threads, [&](std::size_t s) {
        const NormalStream ns(seed, StreamTag::GammaMC, s);
        RVec z(m);
        ns.fill(0, z, m);
        const double v = lq_norm(Vec(f * z.cast<cplx>()), q);
        y[s] = v * v;
    });
    return sqrt_of_mean(y);
}

} // namespace

Estimate gamma_norm_mc(const GammaOperator& f, std::size_t n, std::uint64_t seed, int threads) {
    return gaussian_sum_norm(f.dense(), f.codomain().q(), n, seed, threads);
}

double process_l2gamma_norm(const StepProcess& g) {
    if (!g.is_deterministic()) throw std::invalid_argument("process_l2gamma_norm needs a deterministic process");
    return l2gamma_along(g.operators(), g.grid(), g.space().q());
}

GammaOperator process_tensor_operator(const StepProcess& g) {
    if (!g.is_deterministic()) throw std::invalid_argument("full gamma norm needs a deterministic process");
    const int n = g.grid().steps(), m = g.noise_dim(), d = g.space().dim();
    Mat big(d, Eigen::Index(n) * m);
    for (int i = 0; i < n; ++i) big.middleCols(Eigen::Index(i) * m, m) = std::sqrt(g.grid().dt(i)) * g.operators()[std::size_t(i)].dense();
    return GammaOperator(std::move(big), g.space());
}

Estimate process_full_gamma_norm(const StepProcess& g, std::size_t n, std::uint64_t seed, int threads) {
    const GammaOperator big = process_tensor_operator(g);
    return gaussian_sum_norm(big.dense(), g.space().q(), n, seed, threads);
}

StepProcessNorms process_norms(const StepProcess& g, std::size_t n, std::uint64_t seed, int threads) {
    return {process_l2gamma_norm(g), process_full_gamma_norm(g, n, seed, threads)};
}

} // namespace stochconv
