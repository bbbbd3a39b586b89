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

#pragma once

#include <cstdint>

#include "stochconv/gamma_operator.hpp"
#include "stochconv/process.hpp"
#include "stochconv/stats.hpp"

namespace stochconv {

/// (E||sum_j gamma_j F h_j||^2)^{1/2} from n Gaussian draws, n >= 1000.
Estimate gamma_norm_mc(const GammaOperator& f, std::size_t n, std::uint64_t seed, int threads = 1);

/// (sum_i dt_i ||G_i||^2)^{1/2} for a deterministic step process.
double process_l2gamma_norm(const StepProcess& g);

/// Gaussian-sum estimate of ||G||_{gamma(L^2(0,T;H),X)} over the tensor
/// basis dt_i^{-1/2} 1_(t_{i-1},t_i] (x) h_j. Deterministic processes only.
Estimate process_full_gamma_norm(const StepProcess& g, std::size_t n, std::uint64_t seed, int threads = 1);

/// The block operator [sqrt(dt_1) G_1, ..., sqrt(dt_N) G_N] whose square
/// function brackets the full gamma norm.
GammaOperator process_tensor_operator(const StepProcess& g);

struct StepProcessNorms {
    double l2gamma = 0.0;
    Estimate fullgamma;
};

StepProcessNorms process_norms(const StepProcess& g, std::size_t n, std::uint64_t seed, int threads = 1);

} // namespace stochconv
