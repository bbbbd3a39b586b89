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
#include <vector>

#include "stochconv/model.hpp"
#include "stochconv/process.hpp"

namespace stochconv {

/// Increments Delta W_i ~ N(0, dt_i I_m), one row per step.
struct WienerPath {
    TimeGrid grid;
    RMat increments;
    std::uint64_t seed = 0;
    std::uint64_t path = 0;

    /// Sums the increments over blocks of `factor` consecutive steps.
    WienerPath coarsen(int factor) const;
};

/// Values y(t_i) at every node of a grid, one column per node.
struct Path {
    std::vector<double> times;
    Mat states;

    int nodes() const { return int(states.cols()); }
    Vec at(int i) const { return states.col(i); }
};

enum class Scheme { Exact, ExponentialEuler, Ito };

WienerPath sample_wiener(const TimeGrid& grid, int m, std::uint64_t seed, std::uint64_t path_index);

/// Partial sums sum_{i<=n} G_i Delta W_i. W may live on a dyadic refinement
/// of the process grid.
Path ito_integral(const StepProcess& g, const WienerPath& w);

/// y_{i+1} = S(dt_i)(y_i + G_i Delta W_i), y_0 = 0.
Path convolve_exponential_euler(const Generator& gen, const StepProcess& g, const WienerPath& w);

/// Exact-in-law transition sampling for spectral generators on the grid
/// process.grid().refine(refine_levels). Draws come from the ExactOU
/// stream addressed by (seed, path_index).
Path convolve_exact(const Generator& gen, const StepProcess& g, std::uint64_t seed,
                    std::uint64_t path_index, int refine_levels = 0);

/// max_i ||y(t_i)||_q over the nodes of the path.
double running_sup(const Path& path, const LqSpace& norm);
double running_sup(const Path& path, double q);

/// (sum_i dt_i ||G_i||^2)^{1/2} along one realisation. For adapted
/// processes the operators are those chosen on the given path.
double l2gamma_along(const std::vector<GammaOperator>& ops, const TimeGrid& grid, double q);

} // namespace stochconv
