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
#include <iosfwd>
#include <optional>
#include <vector>

#include "stochconv/simulate.hpp"

namespace stochconv {

struct EnsembleSpec {
    Scheme scheme = Scheme::Exact;
    std::optional<Generator> generator; // unused for Scheme::Ito
    std::vector<double> norms{2.0};     // exponents q evaluated on every path
    std::size_t paths = 1000;
    std::uint64_t seed = 0;
    int refine_levels = 0;
    /// Extra sups over every stride-th fine node (1 is always included).
    std::vector<int> sup_strides{1};
    int threads = 1;
};

/// Per-path statistics of a Monte-Carlo ensemble. Arrays are indexed
/// [norm][path], and for strided sups [stride][norm][path].
struct PathEnsemble {
    std::vector<double> norms;
    std::vector<int> strides;
    std::vector<std::vector<double>> sup;
    std::vector<std::vector<double>> terminal;
    std::vector<std::vector<double>> l2gamma;
    std::vector<std::vector<std::vector<double>>> strided_sup;
    std::uint64_t seed = 0;
    std::string process;

    std::size_t paths() const { return sup.empty() ? 0 : sup.front().size(); }
    std::size_t norm_index(double q) const;
};

PathEnsemble run_ensemble(const EnsembleSpec& spec, const StepProcess& g);

/// CSV with columns path_index,sup,terminal_norm for one norm.
void write_ensemble_csv(std::ostream& os, const PathEnsemble& e, double q);

} // namespace stochconv
