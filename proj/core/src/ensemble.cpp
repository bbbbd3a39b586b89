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

#include "stochconv/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "engine.hpp"
#include "stochconv/parallel.hpp"

namespace stochconv {

std::size_t PathEnsemble::norm_index(double q) const {
    for (std::size_t i = 0; i < norms.size(); ++i)
        if (norms[i] == q) return i;
    throw std::invalid_argument("ensemble has no statistics for this exponent");
}

PathEnsemble run_ensemble(const EnsembleSpec& spec, const StepProcess& g) {
    if (spec.paths == 0) throw std::invalid_argument("ensemble needs at least one path");
    if (spec.norms.empty()) throw std::invalid_argument("ensemble needs at least one norm");
    for (double q : spec.norms)
        if (!(q >= 1.0)) throw std::invalid_argument("q must be ≥ 1");
    std::vector<int> strides = spec.sup_strides;
    if (std::find(strides.begin(), strides.end(), 1) == strides.end()) strides.insert(strides.begin(), 1);
    for (int s : strides)
        if (s < 1) throw std::invalid_argument("sup stride must be ≥ 1");

    const Generator* gen = spec.generator ? &*spec.generator : nullptr;
    const detail::PathEngine eng(spec.scheme, gen, g, spec.refine_levels);
    const std::size_t nq = spec.norms.size(), ns = strides.size(), n = spec.paths;

    PathEnsemble out;
    out.norms = spec.norms;
    out.strides = strides;
    out.seed = spec.seed;
    out.process = g.describe();
    out.sup.assign(nq, std::vector<double>(n));
    out.terminal.assign(nq, std::vector<double>(n));
    out.l2gamma.assign(nq, std::vector<double>(n));
    out.strided_sup.assign(ns, std::vector<std::vector<double>>(nq, std::vector<double>(n)));
    const int last = eng.fine_grid().steps();

    // Deterministic integrands have a path-independent l2gamma norm.
    std::vector<double> det_l2;
    if (g.is_deterministic())
        for (double q : spec.norms) det_l2.push_back(l2gamma_along(g.operators(), g.grid(), q));

    parallel_for(n, spec.threads, [&](std::size_t p) {
        std::vector<double> l2(nq, 0.0);
        std::vector<std::vector<double>> sups(ns, std::vector<double>(nq, 0.0));
        RVec mod;
        eng.run(
            nullptr, spec.seed, p,
            [&](int i, const GammaOperator& op) {
                if (!det_l2.empty()) return;
                const RVec e = op.row_energy().cwiseSqrt();
                for (std::size_t k = 0; k < nq; ++k) {
                    const double f = lq_norm(e, spec.norms[k]);
                    l2[k] += g.grid().dt(i) * f * f;
                }
            },
            [&](int j, const Vec& y) {
                mod = y.cwiseAbs();
                for (std::size_t k = 0; k < nq; ++k) {
                    const double v = lq_norm(mod, spec.norms[k]);
                    for (std::size_t s = 0; s < ns; ++s)
                        if (j % strides[s] == 0) sups[s][k] = std::max(sups[s][k], v);
                    if (j == last) out.terminal[k][p] = v;
                }
            });
        for (std::size_t k = 0; k < nq; ++k) {
            out.l2gamma[k][p] = det_l2.empty() ? std::sqrt(l2[k]) : det_l2[k];
            out.sup[k][p] = sups[0][k];
            for (std::size_t s = 0; s < ns; ++s) out.strided_sup[s][k][p] = sups[s][k];
        }
    }, 16);
    return out;
}

void write_ensemble_csv(std::ostream& os, const PathEnsemble& e, double q) {
    const std::size_t k = e.norm_index(q);
    os << "path_index,sup,terminal_norm\n";
    char buf[64];
    for (std::size_t p = 0; p < e.paths(); ++p) {
        std::snprintf(buf, sizeof buf, "%.17g", e.sup[k][p]);
        os << p << ',' << buf << ',';
        std::snprintf(buf, sizeof buf, "%.17g", e.terminal[k][p]);
        os << buf << '\n';
    }
}

} // namespace stochconv
