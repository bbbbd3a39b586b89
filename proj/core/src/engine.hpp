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

// Shared path stepping used by the single-path API and the ensemble runner.

#include <cmath>
#include <map>
#include <optional>
#include <vector>

#include "stochconv/rng.hpp"
#include "stochconv/simulate.hpp"

namespace stochconv::detail {

/// Exact one-step transition data for spectral modes at a fixed dt.
struct ExactKernel {
    Vec decay;   // e^{-mu_k dt}
    RVec a_self; // int_0^dt e^{-2 Re mu_k s} ds
    Vec b_self;  // int_0^dt e^{-2 mu_k s} ds
    RMat factor; // 2d x r factor of the joint (Re, Im) kernel covariance
};

/// (1 - e^{-z dt}) / z, stable as z dt -> 0.
cplx phi1(cplx z, double dt);

ExactKernel make_exact_kernel(const std::vector<cplx>& mu, double dt, bool with_factor);

class PathEngine {
public:
    PathEngine(Scheme scheme, const Generator* gen, const StepProcess& g, int refine_levels);

    const TimeGrid& fine_grid() const { return fine_; }
    int sub_steps() const { return sub_; }

    /// Runs one path. `w` may be null, in which case increments are drawn
    /// from the Wiener stream of (seed, path). on_op(i, G_i) is called for
    /// every master step; on_node(j, y) for every fine node j.
    template <class OnOp, class OnNode>
    void run(const WienerPath* w, std::uint64_t seed, std::uint64_t path, OnOp&& on_op,
             OnNode&& on_node) const;

private:
    void step_exact(Vec& y, const GammaOperator& g, int fine_step, const NormalStream& ns, RVec& z) const;

    Scheme scheme_;
    const Generator* gen_;
    const StepProcess& g_;
    TimeGrid fine_;
    int sub_;
    int d_;
    std::vector<int> dt_slot_;          // fine step -> cache slot
    std::vector<Mat> s_dt_;             // S(dt) for matrix generators
    std::vector<Vec> s_diag_;           // S(dt) for spectral generators
    std::vector<ExactKernel> kernels_;  // exact scheme
    std::vector<cplx> mu_;
    std::vector<double> det_sf_;        // deterministic processes only
};

template <class OnOp, class OnNode>
void PathEngine::run(const WienerPath* w, std::uint64_t seed, std::uint64_t path, OnOp&& on_op,
                     OnNode&& on_node) const {
    const int m = g_.noise_dim();
    Vec y = Vec::Zero(d_);
    RVec dw(m), z;
    const NormalStream wiener(seed, StreamTag::Wiener, path);
    const NormalStream exact(seed, StreamTag::ExactOU, path);
    const double q = g_.space().q();
    double acc = 0.0;
    on_node(0, y);
    const int master = g_.grid().steps();
    for (int i = 0; i < master; ++i) {
        const History h{i, g_.grid().node(i), g_.grid().dt(i), y, acc};
        std::optional<GammaOperator> adapted;
        if (!g_.is_deterministic()) adapted.emplace(g_.at(h));
        const GammaOperator& op = adapted ? *adapted : g_.operators()[std::size_t(i)];
        const double sf = adapted ? square_function_norm(op, q) : det_sf_[std::size_t(i)];
        acc += g_.grid().dt(i) * sf * sf;
        on_op(i, op);
        for (int s = 0; s < sub_; ++s) {
            const int j = i * sub_ + s;
            if (scheme_ == Scheme::Exact) {
                step_exact(y, op, j, exact, z);
            } else {
                if (w) {
                    dw = w->increments.row(j).transpose();
                } else {
                    wiener.fill(std::uint32_t(j), dw, m);
                    dw *= std::sqrt(fine_.dt(j));
                }
                y += op.apply(dw);
                if (scheme_ == Scheme::ExponentialEuler) {
                    const int slot = dt_slot_[j];
                    if (!s_diag_.empty()) y = s_diag_[slot].cwiseProduct(y);
                    else y = s_dt_[slot] * y;
                }
            }
            on_node(j + 1, y);
        }
    }
}

} // namespace stochconv::detail
