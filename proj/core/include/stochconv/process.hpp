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

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "stochconv/gamma_operator.hpp"

namespace stochconv {

/// 0 = t_0 < t_1 < ... < t_N = T.
class TimeGrid {
public:
    explicit TimeGrid(std::vector<double> nodes);
    static TimeGrid uniform(double T, int steps);

    int steps() const { return int(nodes_.size()) - 1; }
    double node(int i) const { return nodes_[i]; }
    double dt(int i) const { return nodes_[i + 1] - nodes_[i]; }
    double horizon() const { return nodes_.back(); }
    const std::vector<double>& nodes() const { return nodes_; }

    /// Midpoint refinement; every original node is kept.
    TimeGrid refine() const;
    TimeGrid refine(int levels) const;
    /// Every factor-th node; steps() must be divisible by factor.
    TimeGrid coarsen(int factor) const;

    bool operator==(const TimeGrid& o) const { return nodes_ == o.nodes_; }

private:
    std::vector<double> nodes_;
};

/// The information available to an adapted rule at the left end of a
/// step: the simulated state at t_{i-1} and the accumulated
/// int_0^{t_{i-1}} ||G||^2 ds in the rule's own space.
struct History {
    int step;
    double time;
    double dt; // length of the step about to be taken
    const Vec& state;
    double accumulated;
};

/// An adapted rule: on (t_{i-1}, t_i] it may only depend on History.
class Strategy {
public:
    virtual ~Strategy() = default;
    virtual GammaOperator operator()(const History& h) const = 0;
    virtual int noise_dim() const = 0;
    virtual LqSpace space() const = 0;
    virtual std::string name() const = 0;
};

/// Step-constant operator-valued integrand on a master grid.
class StepProcess {
public:
    static StepProcess deterministic(TimeGrid grid, std::vector<GammaOperator> ops);
    /// The same operator on every step.
    static StepProcess constant(TimeGrid grid, const GammaOperator& op);
    static StepProcess adapted(TimeGrid grid, std::shared_ptr<const Strategy> rule);

    const TimeGrid& grid() const { return grid_; }
    int noise_dim() const { return m_; }
    const LqSpace& space() const { return space_; }
    bool is_deterministic() const { return rule_ == nullptr; }
    const std::vector<GammaOperator>& operators() const { return ops_; }
    const Strategy* rule() const { return rule_.get(); }
    std::string describe() const;

    /// Operator used on (t_i, t_{i+1}].
    GammaOperator at(const History& h) const;

    StepProcess scaled(double c) const;

private:
    StepProcess(TimeGrid grid, LqSpace space) : grid_(std::move(grid)), space_(space) {}

    TimeGrid grid_;
    LqSpace space_;
    int m_ = 0;
    std::vector<GammaOperator> ops_;
    std::shared_ptr<const Strategy> rule_;
    double scale_ = 1.0;
};

} // namespace stochconv
