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

#include "stochconv/process.hpp"

#include <cmath>

namespace stochconv {

TimeGrid::TimeGrid(std::vector<double> nodes) : nodes_(std::move(nodes)) {
    if (nodes_.size() < 2) throw std::invalid_argument("time grid needs at least one step");
    if (nodes_[0] != 0.0) throw std::invalid_argument("time grid must start at 0");
    for (std::size_t i = 1; i < nodes_.size(); ++i)
        if (!(nodes_[i] > nodes_[i - 1]) || !std::isfinite(nodes_[i]))
            throw std::invalid_argument("time grid must be strictly increasing");
}

TimeGrid TimeGrid::uniform(double T, int steps) {
    if (!(T > 0.0)) throw std::invalid_argument("grid horizon T must be positive");
    if (steps < 1) throw std::invalid_argument("grid needs N ≥ 1 steps");
    std::vector<double> n(steps + 1);
    for (int i = 0; i <= steps; ++i) n[i] = T * double(i) / double(steps);
    n.back() = T;
    return TimeGrid(std::move(n));
}

TimeGrid TimeGrid::refine() const {
    std::vector<double> n;
    n.reserve(2 * nodes_.size() - 1);
    for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
        n.push_back(nodes_[i]);
        n.push_back(0.5 * (nodes_[i] + nodes_[i + 1]));
    }
    n.push_back(nodes_.back());
    return TimeGrid(std::move(n));
}

TimeGrid TimeGrid::refine(int levels) const {
    TimeGrid g = *this;
    for (int l = 0; l < levels; ++l) g = g.refine();
    return g;
}

TimeGrid TimeGrid::coarsen(int factor) const {
    if (factor < 1 || steps() % factor != 0) throw std::invalid_argument("grid cannot be coarsened by this factor");
    std::vector<double> n;
    for (int i = 0; i <= steps(); i += factor) n.push_back(nodes_[i]);
    return TimeGrid(std::move(n));
}

StepProcess StepProcess::deterministic(TimeGrid grid, std::vector<GammaOperator> ops) {
    if (ops.empty() || int(ops.size()) != grid.steps())
        throw std::invalid_argument("deterministic process needs one operator per grid step");
    StepProcess p(std::move(grid), ops.front().codomain());
    p.m_ = ops.front().cols();
    for (const auto& op : ops)
        if (op.cols() != p.m_ || !(op.codomain() == p.space_))
            throw std::invalid_argument("process operators must share noise dimension and codomain");
    p.ops_ = std::move(ops);
    return p;
}

StepProcess StepProcess::constant(TimeGrid grid, const GammaOperator& op) {
    const int n = grid.steps();
    return deterministic(std::move(grid), std::vector<GammaOperator>(std::size_t(n), op));
}

StepProcess StepProcess::adapted(TimeGrid grid, std::shared_ptr<const Strategy> rule) {
    if (!rule) throw std::invalid_argument("adapted process needs a rule");
    StepProcess p(std::move(grid), rule->space());
    p.m_ = rule->noise_dim();
    p.rule_ = std::move(rule);
    return p;
}

GammaOperator StepProcess::at(const History& h) const {
    if (h.step < 0 || h.step >= grid_.steps()) throw std::out_of_range("process step out of range");
    if (!rule_) return scale_ == 1.0 ? ops_[h.step] : ops_[h.step].scaled(scale_);
    GammaOperator g = (*rule_)(h);
    if (g.cols() != m_ || g.rows() != space_.dim()) throw std::logic_error("strategy returned an operator of the wrong shape");
    return scale_ == 1.0 ? g : g.scaled(scale_);
}

StepProcess StepProcess::scaled(double c) const {
    StepProcess p = *this;
    if (!rule_) {
        for (auto& op : p.ops_) op = op.scaled(c);
    } else {
        p.scale_ *= c;
    }
    return p;
}

std::string StepProcess::describe() const {
    if (rule_) return "adapted:" + rule_->name();
    return "deterministic";
}

} // namespace stochconv
