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

#include "stochconv/strategies.hpp"

#include <cmath>
#include <cstdio>

namespace stochconv {

double ScalarRule::amplitude(double t, double s) const {
    switch (kind) {
    case RuleKind::Deterministic: return 1.0;
    case RuleKind::Oscillatory: return std::sqrt(2.0) * std::cos(2.0 * kPi * frequency * t);
    case RuleKind::RandomSign: {
        const double sgn = s >= 0.0 ? 1.0 : -1.0;
        return sgn * (1.0 + modulation * std::cos(2.0 * kPi * frequency * t));
    }
    case RuleKind::StopLoss: return std::abs(s) < level ? 1.0 : 0.0;
    case RuleKind::BangBang: return std::abs(s) < level ? 1.0 : 2.0;
    }
    return 0.0;
}

std::string ScalarRule::name() const {
    char buf[64];
    switch (kind) {
    case RuleKind::Deterministic: return "deterministic";
    case RuleKind::Oscillatory: std::snprintf(buf, sizeof buf, "oscillatory(f=%g)", frequency); return buf;
    case RuleKind::RandomSign: std::snprintf(buf, sizeof buf, "random-sign(m=%g,f=%g)", modulation, frequency); return buf;
    case RuleKind::StopLoss: std::snprintf(buf, sizeof buf, "stop-loss(%g)", level); return buf;
    case RuleKind::BangBang: std::snprintf(buf, sizeof buf, "bang-bang(%g)", level); return buf;
    }
    return "?";
}

GammaOperator ScalarStrategy::operator()(const History& h) const {
    Mat g(1, 1);
    g(0, 0) = rule_.amplitude(h.time, h.state[0].real());
    return GammaOperator(std::move(g), space_);
}

RankOneStrategy::RankOneStrategy(ScalarRule rule, int d, double q) : rule_(rule), space_(q, d) {
    x_ = Vec::Constant(d, std::pow(double(d), -1.0 / q));
}

GammaOperator RankOneStrategy::operator()(const History& h) const {
    const double coeff = h.state[0].real() / x_[0].real();
    return GammaOperator(x_ * rule_.amplitude(h.time, coeff), space_);
}

DiagonalStrategy::DiagonalStrategy(ScalarRule rule, RVec profile, double q)
    : rule_(rule), profile_(std::move(profile)), space_(q, int(profile_.size())) {
    for (Eigen::Index k = 0; k < profile_.size(); ++k)
        if (!(profile_[k] > 0.0)) throw std::invalid_argument("profile entries must be positive");
}

GammaOperator DiagonalStrategy::operator()(const History& h) const {
    Vec diag(profile_.size());
    for (Eigen::Index k = 0; k < profile_.size(); ++k)
        diag[k] = profile_[k] * rule_.amplitude(h.time, h.state[k].real() / profile_[k]);
    return GammaOperator::diagonal(std::move(diag), space_);
}

RankVaryingStrategy::RankVaryingStrategy(RVec profile, double q, int frequency, int max_rank)
    : profile_(std::move(profile)), space_(q, int(profile_.size())), frequency_(frequency),
      max_rank_(std::max(1, std::min(max_rank, int(profile_.size())))) {}

GammaOperator RankVaryingStrategy::operator()(const History& h) const {
    const int cyc = (frequency_ + h.step) % max_rank_;
    const int rank = h.state[0].real() >= 0.0 ? 1 + cyc : max_rank_ - cyc;
    Vec diag = Vec::Zero(profile_.size());
    for (int k = 0; k < rank; ++k) diag[k] = profile_[k];
    return GammaOperator::diagonal(std::move(diag), space_);
}

std::string RankVaryingStrategy::name() const {
    return "rank-varying(f=" + std::to_string(frequency_) + ",R=" + std::to_string(max_rank_) + ")";
}

BudgetCapped::BudgetCapped(std::shared_ptr<const Strategy> inner, double budget)
    : inner_(std::move(inner)), budget_(budget) {
    if (!inner_) throw std::invalid_argument("budget cap needs an inner rule");
    if (!(budget > 0.0)) throw std::invalid_argument("budget M must be positive");
}

GammaOperator BudgetCapped::operator()(const History& h) const {
    GammaOperator g = (*inner_)(h);
    const double f = square_function_norm(g);
    const double want = h.dt * f * f;
    const double left = std::max(0.0, budget_ - h.accumulated);
    if (want <= left) return g;
    // Shrink slightly below the exact fill so rounding never overshoots.
    return g.scaled(std::sqrt(left / want) * (1.0 - 1e-12));
}

std::string BudgetCapped::name() const {
    char buf[32];
    std::snprintf(buf, sizeof buf, "capped(M=%g)/", budget_);
    return buf + inner_->name();
}

RVec power_profile(int d, double s) {
    RVec a(d);
    for (int k = 0; k < d; ++k) a[k] = std::pow(double(k + 1), -s);
    return a;
}

std::vector<ScalarRule> bdg_rules() {
    return {{RuleKind::Deterministic, 0, 0, 0},
            {RuleKind::Oscillatory, 3.0, 0, 0},
            {RuleKind::RandomSign, 3.0, 0, 0},
            {RuleKind::StopLoss, 0, 1.0, 0},
            {RuleKind::BangBang, 0, 1.0, 0}};
}

std::vector<std::shared_ptr<const Strategy>> maximal_family(int d, double q) {
    const RVec a = power_profile(d, 1.0);
    std::vector<std::shared_ptr<const Strategy>> fam;
    for (int f = 1; f <= 20; ++f) {
        switch (f % 4) {
        case 0:
            fam.push_back(std::make_shared<DiagonalStrategy>(ScalarRule{RuleKind::Oscillatory, 0.5 * f, 0, 0}, a, q));
            break;
        case 1:
            fam.push_back(std::make_shared<DiagonalStrategy>(ScalarRule{RuleKind::RandomSign, 0.5 * f, 0, 0.5}, a, q));
            break;
        case 2:
            fam.push_back(std::make_shared<DiagonalStrategy>(ScalarRule{RuleKind::StopLoss, 0, 0.1 + 0.02 * f, 0}, a, q));
            break;
        default:
            fam.push_back(std::make_shared<RankVaryingStrategy>(a, q, f));
            break;
        }
    }
    return fam;
}

std::vector<std::shared_ptr<const Strategy>> tail_family(int d, double q, double budget) {
    const RVec a = power_profile(d, 1.0);
    std::vector<std::shared_ptr<const Strategy>> inner = {
        std::make_shared<DiagonalStrategy>(ScalarRule{RuleKind::BangBang, 0, 0.5, 0}, a, q),
        std::make_shared<DiagonalStrategy>(ScalarRule{RuleKind::StopLoss, 0, 0.5, 0}, a, q),
        std::make_shared<RankVaryingStrategy>(a, q, 1),
    };
    std::vector<std::shared_ptr<const Strategy>> fam;
    for (auto& s : inner) fam.push_back(std::make_shared<BudgetCapped>(s, budget));
    return fam;
}

} // namespace stochconv
