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

#include <memory>
#include <string>
#include <vector>

#include "stochconv/process.hpp"

namespace stochconv {

enum class RuleKind { Deterministic, Oscillatory, RandomSign, StopLoss, BangBang };

/// Scalar adapted amplitude g(t, s) where s is the scalar state seen by
/// the rule at the left end of the step.
struct ScalarRule {
    RuleKind kind = RuleKind::Deterministic;
    double frequency = 3.0; // oscillatory: sqrt(2) cos(2 pi f t)
    double level = 1.0;     // stop-loss / bang-bang threshold on |s|
    double modulation = 0.0; // random-sign: times (1 + modulation cos(2 pi f t))

    double amplitude(double t, double s) const;
    std::string name() const;
};

/// g(t, M) on H = R into X = R (l^q_1).
class ScalarStrategy final : public Strategy {
public:
    explicit ScalarStrategy(ScalarRule rule, double q = 2.0) : rule_(rule), space_(q, 1) {}
    GammaOperator operator()(const History& h) const override;
    int noise_dim() const override { return 1; }
    LqSpace space() const override { return space_; }
    std::string name() const override { return "scalar/" + rule_.name(); }

private:
    ScalarRule rule_;
    LqSpace space_;
};

/// e_1 (x) (g x) with x = d^{-1/q}(1, ..., 1); the rule reads the
/// coefficient of the state along x.
class RankOneStrategy final : public Strategy {
public:
    RankOneStrategy(ScalarRule rule, int d, double q);
    GammaOperator operator()(const History& h) const override;
    int noise_dim() const override { return 1; }
    LqSpace space() const override { return space_; }
    std::string name() const override { return "rank-one/" + rule_.name(); }

private:
    ScalarRule rule_;
    LqSpace space_;
    Vec x_;
};

/// diag(a_k g(t, Re y_k / a_k)) with independent noise per coordinate.
class DiagonalStrategy final : public Strategy {
public:
    DiagonalStrategy(ScalarRule rule, RVec profile, double q);
    GammaOperator operator()(const History& h) const override;
    int noise_dim() const override { return int(profile_.size()); }
    LqSpace space() const override { return space_; }
    std::string name() const override { return "diagonal/" + rule_.name(); }

private:
    ScalarRule rule_;
    RVec profile_;
    LqSpace space_;
};

/// diag(a_k 1{k <= rank_i}) with rank_i cycling through 1..R with the step
/// index, reversed while Re y_1 < 0.
class RankVaryingStrategy final : public Strategy {
public:
    RankVaryingStrategy(RVec profile, double q, int frequency, int max_rank = 8);
    GammaOperator operator()(const History& h) const override;
    int noise_dim() const override { return int(profile_.size()); }
    LqSpace space() const override { return space_; }
    std::string name() const override;

private:
    RVec profile_;
    LqSpace space_;
    int frequency_;
    int max_rank_;
};

/// Scales the inner rule so that int ||G||^2 dt never exceeds `budget`.
class BudgetCapped final : public Strategy {
public:
    BudgetCapped(std::shared_ptr<const Strategy> inner, double budget);
    GammaOperator operator()(const History& h) const override;
    int noise_dim() const override { return inner_->noise_dim(); }
    LqSpace space() const override { return inner_->space(); }
    std::string name() const override;

private:
    std::shared_ptr<const Strategy> inner_;
    double budget_;
};

/// a_k = k^{-s}.
RVec power_profile(int d, double s);

/// The five scalar rules used for BDG constants.
std::vector<ScalarRule> bdg_rules();

/// Twenty members indexed by f = 1..20; f mod 4 selects oscillatory
/// deterministic, random-sign, stop-loss or rank-varying, with spatial
/// profile a_k = 1/k and diagonal noise.
std::vector<std::shared_ptr<const Strategy>> maximal_family(int d, double q);

/// Adapted members with int ||G||^2 dt <= budget almost surely.
std::vector<std::shared_ptr<const Strategy>> tail_family(int d, double q, double budget);

} // namespace stochconv
