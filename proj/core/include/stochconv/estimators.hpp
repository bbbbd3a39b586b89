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

#include "stochconv/ensemble.hpp"
#include "stochconv/stats.hpp"

namespace stochconv {

/// (E Z^p)^{1/p} with a 95% batch-means interval.
struct MomentReport {
    double p = 0.0;
    double value = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::size_t n = 0;
    /// Distribution-free lower bound a (P(|Z| >= a))^{1/p} at the top order
    /// statistics; unlike ci_low it stays informative for heavy tails.
    double tail_lower = 0.0;

    double rel_half_width() const { return value > 0 ? 0.5 * (ci_high - ci_low) / value : 0.0; }
};

MomentReport estimate_pth_moment(const std::vector<double>& z, double p);

/// (E num^p / E den^p)^{1/p}, delta-method interval on batch means.
MomentReport moment_ratio(const std::vector<double>& num, const std::vector<double>& den, double p);

/// BDG ratio from an Ito ensemble: terminal ||int G dW||_q against
/// ||G||_{L^2 gamma} (p >= 1, so the terminal node is the worst node).
MomentReport bdg_ratio(const PathEnsemble& e, double q, double p);
MomentReport bdg_ratio(const StepProcess& g, double p, double q, std::size_t n, std::uint64_t seed,
                       int threads = 1);

struct BdgConstant {
    double p = 0.0;
    double value = 0.0;       // max of member point estimates
    double ci_low = 0.0;      // interval of the maximising member
    double ci_high = 0.0;
    double max_upper = 0.0;   // max of member upper bounds
    std::size_t argmax = 0;
    std::vector<MomentReport> members;

    double half_width() const { return 0.5 * (ci_high - ci_low); }
};

BdgConstant bdg_constant_from(const std::vector<MomentReport>& members);
BdgConstant bdg_constant_estimate(const std::vector<StepProcess>& family, double p, double q, std::size_t n,
                                  std::uint64_t seed, int threads = 1);

/// Least-squares slope of log K against log p (>= 4 geometrically spaced p).
Estimate sqrt_growth_slope(const std::vector<double>& ps, const std::vector<double>& ks);

struct InterpolationGap {
    double theta = 0.0;
    double gap = 0.0;
    double ci = 0.0; // propagated half-width
    bool pass() const { return gap >= -3.0 * ci; }
};

/// gap = K_{p,l2}^{1-theta} K_{p,lp}^theta - K_{p,lq}, 1/q = (1-theta)/2 + theta/p.
InterpolationGap interpolation_gap(double p, double q, const BdgConstant& k2, const BdgConstant& kq,
                                   const BdgConstant& kp);
double interpolation_theta(double p, double q);

/// (E sup^p)^{1/p} / (E terminal^p)^{1/p}, p > 1.
MomentReport doob_ratio(const std::vector<double>& sups, const std::vector<double>& terminals, double p);
/// ratio <= p' (1 + 3 relative CI).
bool doob_check(const MomentReport& r);

struct TailReport {
    std::vector<double> lambda;
    std::vector<Estimate> probs; // Wilson intervals
    double M = 0.0;
    std::vector<double> bound_curve;
};

TailReport empirical_tail(const std::vector<double>& sups, const std::vector<double>& lambda_grid, double M = 1.0);

/// Weighted fit of -log P against lambda^2 over points with P > 0.
LinearFit tail_slope(const TailReport& t);

struct Exp1Bound {
    /// 1 / (2 e M C^2) and 2 exp(-eps_star lambda^2).
    double eps_star = 0.0;
    double bound = 0.0;
    /// Geometric ratio 2 e eps M C^2 of the moment series at eps_star (= 1).
    double ratio_at_star = 0.0;
    /// Largest eps whose series sums to 2 (ratio 1/2), and its bound.
    double eps_certified = 0.0;
    double certified_bound = 0.0;
    std::vector<double> partial_sums; // sum_{n<N} (2 M eps e C^2)^n at eps_certified
    double series_limit = 0.0;
};

Exp1Bound exp1_bound(double M, double c_tail, double lambda, int terms = 60);

struct ChernoffCheck {
    std::vector<int> n;
    std::vector<double> lhs; // max(ci_low, tail_lower) of (E sup^{2n})^{1/2n}
    std::vector<double> rhs; // C sqrt(2 n M)
    std::vector<bool> pass;
    bool all = true;
};

/// Term-by-term E sup^{2n} <= C^{2n} (2n)^n M^n for the supplied p = 2n reports.
ChernoffCheck markov_chernoff_check(const std::vector<MomentReport>& reports, double M, double c_tail);
/// Smallest C passing every n at the upper CI: max_n ci_high / sqrt(2 n M).
double calibrate_c_tail(const std::vector<MomentReport>& reports, double M);

} // namespace stochconv
