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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "stochconv/ensemble.hpp"
#include "stochconv/estimators.hpp"
#include "stochconv/strategies.hpp"

using namespace stochconv;

namespace {

std::vector<double> gaussian_abs(std::size_t n, std::uint64_t seed, double sigma = 1.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, sigma);
    std::vector<double> z(n);
    for (auto& v : z) v = std::abs(g(rng));
    return z;
}

std::vector<double> student_abs(std::size_t n, std::uint64_t seed, double dof) {
    std::mt19937_64 rng(seed);
    std::student_t_distribution<double> t(dof);
    std::vector<double> z(n);
    for (auto& v : z) v = std::abs(t(rng));
    return z;
}

// (2n - 1)!! M^n, the Gaussian even moment.
double double_factorial_odd(int n) {
    double f = 1.0;
    for (int k = 1; k <= 2 * n - 1; k += 2) f *= k;
    return f;
}

StepProcess scalar_constant(double g, int steps = 8) {
    Mat m(1, 1);
    m(0, 0) = g;
    return StepProcess::constant(TimeGrid::uniform(1.0, steps), GammaOperator(m, LqSpace(2, 1)));
}

} // namespace

TEST(Stats, Quantiles) {
    boost::math::normal_distribution<double> nd;
    for (double p : {0.01, 0.3, 0.975}) EXPECT_NEAR(normal_quantile(p), boost::math::quantile(nd, p), 1e-9);
    boost::math::students_t_distribution<double> td(9.0);
    EXPECT_NEAR(t_quantile(9.0), boost::math::quantile(td, 0.975), 1e-9);
    EXPECT_NEAR(t_quantile(49.0), 2.0096, 1e-4);
}

TEST(Stats, WilsonAndRanks) {
    const Estimate w = wilson_interval(0, 100);
    EXPECT_EQ(w.ci_low, 0.0);
    EXPECT_NEAR(w.ci_high, 0.0370, 1e-3);
    const Estimate h = wilson_interval(50, 100);
    EXPECT_NEAR(h.ci_low, 0.4038, 1e-3);
    EXPECT_NEAR(h.ci_high, 0.5962, 1e-3);
    EXPECT_NEAR(spearman({1, 2, 3, 4}, {10, 20, 30, 40}), 1.0, 1e-15);
    EXPECT_NEAR(spearman({1, 2, 3, 4}, {4, 3, 2, 1}), -1.0, 1e-15);
    EXPECT_NEAR(spearman({1, 2, 2, 3}, {1, 2, 2, 3}), 1.0, 1e-15);
    EXPECT_EQ(median({3, 1, 2}), 2.0);
    EXPECT_EQ(median({4, 1, 2, 3}), 2.5);
}

TEST(Stats, LeastSquares) {
    const LinearFit f = least_squares({0, 1, 2, 3}, {1, 3, 5, 7});
    EXPECT_NEAR(f.slope, 2.0, 1e-14);
    EXPECT_NEAR(f.intercept, 1.0, 1e-14);
    EXPECT_NEAR(f.slope_se, 0.0, 1e-12);
}

TEST(Moments, Examples) {
    const std::vector<double> c(2000, 2.5);
    const MomentReport r = estimate_pth_moment(c, 3.0);
    EXPECT_NEAR(r.value, 2.5, 1e-14);
    EXPECT_NEAR(r.ci_low, 2.5, 1e-14);
    EXPECT_NEAR(r.ci_high, 2.5, 1e-14);

    const auto z = gaussian_abs(100000, 1);
    const MomentReport m4 = estimate_pth_moment(z, 4.0), m2 = estimate_pth_moment(z, 2.0);
    EXPECT_LE(m4.ci_low, std::pow(3.0, 0.25));
    EXPECT_GE(m4.ci_high, std::pow(3.0, 0.25));
    EXPECT_LE(m2.value, m4.value);
    EXPECT_LE(m4.tail_lower, m4.value);
    for (double p : {0.5, 1.0, 1.5, 3.0, 6.0}) EXPECT_LE(estimate_pth_moment(z, p).value, estimate_pth_moment(z, p + 0.5).value);

    EXPECT_THROW(estimate_pth_moment(z, 0.0), std::invalid_argument);
    EXPECT_THROW(estimate_pth_moment(std::vector<double>(999, 1.0), 2.0), std::invalid_argument);
}

TEST(Moments, ExtremeScalesDoNotOverflow) {
    auto z = gaussian_abs(5000, 2);
    for (auto& v : z) v *= 1e200;
    const MomentReport m = estimate_pth_moment(z, 8.0);
    EXPECT_TRUE(std::isfinite(m.value));
    EXPECT_NEAR(m.value / 1e200, std::pow(105.0, 1.0 / 8.0), 0.1);
}

TEST(Bdg, IsometryAndGaussianMoment) {
    const StepProcess g = scalar_constant(1.0);
    const MomentReport r2 = bdg_ratio(g, 2.0, 2.0, 50000, 3);
    EXPECT_TRUE(r2.ci_low <= 1.0 && 1.0 <= r2.ci_high) << r2.value;
    const MomentReport r4 = bdg_ratio(g, 4.0, 2.0, 50000, 4);
    EXPECT_TRUE(r4.ci_low <= std::pow(3.0, 0.25) && std::pow(3.0, 0.25) <= r4.ci_high) << r4.value;
    EXPECT_THROW(bdg_ratio(g, 0.5, 2.0, 2000, 1), std::invalid_argument);
    EXPECT_THROW(bdg_ratio(scalar_constant(0.0), 2.0, 2.0, 2000, 1), std::invalid_argument);
}

TEST(Bdg, RankOneMatchesScalarFactor) {
    const TimeGrid grid = TimeGrid::uniform(1.0, 8);
    RVec h(1);
    h << 1.0;
    Vec x(8);
    for (int k = 0; k < 8; ++k) x[k] = 1.0 / (k + 1.0);
    const StepProcess vec = StepProcess::constant(grid, GammaOperator::rank_one(h, x, LqSpace(4, 8)));
    const MomentReport a = bdg_ratio(vec, 4.0, 4.0, 20000, 5);
    const MomentReport b = bdg_ratio(scalar_constant(1.0), 4.0, 2.0, 20000, 5);
    EXPECT_NEAR(a.value, b.value, 1e-12);
    EXPECT_NEAR(a.ci_high, b.ci_high, 1e-12);
}

TEST(Bdg, ConstantOverAdaptedFamily) {
    const TimeGrid grid = TimeGrid::uniform(1.0, 16);
    std::vector<StepProcess> fam;
    for (const ScalarRule& r : bdg_rules()) fam.push_back(StepProcess::adapted(grid, std::make_shared<ScalarStrategy>(r)));
    const BdgConstant k2 = bdg_constant_estimate(fam, 2.0, 2.0, 20000, 7);
    // Isometry saturates for every member; 3-CI slack as for all inequality checks.
    for (const MomentReport& m : k2.members) EXPECT_NEAR(m.value, 1.0, 3.0 * 0.5 * (m.ci_high - m.ci_low));
    EXPECT_LE(1.0 - 1e-12, k2.max_upper);
    EXPECT_NEAR(k2.value, 1.0, 0.05);
    const BdgConstant k4 = bdg_constant_estimate(fam, 4.0, 2.0, 20000, 8);
    EXPECT_GE(k4.value, std::pow(3.0, 0.25) - k4.half_width());
    EXPECT_EQ(k4.members.size(), fam.size());
    EXPECT_LE(k4.value, k4.max_upper);
    EXPECT_THROW(bdg_constant_from({}), std::invalid_argument);
}

TEST(Growth, SyntheticSlopes) {
    const std::vector<double> ps = {2, 4, 8, 16};
    std::vector<double> root, lin;
    for (double p : ps) root.push_back(std::sqrt(p)), lin.push_back(p);
    EXPECT_NEAR(sqrt_growth_slope(ps, root).value, 0.5, 1e-14);
    EXPECT_NEAR(sqrt_growth_slope(ps, lin).value, 1.0, 1e-14);
    EXPECT_THROW(sqrt_growth_slope({2, 4, 8}, {1, 2, 3}), std::invalid_argument);
}

TEST(Interpolation, ThetaAndEndpoints) {
    EXPECT_NEAR(interpolation_theta(4.0, 3.0), 2.0 / 3.0, 1e-15);
    EXPECT_EQ(interpolation_theta(4.0, 2.0), 0.0);
    EXPECT_NEAR(interpolation_theta(4.0, 4.0), 1.0, 1e-15);
    BdgConstant a, b;
    a.value = 1.3;
    a.ci_low = 1.2;
    a.ci_high = 1.4;
    b.value = 1.5;
    b.ci_low = 1.45;
    b.ci_high = 1.55;
    EXPECT_NEAR(interpolation_gap(4.0, 2.0, a, a, b).gap, 0.0, 1e-15);
    EXPECT_NEAR(interpolation_gap(4.0, 4.0, a, b, b).gap, 0.0, 1e-14);
    const InterpolationGap mid = interpolation_gap(4.0, 3.0, a, a, b);
    EXPECT_NEAR(mid.gap, std::pow(1.3, 1.0 / 3.0) * std::pow(1.5, 2.0 / 3.0) - 1.3, 1e-14);
    EXPECT_GT(mid.ci, 0.0);
    EXPECT_TRUE(mid.pass());
    EXPECT_THROW(interpolation_gap(3.0, 4.0, a, a, b), std::invalid_argument);
}

TEST(Doob, Examples) {
    const std::vector<double> c(2000, 1.7);
    EXPECT_NEAR(doob_ratio(c, c, 2.0).value, 1.0, 1e-14);
    EXPECT_THROW(doob_ratio(c, c, 1.0), std::invalid_argument);

    EnsembleSpec spec;
    spec.scheme = Scheme::Ito;
    spec.paths = 20000;
    spec.seed = 9;
    const PathEnsemble e = run_ensemble(spec, scalar_constant(1.0, 64));
    for (double p : {2.0, 4.0}) {
        const MomentReport r = doob_ratio(e.sup[0], e.terminal[0], p);
        EXPECT_GE(r.value, 1.0);
        EXPECT_TRUE(doob_check(r)) << p << " " << r.value;
    }
}

TEST(Tail, Examples) {
    const auto z = gaussian_abs(20000, 10);
    const double top = *std::max_element(z.begin(), z.end());
    const TailReport t = empirical_tail(z, {0.0, 1.0, 2.0, top + 1.0});
    EXPECT_EQ(t.probs[0].value, 1.0);
    EXPECT_EQ(t.probs[3].value, 0.0);
    EXPECT_EQ(t.probs[3].ci_low, 0.0);
    EXPECT_GT(t.probs[3].ci_high, 0.0);
    EXPECT_GE(t.probs[1].value, t.probs[2].value);
    EXPECT_THROW(empirical_tail(z, {1.0, 0.5}), std::invalid_argument);
}

TEST(Tail, OrnsteinUhlenbeckSupIsSubgaussian) {
    EnsembleSpec spec;
    spec.generator = Generator(SpectralGenerator({1.0}, 2.0));
    spec.paths = 10000;
    spec.seed = 11;
    const PathEnsemble e = run_ensemble(spec, scalar_constant(1.0, 32));
    std::vector<double> grid;
    for (int i = 1; i <= 12; ++i) grid.push_back(0.2 * i);
    const LinearFit f = tail_slope(empirical_tail(e.sup[0], grid));
    EXPECT_GT(f.slope, 0.0);
    EXPECT_GT(f.slope, 3.0 * f.slope_se);
}

TEST(Exp1, Examples) {
    const Exp1Bound b = exp1_bound(1.0, 1.0, 0.0);
    EXPECT_NEAR(b.eps_star, 1.0 / (2.0 * std::exp(1.0)), 1e-15);
    EXPECT_NEAR(b.eps_star, 0.18394, 1e-5);
    EXPECT_EQ(b.bound, 2.0);
    // At eps_star the series ratio is exactly 1; the sum 2 is reached at eps_star / 2.
    EXPECT_NEAR(b.ratio_at_star, 1.0, 1e-15);
    EXPECT_NEAR(b.eps_certified, 1.0 / (4.0 * std::exp(1.0)), 1e-15);
    EXPECT_NEAR(b.series_limit, 2.0, 1e-14);
    EXPECT_NEAR(b.partial_sums.back(), 2.0, 1e-14);
    EXPECT_NEAR(exp1_bound(2.0, 1.0, 1.0).eps_star, 0.5 * b.eps_star, 1e-16);
    EXPECT_NEAR(exp1_bound(1.0, 1.0, 3.0).bound, 2.0 * std::exp(-9.0 * b.eps_star), 1e-15);
    EXPECT_THROW(exp1_bound(0.0, 1.0, 1.0), std::invalid_argument);
    EXPECT_THROW(exp1_bound(1.0, -1.0, 1.0), std::invalid_argument);
}

TEST(Chernoff, GaussianCalibratesNearKnownConstant) {
    // E Z^{2n} = (2n-1)!! <= C^{2n} (2n)^n with equality first reached at n = 1: C = 1/sqrt 2.
    double known = 0.0;
    for (int n = 1; n <= 5; ++n) known = std::max(known, std::pow(double_factorial_odd(n), 0.5 / n) / std::sqrt(2.0 * n));
    EXPECT_NEAR(known, 1.0 / std::sqrt(2.0), 1e-15);
    const auto z = gaussian_abs(100000, 12);
    std::vector<MomentReport> reps;
    for (int n = 1; n <= 5; ++n) reps.push_back(estimate_pth_moment(z, 2.0 * n));
    const double c = calibrate_c_tail(reps, 1.0);
    EXPECT_NEAR(c, known, 0.02);
    EXPECT_TRUE(markov_chernoff_check(reps, 1.0, c).all);

    // Scale absorbed by M.
    std::vector<MomentReport> scaled;
    std::vector<double> z2 = z;
    for (auto& v : z2) v *= 2.0;
    for (int n = 1; n <= 5; ++n) scaled.push_back(estimate_pth_moment(z2, 2.0 * n));
    EXPECT_NEAR(calibrate_c_tail(scaled, 4.0), c, 1e-12);
}

TEST(Chernoff, StudentT3FailsAtLargeOrder) {
    // Variance 3, so M = 3 normalises n = 1; the sixth moment diverges.
    const auto z = student_abs(100000, 13, 3.0);
    std::vector<MomentReport> reps;
    for (int n = 1; n <= 5; ++n) reps.push_back(estimate_pth_moment(z, 2.0 * n));
    const double c = calibrate_c_tail({reps[0]}, 3.0);
    const ChernoffCheck ch = markov_chernoff_check(reps, 3.0, c);
    EXPECT_TRUE(ch.pass[0]);
    EXPECT_FALSE(ch.all);
    EXPECT_FALSE(ch.pass[4]);
    EXPECT_THROW(markov_chernoff_check({}, 1.0, 1.0), std::invalid_argument);
    EXPECT_THROW(markov_chernoff_check({estimate_pth_moment(z, 3.0)}, 1.0, 1.0), std::invalid_argument);
}
