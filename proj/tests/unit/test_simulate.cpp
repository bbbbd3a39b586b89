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
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "stochconv/ensemble.hpp"
#include "stochconv/estimators.hpp"
#include "stochconv/strategies.hpp"
#include "../../core/src/engine.hpp"

using namespace stochconv;

namespace {

const LqSpace kScalar(2.0, 1);

GammaOperator scalar_op(double g) {
    Mat m(1, 1);
    m(0, 0) = g;
    return GammaOperator(m, kScalar);
}

// Rule that reads the increment of the step it controls: not adapted.
class PeekingStrategy final : public Strategy {
public:
    explicit PeekingStrategy(const WienerPath* w) : w_(w) {}
    GammaOperator operator()(const History& h) const override {
        return scalar_op(w_->increments(h.step, 0) >= 0 ? 1.0 : -1.0);
    }
    int noise_dim() const override { return 1; }
    LqSpace space() const override { return kScalar; }
    std::string name() const override { return "peeking"; }
    const WienerPath* w_;
};

} // namespace

TEST(Wiener, Deterministic) {
    const TimeGrid g = TimeGrid::uniform(1.0, 16);
    const WienerPath a = sample_wiener(g, 3, 9, 4), b = sample_wiener(g, 3, 9, 4);
    EXPECT_EQ(a.increments, b.increments);
    EXPECT_NE(a.increments, sample_wiener(g, 3, 9, 5).increments);
}

TEST(Wiener, EnsembleMomentsUnitStep) {
    const TimeGrid g = TimeGrid::uniform(1.0, 1);
    const int n = 100000;
    double s1 = 0, s2 = 0;
    for (int p = 0; p < n; ++p) {
        const double w = sample_wiener(g, 1, 2024, std::uint64_t(p)).increments(0, 0);
        s1 += w;
        s2 += w * w;
    }
    EXPECT_LE(std::abs(s1 / n), 4.0 / std::sqrt(double(n)));
    EXPECT_NEAR(s2 / n, 1.0, 0.05);
}

TEST(Wiener, CoarsenSumsBlocks) {
    const TimeGrid g = TimeGrid::uniform(1.0, 8);
    const WienerPath w = sample_wiener(g, 2, 1, 1);
    const WienerPath c = w.coarsen(4);
    EXPECT_EQ(c.grid.steps(), 2);
    EXPECT_NEAR(c.increments(1, 1), w.increments.block(4, 1, 4, 1).sum(), 1e-15);
}

TEST(TimeGridTest, RefinementKeepsNodes) {
    const TimeGrid g({0.0, 0.3, 1.0, 1.1});
    const TimeGrid r = g.refine();
    EXPECT_EQ(r.steps(), 6);
    for (int i = 0; i <= g.steps(); ++i) EXPECT_EQ(r.node(2 * i), g.node(i));
    EXPECT_THROW(TimeGrid({0.0, 0.5, 0.5}), std::invalid_argument);
    EXPECT_TRUE(r.coarsen(2) == g);
}

TEST(Ito, ZeroIntegrand) {
    const TimeGrid g = TimeGrid::uniform(1.0, 8);
    const StepProcess z = StepProcess::constant(g, GammaOperator::zero(2, LqSpace(2, 3)));
    const Path p = ito_integral(z, sample_wiener(g, 2, 1, 0));
    EXPECT_EQ(p.states.norm(), 0.0);
    EXPECT_THROW(ito_integral(z, sample_wiener(TimeGrid::uniform(1.0, 5), 2, 1, 0)), std::invalid_argument);
}

TEST(Ito, GaussianFourthMoment) {
    EnsembleSpec spec;
    spec.scheme = Scheme::Ito;
    spec.paths = 100000;
    spec.seed = 17;
    const StepProcess g = StepProcess::constant(TimeGrid::uniform(1.0, 4), scalar_op(1.0));
    const PathEnsemble e = run_ensemble(spec, g);
    const MomentReport m = estimate_pth_moment(e.terminal[0], 4.0);
    EXPECT_NEAR(m.value / std::pow(3.0, 0.25), 1.0, 0.02);
    EXPECT_NEAR(std::pow(3.0, 0.25), 1.3161, 1e-4);
}

TEST(Ito, RankOneFactorises) {
    const TimeGrid g = TimeGrid::uniform(1.0, 6);
    RVec h(2);
    h << 0.6, -0.8;
    Vec x(3);
    x << 1.0, cplx(0.0, 2.0), -0.5;
    const StepProcess vec = StepProcess::constant(g, GammaOperator::rank_one(h, x, LqSpace(4, 3)));
    const WienerPath w = sample_wiener(g, 2, 3, 3);
    const Path p = ito_integral(vec, w);
    double scalar = 0.0;
    for (int i = 0; i < g.steps(); ++i) {
        scalar += h.dot(w.increments.row(i).transpose());
        EXPECT_LE((p.at(i + 1) - scalar * x).norm(), 1e-14);
    }
}

TEST(Ito, MartingaleAndIsometryForAdaptedFamily) {
    const TimeGrid g = TimeGrid::uniform(1.0, 16);
    for (const ScalarRule& r : bdg_rules()) {
        const StepProcess proc = StepProcess::adapted(g, std::make_shared<ScalarStrategy>(r));
        const int n = 20000;
        double s = 0, s2 = 0;
        for (int p = 0; p < n; ++p) {
            const double m = ito_integral(proc, sample_wiener(g, 1, 5, std::uint64_t(p))).states(0, g.steps()).real();
            s += m;
            s2 += m * m;
        }
        const double sd = std::sqrt(s2 / n - (s / n) * (s / n));
        EXPECT_LE(std::abs(s / n), 4.0 * sd / std::sqrt(double(n))) << r.name();

        EnsembleSpec spec;
        spec.scheme = Scheme::Ito;
        spec.paths = 20000;
        spec.seed = 6;
        const PathEnsemble e = run_ensemble(spec, proc);
        const MomentReport iso = bdg_ratio(e, 2.0, 2.0);
        EXPECT_NEAR(iso.value, 1.0, 2.0 * (iso.ci_high - iso.ci_low)) << r.name() << " [" << iso.ci_low << ", " << iso.ci_high << "]";
    }
}

TEST(Ito, PeekingRuleBreaksZeroDrift) {
    const TimeGrid g = TimeGrid::uniform(1.0, 16);
    const int n = 4000;
    double peek = 0, adapted = 0;
    const StepProcess fair = StepProcess::adapted(g, std::make_shared<ScalarStrategy>(ScalarRule{RuleKind::RandomSign, 0, 0, 0}));
    for (int p = 0; p < n; ++p) {
        const WienerPath w = sample_wiener(g, 1, 8, std::uint64_t(p));
        const StepProcess cheat = StepProcess::adapted(g, std::make_shared<PeekingStrategy>(&w));
        peek += ito_integral(cheat, w).states(0, g.steps()).real();
        adapted += ito_integral(fair, w).states(0, g.steps()).real();
    }
    // E sum |dW_i| = 16 sqrt(2 dt / pi) ~ 3.19, far outside 4 sigma = 4/sqrt(n).
    EXPECT_GT(peek / n, 4.0 / std::sqrt(double(n)));
    EXPECT_NEAR(peek / n, 16.0 * std::sqrt(2.0 / 16.0 / kPi), 0.1);
    EXPECT_LE(std::abs(adapted / n), 4.0 / std::sqrt(double(n)));
}

TEST(Euler, ZeroIntegrandAndSmallMuLimit) {
    const TimeGrid g = TimeGrid::uniform(1.0, 32);
    const Generator gen = SpectralGenerator({1e-6 * 32.0}, 2.0);
    const StepProcess z = StepProcess::constant(g, GammaOperator::zero(1, kScalar));
    EXPECT_EQ(convolve_exponential_euler(gen, z, sample_wiener(g, 1, 1, 0)).states.norm(), 0.0);

    const StepProcess one = StepProcess::constant(g, scalar_op(1.0));
    for (int p = 0; p < 20; ++p) {
        const WienerPath w = sample_wiener(g, 1, 2, std::uint64_t(p));
        const Path e = convolve_exponential_euler(gen, one, w);
        const Path i = ito_integral(one, w);
        const double scale = running_sup(i, 2.0);
        EXPECT_LE((e.states - i.states).cwiseAbs().maxCoeff(), 1e-4 * scale);
    }
}

TEST(Euler, OrnsteinUhlenbeckVarianceFineGrid) {
    EnsembleSpec spec;
    spec.scheme = Scheme::ExponentialEuler;
    spec.generator = Generator(SpectralGenerator({1.0}, 2.0));
    spec.paths = 100000;
    spec.seed = 31;
    spec.threads = 4;
    const StepProcess g = StepProcess::constant(TimeGrid::uniform(1.0, 1024), scalar_op(1.0));
    const PathEnsemble e = run_ensemble(spec, g);
    double s2 = 0;
    for (double v : e.terminal[0]) s2 += v * v;
    EXPECT_NEAR(s2 / double(spec.paths) / (0.5 * (1 - std::exp(-2.0))), 1.0, 0.01);
}

TEST(Exact, KernelClosedForms) {
    const auto k = detail::make_exact_kernel({1.0, cplx(2.0, 3.0), 1e-8}, 0.5, false);
    EXPECT_NEAR(k.a_self[0], (1 - std::exp(-1.0)) / 2.0, 1e-16);
    const cplx mu(2.0, 3.0);
    EXPECT_NEAR(std::abs(k.b_self[1] - (1.0 - std::exp(-2.0 * mu * 0.5)) / (2.0 * mu)), 0.0, 1e-15);
    EXPECT_NEAR(k.a_self[2] / 0.5, 1.0, 1e-6);
    EXPECT_NEAR(std::abs(k.b_self[2] / 0.5 - 1.0), 0.0, 1e-6);
}

TEST(Exact, OneStepOuVariance) {
    EnsembleSpec spec;
    spec.generator = Generator(SpectralGenerator({1.0}, 2.0));
    spec.paths = 100000;
    spec.seed = 99;
    for (int steps : {1, 5}) {
        const PathEnsemble e = run_ensemble(spec, StepProcess::constant(TimeGrid::uniform(1.0, steps), scalar_op(1.0)));
        std::vector<double> sq;
        for (double v : e.terminal[0]) sq.push_back(v * v);
        const BatchMean bm = batch_means(sq);
        EXPECT_NEAR(bm.mean, 0.5 * (1 - std::exp(-2.0)), 4.0 / 1.96 * bm.half_width) << steps;
    }
}

TEST(Exact, DegenerateSmallMu) {
    EnsembleSpec spec;
    spec.generator = Generator(SpectralGenerator({1e-8}, 2.0));
    spec.paths = 50000;
    spec.seed = 3;
    const PathEnsemble e = run_ensemble(spec, StepProcess::constant(TimeGrid::uniform(2.0, 1), scalar_op(1.0)));
    std::vector<double> sq;
    for (double v : e.terminal[0]) sq.push_back(v * v);
    EXPECT_NEAR(batch_means(sq).mean / 2.0, 1.0, 0.03);
}

TEST(Exact, ModesDecoupleForDiagonalNoise) {
    const Generator gen = SpectralGenerator({1.0, 3.0}, 2.0);
    const TimeGrid g = TimeGrid::uniform(1.0, 2);
    const StepProcess proc = StepProcess::constant(g, GammaOperator::diagonal(Vec::Ones(2), LqSpace(2, 2)));
    const int n = 40000;
    double sxy = 0, sxx = 0, syy = 0;
    for (int p = 0; p < n; ++p) {
        const Vec y = convolve_exact(gen, proc, 4, std::uint64_t(p)).at(2);
        sxy += y[0].real() * y[1].real();
        sxx += std::norm(y[0]);
        syy += std::norm(y[1]);
    }
    const double sd = std::sqrt(sxx / n * syy / n);
    EXPECT_LE(std::abs(sxy / n), 4.0 * sd / std::sqrt(double(n)));
    EXPECT_NEAR(sxx / n, 0.5 * (1 - std::exp(-2.0)), 0.02);
    EXPECT_NEAR(syy / n, (1 - std::exp(-6.0)) / 6.0, 0.01);
}

TEST(Exact, DenseOperatorCovarianceMatchesQuadrature) {
    // Cross-mode covariance of y(dt) for a dense G, against
    // E[y_k conj y_l] = (G G^*)_kl int_0^dt e^{-(mu_k + conj mu_l) s} ds by quadrature.
    const std::vector<cplx> mu = {1.0, cplx(3.0, 2.0)};
    const Generator gen = SpectralGenerator(mu, 2.0);
    Mat f(2, 2);
    f << 1.0, 0.5, cplx(0.0, 1.0), -1.0;
    const double dt = 0.7;
    const StepProcess proc = StepProcess::constant(TimeGrid::uniform(dt, 1), GammaOperator(f, LqSpace(2, 2)));
    const int n = 100000;
    Mat herm = Mat::Zero(2, 2), sym = Mat::Zero(2, 2);
    for (int p = 0; p < n; ++p) {
        const Vec y = convolve_exact(gen, proc, 12, std::uint64_t(p)).at(1);
        herm += y * y.adjoint();
        sym += y * y.transpose();
    }
    herm /= double(n);
    sym /= double(n);
    const Mat ggh = f * f.adjoint(), ggt = f * f.transpose();
    using gk = boost::math::quadrature::gauss_kronrod<double, 31>;
    for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) {
            auto integ = [&](cplx z) {
                const double re = gk::integrate([&](double s) { return std::exp(-z * s).real(); }, 0.0, dt);
                const double im = gk::integrate([&](double s) { return std::exp(-z * s).imag(); }, 0.0, dt);
                return cplx(re, im);
            };
            const cplx eh = ggh(k, l) * integ(mu[k] + std::conj(mu[l]));
            const cplx es = ggt(k, l) * integ(mu[k] + mu[l]);
            EXPECT_NEAR(std::abs(herm(k, l) - eh), 0.0, 0.02) << k << l;
            EXPECT_NEAR(std::abs(sym(k, l) - es), 0.0, 0.02) << k << l;
        }
}

TEST(RunningSup, Examples) {
    Path p;
    p.times = {0.0};
    p.states = Mat::Constant(2, 1, cplx(3.0, 4.0));
    EXPECT_NEAR(running_sup(p, LqSpace(2, 2)), 5.0 * std::sqrt(2.0), 1e-14);

    // Deterministic decaying path: sup at the first node after 0.
    const Generator gen = SpectralGenerator({2.0}, 2.0);
    const TimeGrid g = TimeGrid::uniform(1.0, 8);
    std::vector<GammaOperator> ops(8, GammaOperator::zero(1, kScalar));
    ops[0] = scalar_op(1.0);
    const StepProcess proc = StepProcess::deterministic(g, ops);
    const WienerPath w = sample_wiener(g, 1, 2, 2);
    const Path y = convolve_exponential_euler(gen, proc, w);
    EXPECT_EQ(running_sup(y, 2.0), std::abs(y.states(0, 1)));
}

TEST(Ensemble, ThreadCountInvariance) {
    EnsembleSpec spec;
    spec.generator = Generator(SpectralGenerator::heat(6));
    spec.norms = {2.0, 4.0};
    spec.paths = 3000;
    spec.seed = 5;
    spec.sup_strides = {1, 2, 4};
    const auto fam = maximal_family(6, 2.0);
    const StepProcess proc = StepProcess::adapted(TimeGrid::uniform(1.0, 16), fam[2]);
    spec.threads = 1;
    const PathEnsemble a = run_ensemble(spec, proc);
    spec.threads = 7;
    const PathEnsemble b = run_ensemble(spec, proc);
    EXPECT_EQ(a.sup, b.sup);
    EXPECT_EQ(a.terminal, b.terminal);
    EXPECT_EQ(a.l2gamma, b.l2gamma);
    EXPECT_EQ(a.strided_sup, b.strided_sup);
    for (std::size_t p = 0; p < a.paths(); ++p) {
        EXPECT_GE(a.sup[1][p], a.terminal[1][p]);
        EXPECT_GE(a.strided_sup[0][0][p], a.strided_sup[1][0][p]);
        EXPECT_GE(a.strided_sup[1][0][p], a.strided_sup[2][0][p]);
    }
}

TEST(Ensemble, CsvExport) {
    EnsembleSpec spec;
    spec.scheme = Scheme::Ito;
    spec.paths = 3;
    const PathEnsemble e = run_ensemble(spec, StepProcess::constant(TimeGrid::uniform(1.0, 2), scalar_op(1.0)));
    std::ostringstream os;
    write_ensemble_csv(os, e, 2.0);
    const std::string s = os.str();
    EXPECT_EQ(s.rfind("path_index,sup,terminal_norm\n0,", 0), 0u);
    EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 4);
}
