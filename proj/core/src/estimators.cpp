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

#include "stochconv/estimators.hpp"
#include "stochconv/rng.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace stochconv {

namespace {

constexpr std::size_t kMinPaths = 1000;

// Batch means of (z/scale)^p.
BatchMean scaled_power_means(const std::vector<double>& z, double p, double scale) {
    std::vector<double> y(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) y[i] = scale > 0 ? std::pow(std::abs(z[i]) / scale, p) : 0.0;
    return batch_means(y);
}

double max_abs(const std::vector<double>& z) {
    double m = 0.0;
    for (double v : z) m = std::max(m, std::abs(v));
    return m;
}

} // namespace

MomentReport estimate_pth_moment(const std::vector<double>& z, double p) {
    if (!(p > 0.0)) throw std::invalid_argument("moment order p must be > 0");
    if (z.size() < kMinPaths) throw std::invalid_argument("moment estimate needs n ≥ 1000 samples");
    const double s = max_abs(z);
    MomentReport r;
    r.p = p;
    r.n = z.size();
    if (s == 0.0) return r;
    const BatchMean bm = scaled_power_means(z, p, s);
    r.value = s * std::pow(bm.mean, 1.0 / p);
    r.ci_low = s * std::pow(std::max(0.0, bm.mean - bm.half_width), 1.0 / p);
    r.ci_high = s * std::pow(bm.mean + bm.half_width, 1.0 / p);

    // E|Z|^p >= a^p P(|Z| >= a) with a the k-th largest sample.
    std::vector<double> top(z.size());
    std::transform(z.begin(), z.end(), top.begin(), [](double v) { return std::abs(v); });
    for (std::size_t k : {std::size_t(10), std::size_t(100), std::size_t(1000)}) {
        if (k > top.size()) break;
        std::nth_element(top.begin(), top.begin() + std::ptrdiff_t(k - 1), top.end(), std::greater<>());
        const double a = top[k - 1] / s;
        const double lo = wilson_interval(k, top.size(), 0.99).ci_low;
        r.tail_lower = std::max(r.tail_lower, s * a * std::pow(lo, 1.0 / p));
    }
    return r;
}

MomentReport moment_ratio(const std::vector<double>& num, const std::vector<double>& den, double p) {
    if (!(p > 0.0)) throw std::invalid_argument("moment order p must be > 0");
    if (num.size() != den.size()) throw std::invalid_argument("ratio samples must have equal length");
    if (num.size() < kMinPaths) throw std::invalid_argument("moment ratio needs n ≥ 1000 samples");
    const double sn = max_abs(num), sd = max_abs(den);
    if (sd == 0.0) throw std::invalid_argument("zero-norm integrand");
    const BatchMean a = scaled_power_means(num, p, sn);
    const BatchMean b = scaled_power_means(den, p, sd);
    MomentReport r;
    r.p = p;
    r.n = num.size();
    if (sn == 0.0) return r;
    const double rho = a.mean / b.mean; // ratio of scaled means
    // Delta method on batch means: e_b = a_b - rho b_b.
    const std::size_t nb = a.batch.size();
    double ss = 0.0;
    for (std::size_t i = 0; i < nb; ++i) {
        const double e = a.batch[i] - rho * b.batch[i];
        ss += e * e;
    }
    const double se = std::sqrt(ss / double(nb - 1) / double(nb)) / b.mean;
    const double hw = t_quantile(double(nb - 1)) * se;
    const double scale = sn / sd;
    r.value = scale * std::pow(rho, 1.0 / p);
    r.ci_low = scale * std::pow(std::max(0.0, rho - hw), 1.0 / p);
    r.ci_high = scale * std::pow(rho + hw, 1.0 / p);
    return r;
}

MomentReport bdg_ratio(const PathEnsemble& e, double q, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("BDG ratio needs p ≥ 1");
    const std::size_t k = e.norm_index(q);
    return moment_ratio(e.terminal[k], e.l2gamma[k], p);
}

MomentReport bdg_ratio(const StepProcess& g, double p, double q, std::size_t n, std::uint64_t seed, int threads) {
    EnsembleSpec spec;
    spec.scheme = Scheme::Ito;
    spec.norms = {q};
    spec.paths = n;
    spec.seed = seed;
    spec.threads = threads;
    return bdg_ratio(run_ensemble(spec, g), q, p);
}

BdgConstant bdg_constant_from(const std::vector<MomentReport>& members) {
    if (members.empty()) throw std::invalid_argument("strategy family is empty");
    BdgConstant k;
    k.p = members.front().p;
    k.members = members;
    for (std::size_t i = 0; i < members.size(); ++i) {
        if (i == 0 || members[i].value > k.value) {
            k.value = members[i].value;
            k.argmax = i;
        }
        k.max_upper = std::max(k.max_upper, members[i].ci_high);
    }
    k.ci_low = members[k.argmax].ci_low;
    k.ci_high = members[k.argmax].ci_high;
    return k;
}

BdgConstant bdg_constant_estimate(const std::vector<StepProcess>& family, double p, double q, std::size_t n,
                                  std::uint64_t seed, int threads) {
    std::vector<MomentReport> reps;
    for (std::size_t i = 0; i < family.size(); ++i)
        reps.push_back(bdg_ratio(family[i], p, q, n, derive_seed(seed, i), threads));
    return bdg_constant_from(reps);
}

Estimate sqrt_growth_slope(const std::vector<double>& ps, const std::vector<double>& ks) {
    if (ps.size() < 4 || ks.size() != ps.size()) throw std::invalid_argument("slope fit needs at least 4 (p, K) points");
    const double ratio = ps[1] / ps[0];
    for (std::size_t i = 0; i < ps.size(); ++i) {
        if (!(ps[i] > 0.0) || !(ks[i] > 0.0)) throw std::invalid_argument("slope fit needs positive p and K");
        if (i > 0 && std::abs(ps[i] / ps[i - 1] - ratio) > 1e-9 * ratio)
            throw std::invalid_argument("p values must be geometrically spaced");
    }
    std::vector<double> x, y;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        x.push_back(std::log(ps[i]));
        y.push_back(std::log(ks[i]));
    }
    const LinearFit f = least_squares(x, y);
    const double hw = t_quantile(double(ps.size() - 2)) * f.slope_se;
    return {f.slope, f.slope - hw, f.slope + hw, ps.size()};
}

double interpolation_theta(double p, double q) {
    if (!(2.0 <= q && q <= p)) throw std::invalid_argument("interpolation needs 2 ≤ q ≤ p");
    if (p == 2.0) return 0.0;
    return (0.5 - 1.0 / q) / (0.5 - 1.0 / p);
}

InterpolationGap interpolation_gap(double p, double q, const BdgConstant& k2, const BdgConstant& kq,
                                   const BdgConstant& kp) {
    InterpolationGap g;
    g.theta = interpolation_theta(p, q);
    const double th = g.theta;
    const double interp = std::pow(k2.value, 1.0 - th) * std::pow(kp.value, th);
    g.gap = interp - kq.value;
    const double d2 = (1.0 - th) * interp / k2.value, dp = th * interp / kp.value;
    g.ci = std::sqrt(std::pow(d2 * k2.half_width(), 2) + std::pow(dp * kp.half_width(), 2) +
                     std::pow(kq.half_width(), 2));
    return g;
}

MomentReport doob_ratio(const std::vector<double>& sups, const std::vector<double>& terminals, double p) {
    if (!(p > 1.0)) throw std::invalid_argument("Doob ratio needs p > 1");
    return moment_ratio(sups, terminals, p);
}

bool doob_check(const MomentReport& r) {
    const double pc = r.p / (r.p - 1.0);
    return r.value <= pc * (1.0 + 3.0 * r.rel_half_width());
}

TailReport empirical_tail(const std::vector<double>& sups, const std::vector<double>& grid, double M) {
    if (sups.empty()) throw std::invalid_argument("empty ensemble");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1])) throw std::invalid_argument("lambda grid must be increasing");
    std::vector<double> s = sups;
    std::sort(s.begin(), s.end());
    TailReport t;
    t.lambda = grid;
    t.M = M;
    for (double lam : grid) {
        const auto it = std::lower_bound(s.begin(), s.end(), lam);
        const std::size_t k = std::size_t(s.end() - it);
        t.probs.push_back(wilson_interval(k, s.size()));
    }
    return t;
}

LinearFit tail_slope(const TailReport& t) {
    std::vector<double> x, y, w;
    for (std::size_t i = 0; i < t.lambda.size(); ++i) {
        const Estimate& p = t.probs[i];
        if (p.value <= 0.0 || p.value >= 1.0) continue;
        const double k = p.value * double(p.n);
        x.push_back(t.lambda[i] * t.lambda[i]);
        y.push_back(-std::log(p.value));
        w.push_back(k / (1.0 - p.value)); // 1 / Var(log p_hat)
    }
    if (x.size() < 3) throw std::invalid_argument("tail slope needs at least 3 grid points with 0 < P < 1");
    return least_squares(x, y, w);
}

Exp1Bound exp1_bound(double M, double c, double lambda, int terms) {
    if (!(M > 0.0) || !(c > 0.0)) throw std::invalid_argument("exp1 bound needs M > 0 and C_tail > 0");
    const double e = std::exp(1.0);
    Exp1Bound b;
    b.eps_star = 1.0 / (2.0 * e * M * c * c);
    b.bound = 2.0 * std::exp(-b.eps_star * lambda * lambda);
    b.ratio_at_star = 2.0 * e * b.eps_star * M * c * c;
    b.eps_certified = 0.5 * b.eps_star;
    b.certified_bound = 2.0 * std::exp(-b.eps_certified * lambda * lambda);
    const double ratio = 2.0 * e * b.eps_certified * M * c * c;
    double s = 0.0, term = 1.0;
    for (int n = 0; n < terms; ++n) {
        s += term;
        b.partial_sums.push_back(s);
        term *= ratio;
    }
    b.series_limit = 1.0 / (1.0 - ratio);
    return b;
}

ChernoffCheck markov_chernoff_check(const std::vector<MomentReport>& reports, double M, double c) {
    if (reports.empty()) throw std::invalid_argument("missing moments");
    if (!(M > 0.0) || !(c > 0.0)) throw std::invalid_argument("Chernoff check needs M > 0 and C_tail > 0");
    ChernoffCheck ch;
    for (const MomentReport& r : reports) {
        const int n = int(std::lround(r.p / 2.0));
        if (n < 1 || std::abs(r.p - 2.0 * n) > 1e-12) throw std::invalid_argument("Chernoff check needs even moments p = 2n");
        const double rhs = c * std::sqrt(2.0 * n * M);
        ch.n.push_back(n);
        const double lhs = std::max(r.ci_low, r.tail_lower);
        ch.lhs.push_back(lhs);
        ch.rhs.push_back(rhs);
        ch.pass.push_back(lhs <= rhs);
        ch.all = ch.all && ch.pass.back();
    }
    return ch;
}

double calibrate_c_tail(const std::vector<MomentReport>& reports, double M) {
    if (reports.empty()) throw std::invalid_argument("missing moments");
    if (!(M > 0.0)) throw std::invalid_argument("M must be positive");
    double c = 0.0;
    for (const MomentReport& r : reports) {
        const double n = r.p / 2.0;
        c = std::max(c, r.ci_high / std::sqrt(2.0 * n * M));
    }
    return c;
}

} // namespace stochconv
