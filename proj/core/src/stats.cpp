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

#include "stochconv/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

namespace stochconv {

BatchMean batch_means(const std::vector<double>& x, int batches) {
    if (batches < 2) throw std::invalid_argument("batch means needs at least two batches");
    if (x.size() < std::size_t(batches)) throw std::invalid_argument("fewer samples than batches");
    BatchMean r;
    r.batch.resize(std::size_t(batches));
    const std::size_t n = x.size();
    for (int b = 0; b < batches; ++b) {
        const std::size_t lo = n * std::size_t(b) / std::size_t(batches);
        const std::size_t hi = n * std::size_t(b + 1) / std::size_t(batches);
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += x[i];
        r.batch[std::size_t(b)] = s / double(hi - lo);
    }
    double s = 0.0;
    for (double v : x) s += v;
    r.mean = s / double(n);
    double ss = 0.0;
    for (double b : r.batch) ss += (b - r.mean) * (b - r.mean);
    const double var = ss / double(batches - 1);
    r.half_width = t_quantile(batches - 1) * std::sqrt(var / double(batches));
    return r;
}

double t_quantile(double dof, double level) {
    boost::math::students_t dist(dof);
    return boost::math::quantile(dist, 0.5 + 0.5 * level);
}

double normal_quantile(double p) {
    return boost::math::quantile(boost::math::normal(), p);
}

Estimate wilson_interval(std::size_t k, std::size_t n, double level) {
    if (n == 0) throw std::invalid_argument("Wilson interval needs n > 0");
    const double z = normal_quantile(0.5 + 0.5 * level);
    const double p = double(k) / double(n);
    const double nn = double(n);
    const double den = 1.0 + z * z / nn;
    const double centre = (p + z * z / (2.0 * nn)) / den;
    const double half = z * std::sqrt(p * (1.0 - p) / nn + z * z / (4.0 * nn * nn)) / den;
    Estimate e;
    e.value = p;
    e.ci_low = std::max(0.0, centre - half);
    e.ci_high = std::min(1.0, centre + half);
    if (k == 0) e.ci_low = 0.0;
    if (k == n) e.ci_high = 1.0;
    e.n = n;
    return e;
}

namespace {

std::vector<double> ranks(const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
        std::size_t j = i;
        while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
        const double avg = 0.5 * double(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
        i = j + 1;
    }
    return r;
}

} // namespace

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("spearman needs two equal-length samples");
    const auto rx = ranks(x), ry = ranks(y);
    const double n = double(x.size());
    const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
    const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& w) {
    const std::size_t n = x.size();
    if (y.size() != n || n < 2 || (!w.empty() && w.size() != n))
        throw std::invalid_argument("least squares needs matching samples");
    auto wt = [&](std::size_t i) { return w.empty() ? 1.0 : w[i]; };
    double sw = 0, sx = 0, sy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sw += wt(i);
        sx += wt(i) * x[i];
        sy += wt(i) * y[i];
    }
    const double mx = sx / sw, my = sy / sw;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += wt(i) * (x[i] - mx) * (x[i] - mx);
        sxy += wt(i) * (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("least squares with constant abscissa");
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    if (n > 2) {
        double rss = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = y[i] - f.intercept - f.slope * x[i];
            rss += wt(i) * r * r;
        }
        if (w.empty()) f.slope_se = std::sqrt(rss / double(n - 2) / sxx);
        else f.slope_se = std::sqrt(1.0 / sxx) * std::max(1.0, std::sqrt(rss / double(n - 2)));
    }
    return f;
}

double median(std::vector<double> x) {
    if (x.empty()) throw std::invalid_argument("median of empty sample");
    std::sort(x.begin(), x.end());
    const std::size_t n = x.size();
    return n % 2 ? x[n / 2] : 0.5 * (x[n / 2 - 1] + x[n / 2]);
}

} // namespace stochconv
