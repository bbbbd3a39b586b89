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
#include <vector>

namespace stochconv {

/// A point estimate with a two-sided 95% interval.
struct Estimate {
    double value = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::size_t n = 0;

    double half_width() const { return 0.5 * (ci_high - ci_low); }
    bool covers(double x) const { return ci_low <= x && x <= ci_high; }
};

/// Mean with batch-means interval (t quantile on batches - 1 dof).
struct BatchMean {
    double mean = 0.0;
    double half_width = 0.0;
    std::vector<double> batch; // per-batch means
};

constexpr int kDefaultBatches = 50;

BatchMean batch_means(const std::vector<double>& x, int batches = kDefaultBatches);

/// Two-sided Student t quantile at level `level` (e.g. 0.95).
double t_quantile(double dof, double level = 0.95);

/// Standard normal quantile.
double normal_quantile(double p);

/// Wilson score interval for k successes in n trials.
Estimate wilson_interval(std::size_t k, std::size_t n, double level = 0.95);

/// Spearman rank correlation with average ranks for ties.
double spearman(const std::vector<double>& x, const std::vector<double>& y);

/// Ordinary least squares y = a + b x; returns {slope, standard error}.
struct LinearFit {
    double intercept = 0.0;
    double slope = 0.0;
    double slope_se = 0.0;
};
LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y,
                        const std::vector<double>& w = {});

double median(std::vector<double> x);

} // namespace stochconv
