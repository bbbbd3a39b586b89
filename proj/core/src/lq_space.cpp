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

#include "stochconv/lq_space.hpp"

#include <cmath>
#include <limits>

namespace stochconv {

LqSpace::LqSpace(double q, int d) : q_(q), d_(d) {
    if (!(q >= 1.0) || !std::isfinite(q)) throw std::invalid_argument("q must be ≥ 1");
    if (d < 1) throw std::invalid_argument("dimension d must be positive");
}

double LqSpace::dual_exponent() const {
    if (q_ == 1.0) return std::numeric_limits<double>::infinity();
    return q_ / (q_ - 1.0);
}

double lq_norm(const RVec& m, double q) {
    if (m.size() == 1) return std::abs(m[0]);
    if (q == 2.0) return m.blueNorm();
    const double big = m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
    if (big == 0.0) return 0.0;
    if (q == 1.0) return m.cwiseAbs().sum();
    double s = 0.0;
    const int iq = int(q);
    if (double(iq) == q && iq <= 8) {
        for (Eigen::Index k = 0; k < m.size(); ++k) {
            const double r = std::abs(m[k]) / big;
            double t = r;
            for (int e = 1; e < iq; ++e) t *= r;
            s += t;
        }
    } else {
        for (Eigen::Index k = 0; k < m.size(); ++k) s += std::pow(std::abs(m[k]) / big, q);
    }
    return big * std::pow(s, 1.0 / q);
}

double lq_norm(const Vec& x, double q) { return lq_norm(RVec(x.cwiseAbs()), q); }

double LqSpace::norm(const Vec& x) const {
    if (x.size() != d_) throw std::invalid_argument("dimension mismatch in LqSpace::norm");
    return lq_norm(x, q_);
}

double LqSpace::norm(const RVec& x) const {
    if (x.size() != d_) throw std::invalid_argument("dimension mismatch in LqSpace::norm");
    return lq_norm(x, q_);
}

} // namespace stochconv
