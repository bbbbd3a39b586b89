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

#include "stochconv/common.hpp"

namespace stochconv {

/// The finite sequence space l^q_d, 1 <= q < inf.
class LqSpace {
public:
    LqSpace(double q, int d);

    double q() const { return q_; }
    int dim() const { return d_; }

    double norm(const Vec& x) const;
    double norm(const RVec& x) const;

    /// Dual exponent q' with 1/q + 1/q' = 1 (inf for q = 1).
    double dual_exponent() const;

    bool operator==(const LqSpace& o) const { return q_ == o.q_ && d_ == o.d_; }

private:
    double q_;
    int d_;
};

/// l^q norm of the moduli |v_k|, computed with scaling so that large or
/// tiny entries do not overflow.
double lq_norm(const RVec& moduli, double q);
double lq_norm(const Vec& x, double q);

} // namespace stochconv
