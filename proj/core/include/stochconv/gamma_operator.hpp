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
#include "stochconv/lq_space.hpp"

namespace stochconv {

/// A finite operator F: H -> l^q_d given by its matrix against an
/// orthonormal basis h_1..h_m of H. Diagonal operators (m = d) are stored
/// compactly.
class GammaOperator {
public:
    GammaOperator(Mat entries, LqSpace codomain);
    static GammaOperator diagonal(Vec diag, LqSpace codomain);
    static GammaOperator zero(int m, LqSpace codomain);
    /// h (x) x: the rank-one map e -> <e, h> x.
    static GammaOperator rank_one(const RVec& h, const Vec& x, LqSpace codomain);

    int rows() const { return codomain_.dim(); }
    int cols() const { return cols_; }
    bool is_diagonal() const { return diagonal_; }
    const LqSpace& codomain() const { return codomain_; }

    /// Diagonal entries; only valid for diagonal storage.
    const Vec& diag() const { return diag_; }
    Mat dense() const;

    /// F w for a real coefficient vector w in R^m.
    Vec apply(const RVec& w) const;
    /// Row energies sum_j |F_kj|^2.
    RVec row_energy() const;
    /// Euclidean norm of each row.
    RVec row_norms() const;

    GammaOperator scaled(cplx c) const;
    GammaOperator with_codomain(const LqSpace& s) const;
    /// B o F for a d x d matrix B.
    GammaOperator left_multiply(const Mat& b) const;

private:
    GammaOperator(LqSpace codomain) : codomain_(codomain) {}

    Mat dense_;
    Vec diag_;
    LqSpace codomain_;
    int cols_ = 0;
    bool diagonal_ = false;
};

/// (sum_k (sum_j |F_kj|^2)^{q/2})^{1/q} in the codomain exponent.
double square_function_norm(const GammaOperator& f);
/// Same functional for another exponent q.
double square_function_norm(const GammaOperator& f, double q);

/// kappa_q = (E|Z|^q)^{1/q}, Z standard Gaussian.
double kappa_q(double q);

} // namespace stochconv
