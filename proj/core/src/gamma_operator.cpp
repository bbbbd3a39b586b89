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

#include "stochconv/gamma_operator.hpp"

#include <cmath>

namespace stochconv {

GammaOperator::GammaOperator(Mat entries, LqSpace codomain)
    : dense_(std::move(entries)), codomain_(codomain), cols_(int(dense_.cols())) {
    if (dense_.rows() != codomain_.dim()) throw std::invalid_argument("GammaOperator: row count must equal codomain dimension");
    if (cols_ < 1) throw std::invalid_argument("GammaOperator: noise dimension must be ≥ 1");
}

GammaOperator GammaOperator::diagonal(Vec diag, LqSpace codomain) {
    if (diag.size() != codomain.dim()) throw std::invalid_argument("GammaOperator: diagonal length must equal dimension");
    GammaOperator g(codomain);
    g.diag_ = std::move(diag);
    g.cols_ = codomain.dim();
    g.diagonal_ = true;
    return g;
}

GammaOperator GammaOperator::zero(int m, LqSpace codomain) {
    return GammaOperator(Mat::Zero(codomain.dim(), m), codomain);
}

GammaOperator GammaOperator::rank_one(const RVec& h, const Vec& x, LqSpace codomain) {
    return GammaOperator(x * h.cast<cplx>().transpose(), codomain);
}

Mat GammaOperator::dense() const {
    if (diagonal_) return Mat(diag_.asDiagonal());
    return dense_;
}

Vec GammaOperator::apply(const RVec& w) const {
    if (w.size() != cols_) throw std::invalid_argument("GammaOperator::apply: noise dimension mismatch");
    if (diagonal_) return diag_.cwiseProduct(w.cast<cplx>());
    return dense_ * w.cast<cplx>();
}

RVec GammaOperator::row_energy() const {
    if (diagonal_) return diag_.cwiseAbs2();
    return dense_.cwiseAbs2().rowwise().sum();
}

GammaOperator GammaOperator::scaled(cplx c) const {
    GammaOperator g = *this;
    if (diagonal_) g.diag_ *= c;
    else g.dense_ *= c;
    return g;
}

GammaOperator GammaOperator::with_codomain(const LqSpace& s) const {
    if (s.dim() != codomain_.dim()) throw std::invalid_argument("GammaOperator: codomain dimension mismatch");
    GammaOperator g = *this;
    g.codomain_ = s;
    return g;
}

GammaOperator GammaOperator::left_multiply(const Mat& b) const {
    if (b.rows() != rows() || b.cols() != rows()) throw std::invalid_argument("left_multiply: shape mismatch");
    return GammaOperator(b * dense(), codomain_);
}

RVec GammaOperator::row_norms() const {
    if (diagonal_) return diag_.cwiseAbs();
    // Max-scaled; squaring tiny entries would underflow.
    const double big = dense_.size() ? dense_.cwiseAbs().maxCoeff() : 0.0;
    if (big == 0.0) return RVec::Zero(rows());
    return big * (dense_ / big).rowwise().norm();
}

double square_function_norm(const GammaOperator& f, double q) {
    if (!(q >= 1.0)) throw std::invalid_argument("q must be ≥ 1");
    return lq_norm(f.row_norms(), q);
}

double square_function_norm(const GammaOperator& f) { return square_function_norm(f, f.codomain().q()); }

double kappa_q(double q) {
    if (!(q > 0.0)) throw std::invalid_argument("kappa_q needs q > 0");
    const double log_moment = 0.5 * q * std::log(2.0) + std::lgamma(0.5 * (q + 1.0)) - 0.5 * std::log(kPi);
    return std::exp(log_moment / q);
}

} // namespace stochconv
