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

#include "stochconv/model.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "stochconv/matrix_functions.hpp"

namespace stochconv {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

int checked_dim(const std::vector<cplx>& modes) {
    if (modes.empty()) throw std::invalid_argument("spectral generator needs at least one mode");
    return int(modes.size());
}

void check_vec(const Generator& gen, const Vec& x) {
    if (x.size() != generator_dim(gen)) throw std::invalid_argument("dimension mismatch");
}

} // namespace

SpectralGenerator::SpectralGenerator(std::vector<cplx> modes, double q)
    : modes_(std::move(modes)), space_(q, checked_dim(modes_)) {
    for (const cplx& m : modes_) {
        if (!(m.real() > 0.0) || !std::isfinite(m.real()) || !std::isfinite(m.imag()))
            throw std::invalid_argument("spectral mode must have Re mu > 0");
        if (!(std::abs(std::arg(m)) < kPi / 2)) throw std::invalid_argument("spectral mode must have |arg mu| < pi/2");
    }
}

SpectralGenerator SpectralGenerator::heat(int d, double q) {
    if (d < 1) throw std::invalid_argument("heat preset needs d ≥ 1");
    std::vector<cplx> m(d);
    for (int k = 0; k < d; ++k) m[k] = double(k + 1) * double(k + 1);
    return SpectralGenerator(std::move(m), q);
}

double SpectralGenerator::min_decay() const {
    double a = modes_[0].real();
    for (const cplx& m : modes_) a = std::min(a, m.real());
    return a;
}

MatrixGenerator::MatrixGenerator(Mat a, double q) : a_(std::move(a)), space_(q, int(a_.rows())) {
    if (a_.rows() != a_.cols()) throw std::invalid_argument("matrix generator must be square");
    if (!a_.allFinite()) throw std::invalid_argument("matrix generator has non-finite entries");
    if (!(spectral_abscissa(a_) < 0.0)) throw NumericalError("generator is not Hurwitz");
}

int generator_dim(const Generator& gen) {
    return std::visit([](const auto& g) { return g.dim(); }, gen);
}

const LqSpace& generator_space(const Generator& gen) {
    return std::visit([](const auto& g) -> const LqSpace& { return g.space(); }, gen);
}

Vec semigroup_apply(const Generator& gen, double t, const Vec& x) {
    if (!(t >= 0.0)) throw std::invalid_argument("semigroup time must be ≥ 0");
    check_vec(gen, x);
    return std::visit(overloaded{[&](const SpectralGenerator& g) {
                                     Vec y(x.size());
                                     for (Eigen::Index k = 0; k < x.size(); ++k)
                                         y[k] = std::exp(-g.modes()[k] * t) * x[k];
                                     return y;
                                 },
                                 [&](const MatrixGenerator& g) { return Vec(expm(t * g.matrix()) * x); }},
                      gen);
}

Mat semigroup_matrix(const Generator& gen, double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("semigroup time must be ≥ 0");
    return std::visit(overloaded{[&](const SpectralGenerator& g) {
                                     Vec e(g.dim());
                                     for (int k = 0; k < g.dim(); ++k) e[k] = std::exp(-g.modes()[k] * t);
                                     return Mat(e.asDiagonal());
                                 },
                                 [&](const MatrixGenerator& g) { return expm(t * g.matrix()); }},
                      gen);
}

Mat generator_matrix(const Generator& gen) {
    return std::visit(overloaded{[](const SpectralGenerator& g) {
                                     Vec m(g.dim());
                                     for (int k = 0; k < g.dim(); ++k) m[k] = -g.modes()[k];
                                     return Mat(m.asDiagonal());
                                 },
                                 [](const MatrixGenerator& g) { return g.matrix(); }},
                      gen);
}

Mat frac_power_matrix(const Generator& gen, double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in (0, 1]");
    return std::visit(overloaded{[&](const SpectralGenerator& g) {
                                     Vec m(g.dim());
                                     for (int k = 0; k < g.dim(); ++k) m[k] = std::pow(g.modes()[k], alpha);
                                     return Mat(m.asDiagonal());
                                 },
                                 [&](const MatrixGenerator& g) {
                                     const Mat b = -g.matrix();
                                     return alpha == 0.5 ? sqrtm(b) : powm(b, alpha);
                                 }},
                      gen);
}

Vec frac_power_apply(const Generator& gen, double alpha, const Vec& x) {
    check_vec(gen, x);
    if (const auto* g = std::get_if<SpectralGenerator>(&gen)) {
        if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in (0, 1]");
        Vec y(x.size());
        for (Eigen::Index k = 0; k < x.size(); ++k)
            y[k] = (alpha == 1.0 ? g->modes()[k] : std::pow(g->modes()[k], alpha)) * x[k];
        return y;
    }
    return frac_power_matrix(gen, alpha) * x;
}

double sectorial_angle(const Generator& gen, int samples) {
    if (const auto* g = std::get_if<SpectralGenerator>(&gen)) {
        double a = 0.0;
        for (const cplx& m : g->modes()) a = std::max(a, std::abs(std::arg(m)));
        return a;
    }
    const Mat b = -std::get<MatrixGenerator>(gen).matrix();
    const Mat herm = 0.5 * (b + b.adjoint());
    Eigen::SelfAdjointEigenSolver<Mat> hs(herm, Eigen::EigenvaluesOnly);
    if (!(hs.eigenvalues()[0] > 0.0)) throw NumericalError("not sectorial of angle < π/2");

    Eigen::ComplexEigenSolver<Mat> es(b, false);
    double angle = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
        angle = std::max(angle, std::abs(std::arg(es.eigenvalues()[i])));

    // Support points of the numerical range: the top eigenvector of the
    // Hermitian part of e^{i th} B lies on the boundary of W(B).
    for (int s = 0; s < samples; ++s) {
        const double th = 2.0 * kPi * double(s) / double(samples);
        const cplx rot = std::polar(1.0, th);
        const Mat h = 0.5 * (rot * b + std::conj(rot) * b.adjoint());
        Eigen::SelfAdjointEigenSolver<Mat> es2(h);
        const Vec v = es2.eigenvectors().col(h.rows() - 1);
        const cplx z = v.dot(b * v);
        if (!(z.real() > 0.0)) throw NumericalError("not sectorial of angle < π/2");
        angle = std::max(angle, std::abs(std::arg(z)));
    }
    return angle;
}

double resolvent_norm(const Generator& gen, cplx lambda) {
    const int d = generator_dim(gen);
    const Mat m = lambda * Mat::Identity(d, d) - generator_matrix(gen);
    Eigen::JacobiSVD<Mat> svd(m);
    const double smin = svd.singularValues()[d - 1];
    if (smin == 0.0) throw NumericalError("lambda lies in the spectrum");
    return 1.0 / smin;
}

} // namespace stochconv
