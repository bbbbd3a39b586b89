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

#include "stochconv/renorm.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss.hpp>
#include <Eigen/Eigenvalues>

#include "stochconv/matrix_functions.hpp"
#include "stochconv/parallel.hpp"
#include "stochconv/rng.hpp"

namespace stochconv {

// ---------------------------------------------------------------- (C_r)

PhiDerivatives phi_derivatives(const RVec& x, double r, double q) {
    if (!(q >= 2.0)) throw std::invalid_argument("phi derivatives need q ≥ 2");
    if (r < q) throw std::invalid_argument("C_r not guaranteed below q");
    PhiDerivatives p;
    p.r = r;
    p.q = q;
    p.x = x;
    p.nrm_ = lq_norm(x, q);
    p.g_.resize(x.size());
    for (Eigen::Index k = 0; k < x.size(); ++k) {
        const double a = std::abs(x[k]);
        p.g_[k] = (x[k] > 0 ? 1.0 : (x[k] < 0 ? -1.0 : 0.0)) * std::pow(a, q - 1.0);
    }
    p.value = std::pow(p.nrm_, r);
    p.gradient = p.nrm_ > 0.0 ? RVec(r * std::pow(p.nrm_, r - q) * p.g_) : RVec(RVec::Zero(x.size()));
    return p;
}

double PhiDerivatives::hessian(const RVec& u, const RVec& v) const {
    if (u.size() != x.size() || v.size() != x.size()) throw std::invalid_argument("dimension mismatch");
    if (nrm_ == 0.0) {
        if (r == 2.0 && q == 2.0) return 2.0 * u.dot(v);
        return 0.0;
    }
    double diag = 0.0;
    for (Eigen::Index k = 0; k < x.size(); ++k) {
        // |x_k|^{q-2}; for q > 2 the term vanishes at x_k = 0.
        const double a = std::abs(x[k]);
        const double w = q == 2.0 ? 1.0 : (a > 0.0 ? std::pow(a, q - 2.0) : 0.0);
        diag += w * u[k] * v[k];
    }
    const double t1 = r * (r - q) * std::pow(nrm_, r - 2.0 * q) * g_.dot(u) * g_.dot(v);
    const double t2 = r * (q - 1.0) * std::pow(nrm_, r - q) * diag;
    return t1 + t2;
}

double PhiDerivatives::gradient_dual_norm() const {
    return lq_norm(gradient, q / (q - 1.0));
}

CrProbeResult cr_bound_probe(double r, double q, int d, std::size_t n, std::uint64_t seed, int threads) {
    if (n < 1000) throw std::invalid_argument("cr probe needs n ≥ 1000 samples");
    if (d < 1) throw std::invalid_argument("dimension d must be positive");
    phi_derivatives(RVec::Ones(d), r, q); // validates (r, q)

    struct Slot {
        double k1 = 0, k2 = 0, scale = 0, fdg = 0, fdh = 0, xnorm = 0;
    };
    std::vector<Slot> slots(n);
    parallel_for(n, threads, [&](std::size_t i) {
        const NormalStream ns(seed, StreamTag::Probe, i);
        RVec x(d), u(d), v(d);
        ns.fill(0, x, d);
        ns.fill(1, u, d);
        ns.fill(2, v, d);
        Slot& s = slots[i];
        s.xnorm = lq_norm(x, q);
        if (s.xnorm == 0.0) return;
        x /= s.xnorm;
        u /= lq_norm(u, q);
        v /= lq_norm(v, q);
        const PhiDerivatives p = phi_derivatives(x, r, q);
        s.k1 = p.gradient_dual_norm(); // ||x|| = 1
        for (const auto& [a, b] : {std::pair<const RVec*, const RVec*>{&u, &v}, {&u, &u}, {&v, &v}, {&x, &x}})
            s.k2 = std::max(s.k2, std::abs(p.hessian(*a, *b)));

        for (double c : {2.0, 0.5}) {
            const PhiDerivatives pc = phi_derivatives(c * x, r, q);
            const double sv = std::abs(pc.value - std::pow(c, r) * p.value) / (std::pow(c, r) * p.value);
            const double sg = (pc.gradient - std::pow(c, r - 1.0) * p.gradient).cwiseAbs().maxCoeff() /
                              (std::pow(c, r - 1.0) * p.gradient.cwiseAbs().maxCoeff());
            const double hx = p.hessian(u, v);
            const double sh = std::abs(pc.hessian(u, v) - std::pow(c, r - 2.0) * hx) / (std::pow(c, r - 2.0) * s.k2);
            s.scale = std::max({s.scale, sv, sg, sh});
        }
        const double h = 1e-5;
        const double fd1 = (phi_derivatives(x + h * u, r, q).value - phi_derivatives(x - h * u, r, q).value) / (2 * h);
        s.fdg = std::abs(fd1 - p.gradient.dot(u));
        const double fd2 = (phi_derivatives(x + h * v, r, q).gradient.dot(u) -
                            phi_derivatives(x - h * v, r, q).gradient.dot(u)) / (2 * h);
        s.fdh = std::abs(fd2 - p.hessian(u, v));
    });
    CrProbeResult res;
    res.r = r;
    res.q = q;
    res.d = d;
    res.n = n;
    double max_norm = 0.0;
    for (const Slot& s : slots) {
        max_norm = std::max(max_norm, s.xnorm);
        res.k1_hat = std::max(res.k1_hat, s.k1);
        res.k2_hat = std::max(res.k2_hat, s.k2);
        res.scale_residual = std::max(res.scale_residual, s.scale);
        res.fd_gradient_residual = std::max(res.fd_gradient_residual, s.fdg);
        res.fd_hessian_residual = std::max(res.fd_hessian_residual, s.fdh);
    }
    if (max_norm < 1e-300) throw NumericalError("degenerate probe sample");
    return res;
}

// ---------------------------------------------------------- renormings

namespace {

Mat generator_matrix_checked(const Generator& gen) {
    const Mat a = generator_matrix(gen);
    if (!(spectral_abscissa(a) < 0.0)) throw NumericalError("generator is not Hurwitz");
    return a;
}

} // namespace

double RenormQ::operator()(const Vec& x) const {
    if (x.size() != gram.rows()) throw std::invalid_argument("dimension mismatch");
    return std::sqrt(std::max(0.0, x.dot(gram * x).real()));
}

RenormQ lyapunov_renorm(const Generator& gen) {
    RenormQ r;
    r.a = generator_matrix_checked(gen);
    const Mat root = sqrtm(-r.a);
    const Mat c = root.adjoint() * root;
    r.gram = solve_lyapunov(r.a, c);
    r.residual = (r.a.adjoint() * r.gram + r.gram * r.a + c).norm();
    Eigen::SelfAdjointEigenSolver<Mat> es(r.gram, Eigen::EigenvaluesOnly);
    const double lmin = es.eigenvalues()[0], lmax = es.eigenvalues()[es.eigenvalues().size() - 1];
    if (!(lmin > 0.0)) throw NumericalError("Lyapunov solution is not positive definite");
    r.lower = 1.0 / std::sqrt(lmax);
    r.upper = 1.0 / std::sqrt(lmin);
    return r;
}

SquareFunctionRenorm::SquareFunctionRenorm(const Generator& gen, double q) : a_(generator_matrix_checked(gen)), q_(q) {
    if (!(q >= 1.0)) throw std::invalid_argument("q must be ≥ 1");
    if (const auto* s = std::get_if<SpectralGenerator>(&gen)) {
        diagonal_ = true;
        diag_weight_.resize(s->dim());
        for (int k = 0; k < s->dim(); ++k) diag_weight_[k] = std::abs(s->modes()[std::size_t(k)]) / (2.0 * s->modes()[std::size_t(k)].real());
        return;
    }
    const Mat root = sqrtm(-a_);
    Eigen::ComplexEigenSolver<Mat> es(a_, false);
    const double slow = -es.eigenvalues().real().maxCoeff();
    const double fast = std::max(slow, es.eigenvalues().cwiseAbs().maxCoeff());
    const double t_star = 40.0 / slow;
    using gl = boost::math::quadrature::gauss<double, 20>;
    const auto& abs = gl::abscissa();
    const auto& wts = gl::weights();
    auto add_panel = [&](double lo, double hi) {
        const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
        for (std::size_t i = 0; i < abs.size(); ++i)
            for (double sgn : {-1.0, 1.0}) {
                if (abs[i] == 0.0 && sgn > 0) continue;
                const double t = c + sgn * h * abs[i];
                kernels_.push_back(root * expm(t * a_));
                weights_.push_back(h * wts[i]);
            }
    };
    // Fine panels while the fast modes are alive, then panels of width
    // 1/(2 slow) out to T*.
    double t = 0.0;
    const double w_fast = 0.5 / fast, w_slow = 0.5 / slow;
    while (t < t_star) {
        const double w = t < 40.0 / fast ? w_fast : w_slow;
        const double hi = std::min(t + w, t_star);
        add_panel(t, hi);
        t = hi;
    }
    tail_kernel_ = root * expm(t_star * a_);
    tail_rate_ = slow;
}

RVec SquareFunctionRenorm::energies(const Vec& x) const {
    if (x.size() != a_.rows()) throw std::invalid_argument("dimension mismatch");
    if (diagonal_) return (diag_weight_.array() * x.cwiseAbs2().array()).matrix();
    RVec e = RVec::Zero(x.size());
    for (std::size_t n = 0; n < kernels_.size(); ++n) e += weights_[n] * (kernels_[n] * x).cwiseAbs2();
    e += (tail_kernel_ * x).cwiseAbs2() / (2.0 * tail_rate_);
    return e;
}

double SquareFunctionRenorm::operator()(const Vec& x) const {
    return lq_norm(RVec(energies(x).cwiseSqrt()), q_);
}

double contractivity_check(const Generator& gen, const RenormNorm& norm, std::size_t n,
                           const std::vector<double>& s_grid, std::uint64_t seed) {
    if (n == 0 || s_grid.empty()) throw std::invalid_argument("contractivity check needs samples and an s-grid");
    const Mat a = generator_matrix(gen);
    const Mat& na = std::visit(
        [](const auto& nm) -> const Mat& {
            if constexpr (std::is_same_v<std::decay_t<decltype(nm)>, RenormQ>) return nm.a;
            else return nm.generator_matrix();
        },
        norm);
    if (na.rows() != a.rows() || (na - a).norm() > 1e-14 * std::max(1.0, a.norm()))
        throw std::invalid_argument("norm was built from a different generator");
    auto eval = [&](const Vec& x) { return std::visit([&](const auto& nm) { return nm(x); }, norm); };
    std::vector<Mat> s_ops;
    for (double s : s_grid) s_ops.push_back(semigroup_matrix(gen, s));
    const int d = int(a.rows());
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const NormalStream ns(seed, StreamTag::Probe, i);
        RVec re(d), im(d);
        ns.fill(0, re, d);
        ns.fill(1, im, d);
        Vec x(d);
        for (int k = 0; k < d; ++k) x[k] = cplx(re[k], im[k]);
        const double base = eval(x);
        for (const Mat& s : s_ops) worst = std::max(worst, eval(s * x) / base);
    }
    return worst;
}

Mat random_sectorial_matrix(int d, std::uint64_t seed) {
    if (d < 1) throw std::invalid_argument("dimension d must be positive");
    const NormalStream ns(seed, StreamTag::Probe, 0xABCDEFull);
    RVec z(4 * d * d + d);
    ns.fill(0, z, long(z.size()));
    Mat g(d, d), h(d, d);
    long c = 0;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) g(i, j) = cplx(z[c], z[c + 1]), c += 2;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) h(i, j) = cplx(z[c], z[c + 1]), c += 2;
    Eigen::HouseholderQR<Mat> qr(g);
    const Mat v = qr.householderQ();
    RVec lam(d);
    for (int k = 0; k < d; ++k) lam[k] = 0.5 + 1.5 * ns.uniform(std::uint32_t(k), 7);
    const Mat s = v * lam.cast<cplx>().asDiagonal() * v.adjoint();
    Eigen::JacobiSVD<Mat> svd(h);
    const Mat nmat = h * (0.45 * lam.minCoeff() / svd.singularValues()[0]);
    return -(0.5 * (s + s.adjoint()) + nmat);
}

} // namespace stochconv
