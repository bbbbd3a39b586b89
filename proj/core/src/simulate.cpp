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

#include "stochconv/simulate.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "engine.hpp"

namespace stochconv {

namespace detail {

cplx phi1(cplx z, double dt) {
    const cplx w = z * dt;
    if (std::abs(w) < 0.1) {
        // dt * (1 - w/2 + w^2/6 - ...)
        cplx term = 1.0, sum = 1.0;
        for (int n = 1; n <= 12; ++n) {
            term *= -w / double(n + 1);
            sum += term;
        }
        return dt * sum;
    }
    if (w.imag() == 0.0) return cplx(-std::expm1(-w.real()) / z.real(), 0.0);
    return (1.0 - std::exp(-w)) / z;
}

ExactKernel make_exact_kernel(const std::vector<cplx>& mu, double dt, bool with_factor) {
    const int d = int(mu.size());
    ExactKernel k;
    k.decay.resize(d);
    k.a_self.resize(d);
    k.b_self.resize(d);
    for (int i = 0; i < d; ++i) {
        k.decay[i] = std::exp(-mu[i] * dt);
        k.a_self[i] = phi1(2.0 * mu[i].real(), dt).real();
        k.b_self[i] = phi1(2.0 * mu[i], dt);
    }
    if (!with_factor) return k;
    RMat cov(2 * d, 2 * d);
    for (int a = 0; a < d; ++a) {
        for (int b = 0; b < d; ++b) {
            const cplx A = phi1(mu[a] + std::conj(mu[b]), dt);
            const cplx B = phi1(mu[a] + mu[b], dt);
            cov(a, b) = 0.5 * (A + B).real();
            cov(d + a, d + b) = 0.5 * (A - B).real();
            cov(a, d + b) = 0.5 * (B.imag() - A.imag());
            cov(d + a, b) = 0.5 * (A.imag() + B.imag());
        }
    }
    cov = 0.5 * (cov + cov.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<RMat> es(cov);
    if (es.info() != Eigen::Success) throw NumericalError("exact kernel covariance factorization failed");
    const double top = std::max(es.eigenvalues().maxCoeff(), 0.0);
    std::vector<int> keep;
    for (int i = 2 * d - 1; i >= 0; --i)
        if (es.eigenvalues()[i] > 1e-15 * top) keep.push_back(i);
    k.factor.resize(2 * d, Eigen::Index(keep.size()));
    for (std::size_t c = 0; c < keep.size(); ++c)
        k.factor.col(Eigen::Index(c)) = es.eigenvectors().col(keep[c]) * std::sqrt(es.eigenvalues()[keep[c]]);
    return k;
}

PathEngine::PathEngine(Scheme scheme, const Generator* gen, const StepProcess& g, int refine_levels)
    : scheme_(scheme), gen_(gen), g_(g), fine_(g.grid().refine(refine_levels)), sub_(1 << refine_levels),
      d_(g.space().dim()) {
    if (refine_levels < 0 || refine_levels > 20) throw std::invalid_argument("refinement level out of range");
    if (scheme != Scheme::Ito) {
        if (!gen) throw std::invalid_argument("convolution needs a generator");
        if (generator_dim(*gen) != d_) throw std::invalid_argument("generator and process dimensions differ");
    }
    if (scheme == Scheme::Exact) {
        const auto* sg = std::get_if<SpectralGenerator>(gen);
        if (!sg) throw std::invalid_argument("exact sampling requires a spectral generator");
        mu_ = sg->modes();
    }
    std::map<double, int> slots;
    dt_slot_.resize(std::size_t(fine_.steps()));
    for (int j = 0; j < fine_.steps(); ++j) {
        const double dt = fine_.dt(j);
        auto it = slots.find(dt);
        if (it == slots.end()) {
            const int slot = int(slots.size());
            it = slots.emplace(dt, slot).first;
            if (scheme == Scheme::ExponentialEuler) {
                if (std::holds_alternative<SpectralGenerator>(*gen)) s_diag_.push_back(semigroup_matrix(*gen, dt).diagonal());
                else s_dt_.push_back(semigroup_matrix(*gen, dt));
            } else if (scheme == Scheme::Exact) {
                kernels_.push_back(make_exact_kernel(mu_, dt, true));
            }
        }
        dt_slot_[std::size_t(j)] = it->second;
    }
    if (g.is_deterministic())
        for (const auto& op : g.operators()) det_sf_.push_back(square_function_norm(op, g.space().q()));
}

namespace {

bool single_support(const GammaOperator& op) {
    if (op.is_diagonal()) return true;
    const Mat f = op.dense();
    for (Eigen::Index j = 0; j < f.cols(); ++j) {
        int nz = 0;
        for (Eigen::Index k = 0; k < f.rows(); ++k) nz += (f(k, j) != cplx(0.0));
        if (nz > 1) return false;
    }
    return true;
}

} // namespace

void PathEngine::step_exact(Vec& y, const GammaOperator& op, int j, const NormalStream& ns, RVec& z) const {
    const ExactKernel& k = kernels_[std::size_t(dt_slot_[std::size_t(j)])];
    y = k.decay.cwiseProduct(y);
    if (single_support(op)) {
        // Each noise coordinate drives one mode: per-mode 2x2 covariance
        // of (Re xi_k, Im xi_k).
        Vec e2;
        RVec e1;
        if (op.is_diagonal()) {
            e1 = op.diag().cwiseAbs2();
            e2 = op.diag().cwiseProduct(op.diag());
        } else {
            const Mat f = op.dense();
            e1 = f.cwiseAbs2().rowwise().sum();
            e2 = f.cwiseProduct(f).rowwise().sum();
        }
        for (int m = 0; m < d_; ++m) {
            if (e1[m] == 0.0) continue;
            const double a = e1[m] * k.a_self[m];
            const cplx b = e2[m] * k.b_self[m];
            const double sxx = std::max(0.0, 0.5 * (a + b.real()));
            const double syy = std::max(0.0, 0.5 * (a - b.real()));
            const double sxy = 0.5 * b.imag();
            const double l11 = std::sqrt(sxx);
            const double l21 = l11 > 0.0 ? sxy / l11 : 0.0;
            const double l22 = std::sqrt(std::max(0.0, syy - l21 * l21));
            const auto [z1, z2] = ns.pair(std::uint32_t(m), std::uint32_t(j));
            y[m] += cplx(l11 * z1, l21 * z1 + l22 * z2);
        }
        return;
    }
    // General operator: eta_j = (int e^{-mu (dt-s)} dW_j(s))_k is a joint
    // Gaussian vector sampled through the cached covariance factor.
    const Mat f = op.dense();
    const long r = long(k.factor.cols());
    const long m = long(f.cols());
    z.resize(m * r);
    ns.fill(std::uint32_t(j), z, m * r);
    for (long c = 0; c < m; ++c) {
        const RVec eta = k.factor * z.segment(c * r, r);
        for (int a = 0; a < d_; ++a) y[a] += f(a, c) * cplx(eta[a], eta[d_ + a]);
    }
}

} // namespace detail

WienerPath WienerPath::coarsen(int factor) const {
    const TimeGrid g = grid.coarsen(factor);
    RMat inc = RMat::Zero(g.steps(), increments.cols());
    for (int i = 0; i < g.steps(); ++i)
        for (int s = 0; s < factor; ++s) inc.row(i) += increments.row(i * factor + s);
    return WienerPath{g, std::move(inc), seed, path};
}

WienerPath sample_wiener(const TimeGrid& grid, int m, std::uint64_t seed, std::uint64_t path_index) {
    if (m < 1) throw std::invalid_argument("noise dimension m must be ≥ 1");
    const NormalStream ns(seed, StreamTag::Wiener, path_index);
    RMat inc(grid.steps(), m);
    RVec z(m);
    for (int i = 0; i < grid.steps(); ++i) {
        ns.fill(std::uint32_t(i), z, m);
        inc.row(i) = z.transpose() * std::sqrt(grid.dt(i));
    }
    return WienerPath{grid, std::move(inc), seed, path_index};
}

namespace {

int refinement_levels(const TimeGrid& coarse, const TimeGrid& fine) {
    int levels = 0;
    TimeGrid g = coarse;
    while (g.steps() < fine.steps() && levels < 20) {
        g = g.refine();
        ++levels;
    }
    if (!(g == fine)) throw std::invalid_argument("grid mismatch between process and Wiener path");
    return levels;
}

Path run_single(detail::PathEngine& eng, const WienerPath* w, std::uint64_t seed, std::uint64_t path, int d) {
    Path out;
    out.times = eng.fine_grid().nodes();
    out.states.resize(d, eng.fine_grid().steps() + 1);
    eng.run(w, seed, path, [](int, const GammaOperator&) {}, [&](int j, const Vec& y) { out.states.col(j) = y; });
    return out;
}

} // namespace

Path ito_integral(const StepProcess& g, const WienerPath& w) {
    if (w.increments.cols() != g.noise_dim()) throw std::invalid_argument("noise dimension mismatch");
    detail::PathEngine eng(Scheme::Ito, nullptr, g, refinement_levels(g.grid(), w.grid));
    return run_single(eng, &w, w.seed, w.path, g.space().dim());
}

Path convolve_exponential_euler(const Generator& gen, const StepProcess& g, const WienerPath& w) {
    if (w.increments.cols() != g.noise_dim()) throw std::invalid_argument("noise dimension mismatch");
    detail::PathEngine eng(Scheme::ExponentialEuler, &gen, g, refinement_levels(g.grid(), w.grid));
    return run_single(eng, &w, w.seed, w.path, g.space().dim());
}

Path convolve_exact(const Generator& gen, const StepProcess& g, std::uint64_t seed, std::uint64_t path_index,
                    int refine_levels) {
    detail::PathEngine eng(Scheme::Exact, &gen, g, refine_levels);
    return run_single(eng, nullptr, seed, path_index, g.space().dim());
}

double running_sup(const Path& path, double q) {
    if (path.nodes() == 0) throw std::invalid_argument("running_sup of an empty path");
    double s = 0.0;
    for (int i = 0; i < path.nodes(); ++i) s = std::max(s, lq_norm(Vec(path.states.col(i)), q));
    return s;
}

double running_sup(const Path& path, const LqSpace& norm) {
    if (path.states.rows() != norm.dim()) throw std::invalid_argument("dimension mismatch");
    return running_sup(path, norm.q());
}

double l2gamma_along(const std::vector<GammaOperator>& ops, const TimeGrid& grid, double q) {
    if (int(ops.size()) != grid.steps()) throw std::invalid_argument("one operator per step required");
    double s = 0.0;
    for (int i = 0; i < grid.steps(); ++i) {
        const double f = square_function_norm(ops[std::size_t(i)], q);
        s += grid.dt(i) * f * f;
    }
    return std::sqrt(s);
}

} // namespace stochconv
