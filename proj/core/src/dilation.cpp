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

#include "stochconv/dilation.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "engine.hpp"

namespace stochconv {

namespace {

const SpectralGenerator& as_spectral(const Generator& gen) {
    const auto* s = std::get_if<SpectralGenerator>(&gen);
    if (!s) throw std::invalid_argument("dilation requires a spectral generator");
    return *s;
}

constexpr double kTailDecay = 30.0;

} // namespace

DilationRep::DilationRep(const Generator& gen, double h, double horizon)
    : gen_(as_spectral(gen)), h_(h), horizon_(horizon) {
    if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("lattice step h must be positive");
    if (!(horizon >= 0.0) || !std::isfinite(horizon)) throw std::invalid_argument("dilation horizon must be ≥ 0");
    for (const cplx& mu : gen_.modes()) {
        const double a = mu.real();
        long m = long(std::ceil((horizon + kTailDecay / a) / h));
        m += m % 2;
        m = std::max(m, 16L);
        if (m > (1L << 26)) throw std::invalid_argument("dilation lattice too large for this mode");
        const double r = std::exp(-a * h);
        RVec xi(m), s(m);
        double s2 = 0.0;
        for (long j = 0; j < m; ++j) {
            const double th = 2.0 * kPi * double(j - m / 2) / double(m);
            xi[j] = -mu.imag() + th / h;
            const double w = (1.0 - r * r) / (1.0 - 2.0 * r * std::cos(th) + r * r) / double(m);
            s[j] = std::sqrt(w);
            s2 += w;
        }
        xi_.push_back(std::move(xi));
        s_.push_back(std::move(s));
        s2_.push_back(s2);
        r_.push_back(r);
    }
}

double DilationRep::density(int k, double xi) const {
    const cplx mu = gen_.modes().at(std::size_t(k));
    const double r = r_[std::size_t(k)];
    const double th = h_ * (xi + mu.imag());
    return h_ / (2.0 * kPi) * (1.0 - r * r) / (1.0 - 2.0 * r * std::cos(th) + r * r);
}

double DilationRep::mass(int k) const { return s2_.at(std::size_t(k)); }

void DilationRep::check_time(double t) const {
    if (!(t >= 0.0)) throw std::invalid_argument("dilation identity requires t ≥ 0");
    const double n = t / h_;
    if (std::abs(n - std::round(n)) > 1e-9 * std::max(1.0, n))
        throw std::invalid_argument("t is not on the dilation lattice");
    if (t > horizon_ * (1.0 + 1e-12)) throw std::invalid_argument("t exceeds the dilation horizon");
}

DilationRep::Element DilationRep::zero() const {
    Element e;
    for (const auto& s : s_) e.c.push_back(Vec::Zero(s.size()));
    return e;
}

DilationRep::Element DilationRep::embed(const Vec& x) const {
    if (x.size() != modes()) throw std::invalid_argument("dimension mismatch");
    Element e;
    for (int k = 0; k < modes(); ++k) e.c.push_back(s_[std::size_t(k)].cast<cplx>() * x[k]);
    return e;
}

DilationRep::Element DilationRep::group(double t, const Element& y) const {
    Element e = y;
    for (int k = 0; k < modes(); ++k) {
        const RVec& xi = xi_[std::size_t(k)];
        for (Eigen::Index j = 0; j < xi.size(); ++j) e.c[std::size_t(k)][j] *= std::polar(1.0, t * xi[j]);
    }
    return e;
}

DilationRep::Element DilationRep::project(const Element& y) const {
    Element e = y;
    for (int k = 0; k < modes(); ++k) {
        const RVec& s = s_[std::size_t(k)];
        const cplx a = s.cast<cplx>().dot(y.c[std::size_t(k)]) / s2_[std::size_t(k)];
        e.c[std::size_t(k)] = s.cast<cplx>() * a;
    }
    return e;
}

Vec DilationRep::pullback(const Element& y) const {
    Vec x(modes());
    for (int k = 0; k < modes(); ++k)
        x[k] = s_[std::size_t(k)].cast<cplx>().dot(y.c[std::size_t(k)]) / s2_[std::size_t(k)];
    return x;
}

double DilationRep::norm(const Element& y, double q) const {
    RVec m(modes());
    for (int k = 0; k < modes(); ++k) m[k] = y.c[std::size_t(k)].norm();
    return lq_norm(m, q);
}

double DilationRep::norm(const Element& y) const { return norm(y, gen_.space().q()); }

DilationRep::Element DilationRep::add(const Element& a, const Element& b) {
    Element e = a;
    for (std::size_t k = 0; k < e.c.size(); ++k) e.c[k] += b.c[k];
    return e;
}

DilationRep::Element DilationRep::scale(const Element& a, cplx c) {
    Element e = a;
    for (auto& v : e.c) v *= c;
    return e;
}

double DilationRep::mode_residual(int k, double t) const {
    check_time(t);
    const RVec& s = s_.at(std::size_t(k));
    const RVec& xi = xi_[std::size_t(k)];
    const double s2 = s2_[std::size_t(k)];
    cplx proj = 0.0;
    for (Eigen::Index j = 0; j < s.size(); ++j) proj += s[j] * s[j] * std::polar(1.0, t * xi[j]);
    proj /= s2;
    // J S(t) e_k - P U(t) J e_k = s (e^{-mu t} - proj).
    return std::sqrt(s2) * std::abs(std::exp(-gen_.modes()[std::size_t(k)] * t) - proj);
}

double verify_dilation_identity(const DilationRep& rep, double t, const Vec& x) {
    rep.check_time(t);
    const Generator g = rep.generator();
    const auto lhs = rep.embed(semigroup_apply(g, t, x));
    const auto rhs = rep.project(rep.group(t, rep.embed(x)));
    return rep.norm(DilationRep::add(lhs, DilationRep::scale(rhs, -1.0)));
}

double verify_dilation_identity(const Generator& gen, double t, const Vec& x) {
    if (!(t >= 0.0)) throw std::invalid_argument("dilation identity requires t ≥ 0");
    const DilationRep rep(gen, 1.0 / 16.0, std::max(10.0, t));
    return verify_dilation_identity(rep, t, x);
}

DilationPath convolve_via_dilation(const DilationRep& rep, const StepProcess& g, const WienerPath& w) {
    const TimeGrid& grid = g.grid();
    if (!(w.grid == grid)) throw std::invalid_argument("dilation route needs noise coupled on the process grid");
    if (w.increments.cols() != g.noise_dim()) throw std::invalid_argument("noise dimension mismatch");
    if (g.space().dim() != rep.modes()) throw std::invalid_argument("generator and process dimensions differ");
    for (double t : grid.nodes()) rep.check_time(t);

    const int n = grid.steps(), d = rep.modes();
    // Phase tables e^{i t_n xi_j} per node.
    std::vector<std::vector<Vec>> phase(std::size_t(n + 1));
    for (int i = 0; i <= n; ++i) {
        for (int k = 0; k < d; ++k) {
            const RVec& xi = rep.xi(k);
            Vec p(xi.size());
            for (Eigen::Index j = 0; j < xi.size(); ++j) p[j] = std::polar(1.0, grid.node(i) * xi[j]);
            phase[std::size_t(i)].push_back(std::move(p));
        }
    }
    const DilationRep::Element unit = rep.embed(Vec::Ones(d));

    DilationPath out;
    out.path.times = grid.nodes();
    out.path.states = Mat::Zero(d, n + 1);
    out.z_norm.assign(std::size_t(n + 1), 0.0);
    out.pu_norm.assign(std::size_t(n + 1), 0.0);
    DilationRep::Element z = rep.zero();
    const double q = rep.generator().space().q();
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const Vec state = out.path.states.col(i);
        const History h{i, grid.node(i), grid.dt(i), state, acc};
        const GammaOperator op = g.at(h);
        const double sf = square_function_norm(op, g.space().q());
        acc += grid.dt(i) * sf * sf;
        const Vec v = op.apply(w.increments.row(i).transpose());
        // Z += U(-t_{i}) J v
        for (int k = 0; k < d; ++k)
            z.c[std::size_t(k)] += (unit.c[std::size_t(k)].array() * phase[std::size_t(i)][std::size_t(k)].conjugate().array()).matrix() * v[k];
        RVec zn(d), pn(d);
        for (int k = 0; k < d; ++k) {
            const Vec& ph = phase[std::size_t(i + 1)][std::size_t(k)];
            const Vec& s = unit.c[std::size_t(k)];
            const cplx a = (s.array().conjugate() * ph.array() * z.c[std::size_t(k)].array()).sum() / rep.mass(k);
            out.path.states(k, i + 1) = a;
            zn[k] = z.c[std::size_t(k)].norm();
            pn[k] = std::abs(a) * std::sqrt(rep.mass(k));
        }
        out.z_norm[std::size_t(i + 1)] = lq_norm(zn, q);
        out.pu_norm[std::size_t(i + 1)] = lq_norm(pn, q);
    }
    return out;
}

std::vector<DilationResidualRow> dilation_residual_table(const DilationRep& rep, int stride) {
    if (stride < 1) throw std::invalid_argument("stride must be ≥ 1");
    std::vector<DilationResidualRow> rows;
    const long last = long(std::floor(rep.horizon() / rep.step() + 1e-9));
    for (int k = 0; k < rep.modes(); ++k)
        for (long n = 0; n <= last; n += stride) {
            const double t = double(n) * rep.step();
            rows.push_back({k, t, rep.mode_residual(k, t)});
        }
    return rows;
}

void write_dilation_csv(std::ostream& os, const std::vector<DilationResidualRow>& rows) {
    os << "mode,t,residual\n";
    char buf[96];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g\n", r.mode, r.t, r.residual);
        os << buf;
    }
}

} // namespace stochconv
