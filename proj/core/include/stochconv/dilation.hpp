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

#include <iosfwd>
#include <vector>

#include "stochconv/model.hpp"
#include "stochconv/simulate.hpp"

namespace stochconv {

/// Poisson-kernel dilation of a spectral generator on a xi-lattice.
///
/// Mode k lives on M_k equispaced frequencies spanning one period 2 pi / h
/// around -Im mu_k, weighted by the periodised Poisson density. Functions
/// are stored by their values times sqrt(d xi), so the Y-norm of mode k
/// is a plain Euclidean norm. J S(t) = P U(t) J then holds to rounding for
/// every t = n h with 0 <= t <= horizon.
class DilationRep {
public:
    struct Element {
        std::vector<Vec> c; // per-mode coefficients
    };

    DilationRep(const Generator& gen, double h, double horizon);

    const SpectralGenerator& generator() const { return gen_; }
    int modes() const { return int(xi_.size()); }
    int nodes(int k) const { return int(xi_[std::size_t(k)].size()); }
    double step() const { return h_; }
    double horizon() const { return horizon_; }
    const RVec& xi(int k) const { return xi_[std::size_t(k)]; }

    /// Periodised Poisson density of mode k at xi.
    double density(int k, double xi) const;
    /// sum_j w_kj, the discrete mass of the density (1 up to e^{-30}).
    double mass(int k) const;

    Element embed(const Vec& x) const;
    Element group(double t, const Element& y) const;
    Element project(const Element& y) const;
    /// J^{-1} on the range of J.
    Vec pullback(const Element& y) const;
    double norm(const Element& y) const;
    double norm(const Element& y, double q) const;

    Element zero() const;
    static Element add(const Element& a, const Element& b);
    static Element scale(const Element& a, cplx c);

    /// ||J S(t) e_k - P U(t) J e_k||_Y for a single mode.
    double mode_residual(int k, double t) const;
    /// Checks t >= 0, t on the lattice h Z and t <= horizon.
    void check_time(double t) const;

private:
    SpectralGenerator gen_;
    double h_, horizon_;
    std::vector<RVec> xi_;
    std::vector<RVec> s_;     // sqrt of the discrete weights
    std::vector<double> s2_;  // |s|^2
    std::vector<double> r_;   // e^{-Re mu h}
};

/// ||J S(t) x - P U(t) J x||_Y.
double verify_dilation_identity(const DilationRep& rep, double t, const Vec& x);
/// Convenience form with lattice step h = 1/16 and horizon max(10, t).
double verify_dilation_identity(const Generator& gen, double t, const Vec& x);

struct DilationPath {
    Path path;                  // pullback of P U(t_n) Z(t_n)
    std::vector<double> z_norm; // ||Z(t_n)||_Y
    std::vector<double> pu_norm; // ||P U(t_n) Z(t_n)||_Y
};

/// Z_n = Z_{n-1} + U(-t_{n-1}) J G_n Delta W_n, read out through P U(t_n).
/// W must be sampled on the process grid, whose nodes must lie on the lattice.
DilationPath convolve_via_dilation(const DilationRep& rep, const StepProcess& g, const WienerPath& w);

struct DilationResidualRow {
    int mode;
    double t;
    double residual;
};

/// Residuals of every mode at t = 0, h, 2h, ..., horizon (stride in lattice units).
std::vector<DilationResidualRow> dilation_residual_table(const DilationRep& rep, int stride = 1);
void write_dilation_csv(std::ostream& os, const std::vector<DilationResidualRow>& rows);

} // namespace stochconv
