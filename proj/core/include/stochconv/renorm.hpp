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

#include <cstdint>
#include <variant>
#include <vector>

#include "stochconv/model.hpp"

namespace stochconv {

/// phi(x) = ||x||_q^r with its first two derivatives on real l^q_d.
struct PhiDerivatives {
    double r = 2.0, q = 2.0;
    RVec x;
    double value = 0.0;
    RVec gradient;

    /// phi''(x)(u, v).
    double hessian(const RVec& u, const RVec& v) const;
    /// ||phi'(x)||_{q'}.
    double gradient_dual_norm() const;

private:
    friend PhiDerivatives phi_derivatives(const RVec&, double, double);
    double nrm_ = 0.0;
    RVec g_; // |x_k|^{q-1} sgn x_k
};

/// Requires q >= 2 and r >= q.
PhiDerivatives phi_derivatives(const RVec& x, double r, double q);

struct CrProbeResult {
    double r = 0.0, q = 0.0;
    int d = 0;
    std::size_t n = 0;
    double k1_hat = 0.0;
    double k2_hat = 0.0;
    /// max relative deviation of phi(cx) = c^r phi(x), phi'(cx) = c^{r-1} phi'(x)
    /// and phi''(cx) = c^{r-2} phi''(x) over the cloud (c = 2, 0.5).
    double scale_residual = 0.0;
    /// Central finite differences at step 1e-5 against the closed forms,
    /// relative to the natural scale ||x||^{r-1}||u|| resp. ||x||^{r-2}||u|| ||v||.
    double fd_gradient_residual = 0.0;
    double fd_hessian_residual = 0.0;
};

CrProbeResult cr_bound_probe(double r, double q, int d, std::size_t n, std::uint64_t seed, int threads = 1);

/// |||x|||^2 = x^* Q x with A^* Q + Q A = -C, C = ((-A)^{1/2})^* (-A)^{1/2}.
struct RenormQ {
    Mat a;
    Mat gram;
    double residual = 0.0;
    /// b |||x||| <= ||x||_2 <= B |||x|||.
    double lower = 0.0, upper = 0.0;

    double operator()(const Vec& x) const;
};

RenormQ lyapunov_renorm(const Generator& gen);

/// ||( (int_0^inf |((-A)^{1/2} e^{tA} x)_k|^2 dt)^{1/2} )_k||_q. Spectral
/// generators use the closed form; matrices use Gauss-Legendre on graded
/// panels up to T* = 40 / a_min plus an exponential tail term.
class SquareFunctionRenorm {
public:
    SquareFunctionRenorm(const Generator& gen, double q);
    double operator()(const Vec& x) const;
    /// Per-coordinate integrals int_0^inf |v_k|^2 dt.
    RVec energies(const Vec& x) const;
    const Mat& generator_matrix() const { return a_; }
    double q() const { return q_; }
    bool diagonal() const { return diagonal_; }

private:
    Mat a_;
    double q_;
    bool diagonal_ = false;
    RVec diag_weight_;
    std::vector<Mat> kernels_; // (-A)^{1/2} e^{t_n A}
    std::vector<double> weights_;
    Mat tail_kernel_;
    double tail_rate_ = 0.0;
};

using RenormNorm = std::variant<RenormQ, SquareFunctionRenorm>;

/// max over n random x and every s in s_grid of |||S(s)x||| / |||x|||.
double contractivity_check(const Generator& gen, const RenormNorm& norm, std::size_t n,
                           const std::vector<double>& s_grid, std::uint64_t seed);

/// A = -(S + N), S Hermitian with spectrum in [0.5, 2] and ||N|| <= lambda_min(S)/2,
/// so the numerical range of -A sits in the open right half-plane.
Mat random_sectorial_matrix(int d, std::uint64_t seed);

} // namespace stochconv
