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

#include <variant>
#include <vector>

#include "stochconv/common.hpp"
#include "stochconv/lq_space.hpp"

namespace stochconv {

/// A = -diag(mu_k) on l^q_d, Re mu_k > 0 and |arg mu_k| < pi/2.
class SpectralGenerator {
public:
    SpectralGenerator(std::vector<cplx> modes, double q);

    /// Heat preset: mu_k = k^2, k = 1..d.
    static SpectralGenerator heat(int d, double q = 2.0);

    const std::vector<cplx>& modes() const { return modes_; }
    const LqSpace& space() const { return space_; }
    int dim() const { return space_.dim(); }
    double min_decay() const;

    SpectralGenerator with_exponent(double q) const { return SpectralGenerator(modes_, q); }

private:
    std::vector<cplx> modes_;
    LqSpace space_;
};

/// Dense generator A on l^q_d; accepted only if Hurwitz.
class MatrixGenerator {
public:
    MatrixGenerator(Mat a, double q);

    const Mat& matrix() const { return a_; }
    const LqSpace& space() const { return space_; }
    int dim() const { return space_.dim(); }

private:
    Mat a_;
    LqSpace space_;
};

using Generator = std::variant<SpectralGenerator, MatrixGenerator>;

int generator_dim(const Generator& gen);
const LqSpace& generator_space(const Generator& gen);

/// e^{tA} x.
Vec semigroup_apply(const Generator& gen, double t, const Vec& x);

/// e^{tA} as a dense matrix.
Mat semigroup_matrix(const Generator& gen, double t);

/// (-A)^alpha x for alpha in (0, 1].
Vec frac_power_apply(const Generator& gen, double alpha, const Vec& x);

/// (-A)^alpha as a dense matrix.
Mat frac_power_matrix(const Generator& gen, double alpha);

/// Dense matrix of A.
Mat generator_matrix(const Generator& gen);

/// Spectral generators: max |arg mu_k|. Matrix generators: largest
/// argument over a sampled boundary of the numerical range of -A, never
/// below the spectral angle. Throws NumericalError when the numerical
/// range reaches the closed left half-plane.
double sectorial_angle(const Generator& gen, int samples = 720);

/// ||(lambda I - A)^{-1}||_2.
double resolvent_norm(const Generator& gen, cplx lambda);

} // namespace stochconv
