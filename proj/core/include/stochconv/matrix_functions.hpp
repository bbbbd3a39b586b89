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

/// Matrix exponential, Pade-13 scaling and squaring (Higham 2005).
Mat expm(const Mat& a);

/// Principal square root via the complex Schur form (Bjorck-Hammarling).
/// Works for defective matrices; eigenvalues on (-inf, 0] are rejected.
Mat sqrtm(const Mat& a);

/// Principal power a^alpha, alpha in (0, 1], via the Schur form and
/// inverse scaling and squaring.
Mat powm(const Mat& a, double alpha);

/// Solves a^* q + q a = -c for q (a Hurwitz) with the complex
/// Bartels-Stewart method. Throws NumericalError if a is not Hurwitz.
Mat solve_lyapunov(const Mat& a, const Mat& c);

/// Largest real part of the spectrum.
double spectral_abscissa(const Mat& a);

} // namespace stochconv
