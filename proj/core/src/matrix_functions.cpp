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

#include "stochconv/matrix_functions.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace stochconv {

namespace {

constexpr double kPade13[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                              1187353796428800.0,  129060195264000.0,   10559470521600.0,
                              670442572800.0,      33522128640.0,       1323241920.0,
                              40840800.0,          960960.0,            16380.0,
                              182.0,               1.0};
constexpr double kTheta13 = 5.371920351148152;

void check_square(const Mat& a, const char* who) {
    if (a.rows() != a.cols()) throw std::invalid_argument(std::string(who) + ": matrix must be square");
}

void reject_branch_cut(const Mat& t) {
    const double scale = std::max(1.0, t.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < t.rows(); ++i) {
        const cplx z = t(i, i);
        if (std::abs(z) <= 1e-14 * scale ||
            (z.real() < 0.0 && std::abs(z.imag()) <= 1e-14 * scale))
            throw NumericalError("matrix power: eigenvalue on the closed negative real axis");
    }
}

// Upper triangular square root, recurrence column by column.
Mat sqrt_upper(const Mat& t) {
    const Eigen::Index n = t.rows();
    Mat u = Mat::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        u(j, j) = std::sqrt(t(j, j));
        for (Eigen::Index i = j - 1; i >= 0; --i) {
            cplx s = t(i, j);
            for (Eigen::Index k = i + 1; k < j; ++k) s -= u(i, k) * u(k, j);
            const cplx den = u(i, i) + u(j, j);
            if (std::abs(den) == 0.0) throw NumericalError("sqrtm: singular recurrence");
            u(i, j) = s / den;
        }
    }
    return u;
}

double one_norm(const Mat& a) { return a.cwiseAbs().colwise().sum().maxCoeff(); }

} // namespace

Mat expm(const Mat& a) {
    check_square(a, "expm");
    const Eigen::Index n = a.rows();
    if (n == 0) return a;
    const double nrm = one_norm(a);
    int s = 0;
    if (nrm > kTheta13) s = std::max(0, int(std::ceil(std::log2(nrm / kTheta13))));
    const Mat x = a / std::ldexp(1.0, s);
    const Mat id = Mat::Identity(n, n);
    const Mat x2 = x * x, x4 = x2 * x2, x6 = x4 * x2;
    const double* b = kPade13;
    const Mat u1 = x6 * (b[13] * x6 + b[11] * x4 + b[9] * x2);
    const Mat u = x * (u1 + b[7] * x6 + b[5] * x4 + b[3] * x2 + b[1] * id);
    const Mat v1 = x6 * (b[12] * x6 + b[10] * x4 + b[8] * x2);
    const Mat v = v1 + b[6] * x6 + b[4] * x4 + b[2] * x2 + b[0] * id;
    Mat r = (v - u).partialPivLu().solve(v + u);
    for (int i = 0; i < s; ++i) r = r * r;
    return r;
}

Mat sqrtm(const Mat& a) {
    check_square(a, "sqrtm");
    Eigen::ComplexSchur<Mat> cs(a);
    if (cs.info() != Eigen::Success) throw NumericalError("sqrtm: Schur decomposition failed");
    reject_branch_cut(cs.matrixT());
    const Mat u = sqrt_upper(cs.matrixT());
    return cs.matrixU() * u * cs.matrixU().adjoint();
}

Mat powm(const Mat& a, double alpha) {
    check_square(a, "powm");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("powm: alpha must lie in (0, 1]");
    if (alpha == 1.0) return a;
    Eigen::ComplexSchur<Mat> cs(a);
    if (cs.info() != Eigen::Success) throw NumericalError("powm: Schur decomposition failed");
    Mat t = cs.matrixT();
    reject_branch_cut(t);
    const Eigen::Index n = t.rows();
    Mat p;
    if (alpha == 0.5) {
        p = sqrt_upper(t);
    } else {
        // Inverse scaling and squaring: t^(1/2^s) close to I, then a
        // Taylor logarithm and one exponential.
        const Mat id = Mat::Identity(n, n);
        int s = 0;
        while ((t - id).norm() >= 0.25) {
            t = sqrt_upper(t);
            if (++s > 60) throw NumericalError("powm: square-root iteration did not converge");
        }
        const Mat x = t - id;
        Mat term = x, log = Mat::Zero(n, n);
        for (int k = 1; k < 200; ++k) {
            const Mat add = ((k % 2) ? 1.0 : -1.0) / double(k) * term;
            log += add;
            if (add.norm() <= 1e-18 * std::max(1.0, log.norm())) break;
            term = term * x;
        }
        p = expm(alpha * std::ldexp(1.0, s) * log);
    }
    return cs.matrixU() * p * cs.matrixU().adjoint();
}

double spectral_abscissa(const Mat& a) {
    check_square(a, "spectral_abscissa");
    Eigen::ComplexEigenSolver<Mat> es(a, false);
    if (es.info() != Eigen::Success) throw NumericalError("eigenvalue computation failed");
    return es.eigenvalues().real().maxCoeff();
}

Mat solve_lyapunov(const Mat& a, const Mat& c) {
    check_square(a, "solve_lyapunov");
    if (c.rows() != a.rows() || c.cols() != a.cols())
        throw std::invalid_argument("solve_lyapunov: shape mismatch");
    Eigen::ComplexSchur<Mat> cs(a);
    if (cs.info() != Eigen::Success) throw NumericalError("solve_lyapunov: Schur decomposition failed");
    const Mat& t = cs.matrixT();
    const Mat& u = cs.matrixU();
    const Eigen::Index n = a.rows();
    for (Eigen::Index i = 0; i < n; ++i)
        if (!(t(i, i).real() < 0.0)) throw NumericalError("generator is not Hurwitz");
    const Mat f = u.adjoint() * c * u;
    Mat y = Mat::Zero(n, n);
    // t^* y + y t = -f, solved entrywise in column-major order.
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
            cplx s = -f(i, j);
            for (Eigen::Index k = 0; k < i; ++k) s -= std::conj(t(k, i)) * y(k, j);
            for (Eigen::Index k = 0; k < j; ++k) s -= y(i, k) * t(k, j);
            y(i, j) = s / (std::conj(t(i, i)) + t(j, j));
        }
    }
    Mat q = u * y * u.adjoint();
    return 0.5 * (q + q.adjoint());
}

} // namespace stochconv
