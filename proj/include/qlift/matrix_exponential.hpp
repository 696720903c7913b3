#pragma once

#include <cmath>

#include "qlift/core.hpp"

namespace qlift {

namespace detail {

// Padé approximants for exp(A) around A = 0. After each call,
// (V+U)(V-U)^{-1} is the (k,k) approximant.

inline void exp_pade3(const Matrix& a, Matrix& u, Matrix& v) {
    const double b[] = {120., 60., 12., 1.};
    const Matrix id = Matrix::Identity(a.rows(), a.cols());
    const Matrix a2 = a * a;
    u = a * (b[3] * a2 + b[1] * id);
    v = b[2] * a2 + b[0] * id;
}

inline void exp_pade5(const Matrix& a, Matrix& u, Matrix& v) {
    const double b[] = {30240., 15120., 3360., 420., 30., 1.};
    const Matrix id = Matrix::Identity(a.rows(), a.cols());
    const Matrix a2 = a * a;
    const Matrix a4 = a2 * a2;
    u = a * (b[5] * a4 + b[3] * a2 + b[1] * id);
    v = b[4] * a4 + b[2] * a2 + b[0] * id;
}

inline void exp_pade7(const Matrix& a, Matrix& u, Matrix& v) {
    const double b[] = {17297280., 8648640., 1995840., 277200., 25200., 1512., 56., 1.};
    const Matrix id = Matrix::Identity(a.rows(), a.cols());
    const Matrix a2 = a * a;
    const Matrix a4 = a2 * a2;
    const Matrix a6 = a4 * a2;
    u = a * (b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
    v = b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
}

inline void exp_pade9(const Matrix& a, Matrix& u, Matrix& v) {
    const double b[] = {17643225600., 8821612800., 2075673600., 302702400., 30270240.,
                        2162160.,     110880.,     3960.,       90.,        1.};
    const Matrix id = Matrix::Identity(a.rows(), a.cols());
    const Matrix a2 = a * a;
    const Matrix a4 = a2 * a2;
    const Matrix a6 = a4 * a2;
    const Matrix a8 = a6 * a2;
    u = a * (b[9] * a8 + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
    v = b[8] * a8 + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
}

inline void exp_pade13(const Matrix& a, Matrix& u, Matrix& v) {
    const double b[] = {64764752532480000., 32382376266240000., 7771770303897600.,
                        1187353796428800.,  129060195264000.,   10559470521600.,
                        670442572800.,      33522128640.,       1323241920.,
                        40840800.,          960960.,            16380.,
                        182.,               1.};
    const Matrix id = Matrix::Identity(a.rows(), a.cols());
    const Matrix a2 = a * a;
    const Matrix a4 = a2 * a2;
    const Matrix a6 = a4 * a2;
    u = a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 + b[3] * a2 +
             b[1] * id);
    v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
}

}  // namespace detail

/// exp(M) for a dense complex square matrix by scaling-and-squaring with
/// diagonal Padé approximants. Degree and scaling follow the standard
/// 1-norm thresholds, so no spectral decomposition is involved and the
/// routine is safe for defective/non-normal inputs. Throws
/// NumericalRangeError if the result leaves the representable range.
inline Matrix matrix_exponential(const Matrix& m) {
    require_square(m, "matrix_exponential");
    require_finite(m, "matrix_exponential");

    Matrix u, v;
    int squarings = 0;
    const double l1norm = m.cwiseAbs().colwise().sum().maxCoeff();
    if (l1norm < 1.495585217958292e-002) {
        detail::exp_pade3(m, u, v);
    } else if (l1norm < 2.539398330063230e-001) {
        detail::exp_pade5(m, u, v);
    } else if (l1norm < 9.504178996162932e-001) {
        detail::exp_pade7(m, u, v);
    } else if (l1norm < 2.097847961257068e+000) {
        detail::exp_pade9(m, u, v);
    } else {
        const double max_norm = 5.371920351148152;
        std::frexp(l1norm / max_norm, &squarings);
        if (squarings < 0) squarings = 0;
        const Matrix scaled = m * std::ldexp(1.0, -squarings);
        detail::exp_pade13(scaled, u, v);
    }

    Matrix numer = u + v;
    Matrix denom = -u + v;
    Matrix result = denom.partialPivLu().solve(numer);
    for (int i = 0; i < squarings; ++i) {
        result = result * result;
    }
    if (!result.allFinite()) {
        throw NumericalRangeError("matrix_exponential: result overflowed (input norm " +
                                  std::to_string(l1norm) + ")");
    }
    return result;
}

}  // namespace qlift
