#pragma once

#include <cmath>
#include <string>

#include "qlift/core.hpp"

namespace qlift {

/// Kronecker product. Entry ((i*rB+k),(j*cB+l)) = A(i,j)*B(k,l), so the left
/// factor owns the major index. This matches the lifted-state layout below:
/// system index major, ancilla index minor.
inline Matrix tensor_product(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i) {
        for (Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

/// Entrywise complex conjugate (no transpose). For a system operator M this
/// is the matrix of the corresponding ancilla operator: <m|M_A|n> = <n|M†|m>.
inline Matrix entrywise_conjugate(const Matrix& m) {
    require_square(m, "entrywise_conjugate");
    return m.conjugate();
}

/// A density matrix rho lifted to a ket of the doubled (system ⊗ ancilla)
/// space: amplitude (m*N + n) holds rho(m, n). The lifted vector is not
/// normalized in general; its squared norm equals Tr(rho† rho).
struct LiftedState {
    Index dim = 0;      // N
    Vector amplitudes;  // length N*N

    double norm_squared() const { return amplitudes.squaredNorm(); }
};

inline LiftedState vectorize(const Matrix& rho) {
    require_square(rho, "vectorize");
    const Index n = rho.rows();
    LiftedState psi;
    psi.dim = n;
    psi.amplitudes.resize(n * n);
    for (Index m = 0; m < n; ++m) {
        for (Index k = 0; k < n; ++k) {
            psi.amplitudes(m * n + k) = rho(m, k);
        }
    }
    return psi;
}

/// Inverse of vectorize; bit-exact round trip.
inline Matrix devectorize(const Vector& amplitudes) {
    const auto len = amplitudes.size();
    const Index n = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(len))));
    if (n * n != len) {
        throw DimensionError("devectorize: length " + std::to_string(len) +
                             " is not a perfect square");
    }
    Matrix rho(n, n);
    for (Index m = 0; m < n; ++m) {
        for (Index k = 0; k < n; ++k) {
            rho(m, k) = amplitudes(m * n + k);
        }
    }
    return rho;
}

inline Matrix devectorize(const LiftedState& psi) {
    if (psi.dim * psi.dim != psi.amplitudes.size()) {
        throw DimensionError("devectorize: inconsistent LiftedState");
    }
    return devectorize(psi.amplitudes);
}

/// Permutation S on the doubled space with S|m,n> = |n,m>. The effective
/// Hamiltonian built below satisfies S conj(H~) S = -H~.
inline Matrix swap_system_ancilla(Index n) {
    Matrix s = Matrix::Zero(n * n, n * n);
    for (Index m = 0; m < n; ++m) {
        for (Index k = 0; k < n; ++k) {
            s(m * n + k, k * n + m) = 1.0;
        }
    }
    return s;
}

// Two-level operators, basis ordered (excited, ground) so that
// sigma_z = diag(1,-1) and sigma_minus |e> = |g>.
inline Matrix sigma_x() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

inline Matrix sigma_y() {
    Matrix m(2, 2);
    m << 0, -kImag, kImag, 0;
    return m;
}

inline Matrix sigma_z() {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

inline Matrix sigma_plus() {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 1) = 1.0;
    return m;
}

inline Matrix sigma_minus() {
    Matrix m = Matrix::Zero(2, 2);
    m(1, 0) = 1.0;
    return m;
}

/// Bosonic annihilation operator on a Fock space truncated to `levels`
/// states |0..levels-1>: a|n> = sqrt(n)|n-1>.
inline Matrix annihilation(Index levels) {
    if (levels < 1) {
        throw DimensionError("annihilation: need at least one level");
    }
    Matrix a = Matrix::Zero(levels, levels);
    for (Index n = 1; n < levels; ++n) {
        a(n - 1, n) = std::sqrt(static_cast<double>(n));
    }
    return a;
}

inline Matrix number_operator(Index levels) {
    Matrix n = Matrix::Zero(levels, levels);
    for (Index k = 0; k < levels; ++k) {
        n(k, k) = static_cast<double>(k);
    }
    return n;
}

}  // namespace qlift
