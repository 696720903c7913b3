#pragma once

#include <iostream>

#include "qlift/core.hpp"
#include "qlift/master_equation.hpp"
#include "qlift/matrix_exponential.hpp"
#include "qlift/operator_algebra.hpp"

namespace qlift {

inline constexpr Index kMaxLiftedSystemDim = 64;  // lifted dimension <= 4096, dense desk scale

/// Generator of the lifted Schrödinger-like evolution
///   i d/dt |psi_rho> = H~ |psi_rho>,
/// an N²xN² generally non-Hermitian matrix acting on vectorized states.
struct EffectiveHamiltonian {
    Index system_dim = 0;
    Matrix matrix;
};

/// Assemble H~ = H ⊗ I - I ⊗ conj(H) + i sum_a gamma_a L_a ⊗ conj(L_a).
/// Defining property: -i H~ vec(rho) = vec(rhs(model, rho)) for all rho,
/// i.e. one step of the master equation is one Schrödinger step upstairs.
inline EffectiveHamiltonian build_effective_hamiltonian(const MasterEquation& model) {
    validate_model(model);
    const Index n = model.dim();
    if (n > kMaxLiftedSystemDim) {
        throw DimensionError("build_effective_hamiltonian: system dimension " +
                             std::to_string(n) + " exceeds the dense limit of " +
                             std::to_string(kMaxLiftedSystemDim) +
                             " (lifted dimension would be " + std::to_string(n * n) + ")");
    }
    const Matrix id = Matrix::Identity(n, n);
    EffectiveHamiltonian eff;
    eff.system_dim = n;
    eff.matrix = tensor_product(model.drift, id) -
                 tensor_product(id, entrywise_conjugate(model.drift));
    for (const auto& ch : model.channels) {
        eff.matrix += kImag * ch.rate * tensor_product(ch.op, entrywise_conjugate(ch.op));
    }
    return eff;
}

/// The N²xN² map vec(rho0) -> vec(rho(t)), i.e. exp(-i H~ t).
inline Matrix propagator_matrix(const MasterEquation& model, double t) {
    if (!std::isfinite(t)) {
        throw DomainError("propagator_matrix: time must be finite");
    }
    const EffectiveHamiltonian eff = build_effective_hamiltonian(model);
    return matrix_exponential((-kImag * t) * eff.matrix);
}

/// Solve the master equation by lifting rho0, propagating with exp(-i H~ t),
/// and reading the density matrix back. The lifted vector is never
/// renormalized; normalization is a property of rho, not of its lift.
inline Matrix propagate(const MasterEquation& model, const Matrix& rho0, double t,
                        const Tolerances& tol = default_tolerances()) {
    if (rho0.rows() != model.dim() || rho0.cols() != model.dim()) {
        throw DimensionError("propagate: state dimension does not match model");
    }
    const double defect = hermiticity_defect(rho0);
    if (defect > tol.hermiticity_warn * std::max(1.0, rho0.norm())) {
        // The map is linear and defined on every operator, so proceed.
        std::cerr << "qlift: propagate: initial state is not Hermitian (defect " << defect
                  << "); evolving it anyway\n";
    }
    const Matrix prop = propagator_matrix(model, t);
    return devectorize(Vector(prop * vectorize(rho0).amplitudes));
}

}  // namespace qlift
