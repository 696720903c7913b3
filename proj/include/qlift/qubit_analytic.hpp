#pragma once

#include <cmath>
#include <utility>

#include "qlift/core.hpp"
#include "qlift/master_equation.hpp"
#include "qlift/operator_algebra.hpp"

namespace qlift {

/// Two-level atom coupled to a bosonic bath: Rabi frequency, decay rate, and
/// mean thermal occupation of the bath at the transition frequency.
struct QubitParams {
    double rabi = 0.0;
    double gamma = 0.0;
    double nbar = 0.0;
};

inline void validate_params(const QubitParams& p) {
    if (!(p.gamma >= 0.0) || !std::isfinite(p.gamma)) {
        throw DomainError("QubitParams.gamma: must be nonnegative");
    }
    if (!(p.nbar >= 0.0) || !std::isfinite(p.nbar)) {
        throw DomainError("QubitParams.nbar: must be nonnegative");
    }
    if (!std::isfinite(p.rabi)) {
        throw DomainError("QubitParams.rabi: must be finite");
    }
}

/// Mean occupation of a bosonic mode at frequency omega and temperature T
/// (natural units, k_B = 1): 1/(exp(omega/T) - 1).
inline double bose_occupation(double omega, double temperature) {
    if (!(omega > 0.0) || !std::isfinite(omega)) {
        throw DomainError("bose_occupation: omega must be positive");
    }
    if (!(temperature > 0.0) || !std::isfinite(temperature)) {
        throw DomainError("bose_occupation: temperature must be positive");
    }
    return 1.0 / std::expm1(omega / temperature);
}

/// Standard Lindblad data for the thermal qubit: h0 = (rabi/2) sigma_z,
/// damping channel (sigma_-, gamma(nbar+1)) and pumping channel
/// (sigma_+, gamma nbar). nbar = 0 recovers the vacuum-bath model.
inline StandardForm qubit_standard_form(const QubitParams& p) {
    validate_params(p);
    StandardForm sf;
    sf.h0 = 0.5 * p.rabi * sigma_z();
    sf.lowering.push_back({sigma_minus(), p.gamma * (p.nbar + 1.0)});
    sf.raising.push_back({sigma_plus(), p.gamma * p.nbar});
    return sf;
}

/// The thermal-qubit effective Hamiltonian splits as H0 + i gamma J with
/// [H0, J] = 0, which is what makes the closed-form propagator possible.
/// Basis order |ee>, |eg>, |ge>, |gg> (system label first).
inline std::pair<Matrix, Matrix> finite_T_split(const QubitParams& p) {
    validate_params(p);
    const Matrix id2 = Matrix::Identity(2, 2);
    const Matrix id4 = Matrix::Identity(4, 4);

    Matrix h0 = 0.5 * p.rabi * (tensor_product(sigma_z(), id2) - tensor_product(id2, sigma_z()));
    h0 -= kImag * p.gamma * (p.nbar + 0.5) * id4;

    Matrix j = p.nbar * tensor_product(sigma_plus(), sigma_plus()) +
               (p.nbar + 1.0) * tensor_product(sigma_minus(), sigma_minus()) -
               0.25 * (tensor_product(sigma_z(), id2) + tensor_product(id2, sigma_z()));
    return {h0, j};
}

/// H~ = H0 + i gamma J on the doubled two-level space. The constant
/// -i gamma nbar term is part of the generator; dropping it would break
/// trace preservation. Identical to build_effective_hamiltonian applied to
/// from_standard_form(qubit_standard_form(p)).
inline Matrix finite_T_effective_hamiltonian(const QubitParams& p) {
    auto [h0, j] = finite_T_split(p);
    return h0 + kImag * p.gamma * j;
}

/// Closed-form exp(-i H~ t), basis |ee>, |eg>, |ge>, |gg>. Evaluated from
/// the commuting split exp(-i H0 t) exp(gamma J t): the populations mix
/// through a 2x2 corner block carrying the 1/(2 nbar + 1) weight, while the
/// coherence slots pick up plain damped phases with no such weight.
inline Matrix finite_T_propagator(const QubitParams& p, double t) {
    validate_params(p);
    if (!std::isfinite(t)) {
        throw DomainError("finite_T_propagator: time must be finite");
    }
    const double two_n1 = 2.0 * p.nbar + 1.0;
    const double decay = std::exp(-two_n1 * p.gamma * t);
    const double damp = std::exp(-(p.nbar + 0.5) * p.gamma * t);
    const Complex phase = std::exp(-kImag * p.rabi * t);

    Matrix prop = Matrix::Zero(4, 4);
    prop(0, 0) = (p.nbar + (p.nbar + 1.0) * decay) / two_n1;
    prop(0, 3) = p.nbar * (1.0 - decay) / two_n1;
    prop(3, 0) = (p.nbar + 1.0) * (1.0 - decay) / two_n1;
    prop(3, 3) = (p.nbar + 1.0 + p.nbar * decay) / two_n1;
    prop(1, 1) = damp * phase;
    prop(2, 2) = damp * std::conj(phase);
    return prop;
}

/// Evolve a 2x2 density matrix with the closed-form propagator: lift,
/// apply, read back.
inline Matrix evolve_qubit(const Matrix& rho0, const QubitParams& p, double t) {
    if (rho0.rows() != 2 || rho0.cols() != 2) {
        throw DimensionError("evolve_qubit: expected a 2x2 density matrix");
    }
    const Matrix prop = finite_T_propagator(p, t);
    return devectorize(Vector(prop * vectorize(rho0).amplitudes));
}

}  // namespace qlift
