#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qlift/core.hpp"

namespace qlift {

/// One dissipation channel: jump operator L with nonnegative coupling rate.
struct JumpChannel {
    Matrix op;
    double rate = 0.0;
};

/// Master equation in general form,
///   i drho/dt = H rho - rho H† + i sum_a gamma_a L_a rho L_a†,
/// with a generally non-Hermitian drift H. Immutable after construction by
/// convention; all solvers treat it as read-only.
struct MasterEquation {
    Matrix drift;
    std::vector<JumpChannel> channels;
    // Set only by from_standard_form, never inferred from floating-point
    // tests. When set, H - H† = -i sum_a gamma_a L_a† L_a holds by
    // construction and the evolution preserves the trace.
    bool trace_preserving = false;
    std::vector<std::string> diagnostics;

    Index dim() const { return drift.rows(); }
};

/// Standard Lindblad data: Hermitian h0 plus damping (rate K) and pumping
/// (rate G) channels.
struct StandardForm {
    Matrix h0;
    std::vector<JumpChannel> lowering;  // (X-, K)
    std::vector<JumpChannel> raising;   // (X+, G)
};

inline void validate_model(const MasterEquation& model) {
    require_square(model.drift, "MasterEquation.drift");
    require_finite(model.drift, "MasterEquation.drift");
    for (std::size_t i = 0; i < model.channels.size(); ++i) {
        const auto& ch = model.channels[i];
        if (ch.op.rows() != model.dim() || ch.op.cols() != model.dim()) {
            throw DimensionError("channels[" + std::to_string(i) + "].operator: expected " +
                                 std::to_string(model.dim()) + "x" + std::to_string(model.dim()));
        }
        if (!(ch.rate >= 0.0) || !std::isfinite(ch.rate)) {
            throw DomainError("channels[" + std::to_string(i) + "].rate: must be nonnegative");
        }
        require_finite(ch.op, "JumpChannel.op");
    }
}

/// Largest singular value.
inline double spectral_norm(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Matrix> es(m.adjoint() * m);
    return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

/// Upper bound on the operator norm of the time-evolution generator,
/// ||drho/dt||_F <= bound * ||rho||_F. Used by the fixed-step guard.
inline double generator_norm_bound(const MasterEquation& model) {
    double bound = 2.0 * spectral_norm(model.drift);
    for (const auto& ch : model.channels) {
        const double s = spectral_norm(ch.op);
        bound += ch.rate * s * s;
    }
    return bound;
}

namespace detail {

// Residual of [h0, X] = lambda X over the best lambda (Frobenius
// projection), relative to ||X||. Zero when X is an eigenoperator of h0.
inline double eigenoperator_residual(const Matrix& h0, const Matrix& x) {
    const double xnorm2 = x.squaredNorm();
    if (xnorm2 == 0.0) return 0.0;
    const Matrix comm = h0 * x - x * h0;
    const Complex lambda = (x.conjugate().cwiseProduct(comm)).sum() / xnorm2;
    return (comm - lambda * x).norm() / std::sqrt(xnorm2);
}

}  // namespace detail

/// Convert standard Lindblad data to the general form:
///   H = h0 - (i/2) sum_a gamma_a L_a† L_a,  channels carried over as-is.
/// The two forms generate identical dynamics; the anti-Hermitian part of H
/// encodes exactly the channel back-action, so the result is flagged
/// trace-preserving. Channels whose operators are not eigenoperators of h0
/// are admitted (the conversion is algebraic) but noted in diagnostics.
inline MasterEquation from_standard_form(const StandardForm& sf,
                                         const Tolerances& tol = default_tolerances()) {
    require_square(sf.h0, "StandardForm.h0");
    require_finite(sf.h0, "StandardForm.h0");
    if (hermiticity_defect(sf.h0) > tol.kernel * std::max(1.0, sf.h0.norm())) {
        throw DomainError("StandardForm.h0: not Hermitian");
    }

    MasterEquation model;
    model.drift = sf.h0;
    model.trace_preserving = true;

    auto absorb = [&](const std::vector<JumpChannel>& list, const char* kind) {
        for (std::size_t i = 0; i < list.size(); ++i) {
            const auto& ch = list[i];
            if (ch.op.rows() != sf.h0.rows() || ch.op.cols() != sf.h0.cols()) {
                throw DimensionError(std::string(kind) + "[" + std::to_string(i) +
                                     "]: operator dimension mismatch");
            }
            if (!(ch.rate >= 0.0) || !std::isfinite(ch.rate)) {
                throw DomainError(std::string(kind) + "[" + std::to_string(i) +
                                  "].rate: must be nonnegative");
            }
            if (ch.rate == 0.0) continue;  // inert channel, keep the model lean
            model.drift -= Complex(0.0, 0.5) * ch.rate * (ch.op.adjoint() * ch.op);
            model.channels.push_back(ch);
            const double resid = detail::eigenoperator_residual(sf.h0, ch.op);
            if (resid > tol.eigenoperator_warn) {
                model.diagnostics.push_back(
                    std::string(kind) + "[" + std::to_string(i) +
                    "]: operator is not an eigenoperator of h0 (residual " +
                    std::to_string(resid) + "); conversion is still exact");
            }
        }
    };
    absorb(sf.lowering, "lowering");
    absorb(sf.raising, "raising");
    return model;
}

/// Right-hand side of the general-form master equation,
///   drho/dt = -i(H rho - rho H†) + sum_a gamma_a L_a rho L_a†.
inline Matrix rhs(const MasterEquation& model, const Matrix& rho) {
    if (rho.rows() != model.dim() || rho.cols() != model.dim()) {
        throw DimensionError("rhs: state dimension does not match model");
    }
    Matrix out = -kImag * (model.drift * rho - rho * model.drift.adjoint());
    for (const auto& ch : model.channels) {
        out.noalias() += ch.rate * (ch.op * rho * ch.op.adjoint());
    }
    return out;
}

/// Classical fixed-step RK4 integration of the master equation, used as an
/// oracle path that never touches the lifted-space machinery. Guarded:
/// requires step * generator_norm_bound <= 0.1.
inline Matrix rk4_evolve(const MasterEquation& model, const Matrix& rho0, double t, long steps) {
    validate_model(model);
    if (rho0.rows() != model.dim() || rho0.cols() != model.dim()) {
        throw DimensionError("rk4_evolve: state dimension does not match model");
    }
    if (t < 0.0 || !std::isfinite(t)) {
        throw DomainError("rk4_evolve: time must be finite and nonnegative");
    }
    if (steps < 1) {
        throw DomainError("rk4_evolve: steps must be positive");
    }
    if (t == 0.0) {
        return rho0;
    }
    const double h = t / static_cast<double>(steps);
    const double bound = generator_norm_bound(model);
    if (h * bound > 0.1) {
        throw StepSizeError("rk4_evolve: step " + std::to_string(h) +
                            " too large for generator norm bound " + std::to_string(bound) +
                            " (need step*bound <= 0.1)");
    }

    // Cache adjoints out of the stage loop.
    const Matrix drift_adj = model.drift.adjoint();
    std::vector<Matrix> op_adj;
    op_adj.reserve(model.channels.size());
    for (const auto& ch : model.channels) {
        op_adj.push_back(ch.op.adjoint());
    }
    auto deriv = [&](const Matrix& r) {
        Matrix out = -kImag * (model.drift * r - r * drift_adj);
        for (std::size_t a = 0; a < model.channels.size(); ++a) {
            out.noalias() += model.channels[a].rate * (model.channels[a].op * r * op_adj[a]);
        }
        return out;
    };

    Matrix rho = rho0;
    for (long s = 0; s < steps; ++s) {
        const Matrix k1 = deriv(rho);
        const Matrix k2 = deriv(rho + (0.5 * h) * k1);
        const Matrix k3 = deriv(rho + (0.5 * h) * k2);
        const Matrix k4 = deriv(rho + h * k3);
        rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return rho;
}

}  // namespace qlift
