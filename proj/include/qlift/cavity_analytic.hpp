#pragma once

#include <cmath>
#include <vector>

#include "qlift/core.hpp"
#include "qlift/master_equation.hpp"
#include "qlift/matrix_exponential.hpp"
#include "qlift/operator_algebra.hpp"

namespace qlift {

/// Damped single-mode cavity at zero temperature, truncated to Fock states
/// |0..n_max>.
struct CavityParams {
    double omega_f = 0.0;
    double kappa = 0.0;
    int n_max = 1;
};

inline void validate_params(const CavityParams& p) {
    if (!(p.kappa >= 0.0) || !std::isfinite(p.kappa)) {
        throw DomainError("CavityParams.kappa: must be nonnegative");
    }
    if (p.n_max < 1) {
        throw DomainError("CavityParams.n_max: must be at least 1");
    }
    if (!std::isfinite(p.omega_f)) {
        throw DomainError("CavityParams.omega_f: must be finite");
    }
}

/// Loss weight g_t = 1 - exp(-kappa t), in [0, 1).
inline double g_factor(double kappa, double t) {
    if (t < 0.0 || !std::isfinite(t)) {
        throw DomainError("g_factor: time must be finite and nonnegative");
    }
    return -std::expm1(-kappa * t);
}

/// h0 = omega_f a†a with a single damping channel (a, kappa); the converted
/// drift is (omega_f - i kappa/2) a†a.
inline StandardForm cavity_standard_form(const CavityParams& p) {
    validate_params(p);
    const Index levels = p.n_max + 1;
    StandardForm sf;
    sf.h0 = p.omega_f * number_operator(levels);
    sf.lowering.push_back({annihilation(levels), p.kappa});
    return sf;
}

/// Highest Fock index carrying any entry of magnitude above tol, or -1 for
/// the zero matrix.
inline int max_support_level(const Matrix& rho, double tol) {
    int top = -1;
    for (Index i = 0; i < rho.rows(); ++i) {
        for (Index j = 0; j < rho.cols(); ++j) {
            if (std::abs(rho(i, j)) > tol) {
                top = std::max(top, static_cast<int>(std::max(i, j)));
            }
        }
    }
    return top;
}

/// Levels below this count as safely inside the truncation.
inline int reliable_levels(const CavityParams& p, int buffer) {
    return p.n_max - buffer;
}

namespace detail {

// sqrt((p+m)! (q+m)! / (p! q!)) * g^m / m!, evaluated in log space so the
// factorial ratios stay finite well past n = 20.
inline double fock_coefficient(int p, int q, int m, double g) {
    if (m == 0) return 1.0;
    if (g <= 0.0) return 0.0;
    const double lg = static_cast<double>(m) * std::log(g) - std::lgamma(m + 1.0) +
                      0.5 * (std::lgamma(p + m + 1.0) + std::lgamma(q + m + 1.0) -
                             std::lgamma(p + 1.0) - std::lgamma(q + 1.0));
    return std::exp(lg);
}

}  // namespace detail

/// Closed-form Fock-basis solution of the damped cavity:
///   rho_pq(t) = exp(-i omega_f (p-q) t) exp(-kappa (p+q) t / 2)
///               * sum_m (g_t^m / m!) sqrt((p+m)!(q+m)!/(p!q!)) rho_{p+m,q+m}.
/// Populations flow strictly downward, so the result is exact whenever the
/// initial support fits inside the truncation. A true pointer argument
/// receives a flag when the initial support crowds the truncation edge.
inline Matrix fock_solution(const Matrix& rho0, const CavityParams& p, double t,
                            bool* truncation_warning = nullptr,
                            const Tolerances& tol = default_tolerances()) {
    validate_params(p);
    const Index levels = p.n_max + 1;
    if (rho0.rows() != levels || rho0.cols() != levels) {
        throw DimensionError("fock_solution: state must be " + std::to_string(levels) + "x" +
                             std::to_string(levels) + " for n_max " + std::to_string(p.n_max));
    }
    if (t < 0.0 || !std::isfinite(t)) {
        throw DomainError("fock_solution: time must be finite and nonnegative");
    }
    if (truncation_warning != nullptr) {
        *truncation_warning =
            max_support_level(rho0, tol.kernel) > reliable_levels(p, tol.truncation_buffer);
    }

    const double g = g_factor(p.kappa, t);
    Matrix out(levels, levels);
    for (int pp = 0; pp <= p.n_max; ++pp) {
        for (int qq = 0; qq <= p.n_max; ++qq) {
            Complex sum = 0.0;
            const int m_top = p.n_max - std::max(pp, qq);
            for (int m = 0; m <= m_top; ++m) {
                sum += detail::fock_coefficient(pp, qq, m, g) * rho0(pp + m, qq + m);
            }
            const Complex osc =
                std::exp(Complex(-0.5 * p.kappa * (pp + qq) * t, -p.omega_f * (pp - qq) * t));
            out(pp, qq) = osc * sum;
        }
    }
    return out;
}

/// A thermal state stays thermal under cavity damping; its inverse
/// temperature evolves as
///   beta(t) = beta + kappa t + ln(1 - exp(-beta)(1 - exp(-kappa t))).
inline double thermal_beta(double beta, double kappa, double t) {
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw DomainError("thermal_beta: beta must be positive");
    }
    if (t < 0.0 || !std::isfinite(t)) {
        throw DomainError("thermal_beta: time must be finite and nonnegative");
    }
    const double arg = 1.0 - std::exp(-beta) * g_factor(kappa, t);
    if (!(arg > 0.0)) {
        throw DomainError("thermal_beta: log argument not positive");
    }
    return beta + kappa * t + std::log(arg);
}

/// diag(exp(-beta n)), normalized to unit trace on the truncated space.
inline Matrix thermal_state(double beta, int n_max) {
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw DomainError("thermal_state: beta must be positive");
    }
    const Index levels = n_max + 1;
    Matrix rho = Matrix::Zero(levels, levels);
    double z = 0.0;
    for (Index n = 0; n < levels; ++n) {
        const double w = std::exp(-beta * static_cast<double>(n));
        rho(n, n) = w;
        z += w;
    }
    return rho / z;
}

/// |n><n| on the truncated space.
inline Matrix fock_projector(int n, int n_max) {
    if (n < 0 || n > n_max) {
        throw DomainError("fock_projector: level out of range");
    }
    Matrix rho = Matrix::Zero(n_max + 1, n_max + 1);
    rho(n, n) = 1.0;
    return rho;
}

/// Truncated coherent state |alpha>, renormalized to unit norm.
inline Vector coherent_state(Complex alpha, int n_max) {
    Vector ket(n_max + 1);
    ket(0) = 1.0;
    for (int n = 1; n <= n_max; ++n) {
        ket(n) = ket(n - 1) * alpha / std::sqrt(static_cast<double>(n));
    }
    return ket / ket.norm();
}

/// Kraus decomposition of the damping channel at a fixed time,
///   A_m = sqrt(g_t^m / m!) exp(-(i omega_f + kappa/2) a†a t) a^m.
/// Complete (sum A_m† A_m = I) on levels n <= m_max.
struct KrausFamily {
    std::vector<Matrix> operators;
    double time = 0.0;
    CavityParams params;
};

inline KrausFamily kraus_family(const CavityParams& p, double t, int m_max) {
    validate_params(p);
    if (t < 0.0 || !std::isfinite(t)) {
        throw DomainError("kraus_family: time must be finite and nonnegative");
    }
    if (m_max < 0 || m_max > p.n_max) {
        throw DomainError("kraus_family: m_max must lie in [0, n_max]");
    }
    const Index levels = p.n_max + 1;
    const double g = g_factor(p.kappa, t);

    KrausFamily family;
    family.time = t;
    family.params = p;
    const int m_top = g > 0.0 ? m_max : 0;  // lossless map has the single unitary term
    for (int m = 0; m <= m_top; ++m) {
        Matrix op = Matrix::Zero(levels, levels);
        for (int n = m; n <= p.n_max; ++n) {
            // sqrt(g^m/m!) * sqrt(n!/(n-m)!) * exp(-(i omega + kappa/2)(n-m) t)
            double amp;
            if (m == 0) {
                amp = 1.0;
            } else {
                amp = std::exp(0.5 * (m * std::log(g) - std::lgamma(m + 1.0) +
                                      std::lgamma(n + 1.0) - std::lgamma(n - m + 1.0)));
            }
            op(n - m, n) = amp * std::exp(Complex(-0.5 * p.kappa * (n - m) * t,
                                                  -p.omega_f * (n - m) * t));
        }
        family.operators.push_back(std::move(op));
    }
    return family;
}

/// sum_m A_m rho0 A_m†.
inline Matrix apply_kraus(const KrausFamily& family, const Matrix& rho0) {
    const Index levels = family.params.n_max + 1;
    if (rho0.rows() != levels || rho0.cols() != levels) {
        throw DimensionError("apply_kraus: state dimension does not match family");
    }
    Matrix out = Matrix::Zero(levels, levels);
    for (const auto& op : family.operators) {
        out.noalias() += op * rho0 * op.adjoint();
    }
    return out;
}

/// ||sum A_m† A_m - I|| restricted to levels 0..n_top.
inline double kraus_completeness_defect(const KrausFamily& family, int n_top) {
    const Index levels = family.params.n_max + 1;
    Matrix sum = Matrix::Zero(levels, levels);
    for (const auto& op : family.operators) {
        sum.noalias() += op.adjoint() * op;
    }
    const Index k = std::min<Index>(n_top + 1, levels);
    return (sum.topLeftCorner(k, k) - Matrix::Identity(k, k)).norm();
}

/// Exact environment dilation of the damping channel: one extra mode,
/// initially in vacuum, coupled through a beam-splitter rotation
///   U(t) = exp(-i omega_f t a†a) exp(theta_t (b†a - a†b)),
/// with cos(theta_t) = exp(-kappa t / 2). The rotation conserves total
/// occupation, so it is assembled block-by-block over the total-number
/// sectors; sectors that fit inside the truncation are exactly unitary.
/// The sign of theta_t is fixed so that <m_b| U(t) |0_b> reproduces the
/// Kraus operators entry for entry.
inline Matrix dilation_unitary(const CavityParams& p, double t) {
    validate_params(p);
    if (t < 0.0 || !std::isfinite(t)) {
        throw DomainError("dilation_unitary: time must be finite and nonnegative");
    }
    const int nm = p.n_max;
    const Index levels = nm + 1;
    const Index joint = levels * levels;
    const double theta = std::acos(std::min(1.0, std::exp(-0.5 * p.kappa * t)));

    Matrix u = Matrix::Zero(joint, joint);
    for (int total = 0; total <= 2 * nm; ++total) {
        const int k_lo = std::max(0, total - nm);
        const int k_hi = std::min(total, nm);
        const int size = k_hi - k_lo + 1;
        // Generator of theta (b†a - a†b) restricted to this sector; k is the
        // system occupation, total-k the environment occupation.
        Matrix gen = Matrix::Zero(size, size);
        for (int k = k_lo; k <= k_hi; ++k) {
            const int c = k - k_lo;
            if (k - 1 >= k_lo && total - k + 1 <= nm) {
                gen(c - 1, c) += theta * std::sqrt(static_cast<double>(k) *
                                                   static_cast<double>(total - k + 1));
            }
            if (k + 1 <= k_hi && total - k - 1 >= 0) {
                gen(c + 1, c) -= theta * std::sqrt(static_cast<double>(k + 1) *
                                                   static_cast<double>(total - k));
            }
        }
        const Matrix rot = matrix_exponential(gen);
        for (int k = k_lo; k <= k_hi; ++k) {
            for (int l = k_lo; l <= k_hi; ++l) {
                u(k * levels + (total - k), l * levels + (total - l)) =
                    rot(k - k_lo, l - k_lo);
            }
        }
    }
    // Free rotation of the system mode.
    for (Index k = 0; k < levels; ++k) {
        const Complex phase = std::exp(Complex(0.0, -p.omega_f * t * static_cast<double>(k)));
        u.middleRows(k * levels, levels) *= phase;
    }
    return u;
}

/// Trace out the environment factor of a system ⊗ environment operator
/// (system index major).
inline Matrix partial_trace_env(const Matrix& rho_joint, Index n_sys, Index n_env) {
    require_square(rho_joint, "partial_trace_env");
    if (n_sys < 1 || n_env < 1 || n_sys * n_env != rho_joint.rows()) {
        throw DimensionError("partial_trace_env: dims " + std::to_string(n_sys) + "x" +
                             std::to_string(n_env) + " do not factor a " +
                             std::to_string(rho_joint.rows()) + "-dimensional operator");
    }
    Matrix out = Matrix::Zero(n_sys, n_sys);
    for (Index i = 0; i < n_sys; ++i) {
        for (Index j = 0; j < n_sys; ++j) {
            Complex sum = 0.0;
            for (Index k = 0; k < n_env; ++k) {
                sum += rho_joint(i * n_env + k, j * n_env + k);
            }
            out(i, j) = sum;
        }
    }
    return out;
}

}  // namespace qlift
