#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qlift {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Index = Eigen::Index;

inline constexpr Complex kImag{0.0, 1.0};

/// Central tolerance configuration. Kernel-level identities (exact linear
/// algebra) are held to `kernel`; physics-level properties (positivity,
/// closures, cross-method agreement) to `physics`.
struct Tolerances {
    double kernel = 1e-12;
    double physics = 1e-8;
    double hermiticity_warn = 1e-10;
    double eigenoperator_warn = 1e-8;
    double trace_flag = 1e-10;
    int truncation_buffer = 8;
};

inline const Tolerances& default_tolerances() {
    static const Tolerances tol{};
    return tol;
}

/// Shape or index contract violation.
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Scalar parameter outside its admissible range.
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A computation left the representable range (overflow to Inf/NaN).
struct NumericalRangeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Fixed-step integrator invoked with a step too large for its target.
struct StepSizeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

inline void require_square(const Matrix& m, const char* what) {
    if (m.rows() != m.cols()) {
        throw DimensionError(std::string(what) + ": expected a square matrix, got " +
                             std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    }
}

inline void require_finite(const Matrix& m, const char* what) {
    if (!m.allFinite()) {
        throw NumericalRangeError(std::string(what) + ": matrix has non-finite entries");
    }
}

/// ‖M − M†‖_F, zero iff M is Hermitian.
inline double hermiticity_defect(const Matrix& m) {
    return (m - m.adjoint()).norm();
}

inline bool is_hermitian(const Matrix& m, double tol) {
    return m.rows() == m.cols() && hermiticity_defect(m) <= tol;
}

}  // namespace qlift
