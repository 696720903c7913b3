#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "qlift/effective_propagation.hpp"
#include "qlift/matrix_exponential.hpp"
#include "qlift/operator_algebra.hpp"
#include "qlift/qubit_analytic.hpp"

using namespace qlift;

namespace {

std::mt19937_64 rng(90210);

Matrix random_matrix(Index n) {
    std::normal_distribution<double> nd;
    Matrix m(n, n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            m(i, j) = Complex(nd(rng), nd(rng));
        }
    }
    return m;
}

Matrix random_hermitian(Index n) {
    Matrix m = random_matrix(n);
    return 0.5 * (m + Matrix(m.adjoint()));
}

Matrix random_density(Index n) {
    Matrix m = random_matrix(n);
    Matrix rho = m * m.adjoint();
    return rho / rho.trace();
}

MasterEquation random_model(Index n, int channels) {
    StandardForm sf;
    sf.h0 = random_hermitian(n);
    std::uniform_real_distribution<double> rate(0.2, 1.5);
    for (int i = 0; i < channels; ++i) {
        sf.lowering.push_back({random_matrix(n), rate(rng)});
    }
    return from_standard_form(sf);
}

}  // namespace

TEST_CASE("lifted generator for the decaying qubit has the textbook form") {
    const double rabi = 4.0, gamma = 0.8;
    QubitParams p{rabi, gamma, 0.0};
    const MasterEquation m = from_standard_form(qubit_standard_form(p));
    const Matrix built = build_effective_hamiltonian(m).matrix;

    const Matrix i2 = Matrix::Identity(2, 2);
    const Matrix proj_e = sigma_plus() * sigma_minus();
    const Matrix expected = 0.5 * rabi * (tensor_product(sigma_z(), i2) - tensor_product(i2, sigma_z())) -
                            0.5 * kImag * gamma *
                                (tensor_product(proj_e, i2) + tensor_product(i2, proj_e)) +
                            kImag * gamma * tensor_product(sigma_minus(), sigma_minus());
    REQUIRE((built - expected).norm() <= 1e-14);
}

TEST_CASE("lifted generator for the damped mode has the textbook form") {
    const double omega = 2.0, kappa = 0.6;
    const Index levels = 6;
    StandardForm sf;
    sf.h0 = omega * number_operator(levels);
    sf.lowering.push_back({annihilation(levels), kappa});
    const Matrix built = build_effective_hamiltonian(from_standard_form(sf)).matrix;

    const Matrix id = Matrix::Identity(levels, levels);
    const Matrix n_op = number_operator(levels);
    const Matrix a = annihilation(levels);
    const Matrix expected = Complex(omega, -0.5 * kappa) * tensor_product(n_op, id) -
                            Complex(omega, 0.5 * kappa) * tensor_product(id, n_op) +
                            kImag * kappa * tensor_product(a, a);
    REQUIRE((built - expected).norm() <= 1e-14);
}

TEST_CASE("defining property: the lifted generator reproduces the master equation") {
    const MasterEquation m = random_model(3, 2);
    const Matrix h_eff = build_effective_hamiltonian(m).matrix;
    for (int trial = 0; trial < 100; ++trial) {
        const Matrix rho = random_hermitian(3);
        const Vector lhs = -kImag * (h_eff * vectorize(rho).amplitudes);
        const Vector expected = vectorize(rhs(m, rho)).amplitudes;
        REQUIRE((lhs - expected).norm() <= 1e-12 * std::max(1.0, expected.norm()));
    }
}

TEST_CASE("swapping system and ancilla conjugates the generator to its negative") {
    for (Index n : {2, 3, 4}) {
        const MasterEquation m = random_model(n, 2);
        const Matrix h_eff = build_effective_hamiltonian(m).matrix;
        const Matrix s = swap_system_ancilla(n);
        REQUIRE((s * h_eff.conjugate() * s + h_eff).norm() <= 1e-13 * h_eff.norm());
    }
}

TEST_CASE("closed systems propagate by unitary conjugation") {
    MasterEquation m;
    m.drift = random_hermitian(3);
    const Matrix h_eff = build_effective_hamiltonian(m).matrix;
    const Matrix id = Matrix::Identity(3, 3);
    REQUIRE((h_eff - tensor_product(m.drift, id) + tensor_product(id, m.drift.conjugate())).norm() <=
            1e-14);

    const Matrix rho0 = random_density(3);
    const double t = 0.8;
    const Matrix u = matrix_exponential(-kImag * t * m.drift);
    const Matrix direct = u * rho0 * u.adjoint();
    REQUIRE((propagate(m, rho0, t) - direct).norm() <= 1e-12);
}

TEST_CASE("propagation at t = 0 returns the initial state") {
    const MasterEquation m = random_model(3, 1);
    const Matrix rho0 = random_density(3);
    REQUIRE((propagate(m, rho0, 0.0) - rho0).norm() <= 1e-14);
    REQUIRE((propagator_matrix(m, 0.0) - Matrix::Identity(9, 9)).norm() == 0.0);
}

TEST_CASE("decaying qubit populations follow the exponential law") {
    QubitParams p{5.0, 1.0, 0.0};
    const MasterEquation m = from_standard_form(qubit_standard_form(p));
    Matrix excited = Matrix::Zero(2, 2);
    excited(0, 0) = 1.0;
    for (double t : {0.3, 1.0, 2.5}) {
        const Matrix r = propagate(m, excited, t);
        REQUIRE(std::abs(r(0, 0).real() - std::exp(-t)) <= 1e-12);
        REQUIRE(std::abs(r(1, 1).real() - (1.0 - std::exp(-t))) <= 1e-12);
        REQUIRE(std::abs(r(0, 1)) <= 1e-13);
        REQUIRE(std::abs(r(1, 0)) <= 1e-13);
    }
}

TEST_CASE("lifted propagation agrees with direct integration") {
    const MasterEquation m = random_model(3, 2);
    const Matrix rho0 = random_density(3);
    const Matrix lifted = propagate(m, rho0, 0.7);
    const Matrix direct = rk4_evolve(m, rho0, 0.7, 4000);
    REQUIRE((lifted - direct).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("propagator semigroup composes") {
    const MasterEquation m = random_model(3, 1);
    const Matrix p1 = propagator_matrix(m, 0.4);
    const Matrix p2 = propagator_matrix(m, 0.9);
    const Matrix whole = propagator_matrix(m, 1.3);
    REQUIRE((whole - p2 * p1).norm() <= 1e-10 * whole.norm());
}

TEST_CASE("finite-temperature propagator matrix matches the closed form") {
    QubitParams p{3.0, 1.0, 0.7};
    const MasterEquation m = from_standard_form(qubit_standard_form(p));
    for (double t : {0.2, 1.0, 3.0}) {
        const Matrix generic = propagator_matrix(m, t);
        const Matrix closed = finite_T_propagator(p, t);
        REQUIRE((generic - closed).cwiseAbs().maxCoeff() <= 1e-10);
    }
}

TEST_CASE("trace and Hermiticity survive propagation") {
    const MasterEquation m = random_model(4, 2);
    const Matrix rho0 = random_density(4);
    for (double t : {0.1, 1.0, 10.0}) {
        const Matrix r = propagate(m, rho0, t);
        REQUIRE(std::abs(r.trace() - Complex(1.0, 0.0)) <= 1e-10);
        REQUIRE(hermiticity_defect(r) <= 1e-10);
    }
}

TEST_CASE("positivity holds for valid initial states") {
    const MasterEquation m = random_model(3, 2);
    const Matrix rho0 = random_density(3);
    const Matrix r = propagate(m, rho0, 1.5);
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (r + r.adjoint()), Eigen::EigenvaluesOnly);
    REQUIRE(es.eigenvalues().minCoeff() >= -1e-8);
}

TEST_CASE("non-Hermitian seeds are tolerated because the map is linear") {
    const MasterEquation m = random_model(3, 1);
    const Matrix seed = random_matrix(3);  // not a state at all
    const Matrix out = propagate(m, seed, 0.5);
    REQUIRE(out.allFinite());
    // linearity: the propagation of parts sums to the propagation of the whole
    const Matrix herm = 0.5 * (seed + Matrix(seed.adjoint()));
    const Matrix skew = seed - herm;
    const Matrix split = propagate(m, herm, 0.5) + propagate(m, skew, 0.5);
    REQUIRE((out - split).norm() <= 1e-12 * std::max(1.0, out.norm()));
}

TEST_CASE("oversized systems are rejected before allocating the lifted space") {
    MasterEquation m;
    m.drift = Matrix::Identity(65, 65);
    REQUIRE_THROWS_AS(build_effective_hamiltonian(m), DimensionError);
    REQUIRE_THROWS_AS(propagate(m, Matrix::Identity(65, 65) / 65.0, 1.0), DimensionError);
}
