#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "qlift/operator_algebra.hpp"

using namespace qlift;

namespace {

std::mt19937_64 rng(20240817);

Matrix random_matrix(Index rows, Index cols) {
    std::normal_distribution<double> nd;
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        for (Index j = 0; j < cols; ++j) {
            m(i, j) = Complex(nd(rng), nd(rng));
        }
    }
    return m;
}

Matrix random_hermitian(Index n) {
    Matrix m = random_matrix(n, n);
    return 0.5 * (m + Matrix(m.adjoint()));
}

}  // namespace

TEST_CASE("tensor product of identities") {
    const Matrix i2 = Matrix::Identity(2, 2);
    REQUIRE((tensor_product(i2, i2) - Matrix::Identity(4, 4)).norm() == 0.0);
}

TEST_CASE("tensor product puts the left factor on the major index") {
    const Matrix out = tensor_product(sigma_z(), Matrix::Identity(2, 2));
    Matrix expected = Matrix::Zero(4, 4);
    expected(0, 0) = 1.0;
    expected(1, 1) = 1.0;
    expected(2, 2) = -1.0;
    expected(3, 3) = -1.0;
    REQUIRE((out - expected).norm() == 0.0);
}

TEST_CASE("tensor product block structure for rectangular-rank sizes") {
    const Matrix a = random_matrix(2, 2);
    const Matrix b = random_matrix(3, 3);
    const Matrix out = tensor_product(a, b);
    REQUIRE(out.rows() == 6);
    REQUIRE(out.cols() == 6);
    for (Index i = 0; i < 2; ++i) {
        for (Index j = 0; j < 2; ++j) {
            REQUIRE((out.block(3 * i, 3 * j, 3, 3) - a(i, j) * b).norm() == 0.0);
        }
    }
}

TEST_CASE("tensor product mixed-product identity") {
    const Matrix a = random_matrix(2, 2);
    const Matrix b = random_matrix(3, 3);
    const Matrix c = random_matrix(2, 2);
    const Matrix d = random_matrix(3, 3);
    const Matrix lhs = tensor_product(a, b) * tensor_product(c, d);
    const Matrix rhs = tensor_product(a * c, b * d);
    REQUIRE((lhs - rhs).norm() <= 1e-13 * rhs.norm());
}

TEST_CASE("entrywise conjugate fixes real matrices") {
    Matrix m(2, 2);
    m << 1.0, -2.0, 3.5, 0.25;
    REQUIRE((entrywise_conjugate(m) - m).norm() == 0.0);
    REQUIRE((entrywise_conjugate(sigma_minus()) - sigma_minus()).norm() == 0.0);
}

TEST_CASE("entrywise conjugate negates pure-imaginary entries") {
    REQUIRE((entrywise_conjugate(sigma_y()) + sigma_y()).norm() == 0.0);
    const Matrix m = kImag * Matrix::Ones(3, 3);
    REQUIRE((entrywise_conjugate(m) + m).norm() == 0.0);
}

TEST_CASE("entrywise conjugate requires square input") {
    REQUIRE_THROWS_AS(entrywise_conjugate(random_matrix(2, 3)), DimensionError);
}

TEST_CASE("vectorize lays rows out contiguously") {
    Matrix rho = Matrix::Zero(2, 2);
    rho(0, 0) = 1.0;
    const LiftedState psi = vectorize(rho);
    REQUIRE(psi.dim == 2);
    REQUIRE(psi.amplitudes(0) == Complex(1.0, 0.0));
    REQUIRE(psi.amplitudes.tail(3).norm() == 0.0);

    const LiftedState mixed = vectorize(0.5 * Matrix::Identity(2, 2));
    REQUIRE(mixed.amplitudes(0) == Complex(0.5, 0.0));
    REQUIRE(mixed.amplitudes(3) == Complex(0.5, 0.0));
    REQUIRE(mixed.amplitudes(1) == Complex(0.0, 0.0));
    REQUIRE(mixed.norm_squared() == Catch::Approx(0.5).margin(1e-15));
}

TEST_CASE("lifted norm equals purity") {
    for (Index n : {2, 3, 5}) {
        Matrix rho = random_hermitian(n);
        rho /= rho.trace().real();
        const double purity = (rho * rho).trace().real();
        REQUIRE(std::abs(vectorize(rho).norm_squared() - purity) <= 1e-14 * std::abs(purity));
    }
}

TEST_CASE("devectorize inverts vectorize exactly") {
    for (Index n : {1, 2, 3, 7}) {
        const Matrix rho = random_matrix(n, n);
        REQUIRE((devectorize(vectorize(rho)) - rho).norm() == 0.0);
    }
    Vector v(4);
    v << 1.0, 0.0, 0.0, 0.0;
    Matrix expected = Matrix::Zero(2, 2);
    expected(0, 0) = 1.0;
    REQUIRE((devectorize(v) - expected).norm() == 0.0);
}

TEST_CASE("devectorize rejects non-square lengths") {
    Vector v(5);
    v.setZero();
    REQUIRE_THROWS_AS(devectorize(v), DimensionError);
}

TEST_CASE("vectorization intertwines two-sided multiplication") {
    for (Index n : {2, 3, 4}) {
        const Matrix a = random_matrix(n, n);
        const Matrix b = random_matrix(n, n);
        const Matrix rho = random_matrix(n, n);
        const Vector lhs = vectorize(a * rho * b).amplitudes;
        const Vector rhs = tensor_product(a, b.transpose()) * vectorize(rho).amplitudes;
        REQUIRE((lhs - rhs).norm() <= 1e-13 * rhs.norm());
    }
}

TEST_CASE("swap permutation is an involution and transposes states") {
    for (Index n : {2, 3, 5}) {
        const Matrix s = swap_system_ancilla(n);
        REQUIRE((s * s - Matrix::Identity(n * n, n * n)).norm() == 0.0);
        const Matrix rho = random_matrix(n, n);
        const Vector swapped = s * vectorize(rho).amplitudes;
        REQUIRE((swapped - vectorize(rho.transpose()).amplitudes).norm() == 0.0);
    }
}

TEST_CASE("pauli and mode operators have the expected matrix elements") {
    REQUIRE(sigma_minus()(1, 0) == Complex(1.0, 0.0));
    REQUIRE(sigma_plus()(0, 1) == Complex(1.0, 0.0));
    REQUIRE((sigma_plus() - Matrix(sigma_minus().adjoint())).norm() == 0.0);
    REQUIRE((sigma_x() - (sigma_plus() + sigma_minus())).norm() == 0.0);
    REQUIRE(sigma_z()(0, 0) == Complex(1.0, 0.0));

    const Matrix a = annihilation(5);
    REQUIRE(a(0, 1) == Complex(1.0, 0.0));
    REQUIRE(a(2, 3) == Complex(std::sqrt(3.0), 0.0));
    REQUIRE((Matrix(a.adjoint() * a) - number_operator(5)).norm() <= 1e-15);
    const Matrix comm = a * a.adjoint() - a.adjoint() * a;
    // truncated commutator is identity except the top corner; sqrt(n)*sqrt(n)
    // carries an ulp of roundoff
    REQUIRE((comm.topLeftCorner(4, 4) - Matrix::Identity(4, 4)).norm() <= 1e-14);
    REQUIRE(comm(4, 4) == Complex(-4.0, 0.0));
}
