#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "uforge/linalg.hpp"

using namespace uforge;

namespace {

Matrix pauli_x() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

Matrix pauli_z() {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

}  // namespace

TEST_CASE("HermitianOperator validates its invariants") {
    CHECK_NOTHROW(HermitianOperator(pauli_x()));
    CHECK_NOTHROW(HermitianOperator(pauli_z(), /*traceless=*/true));

    Matrix bad = pauli_x();
    bad(0, 1) += Complex(0.0, 1e-6);
    CHECK_THROWS_AS((HermitianOperator(bad)), InvalidOperandError);

    Matrix traced = Matrix::Identity(2, 2);
    CHECK_THROWS_AS(HermitianOperator(traced, /*traceless=*/true), InvalidOperandError);

    // Pauli Z has trace norm 2; Z/2 has trace norm 1.
    CHECK_THROWS_AS(HermitianOperator(pauli_z(), true, true), InvalidOperandError);
    CHECK_NOTHROW(HermitianOperator(pauli_z() / 2.0, true, true));
}

TEST_CASE("UnitaryOperator validates unitarity and determinant") {
    CHECK_NOTHROW(UnitaryOperator(Matrix::Identity(3, 3)));
    CHECK_THROWS_AS(UnitaryOperator(2.0 * Matrix::Identity(3, 3)), InvalidOperandError);
    Matrix near = Matrix::Identity(2, 2);
    near(0, 0) += 1e-5;
    CHECK_THROWS_AS((UnitaryOperator(near)), InvalidOperandError);
}

TEST_CASE("mat_exp at t = 0 is the identity") {
    std::mt19937_64 rng(1);
    const HermitianOperator h(oracle::random_hermitian(4, rng));
    const UnitaryOperator u = mat_exp(h, 0.0);
    CHECK((u.entries() - Matrix::Identity(4, 4)).norm() == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("mat_exp of Pauli Z over a full period returns to the identity") {
    const UnitaryOperator u = mat_exp(HermitianOperator(pauli_z(), true), 2.0 * std::acos(-1.0));
    CHECK((u.entries() - Matrix::Identity(2, 2)).norm() < 1e-12);
}

TEST_CASE("mat_exp of Pauli X at pi/2 gives -iX") {
    const double t = std::acos(-1.0) / 2.0;
    const UnitaryOperator u = mat_exp(HermitianOperator(pauli_x(), true), t);
    // cos(pi/2) I - i sin(pi/2) X = -i X for the involutory Pauli X.
    const Matrix expected = Complex(0.0, -1.0) * pauli_x();
    CHECK((u.entries() - expected).norm() < 1e-12);
    // Independent series oracle.
    CHECK((u.entries() - oracle::matexp_taylor(pauli_x(), t)).norm() < 1e-12);
}

TEST_CASE("mat_exp agrees with the series oracle on random inputs") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> time(-3.0, 3.0);
    for (int i = 0; i < 25; ++i) {
        const int d = 2 + static_cast<int>(i % 4);
        const Matrix h = oracle::random_hermitian(d, rng) / d;
        const double t = time(rng);
        const Matrix u = mat_exp(HermitianOperator(h), t).entries();
        CHECK((u - oracle::matexp_taylor(h, t)).norm() < 1e-12);
    }
}

TEST_CASE("mat_exp inverse and composition properties") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> time(-std::acos(-1.0), std::acos(-1.0));
    for (int i = 0; i < 30; ++i) {
        const int d = 2 + static_cast<int>(i % 3);
        const HermitianOperator h(oracle::random_hermitian(d, rng) / d);
        const double s = time(rng);
        const double t = time(rng);
        const Matrix us = mat_exp(h, s).entries();
        const Matrix ut = mat_exp(h, t).entries();
        const Matrix u_minus = mat_exp(h, -t).entries();
        CHECK((ut * u_minus - Matrix::Identity(d, d)).norm() < 1e-10);
        CHECK((mat_exp(h, s + t).entries() - us * ut).norm() < 1e-10);
    }
}

TEST_CASE("su basis is orthonormal and su_vectorize hits coordinate axes") {
    for (int d = 2; d <= 4; ++d) {
        const int n = d * d - 1;
        for (int j = 0; j < n; ++j) {
            const Matrix bj = su_basis_matrix(d, j);
            for (int k = j; k < n; ++k) {
                const Complex ip = (bj.adjoint() * su_basis_matrix(d, k)).trace();
                CHECK(std::abs(ip - Complex(j == k ? 1.0 : 0.0, 0.0)) < 1e-14);
            }
            const SuVector v = su_vectorize(Complex(0.0, 1.0) * bj);
            for (int k = 0; k < n; ++k) {
                CHECK(v.coords[k] == doctest::Approx(j == k ? 1.0 : 0.0).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("su_vectorize of zero is the zero vector") {
    const SuVector v = su_vectorize(Matrix::Zero(3, 3));
    CHECK(v.coords.norm() == 0.0);
}

TEST_CASE("su_vectorize preserves norms and is linear") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> coeff(-2.0, 2.0);
    for (int i = 0; i < 100; ++i) {
        const int d = 2 + static_cast<int>(i % 5);
        const Matrix x = Complex(0.0, 1.0) * project_traceless(oracle::random_hermitian(d, rng));
        const Matrix y = Complex(0.0, 1.0) * project_traceless(oracle::random_hermitian(d, rng));
        CHECK(su_vectorize(x).coords.norm() == doctest::Approx(x.norm()).epsilon(1e-12));
        const double a = coeff(rng);
        const double b = coeff(rng);
        const RealVector lhs = su_vectorize(a * x + b * y).coords;
        const RealVector rhs = a * su_vectorize(x).coords + b * su_vectorize(y).coords;
        CHECK((lhs - rhs).norm() < 1e-12 * (1.0 + rhs.norm()));
    }
}

TEST_CASE("su_vectorize round-trips through su_devectorize") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 20; ++i) {
        const int d = 2 + static_cast<int>(i % 6);
        const Matrix x = Complex(0.0, 1.0) * project_traceless(oracle::random_hermitian(d, rng));
        CHECK((su_devectorize(su_vectorize(x)) - x).norm() < 1e-12 * (1.0 + x.norm()));
    }
}

TEST_CASE("su_vectorize rejects invalid operands") {
    CHECK_THROWS_AS(su_vectorize(pauli_x()), InvalidOperandError);  // Hermitian, not anti
    const Matrix traceful = Complex(0.0, 1.0) * Matrix::Identity(2, 2);
    CHECK_THROWS_AS(su_vectorize(traceful), InvalidOperandError);
}

TEST_CASE("numerical_rank on degenerate and basis inputs") {
    std::mt19937_64 rng(9);
    const Matrix x = Complex(0.0, 1.0) * project_traceless(oracle::random_hermitian(3, rng));
    const SuVector v = su_vectorize(x);
    CHECK(numerical_rank({v, v, v}, 1e-8) == 1);

    std::vector<SuVector> basis;
    for (int k = 0; k < 3; ++k) {
        basis.push_back(su_vectorize(Complex(0.0, 1.0) * su_basis_matrix(2, k)));
    }
    CHECK(numerical_rank(basis, 1e-8) == 3);

    CHECK_THROWS_AS(numerical_rank({}, 1e-8), InvalidOperandError);
}

TEST_CASE("numerical_rank saturates at the ambient dimension") {
    std::mt19937_64 rng(13);
    for (int d : {2, 3}) {
        std::vector<SuVector> vecs;
        std::vector<Eigen::VectorXd> rows;
        for (int i = 0; i < d * d; ++i) {  // d^2-1 + 1 vectors
            const Matrix x =
                Complex(0.0, 1.0) * project_traceless(oracle::random_hermitian(d, rng));
            vecs.push_back(su_vectorize(x));
            rows.push_back(vecs.back().coords);
        }
        CHECK(numerical_rank(vecs, 1e-8) == d * d - 1);
        CHECK(oracle::gram_rank(rows, 1e-8) == d * d - 1);
    }
}

TEST_CASE("numerical_rank ignores row order and row scale") {
    std::mt19937_64 rng(17);
    std::vector<SuVector> vecs;
    for (int i = 0; i < 5; ++i) {
        vecs.push_back(
            su_vectorize(Complex(0.0, 1.0) * project_traceless(oracle::random_hermitian(3, rng))));
    }
    const int base = numerical_rank(vecs, 1e-8);
    std::vector<SuVector> shuffled{vecs[4], vecs[2], vecs[0], vecs[3], vecs[1]};
    shuffled[1].coords *= -7.5;
    shuffled[3].coords *= 1e-3;
    CHECK(numerical_rank(shuffled, 1e-8) == base);
}

TEST_CASE("matrix_log_principal fundamentals") {
    CHECK(matrix_log_principal(UnitaryOperator::identity(4)).norm() < 1e-14);

    std::mt19937_64 rng(21);
    const Matrix h = project_traceless(oracle::random_hermitian(3, rng));
    const HermitianOperator hop(h);
    const double scale = schatten1_norm(h);
    const double t = 0.8 * std::acos(-1.0) / scale;  // inside the injectivity radius
    const Matrix x = matrix_log_principal(mat_exp(hop, t));
    CHECK((x - Complex(0.0, -t) * h).norm() < 1e-10);
}

TEST_CASE("matrix_log_principal matches the truncated composition series") {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 10; ++i) {
        const Matrix hx = 0.02 * project_traceless(oracle::random_hermitian(3, rng));
        const Matrix hy = 0.02 * project_traceless(oracle::random_hermitian(3, rng));
        const Matrix u = mat_exp(HermitianOperator(hx), 1.0).entries() *
                         mat_exp(HermitianOperator(hy), 1.0).entries();
        const Matrix x = Complex(0.0, -1.0) * hx;
        const Matrix y = Complex(0.0, -1.0) * hy;
        const Matrix log_u = matrix_log_principal(UnitaryOperator(u));
        // The norms are ~0.05, so third-order terms are ~1e-5 and
        // fourth-order ones ~1e-6.
        CHECK((log_u - oracle::bch_third_order(x, y)).norm() < 5e-6);
        CHECK((log_u - (x + y + commutator(x, y) / 2.0)).norm() < 1e-4);
    }
}

TEST_CASE("matrix_log_principal flags the branch cut") {
    CHECK_THROWS_AS(matrix_log_principal(UnitaryOperator(-Matrix::Identity(2, 2))),
                    BranchCutError);
}
