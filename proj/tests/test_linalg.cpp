#include "doctest.h"

#include "maplabel/errors.hpp"
#include "maplabel/linalg.hpp"

#include <cmath>
#include <random>

using namespace maplabel;

namespace {

Matrix random_matrix(Eigen::Index n, std::uint32_t seed) {
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Matrix M(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) M(i, j) = u(gen);
    return M;
}

Matrix random_spd(Eigen::Index n, std::uint32_t seed) {
    const Matrix G = random_matrix(n, seed);
    return G * G.transpose() + Matrix::Identity(n, n);
}

} // namespace

TEST_CASE("lu_solve") {
    SUBCASE("identity returns the right-hand side") {
        const Matrix I = Matrix::Identity(5, 5);
        Vector b(5);
        b << 1, -2, 3, 0.5, -0.25;
        const Vector x = lu_solve(I, b);
        CHECK((x - b).norm() == 0.0);
    }

    SUBCASE("diagonal system") {
        Matrix M(2, 2);
        M << 2, 0, 0, 4;
        Vector b(2);
        b << 2, 4;
        const Vector x = lu_solve(M, b);
        CHECK(x[0] == doctest::Approx(1.0));
        CHECK(x[1] == doctest::Approx(1.0));
    }

    SUBCASE("matches a Cholesky solve on a random SPD system") {
        const Matrix M = random_spd(50, 7u);
        Vector b(50);
        std::mt19937 gen(11u);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (Eigen::Index i = 0; i < 50; ++i) b[i] = u(gen);

        const Vector x_lu = lu_solve(M, b);
        const Vector x_ch = chol_solve(cholesky(M), b);
        CHECK((x_lu - x_ch).norm() <= 1e-10 * x_ch.norm());
        CHECK((M * x_lu - b).norm() <= 1e-10 * M.norm() * x_lu.norm());
    }

    SUBCASE("singular matrix throws") {
        Matrix M(2, 2);
        M << 1, 2, 2, 4;
        Vector b(2);
        b << 1, 1;
        CHECK_THROWS_AS(lu_solve(M, b), NumericalError);
    }

    SUBCASE("shape mismatch throws") {
        CHECK_THROWS_AS(lu_solve(Matrix::Identity(3, 2), Vector::Zero(2)), ConfigError);
        CHECK_THROWS_AS(lu_solve(Matrix::Identity(3, 3), Vector::Zero(2)), ConfigError);
    }
}

TEST_CASE("cholesky") {
    SUBCASE("identity factors to identity") {
        const Matrix U = cholesky(Matrix::Identity(4, 4));
        CHECK((U - Matrix::Identity(4, 4)).norm() == 0.0);
    }

    SUBCASE("hand-checked 2x2 factor") {
        Matrix M(2, 2);
        M << 4, 2, 2, 5;
        const Matrix U = cholesky(M);
        CHECK(U(0, 0) == doctest::Approx(2.0));
        CHECK(U(0, 1) == doctest::Approx(1.0));
        CHECK(U(1, 0) == 0.0);
        CHECK(U(1, 1) == doctest::Approx(2.0));
    }

    SUBCASE("reconstructs a large jittered kernel matrix") {
        const Eigen::Index n = 300;
        Matrix M(n, n);
        const double sigma = 0.1;
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) {
                const double d = (static_cast<double>(i) - static_cast<double>(j)) /
                                 static_cast<double>(n - 1);
                M(i, j) = std::exp(-d * d / (2.0 * sigma * sigma));
            }
        M += 1e-8 * Matrix::Identity(n, n);
        const Matrix U = cholesky(M);
        CHECK((U.transpose() * U - M).norm() <= 1e-10 * M.norm());
        CHECK(U.diagonal().minCoeff() > 0.0);
    }

    SUBCASE("indefinite matrix throws") {
        Matrix M(2, 2);
        M << 1, 0, 0, -1;
        CHECK_THROWS_AS(cholesky(M), NumericalError);
    }
}

TEST_CASE("chol_solve inverts the normal matrix") {
    const Matrix M = random_spd(20, 3u);
    const Matrix U = cholesky(M);
    Vector b = Vector::LinSpaced(20, -1.0, 1.0);
    const Vector x = chol_solve(U, b);
    CHECK((M * x - b).norm() <= 1e-10 * M.norm() * x.norm());
}

TEST_CASE("lanczos_largest") {
    SUBCASE("diagonal operator") {
        const Eigen::Index n = 10;
        const LinOp op = [n](const Vector& v) {
            Vector w(n);
            for (Eigen::Index i = 0; i < n; ++i) w[i] = static_cast<double>(i + 1) * v[i];
            return w;
        };
        const auto pairs = lanczos_largest(op, n, 2, 1e-10);
        REQUIRE(pairs.size() == 2);
        CHECK(pairs[0].value == doctest::Approx(10.0).epsilon(1e-10));
        CHECK(pairs[1].value == doctest::Approx(9.0).epsilon(1e-10));
        CHECK(std::abs(pairs[0].vector[9]) == doctest::Approx(1.0).epsilon(1e-8));
    }

    SUBCASE("rank-one operator finds the squared norm") {
        Vector v(6);
        v << 1, 2, 3, -1, 0.5, 2;
        const LinOp op = [&v](const Vector& x) { return Vector(v * v.dot(x)); };
        const auto pairs = lanczos_largest(op, 6, 1, 1e-12);
        REQUIRE(pairs.size() == 1);
        CHECK(pairs[0].value == doctest::Approx(v.squaredNorm()).epsilon(1e-10));
    }

    SUBCASE("matches the dense eigensolver on a random symmetric matrix") {
        const Matrix S = [] {
            Matrix R = random_matrix(40, 17u);
            return Matrix(0.5 * (R + R.transpose()));
        }();
        const LinOp op = [&S](const Vector& x) { return Vector(S * x); };
        const auto pairs = lanczos_largest(op, 40, 4, 1e-12);
        REQUIRE(pairs.size() == 4);

        Eigen::SelfAdjointEigenSolver<Matrix> es(S);
        const Vector dense = es.eigenvalues(); // ascending
        for (int i = 0; i < 4; ++i) {
            CAPTURE(i);
            const double want = dense[39 - i];
            CHECK(std::abs(pairs[static_cast<std::size_t>(i)].value - want) <=
                  1e-8 * std::max(std::abs(want), 1.0));
            const Vector& v = pairs[static_cast<std::size_t>(i)].vector;
            CHECK((S * v - pairs[static_cast<std::size_t>(i)].value * v).norm() <=
                  1e-8 * S.norm());
        }
    }

    SUBCASE("deterministic across calls") {
        const Matrix S = random_spd(30, 23u);
        const LinOp op = [&S](const Vector& x) { return Vector(S * x); };
        const auto a = lanczos_largest(op, 30, 3);
        const auto b = lanczos_largest(op, 30, 3);
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK(a[i].value == b[i].value);
            CHECK((a[i].vector - b[i].vector).norm() == 0.0);
        }
    }

    SUBCASE("invalid requests throw") {
        const LinOp op = [](const Vector& x) { return x; };
        CHECK_THROWS_AS(lanczos_largest(op, 5, 6), ConfigError);
        CHECK_THROWS_AS(lanczos_largest(op, 0, 1), ConfigError);
    }
}

TEST_CASE("dense_sym_generalized_eig") {
    SUBCASE("identity pencil") {
        const Matrix I = Matrix::Identity(3, 3);
        const auto eig = dense_sym_generalized_eig(I, I);
        for (Eigen::Index i = 0; i < 3; ++i)
            CHECK(eig.values[i] == doctest::Approx(1.0).epsilon(1e-12));
    }

    SUBCASE("diagonal pencil against identity") {
        Matrix A = Matrix::Zero(2, 2);
        A(0, 0) = 1.0;
        A(1, 1) = 2.0;
        const auto eig = dense_sym_generalized_eig(A, Matrix::Identity(2, 2));
        CHECK(eig.values[0] == doctest::Approx(1.0));
        CHECK(eig.values[1] == doctest::Approx(2.0));
    }

    SUBCASE("random pencil satisfies the defining equation") {
        const Matrix A = [] {
            Matrix R = random_matrix(25, 31u);
            return Matrix(0.5 * (R + R.transpose()));
        }();
        const Matrix B = random_spd(25, 37u);
        const auto eig = dense_sym_generalized_eig(A, B);
        REQUIRE(eig.values.size() == 25);
        for (Eigen::Index i = 1; i < 25; ++i) CHECK(eig.values[i] >= eig.values[i - 1]);
        for (Eigen::Index i = 0; i < 25; ++i) {
            const Vector v = eig.vectors.col(i);
            CHECK((A * v - eig.values[i] * (B * v)).norm() <= 1e-8 * (A.norm() + B.norm()));
            CHECK(v.dot(B * v) == doctest::Approx(1.0).epsilon(1e-10));
        }
    }

    SUBCASE("indefinite right-hand side throws") {
        Matrix B(2, 2);
        B << 1, 0, 0, -1;
        CHECK_THROWS_AS(dense_sym_generalized_eig(Matrix::Identity(2, 2), B), NumericalError);
    }
}
