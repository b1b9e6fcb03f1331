#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "wedgeproj/core.hpp"

using namespace wedgeproj;

TEST_CASE("tolerance validation accepts defaults and rejects out-of-range values") {
    REQUIRE_NOTHROW(Tolerance{}.validate());
    REQUIRE_THROWS_AS((Tolerance{0.0, 1e-8, 1e-9}.validate()), std::invalid_argument);
    REQUIRE_THROWS_AS((Tolerance{1e-10, -1e-8, 1e-9}.validate()), std::invalid_argument);
    REQUIRE_THROWS_AS((Tolerance{1e-10, 1e-8, 0.5}.validate()), std::invalid_argument);
    REQUIRE_THROWS_AS((Tolerance{1e-2, 1e-8, 1e-9}.validate()), std::invalid_argument);
}

TEST_CASE("orthonormal_basis recovers the rank of a deficient column set") {
    Matrix A(4, 4);
    A.col(0) << 1, 2, 0, -1;
    A.col(1) << 0, 1, 1, 3;
    A.col(2) = 2.0 * A.col(0) - A.col(1);
    A.col(3) = -0.5 * A.col(1);

    SubspaceBasis B = orthonormal_basis(A, {});
    REQUIRE(B.dim() == 2);
    REQUIRE(B.ambient_dim() == 4);

    const Matrix gram = B.vectors().transpose() * B.vectors();
    REQUIRE((gram - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);

    for (Index j = 0; j < A.cols(); ++j) {
        const Vector v = A.col(j);
        REQUIRE((v - project_subspace(v, B)).norm() < 1e-10 * v.norm());
    }
}

TEST_CASE("orthonormal_basis is invariant under uniform scaling") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> n(0.0, 1.0);
    Matrix A(5, 3);
    for (Index i = 0; i < 5; ++i)
        for (Index j = 0; j < 3; ++j) A(i, j) = n(rng);
    const Index base = orthonormal_basis(A, {}).dim();
    REQUIRE(orthonormal_basis(Matrix(1e6 * A), {}).dim() == base);
    REQUIRE(orthonormal_basis(Matrix(1e-6 * A), {}).dim() == base);
}

TEST_CASE("orthonormal_basis handles empty and zero input") {
    SubspaceBasis none = orthonormal_basis(Matrix(3, 0), {});
    REQUIRE(none.dim() == 0);
    REQUIRE(none.ambient_dim() == 3);

    REQUIRE(orthonormal_basis(Matrix(Matrix::Zero(3, 2)), {}).dim() == 0);

    std::vector<Vector> vs;
    REQUIRE(orthonormal_basis(vs, 4, {}).ambient_dim() == 4);
}

TEST_CASE("orthonormal_basis rejects mismatched vector dimensions") {
    std::vector<Vector> vs{Vector::Ones(3), Vector::Ones(2)};
    REQUIRE_THROWS_AS(orthonormal_basis(vs, 3, {}), DimensionMismatch);
}

TEST_CASE("project_subspace is idempotent with orthogonal residual") {
    Matrix A(4, 2);
    A.col(0) << 1, 1, 0, 0;
    A.col(1) << 0, 1, 1, 1;
    SubspaceBasis B = orthonormal_basis(A, {});

    Vector x(4);
    x << 3, -1, 2, 0.5;
    const Vector p = project_subspace(x, B);
    REQUIRE((project_subspace(p, B) - p).norm() < 1e-12);
    REQUIRE(std::abs((x - p).dot(p)) < 1e-12);

    SubspaceBasis empty = SubspaceBasis::empty(4);
    REQUIRE(project_subspace(x, empty).norm() == 0.0);

    REQUIRE_THROWS_AS(project_subspace(Vector::Ones(3), B), DimensionMismatch);
}

TEST_CASE("complement_basis completes any subspace to the full space") {
    Matrix A(5, 2);
    A.col(0) << 1, 0, 1, 0, 1;
    A.col(1) << 0, 2, 0, -1, 0;
    SubspaceBasis B = orthonormal_basis(A, {});
    SubspaceBasis C = complement_basis(B, {});
    REQUIRE(B.dim() + C.dim() == 5);

    Matrix all(5, 5);
    all << B.vectors(), C.vectors();
    REQUIRE((all.transpose() * all - Matrix::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-10);

    SubspaceBasis full = complement_basis(SubspaceBasis::empty(3), {});
    REQUIRE(full.dim() == 3);
    REQUIRE(complement_basis(full, {}).dim() == 0);
}

TEST_CASE("SubspaceBasis rejects non-orthonormal columns") {
    Matrix bad(3, 2);
    bad.col(0) << 1, 0, 0;
    bad.col(1) << 1, 1, 0;
    REQUIRE_THROWS_AS(SubspaceBasis(bad), std::invalid_argument);
    REQUIRE_NOTHROW(SubspaceBasis::empty(3));
}
