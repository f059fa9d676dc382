#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"

#include "cgest/csr_matrix.hpp"
#include "cgest/preconditioner.hpp"

using namespace cgest;

namespace {

CsrMatrix dense2(double a00, double a01, double a10, double a11) {
    return CsrMatrix::from_triplets(
        2, {{0, 0, a00}, {0, 1, a01}, {1, 0, a10}, {1, 1, a11}});
}

}  // namespace

TEST_SUITE("precond") {

TEST_CASE("identity returns the input unchanged") {
    auto P = Preconditioner::identity(3);
    CHECK(P.kind() == PrecondKind::identity);
    CHECK(P.order() == 3);
    DenseVector r = {1.5, -2.0, 0.25};
    auto z = P.apply(r);
    CHECK(z == r);
}

TEST_CASE("jacobi divides by the diagonal") {
    auto A = CsrMatrix::from_triplets(2, {{0, 0, 4.0}, {1, 1, 9.0}});
    auto P = Preconditioner::jacobi(A);
    auto z = P.apply({8.0, 27.0});
    // 8/4 and 27/9 are exact in binary.
    CHECK(z[0] == 2.0);
    CHECK(z[1] == 3.0);
}

TEST_CASE("jacobi rejects nonpositive diagonal entries") {
    auto zero = CsrMatrix::from_triplets(2, {{0, 0, 1.0}, {1, 1, 0.0}});
    CHECK_THROWS_AS(Preconditioner::jacobi(zero), std::invalid_argument);
    auto neg = CsrMatrix::from_triplets(2, {{0, 0, -1.0}, {1, 1, 2.0}});
    CHECK_THROWS_AS(Preconditioner::jacobi(neg), std::invalid_argument);
}

TEST_CASE("ic0 on a 2x2 with exact factor") {
    // A = [[4,2],[2,5]] factors exactly: L = [[2,0],[1,2]].
    auto A = dense2(4.0, 2.0, 2.0, 5.0);
    auto P = Preconditioner::ic0(A);
    const auto& L = P.factor();
    CHECK(L.at(0, 0) == 2.0);
    CHECK(L.at(1, 0) == 1.0);
    CHECK(L.at(1, 1) == 2.0);
    CHECK(L.at(0, 1) == 0.0);
}

TEST_CASE("ic0 of a tridiagonal matrix is its exact Cholesky factor") {
    // Tridiagonal matrices have no fill-in, so the zero-fill factor is the
    // full Cholesky factor and L L^T reproduces A on and off the pattern.
    auto A = tridiag_matrix(12, -1.0, 2.0);
    auto P = Preconditioner::ic0(A);
    const auto& L = P.factor();
    double max_abs = 0.0;
    for (index_t i = 0; i < A.n; ++i) {
        for (index_t j = 0; j <= i; ++j) {
            double llt = 0.0;
            for (index_t t = 0; t <= j; ++t) llt += L.at(i, t) * L.at(j, t);
            max_abs = std::max(max_abs, std::abs(llt - A.at(i, j)));
        }
    }
    CHECK(max_abs <= 1e-12);
}

TEST_CASE("ic0 matches A on the stored lower pattern") {
    // Arrowhead matrix: factoring fills nothing outside the pattern and the
    // product must agree with A wherever A stores an entry.
    std::vector<Triplet> t = {{0, 0, 8.0}, {1, 1, 6.0}, {2, 2, 7.0}, {3, 3, 9.0}};
    for (index_t j = 0; j < 3; ++j) {
        t.push_back({3, j, 1.0});
        t.push_back({j, 3, 1.0});
    }
    auto A = CsrMatrix::from_triplets(4, t);
    auto P = Preconditioner::ic0(A);
    const auto& L = P.factor();
    for (index_t i = 0; i < A.n; ++i) {
        for (index_t p = A.row_offsets[i]; p < A.row_offsets[i + 1]; ++p) {
            index_t j = A.col_indices[p];
            if (j > i) continue;
            double llt = 0.0;
            for (index_t s = 0; s <= j; ++s) llt += L.at(i, s) * L.at(j, s);
            CHECK(std::abs(llt - A.values[p]) <= 1e-12);
        }
    }
}

TEST_CASE("ic0 breakdown reports the failing row") {
    // [[1,2],[2,1]] is symmetric but indefinite: pivot at row 1 is 1-4 < 0.
    auto A = dense2(1.0, 2.0, 2.0, 1.0);
    CHECK_THROWS_AS(Preconditioner::ic0(A), FactorBreakdown);
    try {
        Preconditioner::ic0(A);
    } catch (const FactorBreakdown& e) {
        CHECK(e.row == 1);
    }
}

TEST_CASE("ic0 requires a stored diagonal") {
    auto A = CsrMatrix::from_triplets(2, {{0, 0, 1.0}, {0, 1, 0.5}, {1, 0, 0.5}});
    CHECK_THROWS_AS(Preconditioner::ic0(A), FactorBreakdown);
}

TEST_CASE("ic0 shift rescues an indefinite factorization") {
    auto A = dense2(1.0, 2.0, 2.0, 1.0);
    // A + 4I = [[5,2],[2,5]] is SPD; the shifted factorization succeeds.
    auto P = Preconditioner::ic0(A, 4.0);
    const auto& L = P.factor();
    CHECK(L.at(0, 0) == doctest::Approx(std::sqrt(5.0)).epsilon(1e-15));
    CHECK(L.at(1, 0) == doctest::Approx(2.0 / std::sqrt(5.0)).epsilon(1e-15));
}

TEST_CASE("ic0 apply solves L L^T z = r") {
    auto A = tridiag_matrix(8, -1.0, 2.0);
    auto P = Preconditioner::ic0(A);
    DenseVector r(8);
    for (int i = 0; i < 8; ++i) r[i] = 1.0 + 0.1 * i;
    auto z = P.apply(r);
    // For tridiagonal A the factor is exact, so A z should equal r.
    auto Az = matvec(A, z);
    for (int i = 0; i < 8; ++i) CHECK(Az[i] == doctest::Approx(r[i]).epsilon(1e-13));
}

TEST_CASE("apply is linear") {
    auto A = tridiag_matrix(6, -1.0, 3.0);
    auto P = Preconditioner::ic0(A);
    DenseVector u = {1, 0, 2, -1, 0.5, 3};
    DenseVector v = {0, 1, -2, 4, 0, -0.5};
    DenseVector w(6);
    for (int i = 0; i < 6; ++i) w[i] = 2.0 * u[i] - 3.0 * v[i];
    auto zu = P.apply(u);
    auto zv = P.apply(v);
    auto zw = P.apply(w);
    for (int i = 0; i < 6; ++i) {
        CHECK(zw[i] == doctest::Approx(2.0 * zu[i] - 3.0 * zv[i]).epsilon(1e-12));
    }
}

TEST_CASE("apply of a symmetric M is symmetric: u' M^{-1} v == v' M^{-1} u") {
    auto A = tridiag_matrix(6, -1.0, 3.0);
    for (auto P : {Preconditioner::jacobi(A), Preconditioner::ic0(A)}) {
        DenseVector u = {1, 2, 3, 4, 5, 6};
        DenseVector v = {-1, 1, -1, 1, -1, 1};
        double uv = dot(u, P.apply(v));
        double vu = dot(v, P.apply(u));
        CHECK(uv == doctest::Approx(vu).epsilon(1e-13));
    }
}

TEST_CASE("apply rejects dimension mismatches") {
    auto P = Preconditioner::identity(3);
    DenseVector r = {1.0, 2.0};
    CHECK_THROWS_AS(P.apply(r), std::invalid_argument);
}

TEST_CASE("parse_precond_kind") {
    CHECK(parse_precond_kind("none") == PrecondKind::identity);
    CHECK(parse_precond_kind("identity") == PrecondKind::identity);
    CHECK(parse_precond_kind("jacobi") == PrecondKind::jacobi);
    CHECK(parse_precond_kind("ic0") == PrecondKind::ic0);
    CHECK_THROWS_AS(parse_precond_kind("ilu"), std::invalid_argument);
}

}  // TEST_SUITE
