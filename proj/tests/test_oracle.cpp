#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "doctest.h"

#include "cgest/csr_matrix.hpp"
#include "cgest/oracle.hpp"
#include "cgest/preconditioner.hpp"

using namespace cgest;

namespace {

CsrMatrix diag13() {
    return CsrMatrix::from_triplets(2, {{0, 0, 1.0}, {1, 1, 3.0}});
}

}  // namespace

TEST_SUITE("oracle") {

TEST_CASE("direct_solve on frozen systems") {
    auto x = direct_solve(diag13(), {1.0, 1.0});
    CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(x[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

    auto A = tridiag_matrix(4, -1.0, 2.0);
    auto y = direct_solve(A, {1.0, 0.0, 0.0, 0.0});
    DenseVector want = {0.8, 0.6, 0.4, 0.2};
    for (int i = 0; i < 4; ++i) CHECK(y[i] == doctest::Approx(want[i]).epsilon(1e-13));
}

TEST_CASE("direct_solve rejects indefinite matrices and bad dimensions") {
    auto A = CsrMatrix::from_triplets(2, {{0, 0, 1.0}, {0, 1, 2.0}, {1, 0, 2.0}, {1, 1, 1.0}});
    CHECK_THROWS_AS(direct_solve(A, {1.0, 1.0}), std::runtime_error);
    CHECK_THROWS_AS(direct_solve(diag13(), {1.0, 1.0, 1.0}), std::invalid_argument);
}

TEST_CASE("oracle cap is configurable through the environment") {
    setenv("CGEST_ORACLE_CAP", "3", 1);
    CHECK(oracle_cap() == 3);
    auto A = tridiag_matrix(4, -1.0, 2.0);
    CHECK_THROWS_AS(direct_solve(A, {1.0, 0.0, 0.0, 0.0}), std::invalid_argument);
    unsetenv("CGEST_ORACLE_CAP");
    CHECK(oracle_cap() == 5000);
}

TEST_CASE("true_error matches hand values on diag(1,3)") {
    auto A = diag13();
    DenseVector x_true = {1.0, 1.0 / 3.0};
    CHECK(true_error(A, x_true, {0.0, 0.0}) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
    CHECK(true_error(A, x_true, {0.5, 0.5}) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(true_error(A, x_true, x_true) == 0.0);
}

TEST_CASE("detect_ultimate_index on clean decay finds nothing") {
    std::vector<double> eps;
    for (int j = 0; j < 20; ++j) eps.push_back(std::pow(10.0, -j));
    CHECK(detect_ultimate_index(eps) == 20);
}

TEST_CASE("detect_ultimate_index stops at zeros and reversals") {
    CHECK(detect_ultimate_index({1.0, 0.5, 0.0, 0.1}) == 2);
    CHECK(detect_ultimate_index({1.0, 0.5, 0.5}) == 1);
    CHECK(detect_ultimate_index({1.0, 0.5, 0.6}) == 1);
    CHECK(detect_ultimate_index({-1.0, 0.5}) == 0);
}

TEST_CASE("detect_ultimate_index flags a roundoff plateau") {
    // Fast decay into a tail that creeps down by 0.1% per step: the tail is
    // a plateau even though it is strictly decreasing.
    std::vector<double> eps = {1.0, 1e-2, 1e-4, 1e-6};
    double v = 1e-7;
    for (int i = 0; i < 30; ++i) {
        eps.push_back(v);
        v *= 0.999;
    }
    CHECK(detect_ultimate_index(eps) == 4);
}

TEST_CASE("detect_ultimate_index tolerates mid-run quasi-stagnation") {
    // A slow stretch well above the final level must not be flagged.
    std::vector<double> eps = {1.0, 1e-1, 1e-2, 1e-3, 1e-4, 1e-5};
    double v = 1e-5;
    for (int i = 0; i < 6; ++i) {
        v *= 0.9;
        eps.push_back(v);
    }
    for (double drop : {1e-10, 1e-15, 1e-20, 1e-30}) eps.push_back(drop);
    CHECK(detect_ultimate_index(eps) == static_cast<index_t>(eps.size()));
}

TEST_CASE("make_truth_trace derives the auxiliary fields") {
    auto t = make_truth_trace({4.0, 1.0, 0.25, 0.0}, 2.0, 8.0);
    CHECK(t.eps_anorm[0] == 2.0);
    CHECK(t.eps_anorm[2] == 0.5);
    CHECK(t.ultimate_index == 3);
    CHECK(t.lambda_min == 2.0);
    CHECK(t.kappa == 4.0);
}

TEST_CASE("ideal_delay on geometric decay has a closed form") {
    std::vector<double> eps;
    for (int j = 0; j < 25; ++j) eps.push_back(std::pow(0.5, j));
    auto t = make_truth_trace(eps, 1.0, 2.0);
    // 0.5^(d+1) <= tau fixes d.
    CHECK(ideal_delay(t, 0, 0.25) == 1);
    CHECK(ideal_delay(t, 5, 0.25) == 1);
    CHECK(ideal_delay(t, 0, 0.5) == 0);
    CHECK(ideal_delay(t, 0, 0.05) == 4);  // 0.5^5 = 0.03125 <= 0.05
    // Loosening tau never increases the ideal delay.
    for (index_t k = 0; k < 10; ++k) {
        auto tight = ideal_delay(t, k, 0.1);
        auto loose = ideal_delay(t, k, 0.4);
        REQUIRE(tight.has_value());
        REQUIRE(loose.has_value());
        CHECK(*loose <= *tight);
    }
}

TEST_CASE("ideal_delay across a stagnation cliff") {
    // Ten nearly flat errors, then a cliff: the ideal delay at k = 0 must
    // look all the way across the flat stretch.
    std::vector<double> eps;
    for (int j = 0; j < 10; ++j) eps.push_back(1.0 - 1e-3 * j);
    eps.push_back(1e-10);
    auto t = make_truth_trace(eps, 1.0, 2.0);
    REQUIRE(t.ultimate_index == 11);
    CHECK(ideal_delay(t, 0, 0.25) == 9);
    CHECK(ideal_delay(t, 9, 0.25) == 0);
    CHECK_FALSE(ideal_delay(t, 10, 0.25).has_value());  // no trusted look-ahead
    CHECK_FALSE(ideal_delay(t, 42, 0.25).has_value());
}

TEST_CASE("eig_extremes of plain matrices") {
    auto e = eig_extremes(diag13());
    CHECK(e.lambda_min == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(e.lambda_max == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(e.mu_safe == doctest::Approx(1.0 / 1.0001).epsilon(1e-12));
    CHECK(e.mu_safe < e.lambda_min);

    auto id = eig_extremes(identity_matrix(5));
    CHECK(id.lambda_min == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(id.lambda_max == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("eig_extremes of the jacobi-preconditioned operator") {
    // For tridiag(-1,2,-1) the diagonal is constant, so jacobi just scales
    // the spectrum by 1/2.
    auto A = tridiag_matrix(8, -1.0, 2.0);
    auto plain = eig_extremes(A);
    auto prec = eig_extremes(A, Preconditioner::jacobi(A));
    CHECK(prec.lambda_min == doctest::Approx(plain.lambda_min / 2.0).epsilon(1e-12));
    CHECK(prec.lambda_max == doctest::Approx(plain.lambda_max / 2.0).epsilon(1e-12));
}

TEST_CASE("eig_extremes of the ic0-preconditioned operator") {
    // The zero-fill factor of a tridiagonal matrix is exact, so the
    // preconditioned operator is the identity.
    auto A = tridiag_matrix(8, -1.0, 2.0);
    auto prec = eig_extremes(A, Preconditioner::ic0(A));
    CHECK(prec.lambda_min == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(prec.lambda_max == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("bound_quality aggregates the comparison") {
    auto t = make_truth_trace({1.0, 0.2, 0.04, 0.008, 0.0}, 1.0, 2.0);
    REQUIRE(t.ultimate_index == 4);

    std::vector<AcceptedEstimate> acc;
    AcceptedEstimate a0;
    a0.k = 0;
    a0.d_used = 0;
    a0.delta = 0.8;
    a0.upper_heuristic = 0.8 / 0.75;
    a0.omega = 1.2;
    acc.push_back(a0);
    AcceptedEstimate a1;
    a1.k = 1;
    a1.d_used = 7;
    a1.delta = 0.05;
    a1.upper_heuristic = 0.05 / 0.75;
    acc.push_back(a1);
    AcceptedEstimate a3;
    a3.k = 3;
    a3.d_used = 0;
    a3.delta = 0.0079;
    a3.upper_heuristic = 0.0079 / 0.75;
    acc.push_back(a3);
    AcceptedEstimate beyond;  // k at the plateau: must be dropped
    beyond.k = 4;
    beyond.delta = 1.0;
    acc.push_back(beyond);

    auto q = bound_quality(t, acc, 0.25);
    REQUIRE(q.rows.size() == 3);
    CHECK(q.rows[0].rel_err_lower == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(q.rows[0].rel_err_upper == doctest::Approx(0.8 / 0.75 - 1.0).epsilon(1e-12));
    REQUIRE(q.rows[0].rel_err_omega.has_value());
    CHECK(*q.rows[0].rel_err_omega == doctest::Approx(0.2).epsilon(1e-12));
    CHECK_FALSE(q.rows[1].rel_err_omega.has_value());
    CHECK(q.rows[1].rel_err_lower == doctest::Approx(0.75).epsilon(1e-12));

    // ideal_d: k=0 -> 0 (0.2 <= 0.25), k=1 -> 0 (0.04 <= 0.05), k=3 -> none.
    REQUIRE(q.rows[0].ideal_d.has_value());
    CHECK(*q.rows[0].ideal_d == 0);
    REQUIRE(q.rows[1].ideal_d.has_value());
    CHECK(*q.rows[1].ideal_d == 0);
    CHECK_FALSE(q.rows[2].ideal_d.has_value());

    CHECK(q.frac_meeting_tau == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(q.frac_within_order == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(q.median_rel_err_lower == doctest::Approx(0.2).epsilon(1e-12));
    // Row 0 is tracked (0 <= 0 <= 5); row 1 is not (7 > 5); row 3 undefined.
    CHECK(q.frac_d_tracking == doctest::Approx(0.5).epsilon(1e-12));
}

}  // TEST_SUITE
