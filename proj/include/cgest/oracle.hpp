/// @file oracle.hpp
/// @brief Dense ground-truth references for tests and comparisons.

#ifndef CGEST_ORACLE_HPP
#define CGEST_ORACLE_HPP

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "cgest/csr_matrix.hpp"
#include "cgest/dense_vector.hpp"
#include "cgest/estimator.hpp"
#include "cgest/preconditioner.hpp"

namespace cgest {

/// Ground-truth helpers for tests and comparisons.  Everything here runs
/// dense at O(n^3) and is capped (default 5000, override with the
/// CGEST_ORACLE_CAP environment variable); none of it is on the solve path.

Eigen::MatrixXd to_dense(const CsrMatrix& A);

index_t oracle_cap();

/// Dense Cholesky solve with an enforced residual check
/// ||b - Ax|| <= 1e-10 ||b||.  Throws when A is not positive definite,
/// exceeds the cap, or the residual check fails.
DenseVector direct_solve(const CsrMatrix& A, const DenseVector& b);

/// (x_true - x_k)^T A (x_true - x_k) via one sparse matvec.
double true_error(const CsrMatrix& A, const DenseVector& x_true, const DenseVector& x_k);

/// First index of the roundoff plateau of a squared-error sequence: the
/// first k where the value hits zero, stops strictly decreasing, or -- once
/// within a factor 100 of the smallest positive value -- fails to halve
/// over the next 10 indices.  Returns eps.size() when no plateau is found;
/// entries before the returned index are strictly decreasing and positive.
index_t detect_ultimate_index(const std::vector<double>& eps);

struct TruthTrace {
    std::vector<double> eps;        ///< true squared A-norm errors, eps[k] at iterate k
    std::vector<double> eps_anorm;  ///< sqrt(eps)
    index_t ultimate_index = 0;     ///< entries below this index are trusted
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    double kappa = 1.0;
};

TruthTrace make_truth_trace(std::vector<double> eps, double lambda_min, double lambda_max);

/// Smallest d >= 0 whose look-ahead squared error eps[k+d+1] is down to
/// tau * eps[k]; nullopt when no trusted index achieves it.
std::optional<index_t> ideal_delay(const TruthTrace& trace, index_t k, double tau);

struct EigExtremes {
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    double mu_safe = 0.0;  ///< lambda_min / (1 + 1e-4), a usable underestimate
};

/// Extreme eigenvalues of A via a dense symmetric eigensolver.
EigExtremes eig_extremes(const CsrMatrix& A);

/// Extreme eigenvalues of the symmetrically preconditioned operator
/// (identity: A itself; jacobi: D^{-1/2} A D^{-1/2}; ic0: L^{-1} A L^{-T}).
EigExtremes eig_extremes(const CsrMatrix& A, const Preconditioner& P);

/// Per-release comparison of the estimates against the truth, restricted
/// to trusted k.
struct BoundQualityRow {
    index_t k = 0;
    index_t d_used = 0;
    double eps_true = 0.0;
    double rel_err_lower = 0.0;  ///< (eps - delta) / eps
    double rel_err_upper = 0.0;  ///< (upper_heuristic - eps) / eps
    std::optional<double> rel_err_omega;  ///< (omega - eps) / eps
    std::optional<index_t> ideal_d;
};

struct BoundQuality {
    std::vector<BoundQualityRow> rows;
    double frac_meeting_tau = 0.0;    ///< rel_err_lower <= tau
    double frac_within_order = 0.0;   ///< delta within 10x of eps
    double median_rel_err_lower = 0.0;
    double frac_d_tracking = 0.0;  ///< ideal_d <= d_used <= ideal_d+5, over defined rows
};

BoundQuality bound_quality(const TruthTrace& trace,
                           const std::vector<AcceptedEstimate>& accepted, double tau);

}  // namespace cgest

#endif  // CGEST_ORACLE_HPP
