/// @file preconditioner.hpp
/// @brief Preconditioners M = L L^T applied as solves M z = r.

#ifndef CGEST_PRECONDITIONER_HPP
#define CGEST_PRECONDITIONER_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "cgest/csr_matrix.hpp"
#include "cgest/dense_vector.hpp"

namespace cgest {

enum class PrecondKind { identity, jacobi, ic0 };

/// Thrown when incomplete Cholesky hits a nonpositive pivot. The caller
/// may retry on A + alpha*I via build_ic0's shift argument.
struct FactorBreakdown : std::runtime_error {
    index_t row;
    explicit FactorBreakdown(index_t r)
        : std::runtime_error("incomplete Cholesky breakdown at row " + std::to_string(r)),
          row(r) {}
};

/// Immutable after construction; apply is pure and safe to call from
/// several threads at once.
class Preconditioner {
public:
    static Preconditioner identity(index_t n);

    /// Jacobi: apply(r) = r ./ diag(A). Rejects nonpositive diagonals.
    static Preconditioner jacobi(const CsrMatrix& A);

    /// Zero-fill incomplete Cholesky on the lower pattern of A, optionally
    /// after a global diagonal shift (factors A + shift*I). On the stored
    /// pattern (L L^T)_{ij} = a_{ij}. Throws FactorBreakdown with the
    /// failing row on a nonpositive pivot.
    static Preconditioner ic0(const CsrMatrix& A, double shift = 0.0);

    /// z = M^{-1} r. Identity returns r unchanged; ic0 performs forward
    /// then backward triangular substitution.
    DenseVector apply(const DenseVector& r) const;

    PrecondKind kind() const { return kind_; }
    index_t order() const { return n_; }

    /// The lower-triangular factor (ic0 only).
    const CsrMatrix& factor() const { return L_; }
    const std::vector<double>& diag_inverse() const { return diag_inv_; }

private:
    PrecondKind kind_ = PrecondKind::identity;
    index_t n_ = 0;
    std::vector<double> diag_inv_;  // jacobi
    CsrMatrix L_;                   // ic0
};

PrecondKind parse_precond_kind(const std::string& name);

}  // namespace cgest

#endif  // CGEST_PRECONDITIONER_HPP
