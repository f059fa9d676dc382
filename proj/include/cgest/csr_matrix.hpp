/// @file csr_matrix.hpp
/// @brief Sparse symmetric matrix in compressed-row form.

#ifndef CGEST_CSR_MATRIX_HPP
#define CGEST_CSR_MATRIX_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "cgest/dense_vector.hpp"

namespace cgest {

using index_t = std::int64_t;

/// Coordinate-form entry used during assembly.
struct Triplet {
    index_t row;
    index_t col;
    double value;
};

/// Sparse matrix in CSR format with full (mirrored) storage of the
/// symmetric pattern. Immutable once assembled; matvec is pure.
struct CsrMatrix {
    index_t n = 0;
    std::vector<index_t> row_offsets;  // length n+1, nondecreasing
    std::vector<index_t> col_indices;  // strictly increasing within a row
    std::vector<double> values;

    index_t nnz() const { return static_cast<index_t>(values.size()); }

    /// Assemble from coordinate entries. Duplicates are summed, columns
    /// sorted ascending within each row.
    static CsrMatrix from_triplets(index_t n, std::vector<Triplet> entries);

    /// Entry lookup by binary search over the row; 0.0 when not stored.
    double at(index_t i, index_t j) const;

    /// True when every stored (i, j, v) has a stored mirror (j, i, v),
    /// compared exactly.
    bool is_symmetric() const;

    /// True when all n diagonal entries are stored and strictly positive.
    bool has_positive_diagonal() const;

    /// Copy with alpha added to every diagonal entry.
    CsrMatrix shifted(double alpha) const;
};

/// y = A v with a fixed summation order (ascending column index per row).
DenseVector matvec(const CsrMatrix& A, const DenseVector& v);

/// Identity matrix of order n.
CsrMatrix identity_matrix(index_t n);

/// Symmetric tridiagonal Toeplitz matrix tridiag(off, diag, off).
CsrMatrix tridiag_matrix(index_t n, double off, double diag);

}  // namespace cgest

#endif  // CGEST_CSR_MATRIX_HPP
