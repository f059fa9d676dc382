/// @file matrix_market.hpp
/// @brief Matrix Market coordinate I/O and right-hand-side construction.

#ifndef CGEST_MATRIX_MARKET_HPP
#define CGEST_MATRIX_MARKET_HPP

#include <cstdint>
#include <iosfwd>
#include <string>

#include "cgest/csr_matrix.hpp"
#include "cgest/dense_vector.hpp"

namespace cgest {

/// Thrown on malformed input (header, fields, indices, asymmetry).
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Result of reading a Matrix Market file. `missing_diagonal` is a
/// warning-level condition: matvec works, but Jacobi and IC(0) must
/// reject the matrix.
struct MatrixMarketResult {
    CsrMatrix matrix;
    bool missing_diagonal = false;
};

/// Read a "coordinate real symmetric|general" Matrix Market stream into
/// full (mirrored) CSR storage. Symmetric input must store the lower
/// triangle only; general input must be numerically symmetric. Duplicate
/// entries are summed, 1-based indices converted to 0-based.
MatrixMarketResult read_matrix_market(std::istream& in);
MatrixMarketResult read_matrix_market_file(const std::string& path);

/// Write canonical form: symmetric kind, lower triangle, rows then columns
/// ascending, values with 17 significant digits.
void write_matrix_market(std::ostream& out, const CsrMatrix& A);
void write_matrix_market_file(const std::string& path, const CsrMatrix& A);

enum class RhsKind { equal, uniform_random, file };

struct RhsSpec {
    RhsKind kind = RhsKind::uniform_random;
    std::string path;  // file kind only
};

/// Build the right-hand side. "equal" is the constant vector scaled to
/// unit Euclidean norm. "uniform_random" draws i.i.d. entries on (-1,1)
/// from mt19937_64(seed) via (next() >> 11) * 2^-53, then normalizes to
/// unit norm. File input (one real per line) is read verbatim.
DenseVector read_rhs(const RhsSpec& spec, index_t n, std::uint64_t seed);

}  // namespace cgest

#endif  // CGEST_MATRIX_MARKET_HPP
