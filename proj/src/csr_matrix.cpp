#include "cgest/csr_matrix.hpp"

#include <algorithm>
#include <stdexcept>

namespace cgest {

CsrMatrix CsrMatrix::from_triplets(index_t n, std::vector<Triplet> entries) {
    if (n <= 0) throw std::invalid_argument("from_triplets: order must be positive");
    for (const Triplet& t : entries) {
        if (t.row < 0 || t.row >= n || t.col < 0 || t.col >= n) {
            throw std::invalid_argument("from_triplets: index out of range");
        }
    }
    std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });

    CsrMatrix A;
    A.n = n;
    A.row_offsets.assign(static_cast<std::size_t>(n) + 1, 0);
    A.col_indices.reserve(entries.size());
    A.values.reserve(entries.size());

    for (std::size_t i = 0; i < entries.size();) {
        const index_t r = entries[i].row;
        const index_t c = entries[i].col;
        double v = 0.0;
        for (; i < entries.size() && entries[i].row == r && entries[i].col == c; ++i) {
            v += entries[i].value;  // duplicates summed
        }
        A.col_indices.push_back(c);
        A.values.push_back(v);
        A.row_offsets[static_cast<std::size_t>(r) + 1] += 1;
    }
    for (index_t r = 0; r < n; ++r) {
        A.row_offsets[static_cast<std::size_t>(r) + 1] +=
            A.row_offsets[static_cast<std::size_t>(r)];
    }
    return A;
}

double CsrMatrix::at(index_t i, index_t j) const {
    const auto begin = col_indices.begin() + row_offsets[static_cast<std::size_t>(i)];
    const auto end = col_indices.begin() + row_offsets[static_cast<std::size_t>(i) + 1];
    const auto it = std::lower_bound(begin, end, j);
    if (it == end || *it != j) return 0.0;
    return values[static_cast<std::size_t>(it - col_indices.begin())];
}

bool CsrMatrix::is_symmetric() const {
    for (index_t i = 0; i < n; ++i) {
        for (index_t p = row_offsets[static_cast<std::size_t>(i)];
             p < row_offsets[static_cast<std::size_t>(i) + 1]; ++p) {
            const index_t j = col_indices[static_cast<std::size_t>(p)];
            if (at(j, i) != values[static_cast<std::size_t>(p)]) return false;
        }
    }
    return true;
}

bool CsrMatrix::has_positive_diagonal() const {
    for (index_t i = 0; i < n; ++i) {
        if (at(i, i) <= 0.0) return false;
    }
    return true;
}

CsrMatrix CsrMatrix::shifted(double alpha) const {
    CsrMatrix B = *this;
    for (index_t i = 0; i < n; ++i) {
        for (index_t p = row_offsets[static_cast<std::size_t>(i)];
             p < row_offsets[static_cast<std::size_t>(i) + 1]; ++p) {
            if (col_indices[static_cast<std::size_t>(p)] == i) {
                B.values[static_cast<std::size_t>(p)] += alpha;
            }
        }
    }
    return B;
}

DenseVector matvec(const CsrMatrix& A, const DenseVector& v) {
    if (static_cast<index_t>(v.size()) != A.n) {
        throw std::invalid_argument("matvec: dimension mismatch");
    }
    DenseVector y(v.size(), 0.0);
    for (index_t i = 0; i < A.n; ++i) {
        double s = 0.0;
        for (index_t p = A.row_offsets[static_cast<std::size_t>(i)];
             p < A.row_offsets[static_cast<std::size_t>(i) + 1]; ++p) {
            s += A.values[static_cast<std::size_t>(p)] *
                 v[static_cast<std::size_t>(A.col_indices[static_cast<std::size_t>(p)])];
        }
        y[static_cast<std::size_t>(i)] = s;
    }
    return y;
}

CsrMatrix identity_matrix(index_t n) {
    std::vector<Triplet> t;
    t.reserve(static_cast<std::size_t>(n));
    for (index_t i = 0; i < n; ++i) t.push_back({i, i, 1.0});
    return CsrMatrix::from_triplets(n, std::move(t));
}

CsrMatrix tridiag_matrix(index_t n, double off, double diag) {
    std::vector<Triplet> t;
    for (index_t i = 0; i < n; ++i) {
        t.push_back({i, i, diag});
        if (i + 1 < n) {
            t.push_back({i, i + 1, off});
            t.push_back({i + 1, i, off});
        }
    }
    return CsrMatrix::from_triplets(n, std::move(t));
}

}  // namespace cgest
