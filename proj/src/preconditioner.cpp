#include "cgest/preconditioner.hpp"

#include <cmath>

namespace cgest {

Preconditioner Preconditioner::identity(index_t n) {
    Preconditioner P;
    P.kind_ = PrecondKind::identity;
    P.n_ = n;
    return P;
}

Preconditioner Preconditioner::jacobi(const CsrMatrix& A) {
    Preconditioner P;
    P.kind_ = PrecondKind::jacobi;
    P.n_ = A.n;
    P.diag_inv_.resize(static_cast<std::size_t>(A.n));
    for (index_t i = 0; i < A.n; ++i) {
        const double d = A.at(i, i);
        if (!(d > 0.0)) {
            throw std::invalid_argument("jacobi: nonpositive diagonal at row " + std::to_string(i));
        }
        P.diag_inv_[static_cast<std::size_t>(i)] = 1.0 / d;
    }
    return P;
}

Preconditioner Preconditioner::ic0(const CsrMatrix& A, double shift) {
    const CsrMatrix S = shift != 0.0 ? A.shifted(shift) : A;
    const index_t n = S.n;

    // L keeps exactly the lower pattern of A; columns ascending, diagonal
    // entry last in each row.
    CsrMatrix L;
    L.n = n;
    L.row_offsets.assign(static_cast<std::size_t>(n) + 1, 0);
    for (index_t i = 0; i < n; ++i) {
        bool has_diag = false;
        index_t count = 0;
        for (index_t p = S.row_offsets[static_cast<std::size_t>(i)];
             p < S.row_offsets[static_cast<std::size_t>(i) + 1]; ++p) {
            const index_t j = S.col_indices[static_cast<std::size_t>(p)];
            if (j < i) ++count;
            if (j == i) has_diag = true;
        }
        if (!has_diag) throw FactorBreakdown(i);
        L.row_offsets[static_cast<std::size_t>(i) + 1] =
            L.row_offsets[static_cast<std::size_t>(i)] + count + 1;
    }
    L.col_indices.resize(static_cast<std::size_t>(L.row_offsets[static_cast<std::size_t>(n)]));
    L.values.assign(L.col_indices.size(), 0.0);

    for (index_t i = 0; i < n; ++i) {
        const index_t li = L.row_offsets[static_cast<std::size_t>(i)];
        const index_t li_end = L.row_offsets[static_cast<std::size_t>(i) + 1];
        index_t w = li;
        for (index_t p = S.row_offsets[static_cast<std::size_t>(i)];
             p < S.row_offsets[static_cast<std::size_t>(i) + 1]; ++p) {
            const index_t j = S.col_indices[static_cast<std::size_t>(p)];
            if (j > i) continue;
            const double a_ij = S.values[static_cast<std::size_t>(p)];
            if (j < i) {
                // dot of computed prefixes of L-rows i and j (columns < j)
                double s = 0.0;
                index_t pi = li;
                index_t pj = L.row_offsets[static_cast<std::size_t>(j)];
                const index_t pj_end = L.row_offsets[static_cast<std::size_t>(j) + 1] - 1;
                while (pi < w && pj < pj_end) {
                    const index_t ci = L.col_indices[static_cast<std::size_t>(pi)];
                    const index_t cj = L.col_indices[static_cast<std::size_t>(pj)];
                    if (ci == cj) {
                        s += L.values[static_cast<std::size_t>(pi)] *
                             L.values[static_cast<std::size_t>(pj)];
                        ++pi;
                        ++pj;
                    } else if (ci < cj) {
                        ++pi;
                    } else {
                        ++pj;
                    }
                }
                const double ljj =
                    L.values[static_cast<std::size_t>(L.row_offsets[static_cast<std::size_t>(j) + 1] - 1)];
                L.col_indices[static_cast<std::size_t>(w)] = j;
                L.values[static_cast<std::size_t>(w)] = (a_ij - s) / ljj;
                ++w;
            } else {
                double s = 0.0;
                for (index_t q = li; q < w; ++q) {
                    s += L.values[static_cast<std::size_t>(q)] * L.values[static_cast<std::size_t>(q)];
                }
                const double piv = a_ij - s;
                if (!(piv > 0.0)) throw FactorBreakdown(i);
                L.col_indices[static_cast<std::size_t>(w)] = i;
                L.values[static_cast<std::size_t>(w)] = std::sqrt(piv);
                ++w;
            }
        }
        if (w != li_end) throw FactorBreakdown(i);  // pattern mismatch, should not happen
    }

    Preconditioner P;
    P.kind_ = PrecondKind::ic0;
    P.n_ = n;
    P.L_ = std::move(L);
    return P;
}

DenseVector Preconditioner::apply(const DenseVector& r) const {
    if (static_cast<index_t>(r.size()) != n_) {
        throw std::invalid_argument("preconditioner apply: dimension mismatch");
    }
    switch (kind_) {
        case PrecondKind::identity:
            return r;
        case PrecondKind::jacobi: {
            DenseVector z(r.size());
            for (std::size_t i = 0; i < r.size(); ++i) z[i] = r[i] * diag_inv_[i];
            return z;
        }
        case PrecondKind::ic0: {
            DenseVector z = r;
            // forward: L y = r (diagonal entry is last in each row)
            for (index_t i = 0; i < n_; ++i) {
                double s = z[static_cast<std::size_t>(i)];
                const index_t end = L_.row_offsets[static_cast<std::size_t>(i) + 1] - 1;
                for (index_t p = L_.row_offsets[static_cast<std::size_t>(i)]; p < end; ++p) {
                    s -= L_.values[static_cast<std::size_t>(p)] *
                         z[static_cast<std::size_t>(L_.col_indices[static_cast<std::size_t>(p)])];
                }
                z[static_cast<std::size_t>(i)] = s / L_.values[static_cast<std::size_t>(end)];
            }
            // backward: L^T z = y
            for (index_t i = n_ - 1; i >= 0; --i) {
                const index_t end = L_.row_offsets[static_cast<std::size_t>(i) + 1] - 1;
                const double zi = z[static_cast<std::size_t>(i)] / L_.values[static_cast<std::size_t>(end)];
                z[static_cast<std::size_t>(i)] = zi;
                for (index_t p = L_.row_offsets[static_cast<std::size_t>(i)]; p < end; ++p) {
                    z[static_cast<std::size_t>(L_.col_indices[static_cast<std::size_t>(p)])] -=
                        L_.values[static_cast<std::size_t>(p)] * zi;
                }
            }
            return z;
        }
    }
    throw std::logic_error("preconditioner apply: unknown kind");
}

PrecondKind parse_precond_kind(const std::string& name) {
    if (name == "none" || name == "identity") return PrecondKind::identity;
    if (name == "jacobi") return PrecondKind::jacobi;
    if (name == "ic0") return PrecondKind::ic0;
    throw std::invalid_argument("unknown preconditioner kind: " + name);
}

}  // namespace cgest
