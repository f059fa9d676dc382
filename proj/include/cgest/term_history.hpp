/// @file term_history.hpp
/// @brief Per-iteration term log with compensated window sums.

#ifndef CGEST_TERM_HISTORY_HPP
#define CGEST_TERM_HISTORY_HPP

#include <vector>

#include "cgest/csr_matrix.hpp"

namespace cgest {

/// Grow-only log of the per-iteration quantities gamma_j * (z_j^T r_j).
/// Window sums over a contiguous index range back the error estimator; they
/// are evaluated by compensated summation over the raw terms so that late
/// windows (tiny terms, many orders of magnitude below the running total)
/// keep full relative accuracy.
class TermHistory {
  public:
    /// Appends term_j (must be finite and > 0).
    void push(double term);

    index_t size() const { return static_cast<index_t>(terms_.size()); }
    double term(index_t j) const;

    /// Sum of terms a..b inclusive, compensated, summed in index order.
    double delta(index_t a, index_t b) const;

    /// Sum of terms 0..l inclusive from the running compensated prefix.
    double prefix(index_t l) const;

  private:
    std::vector<double> terms_;
    std::vector<double> prefix_sum_;
    std::vector<double> prefix_comp_;
};

/// Largest start index m < k for which the window k..ell is negligible
/// against m..ell, i.e. delta(k, ell) / delta(m, ell) <= window_tol.
/// Returns 0 when no index qualifies.  The candidate windows grow downward
/// from k-1, so the first hit of the scan is the answer.
index_t find_window_start(const TermHistory& h, index_t k, index_t ell, double window_tol);

/// max over j in m..k+d of delta(j, k+d+1) / term(j): how severely any
/// recent single term underestimates the tail starting at it.
double safety_factor(const TermHistory& h, index_t m, index_t k, index_t d);

}  // namespace cgest

#endif  // CGEST_TERM_HISTORY_HPP
