#include "cgest/term_history.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "cgest/compensated.hpp"

namespace cgest {

void TermHistory::push(double term) {
    if (!std::isfinite(term) || term <= 0.0) {
        throw std::invalid_argument("term history: term " + std::to_string(term) +
                                    " at index " + std::to_string(terms_.size()) +
                                    " is not finite and positive");
    }
    double sum = prefix_sum_.empty() ? 0.0 : prefix_sum_.back();
    double comp = prefix_comp_.empty() ? 0.0 : prefix_comp_.back();
    // Neumaier update of the running (sum, comp) pair.
    const double t = sum + term;
    if (std::abs(sum) >= std::abs(term)) {
        comp += (sum - t) + term;
    } else {
        comp += (term - t) + sum;
    }
    terms_.push_back(term);
    prefix_sum_.push_back(t);
    prefix_comp_.push_back(comp);
}

double TermHistory::term(index_t j) const {
    if (j < 0 || j >= size()) {
        throw std::out_of_range("term history: index " + std::to_string(j) + " out of range");
    }
    return terms_[static_cast<std::size_t>(j)];
}

double TermHistory::delta(index_t a, index_t b) const {
    if (a < 0 || a > b || b >= size()) {
        throw std::out_of_range("term history: window " + std::to_string(a) + ".." +
                                std::to_string(b) + " out of range");
    }
    CompensatedSum s;
    for (index_t j = a; j <= b; ++j) {
        s.add(terms_[static_cast<std::size_t>(j)]);
    }
    return s.value();
}

double TermHistory::prefix(index_t l) const {
    if (l < 0 || l >= size()) {
        throw std::out_of_range("term history: prefix index " + std::to_string(l) +
                                " out of range");
    }
    return prefix_sum_[static_cast<std::size_t>(l)] + prefix_comp_[static_cast<std::size_t>(l)];
}

index_t find_window_start(const TermHistory& h, index_t k, index_t ell, double window_tol) {
    const double numer = h.delta(k, ell);
    for (index_t start = k - 1; start >= 0; --start) {
        if (numer / h.delta(start, ell) <= window_tol) return start;
    }
    return 0;
}

double safety_factor(const TermHistory& h, index_t m, index_t k, index_t d) {
    double s = 0.0;
    for (index_t j = m; j <= k + d; ++j) {
        s = std::max(s, h.delta(j, k + d + 1) / h.term(j));
    }
    return s;
}

}  // namespace cgest
