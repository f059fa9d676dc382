/// @file compensated.hpp
/// @brief Neumaier-compensated accumulation for sums of scalar terms.

#ifndef CGEST_COMPENSATED_HPP
#define CGEST_COMPENSATED_HPP

#include <cmath>

namespace cgest {

/// Running sum with Neumaier compensation. The carried correction keeps
/// the accumulated value accurate to a few ulps even when terms span many
/// orders of magnitude.
class CompensatedSum {
public:
    CompensatedSum() = default;

    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }

    double value() const { return sum_ + comp_; }

    double raw_sum() const { return sum_; }
    double correction() const { return comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace cgest

#endif  // CGEST_COMPENSATED_HPP
