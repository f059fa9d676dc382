/// @file dense_vector.hpp
/// @brief Dense vector storage and the handful of BLAS-1 kernels used here.

#ifndef CGEST_DENSE_VECTOR_HPP
#define CGEST_DENSE_VECTOR_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace cgest {

using DenseVector = std::vector<double>;

inline double dot(const DenseVector& a, const DenseVector& b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("dot: dimension mismatch");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2_squared(const DenseVector& a) {
    double s = 0.0;
    for (double v : a) s += v * v;
    return s;
}

inline double norm2(const DenseVector& a) { return std::sqrt(norm2_squared(a)); }

/// y += alpha * x
inline void axpy(double alpha, const DenseVector& x, DenseVector& y) {
    if (x.size() != y.size()) {
        throw std::invalid_argument("axpy: dimension mismatch");
    }
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

inline bool all_finite(const DenseVector& a) {
    for (double v : a) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

}  // namespace cgest

#endif  // CGEST_DENSE_VECTOR_HPP
