#include "cgest/spectrum.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <stdexcept>

namespace cgest {

namespace {

void check_range(double lambda1, double lambdan, index_t n) {
    if (n < 1) throw std::invalid_argument("spectrum: n must be >= 1");
    if (!(lambda1 > 0.0) || !(lambdan >= lambda1)) {
        throw std::invalid_argument("spectrum: need 0 < lambda1 <= lambdan");
    }
}

}  // namespace

std::vector<double> geometric_spectrum(double lambda1, double lambdan, index_t n) {
    check_range(lambda1, lambdan, n);
    std::vector<double> ev(static_cast<std::size_t>(n));
    if (n == 1) {
        ev[0] = lambda1;
        return ev;
    }
    const double ratio = std::log(lambdan / lambda1) / static_cast<double>(n - 1);
    for (index_t i = 0; i < n; ++i) {
        ev[static_cast<std::size_t>(i)] = lambda1 * std::exp(ratio * static_cast<double>(i));
    }
    return ev;
}

std::vector<double> linear_spectrum(double lambda1, double lambdan, index_t n) {
    check_range(lambda1, lambdan, n);
    std::vector<double> ev(static_cast<std::size_t>(n));
    if (n == 1) {
        ev[0] = lambda1;
        return ev;
    }
    for (index_t i = 0; i < n; ++i) {
        ev[static_cast<std::size_t>(i)] =
            lambda1 + (lambdan - lambda1) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return ev;
}

std::vector<double> clustered_spectrum(double lambda1, double lambdan, index_t n,
                                       index_t clusters, std::uint64_t seed, double spread) {
    check_range(lambda1, lambdan, n);
    if (clusters < 1 || clusters > n) {
        throw std::invalid_argument("spectrum: clusters must lie in [1, n]");
    }
    const std::vector<double> centers = geometric_spectrum(lambda1, lambdan, clusters);
    std::mt19937_64 gen(seed);
    std::vector<double> ev(static_cast<std::size_t>(n));
    for (index_t i = 0; i < n; ++i) {
        const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
        const double jitter = 1.0 + spread * (2.0 * u - 1.0);
        ev[static_cast<std::size_t>(i)] = centers[static_cast<std::size_t>(i % clusters)] * jitter;
    }
    std::sort(ev.begin(), ev.end());
    return ev;
}

std::vector<double> staircase_spectrum(double lambda1, double lambdan, index_t n,
                                       index_t plateaus) {
    check_range(lambda1, lambdan, n);
    if (plateaus < 1 || plateaus > n) {
        throw std::invalid_argument("spectrum: plateaus must lie in [1, n]");
    }
    const std::vector<double> levels = geometric_spectrum(lambda1, lambdan, plateaus);
    std::vector<double> ev(static_cast<std::size_t>(n));
    for (index_t i = 0; i < n; ++i) {
        const index_t level = i * plateaus / n;
        ev[static_cast<std::size_t>(i)] = levels[static_cast<std::size_t>(level)];
    }
    return ev;
}

std::vector<double> damped_linear_spectrum(double lambda1, double lambdan, index_t n,
                                           double rho) {
    check_range(lambda1, lambdan, n);
    if (!(rho > 0.0 && rho <= 1.0)) {
        throw std::invalid_argument("spectrum: damping rho must lie in (0, 1]");
    }
    std::vector<double> ev(static_cast<std::size_t>(n));
    if (n == 1) {
        ev[0] = lambda1;
        return ev;
    }
    for (index_t i = 0; i < n; ++i) {
        const double frac = static_cast<double>(i) / static_cast<double>(n - 1);
        ev[static_cast<std::size_t>(i)] =
            lambda1 + frac * (lambdan - lambda1) * std::pow(rho, static_cast<double>(n - 1 - i));
    }
    return ev;
}

CsrMatrix diagonal_matrix(const std::vector<double>& eigenvalues) {
    const index_t n = static_cast<index_t>(eigenvalues.size());
    std::vector<Triplet> entries;
    entries.reserve(eigenvalues.size());
    for (index_t i = 0; i < n; ++i) {
        const double v = eigenvalues[static_cast<std::size_t>(i)];
        if (!(v > 0.0)) throw std::invalid_argument("spectrum: nonpositive eigenvalue");
        entries.push_back({i, i, v});
    }
    return CsrMatrix::from_triplets(n, entries);
}

CsrMatrix similarity_matrix(const std::vector<double>& eigenvalues, std::uint64_t seed) {
    const index_t n = static_cast<index_t>(eigenvalues.size());
    for (double v : eigenvalues) {
        if (!(v > 0.0)) throw std::invalid_argument("spectrum: nonpositive eigenvalue");
    }
    std::mt19937_64 gen(seed);
    Eigen::MatrixXd G(n, n);
    for (index_t j = 0; j < n; ++j) {
        for (index_t i = 0; i < n; ++i) {
            const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
            G(i, j) = 2.0 * u - 1.0;
        }
    }
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(G);
    Eigen::MatrixXd Q = qr.householderQ();
    // pin the column signs so the factorization is unambiguous
    const Eigen::MatrixXd R = qr.matrixQR().triangularView<Eigen::Upper>();
    for (index_t j = 0; j < n; ++j) {
        if (R(j, j) < 0.0) Q.col(j) = -Q.col(j);
    }
    const Eigen::VectorXd lam =
        Eigen::Map<const Eigen::VectorXd>(eigenvalues.data(), static_cast<Eigen::Index>(n));
    const Eigen::MatrixXd A = Q * lam.asDiagonal() * Q.transpose();
    // Evaluate into a fresh matrix: assigning A + A^T back into A would read
    // entries the assignment already overwrote, leaving the result slightly
    // asymmetric.  Exact symmetry matters downstream (symmetric-format I/O).
    const Eigen::MatrixXd S = 0.5 * (A + A.transpose());

    std::vector<Triplet> entries;
    entries.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    for (index_t i = 0; i < n; ++i) {
        for (index_t j = 0; j < n; ++j) {
            entries.push_back({i, j, S(i, j)});
        }
    }
    return CsrMatrix::from_triplets(n, entries);
}

}  // namespace cgest
