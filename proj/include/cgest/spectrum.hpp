/// @file spectrum.hpp
/// @brief Synthetic SPD test problems with prescribed spectra.

#ifndef CGEST_SPECTRUM_HPP
#define CGEST_SPECTRUM_HPP

#include <cstdint>
#include <vector>

#include "cgest/csr_matrix.hpp"

namespace cgest {

/// Prescribed-spectrum SPD test problems.  Spectra are returned in
/// ascending order; all entries must end up strictly positive.

/// lambda_i on a geometric progression from lambda1 to lambdan.
std::vector<double> geometric_spectrum(double lambda1, double lambdan, index_t n);

/// lambda_i on a uniform (arithmetic) progression from lambda1 to lambdan.
std::vector<double> linear_spectrum(double lambda1, double lambdan, index_t n);

/// `clusters` geometrically spaced centers, eigenvalues spread round-robin
/// across them with multiplicative jitter of relative size `spread`.
std::vector<double> clustered_spectrum(double lambda1, double lambdan, index_t n,
                                       index_t clusters, std::uint64_t seed,
                                       double spread = 1e-3);

/// `plateaus` distinct geometrically spaced values, each repeated to fill n.
std::vector<double> staircase_spectrum(double lambda1, double lambdan, index_t n,
                                       index_t plateaus);

/// Uniformly spaced spectrum damped toward lambda1 by rho^{n-i}: small
/// eigenvalues crowd together, which drags iteration counts far beyond n
/// in floating point.
std::vector<double> damped_linear_spectrum(double lambda1, double lambdan, index_t n,
                                           double rho);

/// diag(eigenvalues): the spectrum is exact by construction.
CsrMatrix diagonal_matrix(const std::vector<double>& eigenvalues);

/// Q diag(eigenvalues) Q^T for a seeded random orthogonal Q; dense pattern.
CsrMatrix similarity_matrix(const std::vector<double>& eigenvalues, std::uint64_t seed);

}  // namespace cgest

#endif  // CGEST_SPECTRUM_HPP
