#pragma once

// Seeded random inputs shared by the experiments and the test suites.

#include "fluctuon/car_wick.hpp"
#include "fluctuon/rng.hpp"

namespace fluctuon {

/// Complex normal entries on every mode.
OneParticleFunction random_function(const MomentumGrid& grid, Rng& rng);

/// rho uniform in [0.05, 0.95] and dispersion -cos p + small random
/// perturbation per mode.
OneParticleModel random_model(const MomentumGrid& grid, Rng& rng);

/// c * a*(c_1)..a*(c_n) a(d_1)..a(d_m) with random functions and a complex
/// normal coefficient.
GaugeMonomial random_monomial(const MomentumGrid& grid, int creators, int annihilators, Rng& rng);

/// a*(f) a(g) + a*(g) a(f) with random f, g.
GaugePolynomial random_quadratic_hermitian(const MomentumGrid& grid, Rng& rng);

/// M + M* for a random balanced monomial M with 1..max_degree/2 creators;
/// terms extra monomials are added before symmetrizing.
GaugePolynomial random_hermitian(const MomentumGrid& grid, int max_degree, Rng& rng, int terms = 1);

/// M - M^T for a Gaussian M: antisymmetric, almost surely nondegenerate
/// in even dimension.
Eigen::MatrixXd random_antisymmetric(int dim, Rng& rng);

/// Cayley transform (1 - K/2)^{-1}(1 + K/2) of K = S H, with S the
/// canonical form on `pairs` cells and H a random symmetric matrix of the
/// given scale. The result preserves S exactly up to rounding.
Eigen::MatrixXd random_symplectic_map(int pairs, double scale, Rng& rng);

/// Random n x n hermitian matrix (complex normal entries, hermitian part).
Eigen::MatrixXcd random_hermitian_matrix(int n, Rng& rng);

} // namespace fluctuon
