#pragma once

// Finite-dimensional CCR substrate: symplectic spaces, complex structures,
// canonical pairs, Weyl products and quasifree (Gaussian) Weyl states.
//
// Conventions: sigma(f, g) = f^T S g; W(f) W(g) = e^{-i sigma(f,g)/2} W(f+g);
// omega(W(f)) = exp(-f^T A f). A state is positive iff A - (i/4) S >= 0,
// so on a canonical cell A >= 1/4.

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace fluctuon {

class SymplecticSpace {
public:
    /// Throws ContractError if S is not antisymmetric to 1e-12 (relative);
    /// the stored matrix is exactly antisymmetric.
    explicit SymplecticSpace(const Eigen::MatrixXd& sigma);

    /// pairs canonical cells [[0, 1], [-1, 0]] along the diagonal.
    static SymplecticSpace canonical(int pairs);

    int dim() const noexcept { return static_cast<int>(sigma_.rows()); }
    const Eigen::MatrixXd& sigma() const noexcept { return sigma_; }
    double form(const Eigen::VectorXd& f, const Eigen::VectorXd& g) const { return f.dot(sigma_ * g); }
    int rank(double tol = 1e-10) const;

private:
    Eigen::MatrixXd sigma_;
};

struct ComplexStructure {
    Eigen::MatrixXd J;

    /// max |J^2 + 1|
    double square_residual() const;
    /// max |sigma(J e_i, e_j) + sigma(e_i, J e_j)|
    double compatibility_residual(const SymplecticSpace& space) const;
    /// Smallest eigenvalue of the real part of <f|g> = sigma(f, Jg) + i sigma(f, g).
    double positivity_min_eig(const SymplecticSpace& space) const;
    /// <f|g> = sigma(f, Jg) + i sigma(f, g)
    std::complex<double> inner(const SymplecticSpace& space, const Eigen::VectorXd& f,
                               const Eigen::VectorXd& g) const;
};

/// Polar factor J = -S |S|^{-1} with |S| = (S^T S)^{1/2}. Throws
/// DegeneracyError for odd or singular S (split_degenerate first).
ComplexStructure build_complex_structure(const SymplecticSpace& space);

struct CanonicalBasis {
    std::vector<Eigen::VectorXd> chi;
    std::vector<Eigen::VectorXd> eta;
    std::vector<Eigen::VectorXd> kernel;

    int pair_count() const noexcept { return static_cast<int>(chi.size()); }
    /// Largest deviation of the pairings from sigma(chi_i, eta_j) = delta_ij,
    /// sigma(chi_i, chi_j) = sigma(eta_i, eta_j) = 0.
    double pairing_residual(const SymplecticSpace& space) const;
};

/// Canonical pairs plus kernel directions (singular value < tol).
CanonicalBasis canonical_basis(const SymplecticSpace& space, double tol = 1e-10);

struct DegenerateSplit {
    Eigen::MatrixXd kernel;  ///< orthonormal columns, condensate directions
    Eigen::MatrixXd range;   ///< orthonormal columns spanning the complement
    SymplecticSpace restricted; ///< range^T S range, nondegenerate

    /// max |range * restricted * range^T - S|
    double reconstruction_residual(const SymplecticSpace& space) const;
};

DegenerateSplit split_degenerate(const SymplecticSpace& space, double tol = 1e-10);

struct WeylProduct {
    std::complex<double> phase;
    Eigen::VectorXd sum;
};

/// W(f) W(g) = phase * W(f + g).
WeylProduct weyl_product(const Eigen::VectorXd& f, const Eigen::VectorXd& g, const SymplecticSpace& space);

class WeylCovariance {
public:
    /// Throws StateError when A is not symmetric or A - (i/4) S has an
    /// eigenvalue below -1e-10.
    WeylCovariance(Eigen::MatrixXd a, const SymplecticSpace& space);

    const Eigen::MatrixXd& matrix() const noexcept { return a_; }
    double positivity_min_eig() const noexcept { return min_eig_; }

private:
    Eigen::MatrixXd a_;
    double min_eig_;
};

/// Smallest eigenvalue of the hermitian matrix A - (i/4) S.
double weyl_positivity_min_eig(const Eigen::MatrixXd& a, const Eigen::MatrixXd& sigma);

/// exp(-f^T A f)
double quasifree_weyl_expectation(const Eigen::VectorXd& f, const WeylCovariance& cov);

struct KmsWeylState {
    SymplecticSpace space;
    WeylCovariance covariance;
    Eigen::VectorXd occupation; ///< n_k = x / (1 - x), x = z e^{-beta h_k}
    std::vector<int> condensate_candidates; ///< modes with n_k above the cap
};

/// Bosonic KMS covariance on canonical cells (x_k, p_k):
///   A_k = (1/4) (1 + z e^{-beta h}) / (1 - z e^{-beta h}) = (2 n_k + 1) / 4.
/// Throws ParameterError for beta <= 0 or z <= 0, and DegeneracyError when
/// z e^{-beta h_k} >= 1 (a condensate mode; split it off instead).
KmsWeylState kms_weyl_covariance(const Eigen::VectorXd& h, double beta, double z,
                                 double occupation_cap = 1e6);

class BogoliubovMap {
public:
    /// Throws ContractError, reporting the deviation, unless
    /// T^T S T = S to 1e-10.
    BogoliubovMap(Eigen::MatrixXd t, const SymplecticSpace& space);

    const Eigen::MatrixXd& matrix() const noexcept { return t_; }
    /// omega o gamma: A -> T^T A T.
    WeylCovariance apply(const WeylCovariance& cov) const;
    Eigen::VectorXd apply(const Eigen::VectorXd& f) const { return t_ * f; }

private:
    Eigen::MatrixXd t_;
    SymplecticSpace space_;
};

/// Gaussian state on a degenerate space: the nondegenerate part carries a
/// proper covariance, the kernel part a freely assigned weight c >= 0,
///   omega(W(f)) = exp(-f_r^T A f_r) * exp(-c |f_k|^2).
class CondensateWeylState {
public:
    CondensateWeylState(DegenerateSplit split, WeylCovariance range_covariance, double condensate_weight);

    double expectation(const Eigen::VectorXd& f) const;
    /// Extends a symplectic map on the range coordinates by the identity on
    /// the kernel.
    Eigen::MatrixXd extend_dynamics(const Eigen::MatrixXd& range_map) const;
    const DegenerateSplit& split() const noexcept { return split_; }

private:
    DegenerateSplit split_;
    WeylCovariance range_cov_;
    double weight_;
};

} // namespace fluctuon
