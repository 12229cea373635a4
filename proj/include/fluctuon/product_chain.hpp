#pragma once

// Fluctuations of a translation-invariant product state on a qudit chain
// with strictly local dynamics h = sum_j h_j e_jj.

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace fluctuon {

class SiteModel {
public:
    /// Throws ContractError unless rho0 is hermitian, positive and of
    /// trace 1 (to 1e-13), and h_diag has length n.
    SiteModel(Eigen::MatrixXcd rho0, Eigen::VectorXd h_diag);

    /// Diagonal single-site state.
    static SiteModel diagonal(const Eigen::VectorXd& populations, const Eigen::VectorXd& h_diag);

    int n() const noexcept { return static_cast<int>(rho0_.rows()); }
    const Eigen::MatrixXcd& rho0() const noexcept { return rho0_; }
    const Eigen::VectorXd& h_diag() const noexcept { return h_; }
    bool rho_is_diagonal(double tol = 1e-13) const;

private:
    Eigen::MatrixXcd rho0_;
    Eigen::VectorXd h_;
};

/// i tr(rho0 [m, k]). Throws ContractError for non-hermitian input.
double site_symplectic(const Eigen::MatrixXcd& m, const Eigen::MatrixXcd& k, const SiteModel& site);

/// Hilbert-Schmidt orthonormal traceless hermitian basis (generalized
/// Gell-Mann matrices), n^2 - 1 elements: symmetric, antisymmetric, then
/// diagonal.
std::vector<Eigen::MatrixXcd> traceless_hermitian_basis(int n);

/// Kernel of the site symplectic form over the traceless hermitian basis.
/// Requires rho0 diagonal unless exploratory is set (PreconditionError).
std::vector<Eigen::MatrixXcd> condensate_basis(const SiteModel& site, double tol = 1e-9,
                                               bool exploratory = false);

struct MaximalityWitness {
    Eigen::MatrixXcd c_matrix; ///< c e_jk + conj(c) e_kj
    std::complex<double> c;
    int j;
    int k;
    double sigma; ///< site_symplectic(A, C)
};

/// Finds C = c e_jk + conj(c) e_kj with site_symplectic(A, C) != 0, trying
/// c in {1, i} on the best off-diagonal entry, then a 16-point phase grid
/// over every entry. Throws NoWitnessError when A is diagonal (central) or
/// no candidate works.
MaximalityWitness maximality_witness(const Eigen::MatrixXcd& a, const SiteModel& site);

struct QuasiperiodicityReport {
    std::vector<double> times;
    std::vector<double> distances; ///< ||A(t) - A(0)||_F
    std::vector<double> near_recurrences;
    bool stationary = false;
    std::optional<double> exact_period;
};

/// A(t) = e^{ith} A e^{-ith}. Near recurrences are interior local minima of
/// the distance below recurrence_tol * ||A||_F. The exact period is reported
/// when all active Bohr frequencies are rationally related (denominators
/// up to max_denominator).
QuasiperiodicityReport quasiperiodicity_report(const Eigen::MatrixXcd& a, const SiteModel& site,
                                               const std::vector<double>& t_grid,
                                               double recurrence_tol = 0.05, int max_denominator = 1000);

struct RangeTwoReport {
    int dimension = 0;
    std::vector<Eigen::MatrixXcd> generators; ///< n^2 x n^2 two-site operators
    Eigen::MatrixXd sigma;
    Eigen::MatrixXd covariance;
    int rank = 0;
    int kernel_dim = 0;
    int pair_count = 0;
    double positivity_min_eig = 0.0;
    /// max |sigma(D, B)| over diagonal (x) diagonal generators D.
    double diagonal_sigma_max = 0.0;
};

inline constexpr int range_two_max_n = 3;

/// Gram over two-site generators E_a (x) E_b (E_0 = 1/sqrt(n), identity
/// pair excluded) with the exact translation sum; in a product state only
/// overlapping placements x in {-1, 0, 1} contribute. Throws CapacityError
/// for n > 3.
RangeTwoReport range_two_gram(const SiteModel& site, double tol = 1e-9);

/// Best rational approximation p/q of x with q <= max_denominator.
std::pair<long, long> best_rational(double x, long max_denominator);

} // namespace fluctuon
