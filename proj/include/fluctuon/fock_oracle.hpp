#pragma once

// Exact Fock-space representation of the CAR algebra on a small lattice.
// Ground truth for the Wick-determinant code paths.
//
// Modes are the momentum modes j = k * spin_dim + alpha, Jordan-Wigner
// ordered by j; basis state bit j is the occupation of mode j. The
// quasifree density is diagonal in this basis.

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "fluctuon/car_wick.hpp"

namespace fluctuon {

inline constexpr int fock_max_modes = 12;

using SparseOperator = Eigen::SparseMatrix<cplx>;

class FockRep {
public:
    const MomentumGrid& grid() const noexcept { return grid_; }
    int modes() const noexcept { return grid_.modes(); }
    std::size_t dimension() const noexcept { return std::size_t{1} << modes(); }

    /// a_j for mode j.
    const SparseOperator& annihilator(int j) const { return annihilators_.at(static_cast<std::size_t>(j)); }
    /// a*_j for mode j.
    const SparseOperator& creator(int j) const { return creators_.at(static_cast<std::size_t>(j)); }
    /// Diagonal of the density operator.
    const Eigen::VectorXd& density() const noexcept { return density_; }
    /// Mode energies used for Heisenberg evolution, H = sum_j h_j n_j.
    const Eigen::VectorXd& energies() const noexcept { return energies_; }

    /// a(f) = sum_j conj(f_j)/sqrt(L) a_j, or a*(f) when creator is set.
    SparseOperator smeared(const OneParticleFunction& f, bool creator) const;

    /// Largest entry of {a_j, a_k} and {a_j, a*_k} - delta_jk over all pairs.
    double anticommutator_residual() const;

private:
    friend FockRep build_rep(const OneParticleModel& model);
    explicit FockRep(MomentumGrid grid) : grid_(grid) {}

    MomentumGrid grid_;
    std::vector<SparseOperator> annihilators_;
    std::vector<SparseOperator> creators_;
    Eigen::VectorXd density_;
    Eigen::VectorXd energies_;
};

/// Throws CapacityError when L * spin_dim exceeds fock_max_modes.
FockRep build_rep(const OneParticleModel& model);

/// trace(density * P).
cplx oracle_expectation(const GaugePolynomial& p, const FockRep& rep);

/// trace(density * e^{iHt} P e^{-iHt}) with H = sum_j h_j n_j.
cplx oracle_evolve(const GaugePolynomial& p, const FockRep& rep, double t);

/// trace(density * A * e^{iHt} B e^{-iHt}); unlike oracle_evolve this is a
/// genuinely time-dependent two-time correlation.
cplx oracle_two_time(const GaugePolynomial& a, const GaugePolynomial& b, const FockRep& rep, double t);

/// trace(density * A * B) for the (not normal-ordered) operator product.
cplx oracle_product(const GaugePolynomial& a, const GaugePolynomial& b, const FockRep& rep);

} // namespace fluctuon
