#pragma once

// Momentum-space one-particle kinematics on the discrete torus.
//
// Normalization ledger (used by every other module):
//   inner product   <f|g> = (1/L) sum_{k,alpha} conj(f) g
//   translations    sum over x = 0..L-1 with no prefactor
//   smearing        a(f) = sum_k conj(f_k)/sqrt(L) a_k
// With these choices w(a*(f)a(f)) = (1/L) sum_k |f_k|^4 rho_k (1 - rho_k).

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace fluctuon {

using cplx = std::complex<double>;

/// Momenta p_k = 2 pi k / L - pi, k = 0..L-1, times an internal (spin)
/// index of dimension spin_dim. Mode index is k * spin_dim + alpha.
class MomentumGrid {
public:
    MomentumGrid(int size, int spin_dim = 1);

    int size() const noexcept { return size_; }
    int spin_dim() const noexcept { return spin_dim_; }
    int modes() const noexcept { return size_ * spin_dim_; }
    double momentum(int k) const noexcept;
    std::vector<double> points() const;
    int mode(int k, int alpha) const noexcept { return k * spin_dim_ + alpha; }

    bool operator==(const MomentumGrid&) const = default;

private:
    int size_;
    int spin_dim_;
};

class OneParticleFunction {
public:
    explicit OneParticleFunction(MomentumGrid grid);
    OneParticleFunction(MomentumGrid grid, Eigen::VectorXcd values);

    /// f(p, alpha) sampled on the grid.
    static OneParticleFunction from(MomentumGrid grid,
                                    const std::function<cplx(double, int)>& f);
    /// Indicator of a single momentum mode (k, alpha) scaled so that
    /// <f|f> = 1.
    static OneParticleFunction mode(MomentumGrid grid, int k, int alpha = 0);

    const MomentumGrid& grid() const noexcept { return grid_; }
    const Eigen::VectorXcd& values() const noexcept { return values_; }
    cplx operator()(int k, int alpha = 0) const { return values_[grid_.mode(k, alpha)]; }

    bool operator==(const OneParticleFunction& other) const;

private:
    MomentumGrid grid_;
    Eigen::VectorXcd values_;
};

/// Occupation symbol rho(p, alpha) and dispersion h(p, alpha).
class OneParticleModel {
public:
    OneParticleModel(MomentumGrid grid, Eigen::VectorXd rho, Eigen::VectorXd dispersion);

    const MomentumGrid& grid() const noexcept { return grid_; }
    const Eigen::VectorXd& rho() const noexcept { return rho_; }
    const Eigen::VectorXd& dispersion() const noexcept { return dispersion_; }

private:
    MomentumGrid grid_;
    Eigen::VectorXd rho_;
    Eigen::VectorXd dispersion_;
};

/// Samples h(p, alpha) on every mode of the grid.
Eigen::VectorXd sample_dispersion(const MomentumGrid& grid,
                                  const std::function<double(double, int)>& h);

/// (1/L) sum conj(f) g. Throws DimensionError on grid mismatch.
cplx inner_product(const OneParticleFunction& f, const OneParticleFunction& g);

/// (1/L) sum conj(g) w f, the matrix element <g|w f> of a diagonal symbol.
cplx weighted_inner_product(const OneParticleFunction& g, const Eigen::VectorXd& weight,
                            const OneParticleFunction& f);

/// Space translation by x sites: multiplies by e^{i p x}.
OneParticleFunction translate(const OneParticleFunction& f, long x);

/// Quasifree one-particle dynamics: multiplies by e^{i h(p) t}.
OneParticleFunction evolve(const OneParticleFunction& f, const OneParticleModel& model, double t);

/// Fermi-Dirac symbol 1 / (1 + e^{beta (h - mu)}). Throws ParameterError
/// for beta <= 0.
OneParticleModel kms_symbol(const MomentumGrid& grid, const Eigen::VectorXd& dispersion,
                            double beta, double mu);

} // namespace fluctuon
