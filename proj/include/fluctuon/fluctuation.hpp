#pragma once

// Fluctuation operators of a translation-invariant quasifree state on the
// L-site torus. All space sums are exact finite sums over x = 0..L-1:
//
//   sigma(A, B) = i sum_x omega([A, sigma_x B])
//   w(A, B)     = Re sum_x (omega(A sigma_x B) - omega(A) omega(B))
//
// With these conventions the complex gram cov + (i/2) sigma is positive
// semidefinite, which is the positivity check applied to every gram.

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "fluctuon/car_wick.hpp"

namespace fluctuon {

class FluctuationGenerator {
public:
    /// Throws ContractError if the observable is not self-adjoint or its
    /// expectation is not real to 1e-12.
    FluctuationGenerator(GaugePolynomial observable, OneParticleModel model);

    const GaugePolynomial& observable() const noexcept { return observable_; }
    const OneParticleModel& model() const noexcept { return model_; }
    double mean() const noexcept { return mean_; }

private:
    GaugePolynomial observable_;
    OneParticleModel model_;
    double mean_;
};

struct SymplecticValue {
    double value;
    /// |Re sum_x omega([A, sigma_x B])|, which vanishes for self-adjoint
    /// inputs up to rounding.
    double residual;
};

SymplecticValue symplectic_form_detail(const FluctuationGenerator& a, const FluctuationGenerator& b);
double symplectic_form(const FluctuationGenerator& a, const FluctuationGenerator& b);
double covariance(const FluctuationGenerator& a, const FluctuationGenerator& b);

/// Quasifree state on the fluctuation algebra, exp(-alpha^2 w(A)).
double fluctuation_state(const FluctuationGenerator& a, double alpha);

struct FluctuationGram {
    std::vector<FluctuationGenerator> generators;
    Eigen::MatrixXd sigma;
    Eigen::MatrixXd covariance;

    /// Smallest eigenvalue of the hermitian matrix cov + (i/2) sigma.
    double positivity_min_eig() const;
};

/// Assembles sigma and covariance over all generator pairs (in parallel,
/// merged in generator order). Throws ParameterError on an empty list and
/// ContractError when generators use different models.
FluctuationGram build_gram(std::vector<FluctuationGenerator> generators);

/// Orthonormal basis of the null space of gram.sigma: right singular
/// vectors with singular value < tol.
std::vector<Eigen::VectorXd> center_kernel(const FluctuationGram& gram, double tol = 1e-9);

/// max over t of w(A - tau_t A). Throws ParameterError for an empty grid.
double time_invariance_drift(const FluctuationGenerator& a, std::span<const double> t_grid);

/// f restricted to spin sector alpha (zero in every other sector).
OneParticleFunction sector_projection(const OneParticleFunction& f, int alpha);

struct SpinEnlargementReport {
    bool degenerate_sectors;
    /// max over probes of |sigma(cross, B)| for the cross-sector quadratic
    /// a*(f_alpha) a(g_beta) + h.c.
    double cross_sigma_max;
    double cross_drift_max;
    /// Same for the within-sector quadratic a*(f_alpha) a(g_alpha) + h.c.
    double within_sigma_max;
    double within_drift_max;
    bool cross_central;
};

/// Checks whether cross-sector quadratics join the center. Throws
/// ParameterError when the model has fewer than two spin sectors.
SpinEnlargementReport spin_center_enlargement(const OneParticleModel& model, const OneParticleFunction& f,
                                              const OneParticleFunction& g,
                                              std::span<const FluctuationGenerator> probes,
                                              std::span<const double> t_grid, int alpha = 0, int beta = 1,
                                              double tol = 1e-9);

} // namespace fluctuon
