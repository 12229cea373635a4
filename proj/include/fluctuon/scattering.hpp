#pragma once

// Oscillatory integrals G(t) = int e^{i Phi(p) t} m(p) dp, their time
// integrals and the convergence verdict for the linearly perturbed
// fluctuation dynamics.

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fluctuon {

enum class PhaseFamily { linear, quadratic, cubic };
enum class WeightFamily { gauss, bump, zero };

PhaseFamily parse_phase_family(const std::string& name);   // "p", "p2", "p3"
WeightFamily parse_weight_family(const std::string& name); // "gauss", "bump", "zero"
std::string to_string(PhaseFamily f);
std::string to_string(WeightFamily w);

struct ScatteringProbe {
    std::function<double(double)> phase;
    std::function<std::complex<double>(double)> weight;
    double p_min = 0.0;
    double p_max = 0.0;
    /// When set the weight is multiplied by (1 - e^{-beta Phi(p)}).
    std::optional<double> beta;
    std::string label;

    /// Closed-form families. Gaussian weight e^{-p^2} is truncated at six
    /// standard deviations; the bump exp(-1/(1-p^2)) lives on [-1, 1].
    static ScatteringProbe family(PhaseFamily phase, WeightFamily weight, std::optional<double> beta = {});

    std::complex<double> effective_weight(double p) const;
    /// int |m| over the interval; ParameterError unless it is finite and
    /// stable (relative change <= 1e-8) under panel doubling.
    double weight_l1() const;
};

/// Adaptive G7K15 on panels spanning at most pi of phase. NumericError when
/// the estimated absolute error exceeds 1e-8.
std::complex<double> oscillatory_G(const ScatteringProbe& probe, double t);

/// Reference values for the Gaussian families: sqrt(pi)/sqrt(1 - i t), and
/// with the thermal factor sqrt(pi)(1/sqrt(1 - i t) - 1/sqrt(1 + beta - i t)).
std::complex<double> gaussian_fresnel_G(double t);
std::complex<double> gaussian_fresnel_kms_G(double t, double beta);

std::vector<double> geometric_grid(double lo, double hi, std::size_t points);

struct DecayFit {
    double exponent = 0.0;
    double ci_half_width = 0.0; ///< two standard errors of the slope
    std::vector<double> times;
    std::vector<double> magnitudes;
};

/// Least-squares slope of log|G| against log t. Requires >= 20 positive,
/// increasing times. NumericError when |G| drops below floor.
DecayFit decay_exponent(const ScatteringProbe& probe, const std::vector<double>& t_window,
                        double floor = 1e-10);

/// Slope fit of log y against log x (x, y > 0).
DecayFit log_log_fit(const std::vector<double>& x, const std::vector<double>& y);

enum class Verdict { converged, diverged, inconclusive };
std::string to_string(Verdict v);

struct ConvergenceVerdict {
    std::vector<std::pair<double, std::complex<double>>> I_values;
    /// sup |G(t)| over t >= T_max, sampled at T_max * 2^k, k = 0..4.
    double tail_sup = 0.0;
    /// Integrand decay over the last decade of T; empty when |G| is below
    /// the numeric floor there (faster than any measured power).
    std::optional<double> decay_exponent;
    double exponent_ci = 0.0;
    /// Slope of log|I| against log T over the last decade.
    double growth_exponent = 0.0;
    bool monotone_growth = false;
    /// int_{T_max}^inf |G| extrapolated from the fitted power law.
    std::optional<double> remainder_estimate;
    std::optional<double> beta;
    Verdict verdict = Verdict::inconclusive;
};

struct VerdictOptions {
    double tail_tol = 1e-3;
    double growth_threshold = 0.1;
    double integrable_exponent = -1.1;
    std::size_t fit_points = 20;
};

/// I(T) = int_0^T G(t) dt, accumulated over the increasing T_grid with a
/// geometric refinement inside every step. Verdict: converged when
/// tail_sup <= tail_tol and the integrand decays integrably; diverged when
/// |I| grows monotonically with exponent > growth_threshold over the last
/// decade; inconclusive otherwise.
ConvergenceVerdict scattering_integral(const ScatteringProbe& probe, const std::vector<double>& T_grid,
                                       const VerdictOptions& options = {});

/// i * int_0^T G(t) dt * f_coupling: the c-number shift picked up by the
/// perturbed mode.
std::complex<double> perturbed_mode_evolution(const ScatteringProbe& probe, std::complex<double> f_coupling,
                                              double T);

struct AbelianessProbe {
    /// Creators per side of the gauge-invariant generators (1 or 2).
    int pairs = 2;
    std::function<double(double)> dispersion;
    double total_momentum = 0.0;
    double center_a = -0.5; ///< envelope centre for p_1, q_1
    double center_b = 0.5;  ///< envelope centre for p_2, q_2
    double width = 0.5;
};

struct AbelianessReport {
    std::vector<double> times;
    std::vector<double> magnitudes;
    double value_at_zero = 0.0;
    std::optional<double> exponent; ///< empty when the integrand is constant
    double exponent_ci = 0.0;
    int stationary_points = 0;      ///< of the relative-coordinate phase
    bool decays = false;
    bool no_decay_flag = false;
};

/// Momentum integral with phase t(sum h(p_j) - sum h(q_k)) and the delta of
/// total momentum eliminated: at fixed total momentum P the pair momenta are
/// P/2 +- r and P/2 +- s, and Gaussian envelopes make the fibre integral a
/// product of two one-dimensional oscillatory integrals in r and s.
/// ParameterError for pairs outside {1, 2}.
AbelianessReport asymptotic_abelianess(const AbelianessProbe& probe, const std::vector<double>& t_window);

} // namespace fluctuon
