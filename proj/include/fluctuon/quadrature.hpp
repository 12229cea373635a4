#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

namespace fluctuon {

using ComplexIntegrand = std::function<std::complex<double>(double)>;

struct QuadratureResult {
    std::complex<double> value;
    double error = 0.0;          ///< summed Gauss-Kronrod estimate
    std::size_t intervals = 0;
    bool converged = false;
};

/// One 7/15-point Gauss-Kronrod panel.
QuadratureResult gauss_kronrod15(const ComplexIntegrand& f, double a, double b);

/// Globally adaptive G7K15 over the panels given by consecutive
/// breakpoints: the panel with the largest error is bisected until the
/// total error is below max(abs_tol, rel_tol * |value|) or max_intervals is
/// reached (converged is then false).
QuadratureResult integrate_adaptive(const ComplexIntegrand& f, const std::vector<double>& breakpoints,
                                    double abs_tol, double rel_tol, std::size_t max_intervals = 1u << 22);

} // namespace fluctuon
