#include "fluctuon/fluctuation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fluctuon/errors.hpp"
#include "fluctuon/parallel.hpp"

namespace fluctuon {

namespace {

bool same_model(const OneParticleModel& a, const OneParticleModel& b) {
    return a.grid() == b.grid() && a.rho() == b.rho() && a.dispersion() == b.dispersion();
}

void require_shared_model(const FluctuationGenerator& a, const FluctuationGenerator& b) {
    if (!same_model(a.model(), b.model()))
        throw ContractError("fluctuation: generators must share one model");
}

// sum_x F(a, sigma_x b) over all term pairs.
template <typename PairFn>
cplx translation_sum(const FluctuationGenerator& a, const FluctuationGenerator& b, PairFn&& pair) {
    const int L = a.model().grid().size();
    cplx acc = 0.0;
    for (const auto& tb : b.observable().terms()) {
        for (long x = 0; x < L; ++x) {
            const GaugeMonomial shifted =
                map_functions(tb, [x](const OneParticleFunction& f) { return translate(f, x); });
            for (const auto& ta : a.observable().terms()) acc += pair(ta, shifted);
        }
    }
    return acc;
}

cplx commutator_sum(const FluctuationGenerator& a, const FluctuationGenerator& b) {
    const auto& model = a.model();
    return translation_sum(a, b, [&](const GaugeMonomial& ta, const GaugeMonomial& tb) {
        return commutator_expectation_any(ta, tb, model);
    });
}

double covariance_impl(const FluctuationGenerator& a, const FluctuationGenerator& b) {
    const auto& model = a.model();
    const cplx s = translation_sum(a, b, [&](const GaugeMonomial& ta, const GaugeMonomial& tb) {
        return product_expectation(ta, tb, model);
    });
    const double L = a.model().grid().size();
    return s.real() - L * a.mean() * b.mean();
}

} // namespace

FluctuationGenerator::FluctuationGenerator(GaugePolynomial observable, OneParticleModel model)
    : observable_(std::move(observable)), model_(std::move(model)), mean_(0.0) {
    if (!observable_.is_self_adjoint())
        throw ContractError("FluctuationGenerator: observable is not self-adjoint");
    const cplx m = quasifree_expectation(observable_, model_);
    if (std::abs(m.imag()) > 1e-12 * std::max(1.0, std::abs(m)))
        throw ContractError("FluctuationGenerator: expectation is not real");
    mean_ = m.real();
}

SymplecticValue symplectic_form_detail(const FluctuationGenerator& a, const FluctuationGenerator& b) {
    require_shared_model(a, b);
    const cplx s = commutator_sum(a, b);
    // i * s is real when s is purely imaginary.
    return {-s.imag(), std::abs(s.real())};
}

double symplectic_form(const FluctuationGenerator& a, const FluctuationGenerator& b) {
    return symplectic_form_detail(a, b).value;
}

double covariance(const FluctuationGenerator& a, const FluctuationGenerator& b) {
    require_shared_model(a, b);
    if (&a == &b) return covariance_impl(a, a);
    return 0.5 * (covariance_impl(a, b) + covariance_impl(b, a));
}

double fluctuation_state(const FluctuationGenerator& a, double alpha) {
    return std::exp(-alpha * alpha * covariance(a, a));
}

double FluctuationGram::positivity_min_eig() const {
    const Eigen::MatrixXcd h =
        covariance.cast<cplx>() + cplx{0.0, 0.5} * sigma.cast<cplx>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

FluctuationGram build_gram(std::vector<FluctuationGenerator> generators) {
    if (generators.empty()) throw ParameterError("build_gram: need at least one generator");
    for (const auto& g : generators) require_shared_model(generators.front(), g);

    const auto n = static_cast<Eigen::Index>(generators.size());
    FluctuationGram gram{std::move(generators), Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Zero(n, n)};

    std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i; j < n; ++j) pairs.emplace_back(i, j);
    std::vector<double> sig(pairs.size(), 0.0);
    std::vector<double> cov(pairs.size(), 0.0);
    const auto& gens = gram.generators;
    parallel_for(pairs.size(), [&](std::size_t k) {
        const auto [i, j] = pairs[k];
        const auto& gi = gens[static_cast<std::size_t>(i)];
        const auto& gj = gens[static_cast<std::size_t>(j)];
        if (i != j) sig[k] = symplectic_form(gi, gj);
        cov[k] = covariance(gi, gj);
    });
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        const auto [i, j] = pairs[k];
        gram.sigma(i, j) = sig[k];
        gram.sigma(j, i) = -sig[k];
        gram.covariance(i, j) = cov[k];
        gram.covariance(j, i) = cov[k];
    }
    return gram;
}

std::vector<Eigen::VectorXd> center_kernel(const FluctuationGram& gram, double tol) {
    if (!(tol > 0.0)) throw ParameterError("center_kernel: tol must be > 0");
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(gram.sigma, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    std::vector<Eigen::VectorXd> out;
    for (Eigen::Index k = 0; k < gram.sigma.cols(); ++k) {
        const double sv = k < s.size() ? s[k] : 0.0;
        if (sv < tol) out.push_back(svd.matrixV().col(k));
    }
    return out;
}

double time_invariance_drift(const FluctuationGenerator& a, std::span<const double> t_grid) {
    if (t_grid.empty()) throw ParameterError("time_invariance_drift: empty time grid");
    double worst = 0.0;
    for (const double t : t_grid) {
        const GaugePolynomial diff = a.observable() - evolve(a.observable(), a.model(), t);
        if (diff.is_zero()) continue;
        const FluctuationGenerator c(diff, a.model());
        worst = std::max(worst, covariance(c, c));
    }
    return worst;
}

OneParticleFunction sector_projection(const OneParticleFunction& f, int alpha) {
    const auto& grid = f.grid();
    if (alpha < 0 || alpha >= grid.spin_dim()) throw ParameterError("sector_projection: bad sector");
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(grid.modes());
    for (int k = 0; k < grid.size(); ++k) v[grid.mode(k, alpha)] = f(k, alpha);
    return {grid, std::move(v)};
}

SpinEnlargementReport spin_center_enlargement(const OneParticleModel& model, const OneParticleFunction& f,
                                              const OneParticleFunction& g,
                                              std::span<const FluctuationGenerator> probes,
                                              std::span<const double> t_grid, int alpha, int beta,
                                              double tol) {
    const auto& grid = model.grid();
    if (grid.spin_dim() < 2)
        throw ParameterError("spin_center_enlargement: need spin_dim >= 2, got " +
                             std::to_string(grid.spin_dim()));
    if (alpha == beta || alpha < 0 || beta < 0 || alpha >= grid.spin_dim() || beta >= grid.spin_dim())
        throw ParameterError("spin_center_enlargement: sectors must be distinct and in range");

    SpinEnlargementReport report{};
    report.degenerate_sectors = true;
    for (int k = 0; k < grid.size(); ++k) {
        const int ia = grid.mode(k, alpha);
        const int ib = grid.mode(k, beta);
        if (std::abs(model.rho()[ia] - model.rho()[ib]) > 1e-12 ||
            std::abs(model.dispersion()[ia] - model.dispersion()[ib]) > 1e-12)
            report.degenerate_sectors = false;
    }

    const auto fa = sector_projection(f, alpha);
    const auto ga = sector_projection(g, alpha);
    const auto gb = sector_projection(g, beta);
    const FluctuationGenerator cross(hermitian_part(GaugePolynomial(quadratic(fa, gb))), model);
    const FluctuationGenerator within(hermitian_part(GaugePolynomial(quadratic(fa, ga))), model);

    for (const auto& b : probes) {
        report.cross_sigma_max = std::max(report.cross_sigma_max, std::abs(symplectic_form(cross, b)));
        report.within_sigma_max = std::max(report.within_sigma_max, std::abs(symplectic_form(within, b)));
    }
    report.cross_drift_max = time_invariance_drift(cross, t_grid);
    report.within_drift_max = time_invariance_drift(within, t_grid);
    report.cross_central = report.cross_sigma_max <= tol && report.cross_drift_max <= tol;
    return report;
}

} // namespace fluctuon
