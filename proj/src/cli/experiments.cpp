#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>

#include "fluctuon/ccr_weyl.hpp"
#include "fluctuon/cli.hpp"
#include "fluctuon/errors.hpp"
#include "fluctuon/fluctuation.hpp"
#include "fluctuon/fock_oracle.hpp"
#include "fluctuon/product_chain.hpp"
#include "fluctuon/random_objects.hpp"
#include "fluctuon/scattering.hpp"

namespace fluctuon::cli {

namespace {

using nlohmann::json;

struct Outcome {
    json results = json::object();
    std::vector<std::string> violations;
    std::vector<Series> plots;

    void check(bool ok, const std::string& what) {
        if (!ok) violations.push_back(what);
    }
};

std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
}

std::vector<double> time_grid(const ExperimentConfig& c) {
    std::vector<double> out;
    const auto steps = static_cast<long>(std::floor(c.t_max / c.t_step + 1e-9));
    for (long i = 0; i <= steps; ++i) out.push_back(static_cast<double>(i) * c.t_step);
    return out;
}

OneParticleModel make_model(const ExperimentConfig& c, const MomentumGrid& grid, Rng& rng) {
    Eigen::VectorXd h(grid.modes());
    for (int k = 0; k < grid.size(); ++k) {
        const double p = grid.momentum(k);
        for (int a = 0; a < grid.spin_dim(); ++a) {
            double v = 0.0;
            if (c.dispersion == "cos") v = -std::cos(p);
            else if (c.dispersion == "quadratic") v = p * p;
            else v = -std::cos(p) + 0.3 * rng.uniform(-1.0, 1.0);
            h[grid.mode(k, a)] = v;
        }
    }
    if (c.rho == "kms") return kms_symbol(grid, h, c.beta.value_or(1.0), c.mu);
    Eigen::VectorXd rho(grid.modes());
    for (Eigen::Index j = 0; j < rho.size(); ++j) {
        if (c.rho == "random") rho[j] = rng.uniform(0.05, 0.95);
        else if (c.rho == "pure") rho[j] = h[j] < c.mu ? 1.0 : 0.0;
        else rho[j] = std::stod(c.rho);
    }
    return {grid, rho, h};
}

GaugePolynomial random_quartic_hermitian(const MomentumGrid& grid, Rng& rng) {
    return hermitian_part(GaugePolynomial(random_monomial(grid, 2, 2, rng)));
}

Outcome wick_check(const ExperimentConfig& c) {
    Outcome out;
    Rng rng(c.seed);
    const MomentumGrid grid(c.L, c.s);
    const auto model = make_model(c, grid, rng);
    const auto rep = build_rep(model);
    Series series{"wick", {"sample", "wick", "oracle", "error"}, {}};
    double worst = 0.0;
    double worst_product = 0.0;
    double worst_unbalanced = 0.0;
    for (int i = 0; i < c.samples; ++i) {
        const auto p = random_hermitian(grid, c.degree, rng, 2);
        const cplx wick = quasifree_expectation(p, model);
        const cplx oracle = oracle_expectation(p, rep);
        const double err = std::abs(wick - oracle);
        worst = std::max(worst, err);
        series.rows.push_back({static_cast<double>(i), wick.real(), oracle.real(), err});

        const auto a = random_hermitian(grid, std::max(2, c.degree / 2), rng);
        const auto b = random_hermitian(grid, std::max(2, c.degree / 2), rng);
        const cplx prod = quasifree_expectation(multiply(a, b), model);
        worst_product = std::max(worst_product, std::abs(prod - oracle_product(a, b, rep)));

        const GaugePolynomial odd(random_monomial(grid, 1 + i % 2, i % 2, rng));
        worst_unbalanced = std::max(worst_unbalanced, std::abs(oracle_expectation(odd, rep)));
    }
    out.results["samples"] = c.samples;
    out.results["modes"] = grid.modes();
    out.results["max_error"] = worst;
    out.results["max_product_error"] = worst_product;
    out.results["max_unbalanced_oracle"] = worst_unbalanced;
    out.results["anticommutator_residual"] = rep.anticommutator_residual();
    out.check(worst <= 1e-10, "Wick determinant deviates from the Fock trace by " + sci(worst));
    out.check(worst_product <= 1e-10, "normal-ordered product deviates from the Fock product by " + sci(worst_product));
    out.check(worst_unbalanced <= 1e-12, "unbalanced monomial has nonzero Fock expectation " + sci(worst_unbalanced));
    out.plots.push_back(std::move(series));
    return out;
}

Outcome center_scan(const ExperimentConfig& c) {
    Outcome out;
    Rng rng(c.seed);
    const MomentumGrid grid(c.L, c.s);
    const auto model = make_model(c, grid, rng);
    const int quadratics = std::max(1, c.samples / 2);
    const int others = std::max(1, c.samples - quadratics);
    std::vector<FluctuationGenerator> gens;
    for (int i = 0; i < quadratics; ++i) gens.emplace_back(random_quadratic_hermitian(grid, rng), model);
    for (int i = 0; i < others; ++i) {
        // Every other generator has the full degree so the scan is not all quadratics.
        auto p = i % 2 == 0 ? hermitian_part(GaugePolynomial(random_monomial(grid, c.degree / 2, c.degree / 2, rng)))
                            : random_hermitian(grid, c.degree, rng);
        gens.emplace_back(std::move(p), model);
    }
    const auto gram = build_gram(gens);
    const auto m = gram.sigma.rows();
    double center_max = 0.0;
    for (int i = 0; i < quadratics; ++i) center_max = std::max(center_max, gram.sigma.row(i).cwiseAbs().maxCoeff());
    const auto kernel = center_kernel(gram, c.tol);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(gram.sigma);
    double kernel_leak = 0.0;
    for (const auto& v : kernel) kernel_leak = std::max(kernel_leak, (gram.sigma.transpose() * v).cwiseAbs().maxCoeff());

    out.results["generators"] = m;
    out.results["quadratic_generators"] = quadratics;
    out.results["kernel_dim"] = kernel.size();
    out.results["min_singular_value"] = svd.singularValues().minCoeff();
    out.results["center_sigma_max"] = center_max;
    out.results["positivity_min_eig"] = gram.positivity_min_eig();
    out.results["kernel_leak"] = kernel_leak;
    out.check(center_max <= 1e-9, "quadratic generator has symplectic coupling " + sci(center_max));
    out.check(gram.positivity_min_eig() >= -1e-10,
              "cov + (i/2) sigma has eigenvalue " + sci(gram.positivity_min_eig()));
    out.check(static_cast<int>(kernel.size()) >= quadratics, "kernel smaller than the quadratic span");
    out.check(kernel_leak <= 10.0 * c.tol, "kernel vector couples with strength " + sci(kernel_leak));

    Series series{"gram", {"i", "j", "sigma", "covariance"}, {}};
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j)
            series.rows.push_back({static_cast<double>(i), static_cast<double>(j), gram.sigma(i, j), gram.covariance(i, j)});
    out.plots.push_back(std::move(series));
    return out;
}

Outcome condensate(const ExperimentConfig& c) {
    Outcome out;
    Rng rng(c.seed);
    const MomentumGrid grid(c.L, c.s);
    const auto model = make_model(c, grid, rng);
    Series series{"variance", {"sample", "w", "formula"}, {}};
    double worst = 0.0;
    double pure_worst = 0.0;
    const Eigen::VectorXd pure_rho = model.rho().unaryExpr([](double r) { return r < 0.5 ? 0.0 : 1.0; });
    const OneParticleModel pure(grid, pure_rho, model.dispersion());
    double state_sample = 1.0;
    for (int i = 0; i < c.samples; ++i) {
        const auto f = random_function(grid, rng);
        const GaugePolynomial a(quadratic(f, f));
        const double w = covariance(FluctuationGenerator(a, model), FluctuationGenerator(a, model));
        double formula = 0.0;
        for (Eigen::Index j = 0; j < f.values().size(); ++j) {
            const double r = model.rho()[j];
            formula += std::pow(std::abs(f.values()[j]), 4) * r * (1.0 - r);
        }
        formula /= grid.size();
        worst = std::max(worst, std::abs(w - formula));
        const FluctuationGenerator gp(a, pure);
        pure_worst = std::max(pure_worst, std::abs(covariance(gp, gp)));
        if (i == 0) state_sample = fluctuation_state(FluctuationGenerator(a, model), 1.0);
        series.rows.push_back({static_cast<double>(i), w, formula});
    }

    // The kernel of a mixed gram is the condensate; split_degenerate sees the same.
    std::vector<FluctuationGenerator> gens;
    gens.emplace_back(random_quadratic_hermitian(grid, rng), model);
    gens.emplace_back(random_quartic_hermitian(grid, rng), model);
    gens.emplace_back(random_quartic_hermitian(grid, rng), model);
    const auto gram = build_gram(gens);
    const auto kernel = center_kernel(gram, c.tol);
    const SymplecticSpace space(gram.sigma);
    const auto split = split_degenerate(space, c.tol);

    out.results["variance_max_error"] = worst;
    out.results["pure_variance_max"] = pure_worst;
    out.results["fluctuation_state_alpha1"] = state_sample;
    out.results["kernel_dim"] = kernel.size();
    out.results["split_kernel_dim"] = split.kernel.cols();
    out.results["split_residual"] = split.reconstruction_residual(space);
    out.check(worst <= 1e-12, "variance formula mismatch " + sci(worst));
    out.check(pure_worst <= 1e-12, "pure state has fluctuation " + sci(pure_worst));
    out.check(static_cast<std::size_t>(split.kernel.cols()) == kernel.size(), "split and kernel disagree");
    out.check(!kernel.empty(), "quadratic generator missing from the kernel");
    out.plots.push_back(std::move(series));
    return out;
}

Outcome time_invariance(const ExperimentConfig& c) {
    Outcome out;
    Rng rng(c.seed);
    const MomentumGrid grid(c.L, c.s);
    const auto model = make_model(c, grid, rng);
    const auto ts = time_grid(c);
    std::vector<FluctuationGenerator> quads;
    for (int i = 0; i < std::max(1, c.samples / 2); ++i) quads.emplace_back(random_quadratic_hermitian(grid, rng), model);
    const FluctuationGenerator quartic(random_quartic_hermitian(grid, rng), model);

    Series series{"drift", {"t", "quadratic_drift", "quartic_drift"}, {}};
    double quad_max = 0.0;
    double quart_max = 0.0;
    for (const double t : ts) {
        const double one[] = {t};
        double q = 0.0;
        for (const auto& a : quads) q = std::max(q, time_invariance_drift(a, one));
        const double d = time_invariance_drift(quartic, one);
        quad_max = std::max(quad_max, q);
        quart_max = std::max(quart_max, d);
        series.rows.push_back({t, q, d});
    }
    out.results["t_points"] = ts.size();
    out.results["quadratic_drift_max"] = quad_max;
    out.results["quartic_drift_max"] = quart_max;
    out.check(quad_max <= 1e-9, "quadratic generator drifts by " + sci(quad_max));
    const bool mixed = (model.rho().array() * (1.0 - model.rho().array())).maxCoeff() > 1e-3;
    if (mixed && c.t_max >= 1.0)
        out.check(quart_max >= 1e-3, "generic quartic drift only " + sci(quart_max));

    if (grid.spin_dim() >= 2) {
        std::vector<FluctuationGenerator> probes;
        for (int i = 0; i < 3; ++i) probes.emplace_back(random_hermitian(grid, c.degree, rng), model);
        const auto f = random_function(grid, rng);
        const auto g = random_function(grid, rng);
        const auto rep = spin_center_enlargement(model, f, g, probes, ts, 0, 1, c.tol);
        out.results["spin"] = {{"degenerate_sectors", rep.degenerate_sectors},
                               {"cross_sigma_max", rep.cross_sigma_max},
                               {"cross_drift_max", rep.cross_drift_max},
                               {"within_sigma_max", rep.within_sigma_max},
                               {"within_drift_max", rep.within_drift_max},
                               {"cross_central", rep.cross_central}};
        if (rep.degenerate_sectors) out.check(rep.cross_central, "degenerate sectors but cross quadratic not central");
        out.check(rep.within_sigma_max <= 1e-9, "within-sector quadratic not central");
    }
    out.plots.push_back(std::move(series));
    return out;
}

SiteModel make_site(const ExperimentConfig& c) {
    Eigen::VectorXd pops(c.n);
    Eigen::VectorXd h(c.n);
    for (int j = 0; j < c.n; ++j) {
        pops[j] = c.populations.empty() ? static_cast<double>(c.n - j) : c.populations[static_cast<std::size_t>(j)];
        h[j] = c.h_diag.empty() ? static_cast<double>(j) : c.h_diag[static_cast<std::size_t>(j)];
    }
    pops /= pops.sum();
    return SiteModel::diagonal(pops, h);
}

Outcome product_chain(const ExperimentConfig& c) {
    Outcome out;
    Rng rng(c.seed);
    const auto site = make_site(c);
    const auto kernel = condensate_basis(site, c.tol);
    std::vector<double> pops(site.n());
    for (int j = 0; j < site.n(); ++j) pops[static_cast<std::size_t>(j)] = site.rho0()(j, j).real();
    std::sort(pops.begin(), pops.end());
    bool distinct = true;
    for (std::size_t j = 1; j < pops.size(); ++j) distinct = distinct && pops[j] - pops[j - 1] > 1e-6;

    int found = 0;
    for (int i = 0; i < c.samples; ++i) {
        const auto a = random_hermitian_matrix(site.n(), rng);
        try {
            const auto w = maximality_witness(a, site);
            if (std::abs(w.sigma) > 1e-3 * a.norm()) ++found;
        } catch (const NoWitnessError&) {
        }
    }
    const double rate = static_cast<double>(found) / c.samples;

    const auto tracial = SiteModel::diagonal(Eigen::VectorXd::Constant(site.n(), 1.0 / site.n()), site.h_diag());
    const auto basis = traceless_hermitian_basis(site.n());
    double tracial_max = 0.0;
    for (const auto& m : basis)
        for (const auto& k : basis) tracial_max = std::max(tracial_max, std::abs(site_symplectic(m, k, tracial)));

    Eigen::MatrixXcd probe = Eigen::MatrixXcd::Zero(site.n(), site.n());
    probe(0, 1) = 1.0;
    probe(1, 0) = 1.0;
    const auto ts = time_grid(c);
    const auto qp = quasiperiodicity_report(probe, site, ts);

    out.results["n"] = site.n();
    out.results["kernel_dim"] = kernel.size();
    out.results["witness_success_rate"] = rate;
    out.results["tracial_sigma_max"] = tracial_max;
    out.results["recurrence_times"] = qp.near_recurrences;
    out.results["exact_period"] = qp.exact_period ? json(*qp.exact_period) : json(nullptr);
    if (distinct) out.check(static_cast<int>(kernel.size()) == site.n() - 1, "kernel dimension differs from n - 1");
    out.check(rate == 1.0, "maximality witness missing for some samples");
    out.check(tracial_max <= 1e-13, "tracial state has symplectic coupling " + sci(tracial_max));

    if (site.n() <= range_two_max_n) {
        const auto r2 = range_two_gram(site, c.tol);
        out.results["range_two"] = {{"dimension", r2.dimension},
                                    {"rank", r2.rank},
                                    {"kernel_dim", r2.kernel_dim},
                                    {"pair_count", r2.pair_count},
                                    {"positivity_min_eig", r2.positivity_min_eig},
                                    {"diagonal_sigma_max", r2.diagonal_sigma_max}};
        out.check(r2.positivity_min_eig >= -1e-10, "range-two gram violates positivity");
        out.check(r2.diagonal_sigma_max <= 1e-12, "diagonal two-site generator couples");
        out.check(2 * r2.pair_count == r2.rank, "pair count does not match the rank");
    }

    Series series{"recurrence", {"t", "distance"}, {}};
    for (std::size_t i = 0; i < qp.times.size(); ++i) series.rows.push_back({qp.times[i], qp.distances[i]});
    out.plots.push_back(std::move(series));
    return out;
}

Outcome weyl(const ExperimentConfig& c) {
    Outcome out;
    Rng rng(c.seed);
    const int dim = c.dim % 2 == 0 ? c.dim : c.dim - 1;
    double square = 0.0, compat = 0.0, inner_min = 1e300, pairing = 0.0, cocycle = 0.0;
    Series series{"complex_structure", {"sample", "square_residual", "compatibility_residual", "pairing_residual"}, {}};
    for (int i = 0; i < c.samples; ++i) {
        const SymplecticSpace space(random_antisymmetric(dim, rng));
        const auto j = build_complex_structure(space);
        const auto basis = canonical_basis(space);
        square = std::max(square, j.square_residual());
        compat = std::max(compat, j.compatibility_residual(space));
        inner_min = std::min(inner_min, j.positivity_min_eig(space));
        pairing = std::max(pairing, basis.pairing_residual(space));
        series.rows.push_back({static_cast<double>(i), j.square_residual(), j.compatibility_residual(space),
                               basis.pairing_residual(space)});

        Eigen::VectorXd f(dim), g(dim), h(dim);
        for (int k = 0; k < dim; ++k) {
            f[k] = rng.normal();
            g[k] = rng.normal();
            h[k] = rng.normal();
        }
        const auto fg = weyl_product(f, g, space);
        const auto left = weyl_product(fg.sum, h, space);
        const auto gh = weyl_product(g, h, space);
        const auto right = weyl_product(f, gh.sum, space);
        cocycle = std::max(cocycle, std::abs(fg.phase * left.phase - gh.phase * right.phase));
    }

    const int pairs = dim / 2;
    Eigen::VectorXd energies(pairs);
    for (int k = 0; k < pairs; ++k) energies[k] = rng.uniform(0.1, 2.0);
    const auto kms = kms_weyl_covariance(energies, c.beta.value_or(1.0), 0.5);
    const BogoliubovMap t(random_symplectic_map(pairs, 0.3, rng), kms.space);
    const auto moved = t.apply(kms.covariance);

    Eigen::MatrixXd degenerate = random_antisymmetric(dim + 1, rng);
    const SymplecticSpace odd(degenerate);
    const auto split = split_degenerate(odd);

    out.results["dim"] = dim;
    out.results["J_residuals"] = {{"square", square}, {"compatibility", compat}, {"inner_min_eig", inner_min}};
    out.results["pairing_residual_max"] = pairing;
    out.results["pair_count"] = pairs;
    out.results["cocycle_max"] = cocycle;
    out.results["positivity_min_eig"] = kms.covariance.positivity_min_eig();
    out.results["bogoliubov_positivity_min_eig"] = moved.positivity_min_eig();
    out.results["kernel_dim"] = split.kernel.cols();
    out.check(square <= 1e-12, "J^2 + 1 residual " + sci(square));
    out.check(compat <= 1e-12, "J compatibility residual " + sci(compat));
    out.check(inner_min > 0.0, "induced inner product not positive");
    out.check(pairing <= 1e-10, "canonical pairing residual " + sci(pairing));
    out.check(cocycle <= 1e-12, "Weyl cocycle mismatch " + sci(cocycle));
    out.check(kms.covariance.positivity_min_eig() >= -1e-10, "KMS covariance not a state");
    out.check(moved.positivity_min_eig() >= -1e-10, "Bogoliubov image not a state");
    out.check(split.kernel.cols() == 1, "odd-dimensional form should leave one condensate direction");
    out.plots.push_back(std::move(series));
    return out;
}

std::vector<double> decay_window(PhaseFamily phase) {
    switch (phase) {
    case PhaseFamily::linear: return geometric_grid(0.5, 5.0, 20);
    case PhaseFamily::quadratic: return geometric_grid(10.0, 1e3, 20);
    case PhaseFamily::cubic: return geometric_grid(1e2, 1e4, 20);
    }
    return {};
}

Outcome scattering(const ExperimentConfig& c) {
    Outcome out;
    const auto phase = parse_phase_family(c.phase);
    const auto weight = parse_weight_family(c.weight);
    const auto probe = ScatteringProbe::family(phase, weight, c.beta);
    const bool gaussian_p2 = phase == PhaseFamily::quadratic && weight == WeightFamily::gauss;

    std::vector<double> ts{0.0};
    for (const double t : geometric_grid(0.1, c.T_max, 41)) ts.push_back(t);
    Series g_series{"G", {"t", "Re", "Im", "abs"}, {}};
    double oracle = 0.0;
    for (const double t : ts) {
        const cplx g = oscillatory_G(probe, t);
        g_series.rows.push_back({t, g.real(), g.imag(), std::abs(g)});
        if (gaussian_p2) {
            const cplx ref = c.beta ? gaussian_fresnel_kms_G(t, *c.beta) : gaussian_fresnel_G(t);
            oracle = std::max(oracle, std::abs(g - ref));
        }
    }

    json fit = nullptr;
    if (weight != WeightFamily::zero) {
        try {
            const auto d = decay_exponent(probe, decay_window(phase));
            fit = {{"exponent", d.exponent}, {"ci", d.ci_half_width}};
            if (!c.beta && weight == WeightFamily::gauss) {
                const double expected = phase == PhaseFamily::quadratic ? -0.5 : phase == PhaseFamily::cubic ? -1.0 / 3.0 : -1.5;
                if (phase == PhaseFamily::linear) out.check(d.exponent < expected, "linear phase decays too slowly");
                else out.check(std::abs(d.exponent - expected) <= 0.05, "decay exponent off calibration: " + sci(d.exponent));
            }
        } catch (const NumericError& e) {
            fit = {{"exponent", nullptr}, {"note", e.what()}};
        }
    }

    const auto points = static_cast<std::size_t>(std::ceil(8.0 * std::log10(c.T_max))) + 1;
    VerdictOptions options;
    options.tail_tol = c.tail_tol;
    const auto v = scattering_integral(probe, geometric_grid(1.0, c.T_max, points), options);
    const cplx d = perturbed_mode_evolution(probe, 1.0, c.T_max);

    Series i_series{"I", {"T", "Re", "Im", "abs"}, {}};
    for (const auto& [T, I] : v.I_values) i_series.rows.push_back({T, I.real(), I.imag(), std::abs(I)});

    out.results["probe"] = probe.label;
    out.results["integrand_decay"] = fit;
    out.results["verdict"] = {{"verdict", to_string(v.verdict)},
                              {"tail_sup", v.tail_sup},
                              {"decay_exponent", v.decay_exponent ? json(*v.decay_exponent) : json(nullptr)},
                              {"exponent_ci", v.exponent_ci},
                              {"growth_exponent", v.growth_exponent},
                              {"remainder_estimate", v.remainder_estimate ? json(*v.remainder_estimate) : json(nullptr)},
                              {"beta", c.beta ? json(*c.beta) : json(nullptr)}};
    out.results["displacement_abs"] = std::abs(d);
    if (gaussian_p2) {
        out.results["oracle_error"] = oracle;
        out.check(oracle <= 1e-7, "closed-form mismatch " + sci(oracle));
        const Verdict expected = c.beta ? Verdict::converged : Verdict::diverged;
        out.check(v.verdict == expected, "expected verdict " + to_string(expected) + ", got " + to_string(v.verdict));
    }
    if (weight == WeightFamily::zero) out.check(v.verdict == Verdict::converged, "zero weight must converge");

    AbelianessProbe ab;
    ab.dispersion = [](double p) { return p * p; };
    const auto quad = asymptotic_abelianess(ab, geometric_grid(10.0, 1e3, 20));
    ab.dispersion = [](double p) { return 0.7 * p; };
    const auto lin = asymptotic_abelianess(ab, geometric_grid(10.0, 1e3, 20));
    out.results["abelianess"] = {{"quadratic_exponent", quad.exponent ? json(*quad.exponent) : json(nullptr)},
                                 {"quadratic_stationary_points", quad.stationary_points},
                                 {"linear_no_decay_flag", lin.no_decay_flag}};
    out.check(quad.exponent && *quad.exponent <= -0.5, "pair scattering integrand does not decay");
    out.check(lin.no_decay_flag, "linear dispersion not flagged");

    out.plots.push_back(std::move(g_series));
    out.plots.push_back(std::move(i_series));
    return out;
}

Outcome dispatch(const ExperimentConfig& c);

Outcome full_suite(const ExperimentConfig& c) {
    Outcome out;
    for (const auto& name : experiment_names()) {
        if (name == "full-suite") continue;
        ExperimentConfig sub = c;
        sub.experiment = name;
        if (name == "wick-check") sub.L = std::max(2, std::min(c.L, 12 / c.s));
        Outcome part;
        try {
            part = dispatch(sub);
        } catch (const Error& e) {
            part.violations.push_back(std::string("error: ") + e.what());
        }
        out.results[name] = part.results;
        for (const auto& v : part.violations) out.violations.push_back(name + ": " + v);
        for (auto& s : part.plots) {
            s.name = name + "-" + s.name;
            out.plots.push_back(std::move(s));
        }
    }
    return out;
}

Outcome dispatch(const ExperimentConfig& c) {
    if (c.experiment == "wick-check") return wick_check(c);
    if (c.experiment == "center-scan") return center_scan(c);
    if (c.experiment == "condensate") return condensate(c);
    if (c.experiment == "time-invariance") return time_invariance(c);
    if (c.experiment == "product-chain") return product_chain(c);
    if (c.experiment == "weyl") return weyl(c);
    if (c.experiment == "scattering") return scattering(c);
    if (c.experiment == "full-suite") return full_suite(c);
    throw ConfigError("unknown experiment '" + c.experiment + "'");
}

std::string sibling_path(const std::string& base, const std::string& name) {
    const std::filesystem::path p(base);
    return (p.parent_path() / (p.stem().string() + "-" + name + p.extension().string())).string();
}

} // namespace

RunResult run_experiment(const ExperimentConfig& config) {
    validate(config);
    Outcome outcome;
    try {
        outcome = dispatch(config);
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        outcome.violations.push_back(std::string("error: ") + e.what());
    }
    RunResult result;
    result.report["schema_version"] = schema_version;
    result.report["experiment"] = config.experiment;
    result.report["config"] = to_json(config);
    result.report["results"] = outcome.results;
    result.report["violations"] = outcome.violations;
    result.report["passed"] = outcome.violations.empty();
    result.plots = std::move(outcome.plots);
    result.exit_code = outcome.violations.empty() ? 0 : 1;
    return result;
}

int run(const ExperimentConfig& config) {
    RunResult result;
    try {
        result = run_experiment(config);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    }
    const std::string text = result.report.dump(2) + "\n";
    try {
        if (config.report == "-") {
            std::cout << text;
        } else {
            std::ofstream out(config.report, std::ios::trunc);
            if (!out) throw IoError("cannot write report to '" + config.report + "'");
            out << text;
        }
        if (!config.csv.empty())
            for (std::size_t i = 0; i < result.plots.size(); ++i)
                emit_plot_data(result.plots[i], i == 0 ? config.csv : sibling_path(config.csv, result.plots[i].name));
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return 1;
    }
    for (const auto& v : result.report["violations"]) std::cerr << "violation: " << v.get<std::string>() << '\n';
    return result.exit_code;
}

} // namespace fluctuon::cli
