#include <doctest.h>

#include <cmath>

#include "fluctuon/ccr_weyl.hpp"
#include "fluctuon/errors.hpp"
#include "fluctuon/fluctuation.hpp"
#include "fluctuon/fock_oracle.hpp"
#include "fluctuon/random_objects.hpp"

using namespace fluctuon;

namespace {

GaugePolynomial quartic_hermitian(const MomentumGrid& g, Rng& rng) {
    return hermitian_part(GaugePolynomial(random_monomial(g, 2, 2, rng)));
}

// i sum_x <[A, sigma_x B]> and the symmetrized covariance, from Fock traces.
std::pair<double, double> oracle_pair(const GaugePolynomial& a, const GaugePolynomial& b, const FockRep& rep) {
    const int L = rep.grid().size();
    cplx comm = 0.0;
    double cov_ab = 0.0, cov_ba = 0.0;
    const double ma = oracle_expectation(a, rep).real();
    const double mb = oracle_expectation(b, rep).real();
    for (long x = 0; x < L; ++x) {
        const auto bx = translate(b, x);
        const auto ax = translate(a, x);
        comm += oracle_product(a, bx, rep) - oracle_product(bx, a, rep);
        cov_ab += oracle_product(a, bx, rep).real() - ma * mb;
        cov_ba += oracle_product(b, ax, rep).real() - ma * mb;
    }
    return {(cplx{0.0, 1.0} * comm).real(), 0.5 * (cov_ab + cov_ba)};
}

OneParticleFunction smooth(const MomentumGrid& g, double phase) {
    return OneParticleFunction::from(g, [phase](double p, int) { return std::exp(cplx{std::cos(p), 0.3 * std::sin(p + phase)}); });
}

OneParticleModel smooth_model(const MomentumGrid& g) {
    const auto rho = sample_dispersion(g, [](double p, int) { return 0.4 + 0.3 * std::sin(p); });
    const auto h = sample_dispersion(g, [](double p, int) { return -std::cos(p) + 0.2 * std::cos(2 * p); });
    return {g, rho, h};
}

} // namespace

TEST_SUITE("fluctuation") {

TEST_CASE("generator contract") {
    Rng rng(1);
    const MomentumGrid g(6);
    const auto model = random_model(g, rng);
    CHECK_THROWS_AS(FluctuationGenerator(GaugePolynomial(random_monomial(g, 1, 1, rng)), model), ContractError);
    const FluctuationGenerator a(random_quadratic_hermitian(g, rng), model);
    const FluctuationGenerator other(random_quadratic_hermitian(g, rng), random_model(g, rng));
    CHECK_THROWS_AS(symplectic_form(a, other), ContractError);
}

TEST_CASE("antisymmetry and the center") {
    Rng rng(2);
    const MomentumGrid g(8);
    const auto model = random_model(g, rng);
    const FluctuationGenerator q1(random_quadratic_hermitian(g, rng), model);
    const FluctuationGenerator q2(random_quadratic_hermitian(g, rng), model);
    const FluctuationGenerator k1(quartic_hermitian(g, rng), model);
    const FluctuationGenerator k2(quartic_hermitian(g, rng), model);

    CHECK(std::abs(symplectic_form(k1, k1)) < 1e-12);
    CHECK(std::abs(symplectic_form(q1, q2)) < 1e-12);
    CHECK(std::abs(symplectic_form(q1, k1)) < 1e-12);
    const double s = symplectic_form(k1, k2);
    CHECK(std::abs(s) > 1e-6);
    CHECK(std::abs(s + symplectic_form(k2, k1)) < 1e-12 * std::max(1.0, std::abs(s)));
    CHECK(symplectic_form_detail(k1, k2).residual < 1e-12 * std::max(1.0, std::abs(s)));

    const FluctuationGenerator sum(k1.observable() + (-2.0) * k2.observable(), model);
    const FluctuationGenerator k3(quartic_hermitian(g, rng), model);
    CHECK(symplectic_form(sum, k3) ==
          doctest::Approx(symplectic_form(k1, k3) - 2.0 * symplectic_form(k2, k3)).epsilon(1e-10));
}

TEST_CASE("sigma and w agree with Fock traces") {
    Rng rng(3);
    const MomentumGrid g(6);
    const auto model = random_model(g, rng);
    const auto rep = build_rep(model);
    for (int i = 0; i < 3; ++i) {
        const auto a = quartic_hermitian(g, rng);
        const auto b = i == 0 ? random_quadratic_hermitian(g, rng) : quartic_hermitian(g, rng);
        const FluctuationGenerator ga(a, model), gb(b, model);
        const auto [sig, cov] = oracle_pair(a, b, rep);
        CHECK(std::abs(symplectic_form(ga, gb) - sig) < 1e-10);
        CHECK(std::abs(covariance(ga, gb) - cov) < 1e-10);
    }
}

TEST_CASE("covariance examples") {
    const MomentumGrid g2(2);
    const OneParticleModel half(g2, Eigen::Vector2d(0.5, 0.5), Eigen::Vector2d(0.0, 0.0));
    Eigen::VectorXcd ones(2);
    ones << 1.0, 1.0;
    const OneParticleFunction f(g2, ones);
    const FluctuationGenerator n(GaugePolynomial(quadratic(f, f)), half);
    CHECK(covariance(n, n) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(fluctuation_state(n, 1.0) == doctest::Approx(std::exp(-0.25)).epsilon(1e-14));
    CHECK(fluctuation_state(n, 0.0) == 1.0);

    Rng rng(4);
    const MomentumGrid g(8);
    const auto model = random_model(g, rng);
    const FluctuationGenerator one(GaugePolynomial::identity(), model);
    CHECK(std::abs(covariance(one, one)) < 1e-13);
    for (int i = 0; i < 10; ++i) {
        const FluctuationGenerator a(random_hermitian(g, 6, rng), model);
        CHECK(covariance(a, a) >= -1e-12);
    }
}

TEST_CASE("variance of a*(f)a(f) and pure states") {
    Rng rng(5);
    const MomentumGrid g(10);
    const auto model = random_model(g, rng);
    const Eigen::VectorXd pure_rho = model.rho().unaryExpr([](double r) { return r < 0.5 ? 0.0 : 1.0; });
    const OneParticleModel pure(g, pure_rho, model.dispersion());
    for (int i = 0; i < 10; ++i) {
        const auto f = random_function(g, rng);
        const GaugePolynomial a(quadratic(f, f));
        double expected = 0.0;
        for (int k = 0; k < 10; ++k)
            expected += std::pow(std::abs(f(k)), 4) * model.rho()[k] * (1.0 - model.rho()[k]);
        expected /= 10.0;
        const FluctuationGenerator ga(a, model);
        CHECK(std::abs(covariance(ga, ga) - expected) < 1e-12);

        const FluctuationGenerator gp(a, pure);
        CHECK(std::abs(covariance(gp, gp)) < 1e-12);
        CHECK(fluctuation_state(gp, 3.0) == doctest::Approx(1.0).epsilon(1e-12));
        const FluctuationGenerator gq(random_quadratic_hermitian(g, rng), pure);
        CHECK(std::abs(covariance(gq, gq)) < 1e-12);
    }
}

TEST_CASE("gram assembly and the condensate kernel") {
    Rng rng(6);
    const MomentumGrid g(16);
    const auto model = random_model(g, rng);

    const auto single = build_gram({FluctuationGenerator(quartic_hermitian(g, rng), model)});
    CHECK(single.sigma.rows() == 1);
    CHECK(single.sigma(0, 0) == 0.0);

    std::vector<FluctuationGenerator> quartics;
    for (int i = 0; i < 6; ++i) quartics.emplace_back(quartic_hermitian(g, rng), model);
    const auto full = build_gram(quartics);
    CHECK(SymplecticSpace(full.sigma).rank(1e-9) == 6);
    CHECK((full.sigma + full.sigma.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((full.covariance - full.covariance.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(full.positivity_min_eig() >= -1e-10);
    CHECK(center_kernel(full).empty());

    std::vector<FluctuationGenerator> quads;
    for (int i = 0; i < 3; ++i) quads.emplace_back(random_quadratic_hermitian(g, rng), model);
    CHECK(center_kernel(build_gram(quads)).size() == 3);

    std::vector<FluctuationGenerator> mixed = quads;
    mixed.emplace_back(quartic_hermitian(g, rng), model);
    mixed.emplace_back(quartic_hermitian(g, rng), model);
    const auto gram = build_gram(mixed);
    for (int i = 0; i < 3; ++i) CHECK(gram.sigma.row(i).cwiseAbs().maxCoeff() < 1e-12);
    const auto kernel = center_kernel(gram, 1e-9);
    CHECK(kernel.size() == 3);
    for (const auto& v : kernel) CHECK((gram.sigma.transpose() * v).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK(gram.positivity_min_eig() >= -1e-10);
    CHECK_THROWS_AS(build_gram({}), ParameterError);
}

TEST_CASE("pointwise time invariance of quadratics") {
    Rng rng(7);
    const MomentumGrid g(12);
    const auto model = random_model(g, rng);
    std::vector<double> ts;
    for (int i = 0; i <= 100; ++i) ts.push_back(0.1 * i);
    const double zero[] = {0.0};

    const FluctuationGenerator q(random_quadratic_hermitian(g, rng), model);
    CHECK(time_invariance_drift(q, zero) == 0.0);
    CHECK(time_invariance_drift(q, ts) <= 1e-9);

    const FluctuationGenerator k(quartic_hermitian(g, rng), model);
    CHECK(time_invariance_drift(k, zero) == 0.0);
    CHECK(time_invariance_drift(k, ts) > 1e-3);
    CHECK_THROWS_AS(time_invariance_drift(k, std::span<const double>{}), ParameterError);
}

TEST_CASE("spin sectors") {
    Rng rng(8);
    const MomentumGrid g(6, 2);
    Eigen::VectorXd rho(12), h(12);
    for (int k = 0; k < 6; ++k) {
        const double r = rng.uniform(0.1, 0.9);
        const double e = -std::cos(g.momentum(k));
        rho[g.mode(k, 0)] = rho[g.mode(k, 1)] = r;
        h[g.mode(k, 0)] = h[g.mode(k, 1)] = e;
    }
    const OneParticleModel degenerate(g, rho, h);
    std::vector<FluctuationGenerator> probes;
    for (int i = 0; i < 3; ++i) probes.emplace_back(random_hermitian(g, 4, rng), degenerate);
    std::vector<double> ts;
    for (int i = 0; i <= 20; ++i) ts.push_back(0.5 * i);
    const auto f = random_function(g, rng), f2 = random_function(g, rng);
    const auto rep = spin_center_enlargement(degenerate, f, f2, probes, ts);
    CHECK(rep.degenerate_sectors);
    CHECK(rep.cross_central);
    CHECK(rep.cross_sigma_max <= 1e-9);
    CHECK(rep.cross_drift_max <= 1e-9);

    Eigen::VectorXd rho_split = rho, h_split = h;
    for (int k = 0; k < 6; ++k) {
        rho_split[g.mode(k, 0)] = 0.2;
        rho_split[g.mode(k, 1)] = 0.8;
        h_split[g.mode(k, 1)] += 0.5;
    }
    const OneParticleModel split(g, rho_split, h_split);
    std::vector<FluctuationGenerator> probes2;
    for (int i = 0; i < 3; ++i) probes2.emplace_back(random_hermitian(g, 4, rng), split);
    const auto rep2 = spin_center_enlargement(split, f, f2, probes2, ts);
    CHECK_FALSE(rep2.degenerate_sectors);
    CHECK_FALSE(rep2.cross_central);
    CHECK(rep2.cross_drift_max > 1e-6);
    CHECK(rep2.within_sigma_max <= 1e-9);
    CHECK(rep2.within_drift_max <= 1e-9);

    const MomentumGrid g1(6);
    const auto m1 = random_model(g1, rng);
    CHECK_THROWS_AS(spin_center_enlargement(m1, random_function(g1, rng), random_function(g1, rng), {}, ts),
                    ParameterError);
}

TEST_CASE("convergence under doubling L") {
    auto w_of = [](int L) {
        const MomentumGrid g(L);
        const auto model = smooth_model(g);
        const FluctuationGenerator a(hermitian_part(GaugePolynomial(quadratic(smooth(g, 0.0), smooth(g, 1.0)))), model);
        return covariance(a, a);
    };
    const double w32 = w_of(32), w64 = w_of(64);
    CHECK(std::abs(w64 - w32) <= 1e-6 * std::abs(w64));

    auto sigma_of = [](int L) {
        const MomentumGrid g(L);
        const auto model = smooth_model(g);
        const FluctuationGenerator a(hermitian_part(GaugePolynomial(quartic(smooth(g, 0.0), smooth(g, 0.5), smooth(g, 1.0), smooth(g, 1.5)))), model);
        const FluctuationGenerator b(hermitian_part(GaugePolynomial(quartic(smooth(g, 2.0), smooth(g, 2.5), smooth(g, 3.0), smooth(g, 0.7), cplx{0.0, 1.0}))), model);
        return symplectic_form(a, b);
    };
    const double s16 = sigma_of(16), s32 = sigma_of(32);
    CHECK(std::abs(s32) > 1e-6);
    CHECK(std::abs(s32 - s16) <= 1e-6 * std::abs(s32));
}

}
