#include <doctest.h>

#include <cmath>

#include "fluctuon/car_wick.hpp"
#include "fluctuon/errors.hpp"
#include "fluctuon/fock_oracle.hpp"
#include "fluctuon/random_objects.hpp"

using namespace fluctuon;

namespace {

OneParticleModel half_filled(const MomentumGrid& g) {
    return {g, Eigen::VectorXd::Constant(g.modes(), 0.5), Eigen::VectorXd::Zero(g.modes())};
}

GaugeMonomial creator_only(const OneParticleFunction& f) {
    GaugeMonomial m;
    m.creators.push_back(f);
    return m;
}

bool same(const GaugePolynomial& a, const GaugePolynomial& b, const OneParticleModel& model) {
    // Canonical forms agree iff their difference cancels.
    return (a - b).is_zero() || std::abs(quasifree_expectation(a - b, model)) < 1e-14;
}

} // namespace

TEST_SUITE("car_wick") {

TEST_CASE("normalization, two-point function and gauge selection rule") {
    const MomentumGrid g(4);
    const auto model = half_filled(g);
    CHECK(quasifree_expectation(GaugePolynomial::identity(), model) == cplx{1.0, 0.0});

    const auto f = OneParticleFunction::mode(g, 1);
    CHECK(std::abs(quasifree_expectation(quadratic(f, f), model) - 0.5) < 1e-15);
    CHECK(quasifree_expectation(creator_only(f), model) == cplx{0.0, 0.0});
}

TEST_CASE("two-point function is <g|rho f>") {
    Rng rng(4);
    const MomentumGrid g(5);
    const auto model = random_model(g, rng);
    const auto f = random_function(g, rng);
    const auto h = random_function(g, rng);
    const cplx direct = weighted_inner_product(h, model.rho(), f);
    CHECK(std::abs(quasifree_expectation(quadratic(f, h), model) - direct) < 1e-14);
}

TEST_CASE("quartic is the 2x2 determinant of two-point functions") {
    Rng rng(6);
    const MomentumGrid g(4);
    const auto model = random_model(g, rng);
    const auto f1 = random_function(g, rng), f2 = random_function(g, rng);
    const auto g1 = random_function(g, rng), g2 = random_function(g, rng);
    auto w = [&](const OneParticleFunction& c, const OneParticleFunction& d) {
        return weighted_inner_product(d, model.rho(), c);
    };
    // a*(f1) a*(f2) a(g2) a(g1)
    const cplx expected = w(f1, g1) * w(f2, g2) - w(f1, g2) * w(f2, g1);
    CHECK(std::abs(quasifree_expectation(quartic(f1, f2, g1, g2), model) - expected) < 1e-13);
}

TEST_CASE("canonical form merges, orders and drops") {
    Rng rng(8);
    const MomentumGrid g(4);
    const auto f = random_function(g, rng);
    const auto h = random_function(g, rng);
    const GaugePolynomial twice = GaugePolynomial(quadratic(f, h)) + GaugePolynomial(quadratic(f, h));
    REQUIRE(twice.terms().size() == 1);
    CHECK(std::abs(twice.terms()[0].coefficient - 2.0) < 1e-15);
    CHECK((GaugePolynomial(quadratic(f, h)) - GaugePolynomial(quadratic(f, h))).is_zero());

    // a*(f) a*(f) = 0
    CHECK(GaugePolynomial(quartic(f, f, h, random_function(g, rng))).is_zero());

    // a*(f) a*(h) = - a*(h) a*(f): the two orderings cancel.
    const auto k1 = random_function(g, rng), k2 = random_function(g, rng);
    CHECK((GaugePolynomial(quartic(f, h, k1, k2)) + GaugePolynomial(quartic(h, f, k1, k2))).is_zero());
}

TEST_CASE("adjoint is an involution and conjugates expectations") {
    Rng rng(10);
    const MomentumGrid g(5);
    const auto model = random_model(g, rng);
    const auto f = random_function(g, rng), h = random_function(g, rng);

    const auto adj = adjoint(quadratic(f, h, cplx{2.0, 1.0}));
    REQUIRE(adj.creators.size() == 1);
    CHECK(adj.creators[0] == h);
    CHECK(adj.annihilators[0] == f);
    CHECK(adj.coefficient == cplx{2.0, -1.0});

    for (int i = 0; i < 10; ++i) {
        const GaugePolynomial p = GaugePolynomial(random_monomial(g, 2, 2, rng)) + GaugePolynomial(random_monomial(g, 1, 1, rng));
        CHECK(same(adjoint(adjoint(p)), p, model));
        CHECK(std::abs(quasifree_expectation(adjoint(p), model) - std::conj(quasifree_expectation(p, model))) < 1e-12);
        const auto a = hermitian_part(p);
        CHECK(a.is_self_adjoint());
        CHECK(std::abs(quasifree_expectation(a, model).imag()) < 1e-12);
    }
    CHECK_FALSE(GaugePolynomial(quadratic(f, h)).is_self_adjoint());
}

TEST_CASE("multiply: identity, CAR relation, oracle") {
    Rng rng(12);
    const MomentumGrid g(4);
    const auto model = random_model(g, rng);
    const auto rep = build_rep(model);
    const auto f = random_function(g, rng), h = random_function(g, rng);

    const GaugePolynomial p(quartic(f, h, random_function(g, rng), random_function(g, rng)));
    CHECK(same(multiply(p, GaugePolynomial::identity()), p, model));
    CHECK(same(multiply(GaugePolynomial::identity(), p), p, model));

    // a(h) a*(f) = <h|f> - a*(f) a(h)
    GaugeMonomial ann;
    ann.annihilators.push_back(h);
    const auto lhs = multiply(GaugePolynomial(ann), GaugePolynomial(creator_only(f)));
    const auto rhs = inner_product(h, f) * GaugePolynomial::identity() - GaugePolynomial(quadratic(f, h));
    CHECK((lhs - rhs).is_zero());

    // (a*(f)a(h)) (a*(h)a(f)) against the Fock product.
    const GaugePolynomial x(quadratic(f, h));
    const GaugePolynomial y(quadratic(h, f));
    CHECK(std::abs(quasifree_expectation(multiply(x, y), model) - oracle_product(x, y, rep)) < 1e-10);

    const GaugePolynomial big(random_monomial(g, 3, 3, rng));
    CHECK_THROWS_AS(multiply(big, big), CapacityError);
    CHECK_NOTHROW(multiply(big, big, 12));
}

TEST_CASE("commutator with a quadratic matches the expanded product") {
    Rng rng(14);
    const MomentumGrid g(4);
    const auto model = random_model(g, rng);
    for (int i = 0; i < 20; ++i) {
        const auto q = random_monomial(g, 1, 1, rng);
        const auto p = random_monomial(g, 2, 2, rng);
        const GaugePolynomial qp = multiply(GaugePolynomial(q), GaugePolynomial(p));
        const GaugePolynomial pq = multiply(GaugePolynomial(p), GaugePolynomial(q));
        const cplx expanded = quasifree_expectation(qp - pq, model);
        const cplx derived = commutator_expectation(q, p, model);
        CHECK(std::abs(derived - expanded) < 1e-12 * std::max(1.0, std::abs(expanded)));
        CHECK(std::abs(commutator_expectation_any(p, q, model) + derived) < 1e-12 * std::max(1.0, std::abs(derived)));
    }
}

TEST_CASE("commutator special cases") {
    Rng rng(16);
    const MomentumGrid g(6);
    const auto model = random_model(g, rng);
    const auto q = random_monomial(g, 1, 1, rng);
    CHECK(std::abs(commutator_expectation(q, q, model)) < 1e-14);

    // Disjoint momentum supports: modes 0..2 versus 3..5.
    auto support = [&](int lo, int hi) {
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(6);
        for (int k = lo; k < hi; ++k) v[k] = rng.complex_normal();
        return OneParticleFunction(g, v);
    };
    const auto a = quadratic(support(0, 3), support(0, 3));
    const auto b = quartic(support(3, 6), support(3, 6), support(3, 6), support(3, 6));
    CHECK(std::abs(commutator_expectation(a, b, model)) < 1e-15);

    CHECK_THROWS_AS(commutator_expectation(random_monomial(g, 2, 2, rng), q, model), ShapeError);
}

TEST_CASE("commutators of self-adjoint pairs are imaginary") {
    Rng rng(18);
    const MomentumGrid g(5);
    const auto model = random_model(g, rng);
    for (int i = 0; i < 10; ++i) {
        const auto a = random_quadratic_hermitian(g, rng);
        const auto b = random_hermitian(g, 6, rng);
        cplx acc = 0.0;
        for (const auto& x : a.terms())
            for (const auto& y : b.terms()) acc += commutator_expectation_any(x, y, model);
        CHECK(std::abs(acc.real()) < 1e-12 * std::max(1.0, std::abs(acc)));
    }
}

TEST_CASE("omega(A* A) >= 0 pins the determinant orientation") {
    Rng rng(20);
    const MomentumGrid g(4);
    const auto model = random_model(g, rng);
    for (int i = 0; i < 20; ++i) {
        const GaugePolynomial a = GaugePolynomial(random_monomial(g, 2, 2, rng)) + GaugePolynomial(random_monomial(g, 1, 1, rng));
        const cplx v = quasifree_expectation(multiply(adjoint(a), a), model);
        CHECK(v.real() >= -1e-12);
        CHECK(std::abs(v.imag()) < 1e-12 * std::max(1.0, v.real()));
    }
}

TEST_CASE("linearity in the polynomial and (anti)linearity in the functions") {
    Rng rng(22);
    const MomentumGrid g(5);
    const auto model = random_model(g, rng);
    const auto f = random_function(g, rng), h = random_function(g, rng), k = random_function(g, rng);
    const cplx c{0.3, -1.1};
    const OneParticleFunction cf(g, c * f.values());
    const OneParticleFunction ch(g, c * h.values());
    const cplx base = quasifree_expectation(quadratic(f, h), model);
    CHECK(std::abs(quasifree_expectation(quadratic(cf, h), model) - c * base) < 1e-13);
    CHECK(std::abs(quasifree_expectation(quadratic(f, ch), model) - std::conj(c) * base) < 1e-13);
    const GaugePolynomial sum = GaugePolynomial(quadratic(f, h)) + c * GaugePolynomial(quadratic(k, h));
    CHECK(std::abs(quasifree_expectation(sum, model) - base - c * quasifree_expectation(quadratic(k, h), model)) < 1e-13);
}

TEST_CASE("grid mismatch") {
    Rng rng(24);
    const MomentumGrid g4(4), g5(5);
    const auto model = random_model(g5, rng);
    CHECK_THROWS_AS(quasifree_expectation(quadratic(random_function(g4, rng), random_function(g4, rng)), model),
                    DimensionError);
}

}
