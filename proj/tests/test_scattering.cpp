#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fluctuon/errors.hpp"
#include "fluctuon/quadrature.hpp"
#include "fluctuon/scattering.hpp"

using namespace fluctuon;

namespace {

const double sqrt_pi = std::sqrt(std::numbers::pi);

std::vector<double> T_grid(double t_max) {
    const auto n = static_cast<std::size_t>(std::ceil(8.0 * std::log10(t_max))) + 1;
    return geometric_grid(1.0, t_max, n);
}

// int_0^T of the thermal Gaussian G, and its T -> infinity limit.
std::complex<double> kms_I(double T, double beta) {
    const std::complex<double> i{0.0, 1.0};
    return 2.0 * i * sqrt_pi *
           (std::sqrt(1.0 - i * T) - std::sqrt(1.0 + beta - i * T) - 1.0 + std::sqrt(1.0 + beta));
}

std::complex<double> kms_I_limit(double beta) {
    return std::complex<double>{0.0, 2.0} * sqrt_pi * (std::sqrt(1.0 + beta) - 1.0);
}

} // namespace

TEST_SUITE("scattering") {

TEST_CASE("quadrature") {
    const auto poly = gauss_kronrod15([](double x) { return std::complex<double>(x * x * x, 1.0); }, 0.0, 2.0);
    CHECK(std::abs(poly.value - std::complex<double>(4.0, 2.0)) < 1e-14);
    const auto r = integrate_adaptive([](double x) { return std::complex<double>(std::cos(x), std::sin(x)); },
                                      {0.0, 10.0, 50.0}, 1e-12, 0.0);
    CHECK(r.converged);
    CHECK(std::abs(r.value - std::complex<double>(std::sin(50.0), 1.0 - std::cos(50.0))) < 1e-11);
    const auto sing = integrate_adaptive([](double x) { return std::complex<double>(1.0 / std::sqrt(x), 0.0); },
                                         {0.0, 1.0}, 1e-14, 0.0, 8);
    CHECK_FALSE(sing.converged);
}

TEST_CASE("family parsing") {
    CHECK(parse_phase_family("p") == PhaseFamily::linear);
    CHECK(parse_phase_family("p2") == PhaseFamily::quadratic);
    CHECK(parse_phase_family("p3") == PhaseFamily::cubic);
    CHECK(parse_weight_family("bump") == WeightFamily::bump);
    CHECK_THROWS_AS(parse_phase_family("p4"), ParameterError);
    CHECK_THROWS_AS(parse_weight_family("flat"), ParameterError);
    CHECK(to_string(Verdict::inconclusive) == "inconclusive");
    CHECK_THROWS_AS(ScatteringProbe::family(PhaseFamily::quadratic, WeightFamily::gauss, 0.0), ParameterError);
}

TEST_CASE("weights") {
    const auto g = ScatteringProbe::family(PhaseFamily::quadratic, WeightFamily::gauss);
    CHECK(g.weight_l1() == doctest::Approx(sqrt_pi * std::erf(6.0 / std::sqrt(2.0))).epsilon(1e-12));
    const auto k = ScatteringProbe::family(PhaseFamily::quadratic, WeightFamily::gauss, 2.0);
    CHECK(std::abs(k.effective_weight(0.0)) == 0.0);
    CHECK(k.effective_weight(1.0).real() == doctest::Approx(std::exp(-1.0) * (1.0 - std::exp(-2.0))));
    ScatteringProbe empty = g;
    empty.p_max = empty.p_min;
    CHECK_THROWS_AS(empty.weight_l1(), ParameterError);
    ScatteringProbe wild = g;
    wild.weight = [](double p) { return std::complex<double>(1.0 / std::abs(p), 0.0); };
    CHECK_THROWS_AS(wild.weight_l1(), ParameterError);
}

TEST_CASE("oscillatory integral against closed forms") {
    const auto g = ScatteringProbe::family(PhaseFamily::quadratic, WeightFamily::gauss);
    CHECK(std::abs(oscillatory_G(g, 0.0) - sqrt_pi) < 1e-8);
    double worst = 0.0;
    for (double t : geometric_grid(0.1, 1e3, 41)) worst = std::max(worst, std::abs(oscillatory_G(g, t) - gaussian_fresnel_G(t)));
    CHECK(worst <= 1e-7);
    CHECK(std::abs(oscillatory_G(g, -3.0) - std::conj(gaussian_fresnel_G(3.0))) <= 1e-7);

    const auto k = ScatteringProbe::family(PhaseFamily::quadratic, WeightFamily::gauss, 1.0);
    for (double t : {0.0, 1.0, 10.0, 300.0}) CHECK(std::abs(oscillatory_G(k, t) - gaussian_fresnel_kms_G(t, 1.0)) <= 1e-7);

    CHECK(std::abs(oscillatory_G(ScatteringProbe::family(PhaseFamily::linear, WeightFamily::zero), 5.0)) == 0.0);
    CHECK_THROWS_AS(oscillatory_G(g, std::nan("")), ParameterError);
}

TEST_CASE("decay exponents") {
    const auto p2 = decay_exponent(ScatteringProbe::family(PhaseFamily::quadratic, WeightFamily::gauss),
                                   geometric_grid(10.0, 1e3, 20));
    CHECK(p2.exponent == doctest::Approx(-0.5).epsilon(0.1));
    CHECK(p2.times.size() == 20);
    const auto p3 = decay_exponent(ScatteringProbe::family(PhaseFamily::cubic, WeightFamily::gauss),
                                   geometric_grid(1e2, 1e4, 20));
    CHECK(std::abs(p3.exponent + 1.0 / 3.0) <= 0.05);
    const auto p1 = decay_exponent(ScatteringProbe::family(PhaseFamily::linear, WeightFamily::gauss),
                                   geometric_grid(0.5, 5.0, 20));
    CHECK(p1.exponent < -1.5);
    CHECK_THROWS_AS(decay_exponent(ScatteringProbe::family(PhaseFamily::quadratic, WeightFamily::gauss),
                                   geometric_grid(1.0, 10.0, 10)),
                    ParameterError);
    CHECK_THROWS_AS(decay_exponent(ScatteringProbe::family(PhaseFamily::linear, WeightFamily::gauss),
                                   geometric_grid(10.0, 100.0, 20)),
                    NumericError);

    const auto line = log_log_fit({1.0, 2.0, 4.0, 8.0}, {1.0, 0.25, 0.0625, 0.015625});
    CHECK(line.exponent == doctest::Approx(-2.0).epsilon(1e-14));
    CHECK(line.ci_half_width < 1e-12);
}

TEST_CASE("convergence verdicts") {
    const auto flat = scattering_integral(ScatteringProbe::family(PhaseFamily::quadratic, WeightFamily::gauss), T_grid(1e3));
    CHECK(flat.verdict == Verdict::diverged);
    CHECK(flat.growth_exponent > 0.1);
    CHECK(flat.monotone_growth);
    CHECK(flat.tail_sup > 1e-3);

    for (double beta : {0.5, 1.0, 2.0}) {
        const auto kms = scattering_integral(ScatteringProbe::family(PhaseFamily::quadratic, WeightFamily::gauss, beta), T_grid(1e3));
        CHECK(kms.verdict == Verdict::converged);
        CHECK(kms.tail_sup <= 1e-3);
        REQUIRE(kms.decay_exponent.has_value());
        CHECK(*kms.decay_exponent < -1.1);
        REQUIRE(kms.beta.has_value());
        CHECK(*kms.beta == beta);
        // I(T) against its closed form; the limit is approached like T^{-1/2}
        double worst = 0.0;
        for (const auto& [T, I] : kms.I_values) worst = std::max(worst, std::abs(I - kms_I(T, beta)));
        CHECK(worst <= 1e-6);
        const auto limit = kms_I_limit(beta);
        const auto n = kms.I_values.size();
        CHECK(std::abs(kms.I_values[n - 1].second - limit) < std::abs(kms.I_values[n / 2].second - limit));
    }

    const auto zero = scattering_integral(ScatteringProbe::family(PhaseFamily::quadratic, WeightFamily::zero), T_grid(1e2));
    CHECK(zero.verdict == Verdict::converged);
    CHECK(zero.tail_sup == 0.0);
    for (const auto& [T, I] : zero.I_values) CHECK(I == std::complex<double>{});

    CHECK_THROWS_AS(scattering_integral(ScatteringProbe::family(PhaseFamily::quadratic, WeightFamily::gauss), {10.0, 1.0}),
                    ParameterError);
}

TEST_CASE("perturbed mode evolution") {
    const auto k = ScatteringProbe::family(PhaseFamily::quadratic, WeightFamily::gauss, 1.0);
    CHECK(perturbed_mode_evolution(k, 1.0, 0.0) == std::complex<double>{});
    for (double T : {0.5, 10.0, 1e3})
        CHECK(std::abs(perturbed_mode_evolution(k, 2.0, T) - std::complex<double>{0.0, 2.0} * kms_I(T, 1.0)) <= 1e-6);
    CHECK(std::abs(perturbed_mode_evolution(k, {0.0, 1.0}, 50.0) - std::complex<double>{0.0, 1.0} * perturbed_mode_evolution(k, 1.0, 50.0)) < 1e-12);
    CHECK_THROWS_AS(perturbed_mode_evolution(k, 1.0, -1.0), ParameterError);
}

TEST_CASE("asymptotic abelianess") {
    AbelianessProbe q;
    q.dispersion = [](double p) { return p * p; };
    const auto rq = asymptotic_abelianess(q, geometric_grid(10.0, 1e3, 20));
    CHECK(rq.value_at_zero > 0.0);
    REQUIRE(rq.exponent.has_value());
    CHECK(*rq.exponent <= -0.5);
    CHECK(rq.decays);
    CHECK_FALSE(rq.no_decay_flag);
    CHECK(rq.stationary_points == 1);

    AbelianessProbe lin = q;
    lin.dispersion = [](double p) { return 0.7 * p; };
    const auto rl = asymptotic_abelianess(lin, geometric_grid(10.0, 1e3, 20));
    CHECK(rl.no_decay_flag);
    CHECK_FALSE(rl.decays);

    AbelianessProbe one = q;
    one.pairs = 1;
    const auto r1 = asymptotic_abelianess(one, geometric_grid(10.0, 1e3, 20));
    CHECK(r1.no_decay_flag);
    CHECK(r1.value_at_zero > 0.0);

    AbelianessProbe three = q;
    three.pairs = 3;
    CHECK_THROWS_AS(asymptotic_abelianess(three, geometric_grid(10.0, 1e3, 20)), ParameterError);
}

}
