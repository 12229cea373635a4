#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fluctuon/ccr_weyl.hpp"
#include "fluctuon/errors.hpp"
#include "fluctuon/product_chain.hpp"
#include "fluctuon/random_objects.hpp"

using namespace fluctuon;

namespace {

using Mat = Eigen::MatrixXcd;
const std::complex<double> I{0.0, 1.0};

Mat sx() { Mat m(2, 2); m << 0, 1, 1, 0; return m; }
Mat sy() { Mat m(2, 2); m << 0, -I, I, 0; return m; }
Mat sz() { Mat m(2, 2); m << 1, 0, 0, -1; return m; }

SiteModel qubit() { return SiteModel::diagonal(Eigen::Vector2d(0.3, 0.7), Eigen::Vector2d(0.0, 1.0)); }

std::vector<double> grid(double t_max, int n) {
    std::vector<double> t;
    for (int i = 0; i <= n; ++i) t.push_back(t_max * i / n);
    return t;
}

} // namespace

TEST_SUITE("product_chain") {

TEST_CASE("site model contract") {
    Mat bad = Mat::Identity(2, 2);
    CHECK_THROWS_AS(SiteModel(bad, Eigen::Vector2d(0, 1)), ContractError);
    CHECK_THROWS_AS(SiteModel(0.5 * Mat::Identity(2, 2), Eigen::Vector3d(0, 1, 2)), ContractError);
    Mat neg(2, 2);
    neg << 1.2, 0, 0, -0.2;
    CHECK_THROWS_AS(SiteModel(neg, Eigen::Vector2d(0, 1)), ContractError);
    CHECK(qubit().rho_is_diagonal());
    Mat coh(2, 2);
    coh << 0.5, 0.2, 0.2, 0.5;
    CHECK_FALSE(SiteModel(coh, Eigen::Vector2d(0, 1)).rho_is_diagonal());
}

TEST_CASE("site symplectic form") {
    const auto site = qubit();
    CHECK(site_symplectic(sx(), sy(), site) == doctest::Approx(0.8).epsilon(1e-14));
    CHECK(site_symplectic(sy(), sx(), site) == doctest::Approx(-0.8).epsilon(1e-14));
    CHECK(site_symplectic(sx(), sx(), site) == 0.0);
    CHECK(std::abs(site_symplectic(sz(), sx(), site)) < 1e-15);
    CHECK(std::abs(site_symplectic(sz(), sy(), site)) < 1e-15);
    Mat nh(2, 2);
    nh << 0, 1, 0, 0;
    CHECK_THROWS_AS(site_symplectic(nh, sx(), site), ContractError);

    Rng rng(21);
    const SiteModel s3(Mat(Eigen::Vector3cd(0.5, 0.3, 0.2).asDiagonal()), Eigen::Vector3d(0, 1, 3));
    for (int i = 0; i < 10; ++i) {
        const Mat a = random_hermitian_matrix(3, rng), b = random_hermitian_matrix(3, rng);
        CHECK(std::abs(site_symplectic(a, b, s3) + site_symplectic(b, a, s3)) < 1e-13);
    }
}

TEST_CASE("traceless hermitian basis") {
    for (int n = 2; n <= 4; ++n) {
        const auto basis = traceless_hermitian_basis(n);
        REQUIRE(basis.size() == static_cast<std::size_t>(n * n - 1));
        for (std::size_t i = 0; i < basis.size(); ++i) {
            CHECK(std::abs(basis[i].trace()) < 1e-14);
            CHECK((basis[i] - basis[i].adjoint()).cwiseAbs().maxCoeff() < 1e-15);
            for (std::size_t j = 0; j < basis.size(); ++j)
                CHECK(std::abs((basis[i].adjoint() * basis[j]).trace() - (i == j ? 1.0 : 0.0)) < 1e-14);
        }
    }
}

TEST_CASE("condensate basis") {
    const auto k = condensate_basis(qubit());
    REQUIRE(k.size() == 1);
    CHECK(std::abs(k[0](0, 1)) < 1e-12);
    CHECK(std::abs(std::abs(k[0](0, 0)) - 1.0 / std::sqrt(2.0)) < 1e-12);
    CHECK(std::abs(k[0](0, 0) + k[0](1, 1)) < 1e-12);

    for (int n = 2; n <= 5; ++n) {
        Eigen::VectorXd pop(n), h(n);
        for (int j = 0; j < n; ++j) {
            pop[j] = n - j;
            h[j] = j * j;
        }
        pop /= pop.sum();
        const auto site = SiteModel::diagonal(pop, h);
        const auto kernel = condensate_basis(site);
        CHECK(kernel.size() == static_cast<std::size_t>(n - 1));
        for (const auto& m : kernel) {
            CHECK((m - Mat(m.diagonal().asDiagonal())).cwiseAbs().maxCoeff() < 1e-10);
            // no drift under the local dynamics
            const Eigen::VectorXcd ph = (I * 0.7 * h.cast<std::complex<double>>()).array().exp();
            CHECK((ph.asDiagonal() * m * ph.conjugate().asDiagonal() - m).cwiseAbs().maxCoeff() < 1e-12);
        }
        const auto tracial = SiteModel::diagonal(Eigen::VectorXd::Constant(n, 1.0 / n), h);
        CHECK(condensate_basis(tracial).size() == static_cast<std::size_t>(n * n - 1));
    }

    Eigen::Vector3d pure(1.0, 0.0, 0.0);
    const auto ps = SiteModel::diagonal(pure, Eigen::Vector3d(0, 1, 2));
    const auto pk = condensate_basis(ps);
    CHECK(pk.size() == 4);
    for (const auto& d : {Eigen::Vector3d(1, -1, 0), Eigen::Vector3d(1, 1, -2)}) {
        const Mat dm = d.cast<std::complex<double>>().asDiagonal();
        for (const auto& other : traceless_hermitian_basis(3)) CHECK(std::abs(site_symplectic(dm, other, ps)) < 1e-14);
    }

    Mat coh(2, 2);
    coh << 0.5, 0.2, 0.2, 0.5;
    const SiteModel cs(coh, Eigen::Vector2d(0, 1));
    CHECK_THROWS_AS(condensate_basis(cs), PreconditionError);
    CHECK_NOTHROW(condensate_basis(cs, 1e-9, true));
}

TEST_CASE("maximality witness") {
    const auto w = maximality_witness(sx(), qubit());
    CHECK(std::abs(std::abs(w.sigma) - 0.8) < 1e-14);
    CHECK(std::abs(site_symplectic(sx(), w.c_matrix, qubit()) - w.sigma) < 1e-14);
    CHECK(std::abs(std::abs(w.c_matrix(0, 1)) - 1.0) < 1e-14);
    CHECK_THROWS_AS(maximality_witness(sz(), qubit()), NoWitnessError);

    const SiteModel s3 = SiteModel::diagonal(Eigen::Vector3d(0.5, 0.3, 0.2), Eigen::Vector3d(0, 1, 2));
    Mat a = Mat::Zero(3, 3);
    a(0, 1) = a(1, 0) = 1.0;
    const auto w3 = maximality_witness(a, s3);
    CHECK(w3.c == I);
    CHECK(w3.j == 0);
    CHECK(w3.k == 1);
    CHECK(std::abs(w3.sigma) > 1e-3);

    Rng rng(22);
    for (int n = 2; n <= 4; ++n) {
        Eigen::VectorXd pop(n);
        for (int j = 0; j < n; ++j) pop[j] = rng.uniform(0.1, 1.0) + j;
        pop /= pop.sum();
        const auto site = SiteModel::diagonal(pop, Eigen::VectorXd::LinSpaced(n, 0, n - 1));
        for (int i = 0; i < 10; ++i) {
            const Mat r = random_hermitian_matrix(n, rng);
            const auto wr = maximality_witness(r, site);
            CHECK(std::abs(wr.sigma) > 1e-3 * r.norm());
        }
    }
}

TEST_CASE("quasiperiodicity") {
    const auto r = quasiperiodicity_report(sx(), qubit(), grid(20.0, 2000));
    REQUIRE(r.exact_period.has_value());
    CHECK(*r.exact_period == doctest::Approx(2 * std::numbers::pi).epsilon(1e-9));
    CHECK_FALSE(r.stationary);
    REQUIRE_FALSE(r.near_recurrences.empty());
    CHECK(std::abs(r.near_recurrences.front() - 2 * std::numbers::pi) < 0.02);

    const auto d = quasiperiodicity_report(sz(), qubit(), grid(10.0, 100));
    CHECK(d.stationary);
    for (double x : d.distances) CHECK(x == 0.0);

    const SiteModel inc = SiteModel::diagonal(Eigen::Vector3d(0.5, 0.3, 0.2), Eigen::Vector3d(0.0, 1.0, 1.0 + std::sqrt(2.0)));
    Mat a = Mat::Ones(3, 3) - Mat::Identity(3, 3);
    const auto q = quasiperiodicity_report(a, inc, grid(200.0, 20000), 0.2);
    CHECK_FALSE(q.exact_period.has_value());
    CHECK_FALSE(q.near_recurrences.empty());
    for (double t : q.times) CHECK(t >= 0.0);
    CHECK(q.distances.size() == q.times.size());
}

TEST_CASE("range-two gram") {
    const auto r = range_two_gram(qubit());
    CHECK(r.dimension == 15);
    CHECK(r.generators.size() == 15);
    CHECK(r.sigma.rows() == 15);
    CHECK(r.rank == 2 * r.pair_count);
    CHECK(r.rank + r.kernel_dim == 15);
    CHECK(r.diagonal_sigma_max < 1e-12);
    CHECK(r.positivity_min_eig >= -1e-10);
    CHECK((r.sigma + r.sigma.transpose()).cwiseAbs().maxCoeff() < 1e-13);
    CHECK(canonical_basis(SymplecticSpace(r.sigma), 1e-9).pair_count() == r.pair_count);

    const SiteModel s3 = SiteModel::diagonal(Eigen::Vector3d(0.5, 0.3, 0.2), Eigen::Vector3d(0, 1, 2));
    const auto r3 = range_two_gram(s3);
    CHECK(r3.dimension == 80);
    CHECK(r3.rank == 2 * r3.pair_count);
    CHECK(r3.positivity_min_eig >= -1e-10);

    const auto s4 = SiteModel::diagonal(Eigen::Vector4d(0.4, 0.3, 0.2, 0.1), Eigen::Vector4d(0, 1, 2, 3));
    CHECK_THROWS_AS(range_two_gram(s4), CapacityError);
}

TEST_CASE("rational approximation") {
    CHECK(best_rational(std::numbers::pi, 1000) == std::pair<long, long>{355, 113});
    CHECK(best_rational(0.5, 10) == std::pair<long, long>{1, 2});
    CHECK(best_rational(3.0, 10) == std::pair<long, long>{3, 1});
    CHECK(best_rational(-0.25, 10) == std::pair<long, long>{-1, 4});
}

}
