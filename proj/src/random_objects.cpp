#include "fluctuon/random_objects.hpp"

#include <algorithm>
#include <cmath>

#include "fluctuon/ccr_weyl.hpp"

namespace fluctuon {

OneParticleFunction random_function(const MomentumGrid& grid, Rng& rng) {
    Eigen::VectorXcd v(grid.modes());
    for (auto& x : v) x = rng.complex_normal();
    return {grid, std::move(v)};
}

OneParticleModel random_model(const MomentumGrid& grid, Rng& rng) {
    Eigen::VectorXd rho(grid.modes());
    Eigen::VectorXd h(grid.modes());
    for (int k = 0; k < grid.size(); ++k) {
        for (int a = 0; a < grid.spin_dim(); ++a) {
            rho[grid.mode(k, a)] = rng.uniform(0.05, 0.95);
            h[grid.mode(k, a)] = -std::cos(grid.momentum(k)) + 0.3 * rng.uniform(-1.0, 1.0);
        }
    }
    return {grid, std::move(rho), std::move(h)};
}

GaugeMonomial random_monomial(const MomentumGrid& grid, int creators, int annihilators, Rng& rng) {
    GaugeMonomial m;
    for (int i = 0; i < creators; ++i) m.creators.push_back(random_function(grid, rng));
    for (int i = 0; i < annihilators; ++i) m.annihilators.push_back(random_function(grid, rng));
    m.coefficient = rng.complex_normal();
    return m;
}

GaugePolynomial random_quadratic_hermitian(const MomentumGrid& grid, Rng& rng) {
    const auto f = random_function(grid, rng);
    const auto g = random_function(grid, rng);
    return hermitian_part(GaugePolynomial(quadratic(f, g)));
}

GaugePolynomial random_hermitian(const MomentumGrid& grid, int max_degree, Rng& rng, int terms) {
    const int max_n = std::max(1, max_degree / 2);
    std::vector<GaugeMonomial> ms;
    for (int t = 0; t < terms; ++t) {
        const int n = rng.uniform_int(1, max_n);
        ms.push_back(random_monomial(grid, n, n, rng));
    }
    return hermitian_part(GaugePolynomial(std::move(ms)));
}

Eigen::MatrixXd random_antisymmetric(int dim, Rng& rng) {
    Eigen::MatrixXd m(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) m(i, j) = rng.normal();
    return m - m.transpose();
}

Eigen::MatrixXd random_symplectic_map(int pairs, double scale, Rng& rng) {
    const Eigen::MatrixXd s = SymplecticSpace::canonical(pairs).sigma();
    const int dim = 2 * pairs;
    Eigen::MatrixXd h(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) h(i, j) = scale * rng.normal();
    h = 0.5 * (h + h.transpose()).eval();
    const Eigen::MatrixXd k = s * h;
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(dim, dim);
    return (id - 0.5 * k).partialPivLu().solve(id + 0.5 * k);
}

Eigen::MatrixXcd random_hermitian_matrix(int n, Rng& rng) {
    Eigen::MatrixXcd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = rng.complex_normal();
    return 0.5 * (m + m.adjoint());
}

} // namespace fluctuon
