#include "fluctuon/one_particle.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fluctuon/errors.hpp"

namespace fluctuon {

MomentumGrid::MomentumGrid(int size, int spin_dim) : size_(size), spin_dim_(spin_dim) {
    if (size < 2) throw ParameterError("MomentumGrid: L must be >= 2, got " + std::to_string(size));
    if (spin_dim < 1) throw ParameterError("MomentumGrid: spin_dim must be >= 1");
}

double MomentumGrid::momentum(int k) const noexcept {
    return 2.0 * std::numbers::pi * k / size_ - std::numbers::pi;
}

std::vector<double> MomentumGrid::points() const {
    std::vector<double> out(static_cast<std::size_t>(size_));
    for (int k = 0; k < size_; ++k) out[static_cast<std::size_t>(k)] = momentum(k);
    return out;
}

OneParticleFunction::OneParticleFunction(MomentumGrid grid)
    : grid_(grid), values_(Eigen::VectorXcd::Zero(grid.modes())) {}

OneParticleFunction::OneParticleFunction(MomentumGrid grid, Eigen::VectorXcd values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.modes())
        throw DimensionError("OneParticleFunction: expected " + std::to_string(grid_.modes()) +
                             " values, got " + std::to_string(values_.size()));
}

OneParticleFunction OneParticleFunction::from(MomentumGrid grid,
                                              const std::function<cplx(double, int)>& f) {
    Eigen::VectorXcd v(grid.modes());
    for (int k = 0; k < grid.size(); ++k)
        for (int a = 0; a < grid.spin_dim(); ++a) v[grid.mode(k, a)] = f(grid.momentum(k), a);
    return {grid, std::move(v)};
}

OneParticleFunction OneParticleFunction::mode(MomentumGrid grid, int k, int alpha) {
    if (k < 0 || k >= grid.size() || alpha < 0 || alpha >= grid.spin_dim())
        throw DimensionError("OneParticleFunction::mode: index out of range");
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(grid.modes());
    v[grid.mode(k, alpha)] = std::sqrt(static_cast<double>(grid.size()));
    return {grid, std::move(v)};
}

bool OneParticleFunction::operator==(const OneParticleFunction& other) const {
    return grid_ == other.grid_ && values_ == other.values_;
}

OneParticleModel::OneParticleModel(MomentumGrid grid, Eigen::VectorXd rho, Eigen::VectorXd dispersion)
    : grid_(grid), rho_(std::move(rho)), dispersion_(std::move(dispersion)) {
    if (rho_.size() != grid_.modes() || dispersion_.size() != grid_.modes())
        throw DimensionError("OneParticleModel: rho/dispersion shape does not match grid");
    for (Eigen::Index i = 0; i < rho_.size(); ++i) {
        if (!(rho_[i] >= 0.0 && rho_[i] <= 1.0))
            throw ParameterError("OneParticleModel: rho must lie in [0, 1]");
        if (!std::isfinite(dispersion_[i]))
            throw ParameterError("OneParticleModel: dispersion must be finite");
    }
}

Eigen::VectorXd sample_dispersion(const MomentumGrid& grid,
                                  const std::function<double(double, int)>& h) {
    Eigen::VectorXd out(grid.modes());
    for (int k = 0; k < grid.size(); ++k)
        for (int a = 0; a < grid.spin_dim(); ++a) out[grid.mode(k, a)] = h(grid.momentum(k), a);
    return out;
}

cplx inner_product(const OneParticleFunction& f, const OneParticleFunction& g) {
    if (!(f.grid() == g.grid())) throw DimensionError("inner_product: grid mismatch");
    return f.values().dot(g.values()) / static_cast<double>(f.grid().size());
}

cplx weighted_inner_product(const OneParticleFunction& g, const Eigen::VectorXd& weight,
                            const OneParticleFunction& f) {
    if (!(f.grid() == g.grid()) || weight.size() != f.values().size())
        throw DimensionError("weighted_inner_product: grid mismatch");
    const auto& gv = g.values();
    const auto& fv = f.values();
    cplx acc = 0.0;
    for (Eigen::Index i = 0; i < fv.size(); ++i) acc += std::conj(gv[i]) * weight[i] * fv[i];
    return acc / static_cast<double>(f.grid().size());
}

OneParticleFunction translate(const OneParticleFunction& f, long x) {
    const auto& grid = f.grid();
    const int L = grid.size();
    // Reduce x mod 2L: e^{i p_k x} is 2L-periodic in x on this grid, so the
    // phase stays accurate for large |x|.
    const long xr = ((x % (2L * L)) + 2L * L) % (2L * L);
    Eigen::VectorXcd v = f.values();
    for (int k = 0; k < L; ++k) {
        const cplx phase = std::polar(1.0, grid.momentum(k) * static_cast<double>(xr));
        for (int a = 0; a < grid.spin_dim(); ++a) v[grid.mode(k, a)] *= phase;
    }
    return {grid, std::move(v)};
}

OneParticleFunction evolve(const OneParticleFunction& f, const OneParticleModel& model, double t) {
    if (!(f.grid() == model.grid())) throw DimensionError("evolve: grid mismatch");
    Eigen::VectorXcd v = f.values();
    const auto& h = model.dispersion();
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] *= std::polar(1.0, h[i] * t);
    return {f.grid(), std::move(v)};
}

OneParticleModel kms_symbol(const MomentumGrid& grid, const Eigen::VectorXd& dispersion,
                            double beta, double mu) {
    if (!(beta > 0.0)) throw ParameterError("kms_symbol: beta must be > 0");
    if (dispersion.size() != grid.modes()) throw DimensionError("kms_symbol: dispersion shape");
    Eigen::VectorXd rho(dispersion.size());
    for (Eigen::Index i = 0; i < rho.size(); ++i) {
        const double e = beta * (dispersion[i] - mu);
        // Evaluate on the side that cannot overflow.
        rho[i] = e > 0.0 ? std::exp(-e) / (1.0 + std::exp(-e)) : 1.0 / (1.0 + std::exp(e));
    }
    return {grid, std::move(rho), dispersion};
}

} // namespace fluctuon
