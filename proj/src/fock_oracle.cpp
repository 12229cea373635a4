#include "fluctuon/fock_oracle.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "fluctuon/errors.hpp"

namespace fluctuon {

namespace {

using State = Eigen::VectorXcd;

SparseOperator jordan_wigner_annihilator(int j, int modes) {
    const std::uint32_t dim = 1u << modes;
    std::vector<Eigen::Triplet<cplx>> entries;
    entries.reserve(dim / 2);
    const std::uint32_t bit = 1u << j;
    const std::uint32_t lower = bit - 1u;
    for (std::uint32_t s = 0; s < dim; ++s) {
        if ((s & bit) == 0) continue;
        const double sign = (std::popcount(s & lower) % 2 == 0) ? 1.0 : -1.0;
        entries.emplace_back(static_cast<int>(s & ~bit), static_cast<int>(s), sign);
    }
    SparseOperator a(static_cast<int>(dim), static_cast<int>(dim));
    a.setFromTriplets(entries.begin(), entries.end());
    return a;
}

void check_grid(const GaugePolynomial& p, const FockRep& rep) {
    for (const auto& t : p.terms()) {
        for (const auto& f : t.creators)
            if (!(f.grid() == rep.grid())) throw DimensionError("oracle: grid mismatch");
        for (const auto& f : t.annihilators)
            if (!(f.grid() == rep.grid())) throw DimensionError("oracle: grid mismatch");
    }
}

struct CompiledTerm {
    cplx coefficient;
    std::vector<SparseOperator> ops; // rightmost factor first
};

std::vector<CompiledTerm> compile(const GaugePolynomial& p, const FockRep& rep) {
    std::vector<CompiledTerm> out;
    for (const auto& t : p.terms()) {
        CompiledTerm c{t.coefficient, {}};
        for (auto it = t.annihilators.rbegin(); it != t.annihilators.rend(); ++it)
            c.ops.push_back(rep.smeared(*it, false));
        for (auto it = t.creators.rbegin(); it != t.creators.rend(); ++it)
            c.ops.push_back(rep.smeared(*it, true));
        out.push_back(std::move(c));
    }
    return out;
}

State apply_terms(const std::vector<CompiledTerm>& p, const State& v) {
    State out = State::Zero(v.size());
    for (const auto& t : p) {
        State w = v;
        for (const auto& op : t.ops) w = op * w;
        out += t.coefficient * w;
    }
    return out;
}

State phase(const FockRep& rep, const State& v, double t) {
    State out = v;
    const auto& h = rep.energies();
    for (Eigen::Index s = 0; s < v.size(); ++s) {
        double e = 0.0;
        for (int j = 0; j < rep.modes(); ++j)
            if ((static_cast<std::uint64_t>(s) >> j) & 1u) e += h[j];
        out[s] *= std::polar(1.0, e * t);
    }
    return out;
}

// sum_s density_s <s| op |s> where op is given as a map on vectors.
template <typename Op>
cplx weighted_trace(const FockRep& rep, Op&& op) {
    const auto dim = static_cast<Eigen::Index>(rep.dimension());
    cplx acc = 0.0;
    State e = State::Zero(dim);
    for (Eigen::Index s = 0; s < dim; ++s) {
        const double w = rep.density()[s];
        if (w == 0.0) continue;
        e[s] = 1.0;
        acc += w * op(e)[s];
        e[s] = 0.0;
    }
    return acc;
}

} // namespace

SparseOperator FockRep::smeared(const OneParticleFunction& f, bool creator) const {
    if (!(f.grid() == grid_)) throw DimensionError("FockRep::smeared: grid mismatch");
    const double norm = 1.0 / std::sqrt(static_cast<double>(grid_.size()));
    const auto dim = static_cast<int>(dimension());
    SparseOperator out(dim, dim);
    for (int j = 0; j < modes(); ++j) {
        const cplx c = f.values()[j] * norm;
        if (c == cplx{0.0, 0.0}) continue;
        if (creator) out += c * creators_[static_cast<std::size_t>(j)];
        else out += std::conj(c) * annihilators_[static_cast<std::size_t>(j)];
    }
    return out;
}

double FockRep::anticommutator_residual() const {
    const auto dim = static_cast<int>(dimension());
    SparseOperator identity(dim, dim);
    identity.setIdentity();
    double worst = 0.0;
    auto max_abs = [](const SparseOperator& m) {
        double r = 0.0;
        for (int k = 0; k < m.outerSize(); ++k)
            for (SparseOperator::InnerIterator it(m, k); it; ++it) r = std::max(r, std::abs(it.value()));
        return r;
    };
    for (int j = 0; j < modes(); ++j) {
        for (int k = 0; k < modes(); ++k) {
            const auto& aj = annihilators_[static_cast<std::size_t>(j)];
            const auto& ak = annihilators_[static_cast<std::size_t>(k)];
            const auto& ck = creators_[static_cast<std::size_t>(k)];
            SparseOperator aa = aj * ak + ak * aj;
            SparseOperator ac = aj * ck + ck * aj;
            if (j == k) ac -= identity;
            worst = std::max({worst, max_abs(aa), max_abs(ac)});
        }
    }
    return worst;
}

FockRep build_rep(const OneParticleModel& model) {
    const auto& grid = model.grid();
    const int modes = grid.modes();
    if (modes > fock_max_modes)
        throw CapacityError("build_rep: " + std::to_string(modes) + " modes exceeds cap of " +
                            std::to_string(fock_max_modes));
    FockRep rep(grid);
    for (int j = 0; j < modes; ++j) {
        rep.annihilators_.push_back(jordan_wigner_annihilator(j, modes));
        rep.creators_.push_back(SparseOperator(rep.annihilators_.back().adjoint()));
    }
    const std::size_t dim = rep.dimension();
    rep.density_.resize(static_cast<Eigen::Index>(dim));
    for (std::size_t s = 0; s < dim; ++s) {
        double w = 1.0;
        for (int j = 0; j < modes; ++j) w *= ((s >> j) & 1u) ? model.rho()[j] : 1.0 - model.rho()[j];
        rep.density_[static_cast<Eigen::Index>(s)] = w;
    }
    rep.energies_ = model.dispersion();
    return rep;
}

cplx oracle_expectation(const GaugePolynomial& p, const FockRep& rep) {
    check_grid(p, rep);
    const auto cp = compile(p, rep);
    return weighted_trace(rep, [&](const State& v) { return apply_terms(cp, v); });
}

cplx oracle_evolve(const GaugePolynomial& p, const FockRep& rep, double t) {
    check_grid(p, rep);
    const auto cp = compile(p, rep);
    return weighted_trace(rep, [&](const State& v) { return phase(rep, apply_terms(cp, phase(rep, v, -t)), t); });
}

cplx oracle_two_time(const GaugePolynomial& a, const GaugePolynomial& b, const FockRep& rep, double t) {
    check_grid(a, rep);
    check_grid(b, rep);
    const auto ca = compile(a, rep);
    const auto cb = compile(b, rep);
    return weighted_trace(rep, [&](const State& v) {
        return apply_terms(ca, phase(rep, apply_terms(cb, phase(rep, v, -t)), t));
    });
}

cplx oracle_product(const GaugePolynomial& a, const GaugePolynomial& b, const FockRep& rep) {
    check_grid(a, rep);
    check_grid(b, rep);
    const auto ca = compile(a, rep);
    const auto cb = compile(b, rep);
    return weighted_trace(rep, [&](const State& v) { return apply_terms(ca, apply_terms(cb, v)); });
}

} // namespace fluctuon
