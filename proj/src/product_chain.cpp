#include "fluctuon/product_chain.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "fluctuon/ccr_weyl.hpp"
#include "fluctuon/errors.hpp"

namespace fluctuon {

namespace {

using CMat = Eigen::MatrixXcd;
using cplx = std::complex<double>;

bool is_hermitian(const CMat& m, double tol = 1e-12) {
    if (m.rows() != m.cols()) return false;
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol * scale;
}

CMat kron(const CMat& a, const CMat& b) {
    CMat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

// tr(X Y) without forming the product.
cplx trace_product(const CMat& x, const CMat& y) {
    return (x.array() * y.transpose().array()).sum();
}

} // namespace

SiteModel::SiteModel(Eigen::MatrixXcd rho0, Eigen::VectorXd h_diag) : rho0_(std::move(rho0)), h_(std::move(h_diag)) {
    if (rho0_.rows() < 1 || rho0_.rows() != rho0_.cols())
        throw ContractError("SiteModel: rho0 must be square");
    if (h_.size() != rho0_.rows()) throw ContractError("SiteModel: h_diag length must equal n");
    if (!is_hermitian(rho0_, 1e-13)) throw ContractError("SiteModel: rho0 is not hermitian");
    if (std::abs(rho0_.trace() - cplx{1.0, 0.0}) > 1e-13) throw ContractError("SiteModel: trace(rho0) != 1");
    Eigen::SelfAdjointEigenSolver<CMat> es(rho0_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-13) throw ContractError("SiteModel: rho0 is not positive");
}

SiteModel SiteModel::diagonal(const Eigen::VectorXd& populations, const Eigen::VectorXd& h_diag) {
    return SiteModel(populations.cast<cplx>().asDiagonal().toDenseMatrix(), h_diag);
}

bool SiteModel::rho_is_diagonal(double tol) const {
    CMat off = rho0_;
    off.diagonal().setZero();
    return off.cwiseAbs().maxCoeff() <= tol;
}

double site_symplectic(const CMat& m, const CMat& k, const SiteModel& site) {
    if (m.rows() != site.n() || k.rows() != site.n()) throw DimensionError("site_symplectic: dimension");
    if (!is_hermitian(m) || !is_hermitian(k)) throw ContractError("site_symplectic: inputs must be hermitian");
    const CMat comm = m * k - k * m;
    return (cplx{0.0, 1.0} * trace_product(site.rho0(), comm)).real();
}

std::vector<CMat> traceless_hermitian_basis(int n) {
    if (n < 1) throw ParameterError("traceless_hermitian_basis: n must be >= 1");
    std::vector<CMat> out;
    const double r = 1.0 / std::sqrt(2.0);
    for (int j = 0; j < n; ++j) {
        for (int k = j + 1; k < n; ++k) {
            CMat s = CMat::Zero(n, n);
            s(j, k) = r;
            s(k, j) = r;
            out.push_back(s);
        }
    }
    for (int j = 0; j < n; ++j) {
        for (int k = j + 1; k < n; ++k) {
            CMat a = CMat::Zero(n, n);
            a(j, k) = cplx{0.0, -r};
            a(k, j) = cplx{0.0, r};
            out.push_back(a);
        }
    }
    for (int l = 1; l < n; ++l) {
        CMat d = CMat::Zero(n, n);
        const double norm = 1.0 / std::sqrt(static_cast<double>(l) * (l + 1));
        for (int j = 0; j < l; ++j) d(j, j) = norm;
        d(l, l) = -l * norm;
        out.push_back(d);
    }
    return out;
}

std::vector<CMat> condensate_basis(const SiteModel& site, double tol, bool exploratory) {
    if (!(tol > 0.0)) throw ParameterError("condensate_basis: tol must be > 0");
    if (!exploratory && !site.rho_is_diagonal())
        throw PreconditionError("condensate_basis: rho0 must be diagonal in the Hamiltonian basis "
                                "(time-invariant); pass exploratory=true to compute the kernel anyway");
    const auto basis = traceless_hermitian_basis(site.n());
    const auto m = static_cast<Eigen::Index>(basis.size());
    std::vector<CMat> out;
    if (m == 0) return out;
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index a = 0; a < m; ++a)
        for (Eigen::Index b = a + 1; b < m; ++b) {
            gram(a, b) = site_symplectic(basis[static_cast<std::size_t>(a)], basis[static_cast<std::size_t>(b)], site);
            gram(b, a) = -gram(a, b);
        }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(gram, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    for (Eigen::Index k = 0; k < m; ++k) {
        if (sv[k] >= tol) continue;
        CMat c = CMat::Zero(site.n(), site.n());
        for (Eigen::Index a = 0; a < m; ++a) c += svd.matrixV()(a, k) * basis[static_cast<std::size_t>(a)];
        out.push_back(c);
    }
    return out;
}

MaximalityWitness maximality_witness(const CMat& a, const SiteModel& site) {
    const int n = site.n();
    if (a.rows() != n || a.cols() != n) throw DimensionError("maximality_witness: dimension");
    if (!is_hermitian(a)) throw ContractError("maximality_witness: A must be hermitian");
    const double norm = a.norm();
    const double floor = 1e-14 * std::max(norm, 1.0);

    std::vector<std::pair<int, int>> entries;
    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k)
            if (std::abs(a(j, k)) > floor) entries.emplace_back(j, k);
    if (entries.empty()) throw NoWitnessError("maximality_witness: A is diagonal and therefore central");

    auto make = [n](int j, int k, cplx c) {
        CMat m = CMat::Zero(n, n);
        m(j, k) = c;
        m(k, j) = std::conj(c);
        return m;
    };
    auto score = [&](int j, int k) {
        return std::abs(a(j, k)) * std::abs(site.rho0()(j, j).real() - site.rho0()(k, k).real());
    };
    const auto best = *std::max_element(entries.begin(), entries.end(), [&](auto& x, auto& y) {
        return score(x.first, x.second) < score(y.first, y.second);
    });

    MaximalityWitness w{CMat(), 0.0, best.first, best.second, 0.0};
    for (const cplx c : {cplx{1.0, 0.0}, cplx{0.0, 1.0}}) {
        const CMat cm = make(best.first, best.second, c);
        const double s = site_symplectic(a, cm, site);
        if (std::abs(s) > std::abs(w.sigma)) w = {cm, c, best.first, best.second, s};
    }
    if (std::abs(w.sigma) > floor) return w;

    for (const auto& [j, k] : entries) {
        for (int p = 0; p < 16; ++p) {
            const cplx c = std::polar(1.0, 2.0 * std::numbers::pi * p / 16.0);
            const CMat cm = make(j, k, c);
            const double s = site_symplectic(a, cm, site);
            if (std::abs(s) > std::abs(w.sigma)) w = {cm, c, j, k, s};
        }
    }
    if (std::abs(w.sigma) > floor) return w;
    throw NoWitnessError("maximality_witness: every candidate commutes with A in this state");
}

std::pair<long, long> best_rational(double x, long max_denominator) {
    long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    double r = x;
    for (int iter = 0; iter < 64; ++iter) {
        const double fl = std::floor(r);
        const long a = static_cast<long>(fl);
        const long h2 = a * h1 + h0;
        const long k2 = a * k1 + k0;
        if (k2 > max_denominator) break;
        h0 = h1; h1 = h2; k0 = k1; k1 = k2;
        const double frac = r - fl;
        if (frac < 1e-15) break;
        r = 1.0 / frac;
    }
    return {h1, k1};
}

QuasiperiodicityReport quasiperiodicity_report(const CMat& a, const SiteModel& site,
                                               const std::vector<double>& t_grid, double recurrence_tol,
                                               int max_denominator) {
    const int n = site.n();
    if (a.rows() != n || a.cols() != n) throw DimensionError("quasiperiodicity_report: dimension");
    const auto& h = site.h_diag();
    QuasiperiodicityReport report;
    report.times = t_grid;
    const double norm = a.norm();
    for (const double t : t_grid) {
        double d2 = 0.0;
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                d2 += std::norm(a(j, k) * (std::polar(1.0, (h[j] - h[k]) * t) - 1.0));
        report.distances.push_back(std::sqrt(d2));
    }
    for (std::size_t i = 1; i + 1 < report.distances.size(); ++i) {
        const double d = report.distances[i];
        if (d <= report.distances[i - 1] && d <= report.distances[i + 1] && d <= recurrence_tol * norm &&
            report.times[i] > 0.0)
            report.near_recurrences.push_back(report.times[i]);
    }

    std::vector<double> gaps;
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            const double g = std::abs(h[j] - h[k]);
            if (j != k && std::abs(a(j, k)) > 1e-14 * std::max(norm, 1.0) && g > 1e-12) gaps.push_back(g);
        }
    if (gaps.empty()) {
        report.stationary = true;
        return report;
    }
    std::sort(gaps.begin(), gaps.end());
    const double base = gaps.front();
    std::vector<long> num;
    std::vector<long> den;
    for (const double g : gaps) {
        const double ratio = g / base;
        const auto [p, q] = best_rational(ratio, max_denominator);
        if (std::abs(ratio - static_cast<double>(p) / static_cast<double>(q)) > 1e-9 * ratio) return report;
        num.push_back(p);
        den.push_back(q);
    }
    long common = 1;
    for (const long q : den) common = std::lcm(common, q);
    long g = 0;
    for (std::size_t i = 0; i < num.size(); ++i) g = std::gcd(g, num[i] * (common / den[i]));
    const double fundamental = static_cast<double>(g) * base / static_cast<double>(common);
    report.exact_period = 2.0 * std::numbers::pi / fundamental;
    return report;
}

RangeTwoReport range_two_gram(const SiteModel& site, double tol) {
    const int n = site.n();
    if (n > range_two_max_n)
        throw CapacityError("range_two_gram: n = " + std::to_string(n) + " exceeds cap of " +
                            std::to_string(range_two_max_n));
    std::vector<CMat> single{CMat::Identity(n, n) / std::sqrt(static_cast<double>(n))};
    const auto traceless = traceless_hermitian_basis(n);
    single.insert(single.end(), traceless.begin(), traceless.end());

    RangeTwoReport report;
    std::vector<bool> diag_pair;
    for (std::size_t a = 0; a < single.size(); ++a) {
        for (std::size_t b = 0; b < single.size(); ++b) {
            if (a == 0 && b == 0) continue;
            report.generators.push_back(kron(single[a], single[b]));
            auto is_diag = [&](const CMat& m) {
                CMat off = m;
                off.diagonal().setZero();
                return off.cwiseAbs().maxCoeff() == 0.0;
            };
            diag_pair.push_back(is_diag(single[a]) && is_diag(single[b]));
        }
    }
    const auto m = static_cast<Eigen::Index>(report.generators.size());
    report.dimension = static_cast<int>(m);

    // Three-site window: placement "left" on sites (0,1), "right" on (1,2).
    const CMat id = CMat::Identity(n, n);
    const CMat density = kron(kron(site.rho0(), site.rho0()), site.rho0());
    std::vector<CMat> left;
    std::vector<CMat> right;
    std::vector<CMat> dleft;
    std::vector<CMat> dright;
    std::vector<cplx> mean;
    for (const auto& g : report.generators) {
        left.push_back(kron(g, id));
        right.push_back(kron(id, g));
        dleft.push_back(density * left.back());
        dright.push_back(density * right.back());
        mean.push_back(trace_product(density, left.back()));
    }

    report.sigma = Eigen::MatrixXd::Zero(m, m);
    report.covariance = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index a = 0; a < m; ++a) {
        const auto ia = static_cast<std::size_t>(a);
        for (Eigen::Index b = a; b < m; ++b) {
            const auto ib = static_cast<std::size_t>(b);
            // sum_x omega(A sigma_x B) over x = 0 (same placement), x = +1
            // (B to the right of A) and x = -1 (B to the left of A).
            auto corr = [&](std::size_t p, std::size_t q) {
                return trace_product(dleft[p], left[q]) + trace_product(dleft[p], right[q]) +
                       trace_product(dright[p], left[q]) - 3.0 * mean[p] * mean[q];
            };
            const cplx ab = corr(ia, ib);
            const cplx ba = corr(ib, ia);
            // omega([A, sigma_x B]) summed = ab - conj-ordered counterpart
            const cplx comm = (trace_product(dleft[ia], left[ib]) - trace_product(dleft[ib], left[ia])) +
                              (trace_product(dleft[ia], right[ib]) - trace_product(dright[ib], left[ia])) +
                              (trace_product(dright[ia], left[ib]) - trace_product(dleft[ib], right[ia]));
            const double s = (cplx{0.0, 1.0} * comm).real();
            report.sigma(a, b) = s;
            report.sigma(b, a) = -s;
            const double c = 0.5 * (ab.real() + ba.real());
            report.covariance(a, b) = c;
            report.covariance(b, a) = c;
        }
    }

    const SymplecticSpace space(report.sigma);
    report.rank = space.rank(tol);
    report.kernel_dim = static_cast<int>(m) - report.rank;
    report.pair_count = canonical_basis(space, tol).pair_count();
    const Eigen::MatrixXcd pos =
        report.covariance.cast<cplx>() + cplx{0.0, 0.5} * report.sigma.cast<cplx>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(pos, Eigen::EigenvaluesOnly);
    report.positivity_min_eig = es.eigenvalues().minCoeff();
    for (Eigen::Index a = 0; a < m; ++a)
        if (diag_pair[static_cast<std::size_t>(a)])
            report.diagonal_sigma_max = std::max(report.diagonal_sigma_max, report.sigma.row(a).cwiseAbs().maxCoeff());
    return report;
}

} // namespace fluctuon
