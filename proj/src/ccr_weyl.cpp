#include "fluctuon/ccr_weyl.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fluctuon/errors.hpp"

namespace fluctuon {

namespace {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// Orthonormal basis of the column span of m, dropping directions whose
// singular value is below cutoff.
Mat orthonormal_columns(const Mat& m, double cutoff) {
    if (m.cols() == 0) return Mat(m.rows(), 0);
    Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU);
    Eigen::Index keep = 0;
    while (keep < svd.singularValues().size() && svd.singularValues()[keep] > cutoff) ++keep;
    return svd.matrixU().leftCols(keep);
}

} // namespace

SymplecticSpace::SymplecticSpace(const Mat& sigma) {
    if (sigma.rows() != sigma.cols()) throw ContractError("SymplecticSpace: sigma must be square");
    if (sigma.rows() == 0) return;
    const double scale = std::max(1.0, sigma.cwiseAbs().maxCoeff());
    const double asym = (sigma + sigma.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12 * scale)
        throw ContractError("SymplecticSpace: sigma is not antisymmetric (deviation " + std::to_string(asym) + ")");
    sigma_ = 0.5 * (sigma - sigma.transpose());
}

SymplecticSpace SymplecticSpace::canonical(int pairs) {
    if (pairs < 1) throw ParameterError("SymplecticSpace::canonical: need at least one pair");
    Mat s = Mat::Zero(2 * pairs, 2 * pairs);
    for (int k = 0; k < pairs; ++k) {
        s(2 * k, 2 * k + 1) = 1.0;
        s(2 * k + 1, 2 * k) = -1.0;
    }
    return SymplecticSpace(s);
}

int SymplecticSpace::rank(double tol) const {
    if (dim() == 0) return 0;
    Eigen::JacobiSVD<Mat> svd(sigma_);
    int r = 0;
    for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k)
        if (svd.singularValues()[k] >= tol) ++r;
    return r;
}

double ComplexStructure::square_residual() const {
    const Mat r = J * J + Mat::Identity(J.rows(), J.cols());
    return r.cwiseAbs().maxCoeff();
}

double ComplexStructure::compatibility_residual(const SymplecticSpace& space) const {
    const Mat& s = space.sigma();
    // sigma(J e_i, e_j) = (J^T S)_ij, sigma(e_i, J e_j) = (S J)_ij
    return (J.transpose() * s + s * J).cwiseAbs().maxCoeff();
}

double ComplexStructure::positivity_min_eig(const SymplecticSpace& space) const {
    const Mat g = space.sigma() * J;
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (g + g.transpose()), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

std::complex<double> ComplexStructure::inner(const SymplecticSpace& space, const Vec& f, const Vec& g) const {
    return {space.form(f, J * g), space.form(f, g)};
}

ComplexStructure build_complex_structure(const SymplecticSpace& space) {
    const int n = space.dim();
    if (n % 2 != 0)
        throw DegeneracyError("build_complex_structure: odd dimension " + std::to_string(n) +
                              " admits no complex structure; use split_degenerate");
    if (n == 0) return ComplexStructure{Mat(0, 0)};
    const Mat& s = space.sigma();
    // Polar factor from the SVD S = U D V^T: -S |S|^{-1} = -U V^T, which
    // avoids squaring the condition number through S^T S.
    const Eigen::JacobiSVD<Mat> svd(s, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Vec& d = svd.singularValues();
    if (d[0] == 0.0 || d[n - 1] <= 1e-10 * d[0])
        throw DegeneracyError("build_complex_structure: sigma is singular; use split_degenerate");
    const Mat j = -svd.matrixU() * svd.matrixV().transpose();
    // S is normal, so J is exactly antisymmetric; drop the rounding part.
    return ComplexStructure{0.5 * (j - j.transpose())};
}

double CanonicalBasis::pairing_residual(const SymplecticSpace& space) const {
    double worst = 0.0;
    for (std::size_t i = 0; i < chi.size(); ++i) {
        for (std::size_t j = 0; j < chi.size(); ++j) {
            const double delta = i == j ? 1.0 : 0.0;
            worst = std::max({worst, std::abs(space.form(chi[i], eta[j]) - delta),
                              std::abs(space.form(chi[i], chi[j])), std::abs(space.form(eta[i], eta[j]))});
        }
    }
    return worst;
}

CanonicalBasis canonical_basis(const SymplecticSpace& space, double tol) {
    const DegenerateSplit split = split_degenerate(space, tol);
    const Mat& s = space.sigma();
    const int n = space.dim();

    CanonicalBasis out;
    for (Eigen::Index k = 0; k < split.kernel.cols(); ++k) out.kernel.push_back(split.kernel.col(k));

    // Remaining subspace, kept symplectically orthogonal to all extracted
    // pairs and Euclidean-orthonormal within itself.
    Mat w = split.range;
    while (w.cols() >= 2) {
        const Mat sw = w.transpose() * s * w;
        Eigen::SelfAdjointEigenSolver<Mat> es(sw.transpose() * sw);
        const Vec& lam = es.eigenvalues();
        const double top = lam.maxCoeff();
        if (!(top > 0.0)) break;

        // Deterministic pick inside the top eigenspace: the projection of the
        // lowest-index coordinate axis with a substantial component.
        Mat top_space(n, 0);
        for (Eigen::Index k = 0; k < lam.size(); ++k) {
            if (lam[k] >= top * (1.0 - 1e-9)) {
                top_space.conservativeResize(Eigen::NoChange, top_space.cols() + 1);
                top_space.col(top_space.cols() - 1) = w * es.eigenvectors().col(k);
            }
        }
        const Mat proj = top_space * top_space.transpose();
        const double best = proj.colwise().norm().maxCoeff();
        Vec u = proj.col(0);
        for (int i = 0; i < n; ++i) {
            if (proj.col(i).norm() >= 0.5 * best) {
                u = proj.col(i);
                break;
            }
        }
        u.normalize();
        const Vec y = w.transpose() * u;
        Vec v = w * (-sw * y);
        v /= v.norm();
        const double pairing = space.form(u, v);
        const double scale = 1.0 / std::sqrt(pairing);
        const Vec chi = u * scale;
        const Vec eta = v * scale;
        out.chi.push_back(chi);
        out.eta.push_back(eta);

        // Symplectic Gram-Schmidt: w <- w - sigma(w, eta) chi + sigma(w, chi) eta.
        Mat projected = w;
        for (Eigen::Index c = 0; c < w.cols(); ++c) {
            const Vec col = w.col(c);
            projected.col(c) = col - space.form(col, eta) * chi + space.form(col, chi) * eta;
        }
        Mat next = orthonormal_columns(projected, 1e-8);
        if (next.cols() > w.cols() - 2) next = next.leftCols(w.cols() - 2);
        w = next;
    }
    return out;
}

double DegenerateSplit::reconstruction_residual(const SymplecticSpace& space) const {
    const Mat rebuilt = range * restricted.sigma() * range.transpose();
    return (rebuilt - space.sigma()).cwiseAbs().maxCoeff();
}

DegenerateSplit split_degenerate(const SymplecticSpace& space, double tol) {
    if (!(tol > 0.0)) throw ParameterError("split_degenerate: tol must be > 0");
    const Mat& s = space.sigma();
    Eigen::JacobiSVD<Mat> svd(s, Eigen::ComputeFullV);
    const Vec& sv = svd.singularValues();
    Eigen::Index rank = 0;
    while (rank < sv.size() && sv[rank] >= tol) ++rank;
    // An antisymmetric matrix has even rank; a straddling pair of singular
    // values at the threshold is resolved towards the kernel.
    if (rank % 2 != 0) --rank;
    const Mat range = svd.matrixV().leftCols(rank);
    const Mat kernel = svd.matrixV().rightCols(s.cols() - rank);
    const Mat restricted = range.transpose() * s * range;
    return DegenerateSplit{kernel, range, SymplecticSpace(restricted)};
}

WeylProduct weyl_product(const Vec& f, const Vec& g, const SymplecticSpace& space) {
    if (f.size() != space.dim() || g.size() != space.dim())
        throw DimensionError("weyl_product: vector dimension mismatch");
    return {std::polar(1.0, -0.5 * space.form(f, g)), f + g};
}

double weyl_positivity_min_eig(const Mat& a, const Mat& sigma) {
    const Eigen::MatrixXcd h = a.cast<std::complex<double>>() - std::complex<double>{0.0, 0.25} * sigma.cast<std::complex<double>>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

WeylCovariance::WeylCovariance(Mat a, const SymplecticSpace& space) : a_(std::move(a)), min_eig_(0.0) {
    if (a_.rows() != space.dim() || a_.cols() != space.dim())
        throw DimensionError("WeylCovariance: shape does not match the symplectic space");
    const double scale = std::max(1.0, a_.cwiseAbs().maxCoeff());
    if ((a_ - a_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw StateError("WeylCovariance: covariance is not symmetric");
    a_ = 0.5 * (a_ + a_.transpose());
    min_eig_ = weyl_positivity_min_eig(a_, space.sigma());
    if (min_eig_ < -1e-10)
        throw StateError("WeylCovariance: A - (i/4) sigma has eigenvalue " + std::to_string(min_eig_));
}

double quasifree_weyl_expectation(const Vec& f, const WeylCovariance& cov) {
    if (f.size() != cov.matrix().rows()) throw DimensionError("quasifree_weyl_expectation: dimension");
    return std::exp(-f.dot(cov.matrix() * f));
}

KmsWeylState kms_weyl_covariance(const Vec& h, double beta, double z, double occupation_cap) {
    if (!(beta > 0.0)) throw ParameterError("kms_weyl_covariance: beta must be > 0");
    if (!(z > 0.0)) throw ParameterError("kms_weyl_covariance: z must be > 0");
    if (h.size() == 0) throw ParameterError("kms_weyl_covariance: need at least one mode");
    const auto m = static_cast<int>(h.size());
    SymplecticSpace space = SymplecticSpace::canonical(m);
    Mat a = Mat::Zero(2 * m, 2 * m);
    Vec occupation(m);
    std::vector<int> candidates;
    for (int k = 0; k < m; ++k) {
        const double x = z * std::exp(-beta * h[k]);
        if (!(x < 1.0))
            throw DegeneracyError("kms_weyl_covariance: mode " + std::to_string(k) +
                                  " has z e^{-beta h} >= 1; it is a condensate mode, remove it with "
                                  "split_degenerate and assign its expectation separately");
        occupation[k] = x / (1.0 - x);
        const double ak = 0.25 * (1.0 + x) / (1.0 - x);
        a(2 * k, 2 * k) = ak;
        a(2 * k + 1, 2 * k + 1) = ak;
        if (occupation[k] > occupation_cap) candidates.push_back(k);
    }
    WeylCovariance cov(a, space);
    return KmsWeylState{std::move(space), std::move(cov), std::move(occupation), std::move(candidates)};
}

BogoliubovMap::BogoliubovMap(Mat t, const SymplecticSpace& space) : t_(std::move(t)), space_(space) {
    if (t_.rows() != space.dim() || t_.cols() != space.dim())
        throw DimensionError("BogoliubovMap: shape does not match the symplectic space");
    const double dev = (t_.transpose() * space.sigma() * t_ - space.sigma()).cwiseAbs().maxCoeff();
    if (dev > 1e-10)
        throw ContractError("BogoliubovMap: T is not symplectic, max |T^T S T - S| = " + std::to_string(dev));
}

WeylCovariance BogoliubovMap::apply(const WeylCovariance& cov) const {
    return WeylCovariance(t_.transpose() * cov.matrix() * t_, space_);
}

CondensateWeylState::CondensateWeylState(DegenerateSplit split, WeylCovariance range_covariance,
                                         double condensate_weight)
    : split_(std::move(split)), range_cov_(std::move(range_covariance)), weight_(condensate_weight) {
    if (!(condensate_weight >= 0.0)) throw ParameterError("CondensateWeylState: weight must be >= 0");
    if (range_cov_.matrix().rows() != split_.range.cols())
        throw DimensionError("CondensateWeylState: covariance does not match the range dimension");
}

double CondensateWeylState::expectation(const Vec& f) const {
    const Vec fr = split_.range.transpose() * f;
    const Vec fk = split_.kernel.transpose() * f;
    return std::exp(-fr.dot(range_cov_.matrix() * fr)) * std::exp(-weight_ * fk.squaredNorm());
}

Mat CondensateWeylState::extend_dynamics(const Mat& range_map) const {
    return split_.range * range_map * split_.range.transpose() + split_.kernel * split_.kernel.transpose();
}

} // namespace fluctuon
