#pragma once

// Gauge-invariant polynomials in the CAR algebra and their quasifree
// expectation values.
//
// A monomial is the operator word
//     coefficient * a*(c_1) ... a*(c_n) a(d_1) ... a(d_m)
// with annihilators stored in product (left-to-right) order. For a
// balanced word the quasifree value is
//     coefficient * det[ omega(a*(c_i) a(d_{n+1-j})) ],
// so that n = 1 gives omega(a*(f)a(g)) = <g|rho f>.

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "fluctuon/one_particle.hpp"

namespace fluctuon {

struct GaugeMonomial {
    std::vector<OneParticleFunction> creators;
    std::vector<OneParticleFunction> annihilators;
    cplx coefficient{1.0, 0.0};

    int creation_degree() const noexcept { return static_cast<int>(creators.size()); }
    int annihilation_degree() const noexcept { return static_cast<int>(annihilators.size()); }
    int degree() const noexcept { return creation_degree() + annihilation_degree(); }
    bool balanced() const noexcept { return creators.size() == annihilators.size(); }
    bool is_quadratic() const noexcept { return creators.size() == 1 && annihilators.size() == 1; }
};

/// c * a*(f) a(g)
GaugeMonomial quadratic(const OneParticleFunction& f, const OneParticleFunction& g,
                        cplx coefficient = 1.0);

/// c * a*(f1) a*(f2) a(g2) a(g1)
GaugeMonomial quartic(const OneParticleFunction& f1, const OneParticleFunction& f2,
                      const OneParticleFunction& g1, const OneParticleFunction& g2,
                      cplx coefficient = 1.0);

/// Linear combination of monomials, always kept in canonical form: within
/// each monomial creators and annihilators are sorted by a stable content
/// hash (with the fermionic sign), repeated functions annihilate the term,
/// identical words are merged and zero terms dropped.
class GaugePolynomial {
public:
    GaugePolynomial() = default;
    explicit GaugePolynomial(GaugeMonomial term);
    explicit GaugePolynomial(std::vector<GaugeMonomial> terms);

    static GaugePolynomial identity();

    const std::vector<GaugeMonomial>& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    int max_degree() const noexcept;

    /// Closed under the adjoint map up to coefficient differences <= tol.
    bool is_self_adjoint(double tol = 1e-12) const;

    GaugePolynomial& operator+=(const GaugePolynomial& other);
    GaugePolynomial& operator-=(const GaugePolynomial& other);
    GaugePolynomial& operator*=(cplx scalar);

    friend GaugePolynomial operator+(GaugePolynomial a, const GaugePolynomial& b) { return a += b; }
    friend GaugePolynomial operator-(GaugePolynomial a, const GaugePolynomial& b) { return a -= b; }
    friend GaugePolynomial operator*(cplx s, GaugePolynomial a) { return a *= s; }

private:
    std::vector<GaugeMonomial> terms_;
};

/// Default cap on the total degree produced by multiply.
inline constexpr int default_max_degree = 8;

GaugeMonomial adjoint(const GaugeMonomial& m);
GaugePolynomial adjoint(const GaugePolynomial& p);

/// P + P*, the self-adjoint symmetrization.
GaugePolynomial hermitian_part(const GaugePolynomial& p);

/// Normal-ordered product using {a(g), a*(f)} = <g|f>. Throws CapacityError
/// when a pair of terms exceeds max_degree.
GaugePolynomial multiply(const GaugePolynomial& p, const GaugePolynomial& q,
                         int max_degree = default_max_degree);

/// Applies fn to every one-particle function of every term.
GaugePolynomial map_functions(const GaugePolynomial& p,
                              const std::function<OneParticleFunction(const OneParticleFunction&)>& fn);
GaugeMonomial map_functions(const GaugeMonomial& m,
                            const std::function<OneParticleFunction(const OneParticleFunction&)>& fn);

GaugePolynomial translate(const GaugePolynomial& p, long x);
GaugePolynomial evolve(const GaugePolynomial& p, const OneParticleModel& model, double t);

cplx quasifree_expectation(const GaugeMonomial& m, const OneParticleModel& model);
cplx quasifree_expectation(const GaugePolynomial& p, const OneParticleModel& model);

/// omega(A B) for the (generally not normal-ordered) product of two
/// monomials, evaluated directly by Wick contraction without expanding.
cplx product_expectation(const GaugeMonomial& a, const GaugeMonomial& b,
                         const OneParticleModel& model);

/// omega([Q, P]) for Q = c a*(f1) a(f2), using that the commutator with an
/// even quadratic is a derivation: each a*(c_j) is replaced by
/// <f2|c_j> a*(f1) and each a(d_j) by -<d_j|f1> a(f2). Throws ShapeError
/// unless Q has degree (1, 1).
cplx commutator_expectation(const GaugeMonomial& q, const GaugeMonomial& p,
                            const OneParticleModel& model);

/// omega([A, B]) for arbitrary monomials; dispatches to the derivation
/// formula whenever either side is quadratic.
cplx commutator_expectation_any(const GaugeMonomial& a, const GaugeMonomial& b,
                                const OneParticleModel& model);

/// Stable 64-bit content hash of a one-particle function (FNV-1a over the
/// value bits, with -0.0 folded onto 0.0).
std::uint64_t content_hash(const OneParticleFunction& f);

namespace detail {

struct WordOp {
    bool creator;
    const OneParticleFunction* function;
};

/// Quasifree expectation of an arbitrary word of smeared operators.
cplx word_expectation(std::span<const WordOp> word, const OneParticleModel& model);

} // namespace detail

} // namespace fluctuon
