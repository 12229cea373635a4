#include "fluctuon/car_wick.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <string>

#include "fluctuon/errors.hpp"

namespace fluctuon {

namespace {

bool function_less(const OneParticleFunction& a, const OneParticleFunction& b) {
    const auto ha = content_hash(a);
    const auto hb = content_hash(b);
    if (ha != hb) return ha < hb;
    const auto& va = a.values();
    const auto& vb = b.values();
    if (va.size() != vb.size()) return va.size() < vb.size();
    for (Eigen::Index i = 0; i < va.size(); ++i) {
        if (va[i].real() != vb[i].real()) return va[i].real() < vb[i].real();
        if (va[i].imag() != vb[i].imag()) return va[i].imag() < vb[i].imag();
    }
    return false;
}

// Insertion sort tracking the permutation parity. Returns 0 when a function
// repeats (a*(f)a*(f) = 0), otherwise +1 or -1.
int sort_with_sign(std::vector<OneParticleFunction>& v) {
    int sign = 1;
    for (std::size_t i = 1; i < v.size(); ++i) {
        for (std::size_t j = i; j > 0 && function_less(v[j], v[j - 1]); --j) {
            std::swap(v[j], v[j - 1]);
            sign = -sign;
        }
    }
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] == v[i - 1]) return 0;
    return sign;
}

bool word_less(const GaugeMonomial& a, const GaugeMonomial& b) {
    if (a.creators.size() != b.creators.size()) return a.creators.size() < b.creators.size();
    if (a.annihilators.size() != b.annihilators.size())
        return a.annihilators.size() < b.annihilators.size();
    for (std::size_t i = 0; i < a.creators.size(); ++i) {
        if (function_less(a.creators[i], b.creators[i])) return true;
        if (function_less(b.creators[i], a.creators[i])) return false;
    }
    for (std::size_t i = 0; i < a.annihilators.size(); ++i) {
        if (function_less(a.annihilators[i], b.annihilators[i])) return true;
        if (function_less(b.annihilators[i], a.annihilators[i])) return false;
    }
    return false;
}

bool same_word(const GaugeMonomial& a, const GaugeMonomial& b) {
    return a.creators == b.creators && a.annihilators == b.annihilators;
}

void check_grids(const std::vector<GaugeMonomial>& terms) {
    const MomentumGrid* grid = nullptr;
    auto visit = [&](const OneParticleFunction& f) {
        if (grid == nullptr) grid = &f.grid();
        else if (!(*grid == f.grid())) throw DimensionError("GaugePolynomial: functions on different grids");
    };
    for (const auto& t : terms) {
        for (const auto& f : t.creators) visit(f);
        for (const auto& f : t.annihilators) visit(f);
    }
}

std::vector<GaugeMonomial> canonicalize(std::vector<GaugeMonomial> terms) {
    check_grids(terms);
    std::vector<GaugeMonomial> sorted;
    sorted.reserve(terms.size());
    for (auto& t : terms) {
        if (t.coefficient == cplx{0.0, 0.0}) continue;
        const int sc = sort_with_sign(t.creators);
        const int sa = sort_with_sign(t.annihilators);
        if (sc == 0 || sa == 0) continue;
        t.coefficient *= static_cast<double>(sc * sa);
        sorted.push_back(std::move(t));
    }
    std::stable_sort(sorted.begin(), sorted.end(), word_less);

    std::vector<GaugeMonomial> merged;
    for (std::size_t i = 0; i < sorted.size();) {
        GaugeMonomial acc = std::move(sorted[i]);
        double magnitude = std::abs(acc.coefficient);
        std::size_t j = i + 1;
        for (; j < sorted.size() && same_word(acc, sorted[j]); ++j) {
            acc.coefficient += sorted[j].coefficient;
            magnitude += std::abs(sorted[j].coefficient);
        }
        // Merged terms that cancel down to rounding are dropped as zero.
        if (std::abs(acc.coefficient) > 1e-15 * magnitude) merged.push_back(std::move(acc));
        i = j;
    }
    return merged;
}

using detail::WordOp;

void append_word(const GaugeMonomial& m, std::vector<WordOp>& word) {
    for (const auto& f : m.creators) word.push_back({true, &f});
    for (const auto& f : m.annihilators) word.push_back({false, &f});
}

void normal_order(std::vector<WordOp> word, cplx coefficient, std::vector<GaugeMonomial>& out) {
    for (std::size_t i = 0; i + 1 < word.size(); ++i) {
        if (!word[i].creator && word[i + 1].creator) {
            // a(g) a*(f) = <g|f> - a*(f) a(g)
            const cplx c = inner_product(*word[i].function, *word[i + 1].function);
            if (c != cplx{0.0, 0.0}) {
                std::vector<WordOp> contracted;
                contracted.reserve(word.size() - 2);
                for (std::size_t k = 0; k < word.size(); ++k)
                    if (k != i && k != i + 1) contracted.push_back(word[k]);
                normal_order(std::move(contracted), coefficient * c, out);
            }
            std::swap(word[i], word[i + 1]);
            normal_order(std::move(word), -coefficient, out);
            return;
        }
    }
    GaugeMonomial m;
    m.coefficient = coefficient;
    for (const auto& op : word) (op.creator ? m.creators : m.annihilators).push_back(*op.function);
    out.push_back(std::move(m));
}

} // namespace

std::uint64_t content_hash(const OneParticleFunction& f) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](double d) {
        if (d == 0.0) d = 0.0;
        const auto bits = std::bit_cast<std::uint64_t>(d);
        for (int b = 0; b < 8; ++b) {
            h ^= (bits >> (8 * b)) & 0xffU;
            h *= 0x100000001b3ULL;
        }
    };
    mix(static_cast<double>(f.grid().size()));
    mix(static_cast<double>(f.grid().spin_dim()));
    for (const auto& v : f.values()) {
        mix(v.real());
        mix(v.imag());
    }
    return h;
}

GaugeMonomial quadratic(const OneParticleFunction& f, const OneParticleFunction& g, cplx coefficient) {
    return GaugeMonomial{{f}, {g}, coefficient};
}

GaugeMonomial quartic(const OneParticleFunction& f1, const OneParticleFunction& f2,
                      const OneParticleFunction& g1, const OneParticleFunction& g2, cplx coefficient) {
    return GaugeMonomial{{f1, f2}, {g2, g1}, coefficient};
}

GaugePolynomial::GaugePolynomial(GaugeMonomial term) : terms_(canonicalize({std::move(term)})) {}

GaugePolynomial::GaugePolynomial(std::vector<GaugeMonomial> terms)
    : terms_(canonicalize(std::move(terms))) {}

GaugePolynomial GaugePolynomial::identity() { return GaugePolynomial(GaugeMonomial{}); }

int GaugePolynomial::max_degree() const noexcept {
    int d = 0;
    for (const auto& t : terms_) d = std::max(d, t.degree());
    return d;
}

bool GaugePolynomial::is_self_adjoint(double tol) const {
    const GaugePolynomial diff = *this - adjoint(*this);
    for (const auto& t : diff.terms())
        if (std::abs(t.coefficient) > tol) return false;
    return true;
}

GaugePolynomial& GaugePolynomial::operator+=(const GaugePolynomial& other) {
    std::vector<GaugeMonomial> all = terms_;
    all.insert(all.end(), other.terms_.begin(), other.terms_.end());
    terms_ = canonicalize(std::move(all));
    return *this;
}

GaugePolynomial& GaugePolynomial::operator-=(const GaugePolynomial& other) {
    return *this += cplx{-1.0, 0.0} * other;
}

GaugePolynomial& GaugePolynomial::operator*=(cplx scalar) {
    for (auto& t : terms_) t.coefficient *= scalar;
    terms_ = canonicalize(std::move(terms_));
    return *this;
}

GaugeMonomial adjoint(const GaugeMonomial& m) {
    GaugeMonomial out;
    out.coefficient = std::conj(m.coefficient);
    out.creators.assign(m.annihilators.rbegin(), m.annihilators.rend());
    out.annihilators.assign(m.creators.rbegin(), m.creators.rend());
    return out;
}

GaugePolynomial adjoint(const GaugePolynomial& p) {
    std::vector<GaugeMonomial> terms;
    terms.reserve(p.terms().size());
    for (const auto& t : p.terms()) terms.push_back(adjoint(t));
    return GaugePolynomial(std::move(terms));
}

GaugePolynomial hermitian_part(const GaugePolynomial& p) { return p + adjoint(p); }

GaugePolynomial multiply(const GaugePolynomial& p, const GaugePolynomial& q, int max_degree) {
    std::vector<GaugeMonomial> out;
    for (const auto& a : p.terms()) {
        for (const auto& b : q.terms()) {
            if (a.degree() + b.degree() > max_degree)
                throw CapacityError("multiply: total degree " + std::to_string(a.degree() + b.degree()) +
                                    " exceeds cap " + std::to_string(max_degree));
            std::vector<WordOp> word;
            append_word(a, word);
            append_word(b, word);
            normal_order(std::move(word), a.coefficient * b.coefficient, out);
        }
    }
    return GaugePolynomial(std::move(out));
}

GaugeMonomial map_functions(const GaugeMonomial& m,
                            const std::function<OneParticleFunction(const OneParticleFunction&)>& fn) {
    GaugeMonomial out;
    out.coefficient = m.coefficient;
    out.creators.reserve(m.creators.size());
    out.annihilators.reserve(m.annihilators.size());
    for (const auto& f : m.creators) out.creators.push_back(fn(f));
    for (const auto& f : m.annihilators) out.annihilators.push_back(fn(f));
    return out;
}

GaugePolynomial map_functions(const GaugePolynomial& p,
                              const std::function<OneParticleFunction(const OneParticleFunction&)>& fn) {
    std::vector<GaugeMonomial> terms;
    terms.reserve(p.terms().size());
    for (const auto& t : p.terms()) terms.push_back(map_functions(t, fn));
    return GaugePolynomial(std::move(terms));
}

GaugePolynomial translate(const GaugePolynomial& p, long x) {
    return map_functions(p, [x](const OneParticleFunction& f) { return translate(f, x); });
}

GaugePolynomial evolve(const GaugePolynomial& p, const OneParticleModel& model, double t) {
    return map_functions(p, [&](const OneParticleFunction& f) { return evolve(f, model, t); });
}

namespace detail {

cplx word_expectation(std::span<const WordOp> word, const OneParticleModel& model) {
    std::vector<std::size_t> cpos;
    std::vector<std::size_t> apos;
    long inversions = 0;
    for (std::size_t i = 0; i < word.size(); ++i) {
        if (!(word[i].function->grid() == model.grid()))
            throw DimensionError("quasifree_expectation: function grid differs from model grid");
        if (word[i].creator) {
            cpos.push_back(i);
            inversions += static_cast<long>(apos.size());
        } else {
            apos.push_back(i);
        }
    }
    if (cpos.size() != apos.size()) return 0.0;
    const auto n = static_cast<Eigen::Index>(cpos.size());
    if (n == 0) return 1.0;

    // Pfaffian of the contraction matrix restricted to creator/annihilator
    // pairs. Reordering to (creators, annihilators) costs the inversion
    // parity; the block Pfaffian is (-1)^{n(n-1)/2} det B.
    const Eigen::VectorXd& rho = model.rho();
    const Eigen::VectorXd hole = Eigen::VectorXd::Ones(rho.size()) - rho;
    Eigen::MatrixXcd b(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const std::size_t c = cpos[static_cast<std::size_t>(i)];
            const std::size_t d = apos[static_cast<std::size_t>(j)];
            const auto& f = *word[c].function;
            const auto& g = *word[d].function;
            b(i, j) = c < d ? weighted_inner_product(g, rho, f) : -weighted_inner_product(g, hole, f);
        }
    }
    long parity = inversions + static_cast<long>(n) * (static_cast<long>(n) - 1) / 2;
    const double sign = (parity % 2 == 0) ? 1.0 : -1.0;
    cplx det;
    switch (n) {
    case 1: det = b(0, 0); break;
    case 2: det = b(0, 0) * b(1, 1) - b(0, 1) * b(1, 0); break;
    default: det = b.partialPivLu().determinant(); break;
    }
    return sign * det;
}

} // namespace detail

cplx quasifree_expectation(const GaugeMonomial& m, const OneParticleModel& model) {
    if (!m.balanced()) return 0.0;
    std::vector<WordOp> word;
    append_word(m, word);
    return m.coefficient * detail::word_expectation(word, model);
}

cplx quasifree_expectation(const GaugePolynomial& p, const OneParticleModel& model) {
    cplx acc = 0.0;
    for (const auto& t : p.terms()) acc += quasifree_expectation(t, model);
    return acc;
}

cplx product_expectation(const GaugeMonomial& a, const GaugeMonomial& b, const OneParticleModel& model) {
    if (a.creation_degree() + b.creation_degree() != a.annihilation_degree() + b.annihilation_degree())
        return 0.0;
    std::vector<WordOp> word;
    append_word(a, word);
    append_word(b, word);
    return a.coefficient * b.coefficient * detail::word_expectation(word, model);
}

cplx commutator_expectation(const GaugeMonomial& q, const GaugeMonomial& p, const OneParticleModel& model) {
    if (!q.is_quadratic())
        throw ShapeError("commutator_expectation: Q must have degree (1, 1), got (" +
                         std::to_string(q.creation_degree()) + ", " +
                         std::to_string(q.annihilation_degree()) + ")");
    if (!p.balanced()) return 0.0;
    const auto& f1 = q.creators.front();
    const auto& f2 = q.annihilators.front();

    cplx acc = 0.0;
    GaugeMonomial replaced = p;
    replaced.coefficient = 1.0;
    for (std::size_t j = 0; j < p.creators.size(); ++j) {
        const cplx c = inner_product(f2, p.creators[j]);
        if (c == cplx{0.0, 0.0}) continue;
        replaced.creators[j] = f1;
        acc += c * quasifree_expectation(replaced, model);
        replaced.creators[j] = p.creators[j];
    }
    for (std::size_t j = 0; j < p.annihilators.size(); ++j) {
        const cplx c = inner_product(p.annihilators[j], f1);
        if (c == cplx{0.0, 0.0}) continue;
        replaced.annihilators[j] = f2;
        acc -= c * quasifree_expectation(replaced, model);
        replaced.annihilators[j] = p.annihilators[j];
    }
    return q.coefficient * p.coefficient * acc;
}

cplx commutator_expectation_any(const GaugeMonomial& a, const GaugeMonomial& b, const OneParticleModel& model) {
    if (a.degree() == 0 || b.degree() == 0) return 0.0;
    if (a.is_quadratic()) return commutator_expectation(a, b, model);
    if (b.is_quadratic()) return -commutator_expectation(b, a, model);
    return product_expectation(a, b, model) - product_expectation(b, a, model);
}

} // namespace fluctuon
