#include "fluctuon/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fluctuon/errors.hpp"
#include "fluctuon/parallel.hpp"
#include "fluctuon/quadrature.hpp"

namespace fluctuon {

namespace {

using cplx = std::complex<double>;
constexpr double pi = std::numbers::pi;
constexpr double g_error_cap = 1e-8;
constexpr std::size_t table_points = 4097;
constexpr std::size_t max_panels = 4'000'000;

// Cumulative phase variation, used to place panels of equal phase advance.
struct PhaseTable {
    std::vector<double> p;
    std::vector<double> cumulative;

    explicit PhaseTable(const ScatteringProbe& probe) {
        p.resize(table_points);
        cumulative.resize(table_points);
        double prev = probe.phase(probe.p_min);
        for (std::size_t i = 0; i < table_points; ++i) {
            p[i] = probe.p_min + (probe.p_max - probe.p_min) * static_cast<double>(i) / (table_points - 1);
            const double v = probe.phase(p[i]);
            cumulative[i] = (i == 0 ? 0.0 : cumulative[i - 1] + std::abs(v - prev));
            prev = v;
        }
    }

    double variation() const { return cumulative.back(); }

    std::vector<double> breakpoints(double t) const {
        const double need = std::abs(t) * variation() / pi;
        const auto n = static_cast<std::size_t>(std::clamp(std::ceil(need), 16.0, static_cast<double>(max_panels)));
        std::vector<double> out(n + 1);
        const double total = variation();
        std::size_t k = 0;
        for (std::size_t j = 0; j <= n; ++j) {
            if (j == 0 || total == 0.0) {
                out[j] = p.front() + (p.back() - p.front()) * static_cast<double>(j) / static_cast<double>(n);
                continue;
            }
            if (j == n) {
                out[j] = p.back();
                continue;
            }
            const double target = total * static_cast<double>(j) / static_cast<double>(n);
            while (k + 1 < cumulative.size() && cumulative[k + 1] < target) ++k;
            const double c0 = cumulative[k];
            const double c1 = cumulative[k + 1];
            const double frac = c1 > c0 ? (target - c0) / (c1 - c0) : 0.0;
            out[j] = p[k] + frac * (p[k + 1] - p[k]);
        }
        // Flat stretches of the phase collapse panels; keep them ordered.
        for (std::size_t j = 1; j <= n; ++j) out[j] = std::max(out[j], out[j - 1]);
        return out;
    }
};

cplx evaluate_G(const ScatteringProbe& probe, const PhaseTable& table, double t) {
    if (!std::isfinite(t)) throw ParameterError("oscillatory_G: t must be finite");
    if (t == 0.0) {
        const auto r = integrate_adaptive([&](double p) { return probe.effective_weight(p); },
                                          table.breakpoints(0.0), 1e-13, 1e-13);
        if (r.error > g_error_cap) throw NumericError("oscillatory_G: quadrature did not converge", r.error);
        return r.value;
    }
    auto integrand = [&](double p) { return std::polar(1.0, probe.phase(p) * t) * probe.effective_weight(p); };
    const auto bp = table.breakpoints(t);
    const auto r = integrate_adaptive(integrand, bp, 1e-11, 1e-12, 4 * bp.size() + 1024);
    if (r.error > g_error_cap)
        throw NumericError("oscillatory_G: quadrature error above 1e-8 at t = " + std::to_string(t), r.error);
    return r.value;
}

std::vector<cplx> evaluate_many(const ScatteringProbe& probe, const PhaseTable& table, const std::vector<double>& ts) {
    std::vector<cplx> out(ts.size());
    parallel_for(ts.size(), [&](std::size_t i) { out[i] = evaluate_G(probe, table, ts[i]); });
    return out;
}

cplx integrate_time(const ScatteringProbe& probe, const PhaseTable& table, double a, double b) {
    if (b <= a) return {};
    std::vector<double> bp;
    if (a <= 0.0) {
        const double first = std::min(b, 1.0);
        for (int i = 0; i <= 4; ++i) bp.push_back(first * i / 4.0);
        a = first;
    } else {
        bp.push_back(a);
    }
    if (b > a) {
        const auto pieces = static_cast<int>(std::max(2.0, std::ceil(8.0 * std::log10(b / a))));
        for (int i = 1; i <= pieces; ++i) bp.push_back(a * std::pow(b / a, static_cast<double>(i) / pieces));
        bp.back() = b;
    }
    const auto r = integrate_adaptive([&](double t) { return evaluate_G(probe, table, t); }, bp,
                                      1e-10 * (b - bp.front()), 1e-9, 4096);
    if (!r.converged) throw NumericError("scattering_integral: time quadrature did not converge", r.error);
    return r.value;
}

bool is_increasing(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i] > v[i - 1])) return false;
    return true;
}

} // namespace

PhaseFamily parse_phase_family(const std::string& name) {
    if (name == "p") return PhaseFamily::linear;
    if (name == "p2") return PhaseFamily::quadratic;
    if (name == "p3") return PhaseFamily::cubic;
    throw ParameterError("unknown phase family '" + name + "' (expected p, p2, p3)");
}

WeightFamily parse_weight_family(const std::string& name) {
    if (name == "gauss") return WeightFamily::gauss;
    if (name == "bump") return WeightFamily::bump;
    if (name == "zero") return WeightFamily::zero;
    throw ParameterError("unknown weight family '" + name + "' (expected gauss, bump, zero)");
}

std::string to_string(PhaseFamily f) {
    switch (f) {
    case PhaseFamily::linear: return "p";
    case PhaseFamily::quadratic: return "p2";
    case PhaseFamily::cubic: return "p3";
    }
    return "?";
}

std::string to_string(WeightFamily w) {
    switch (w) {
    case WeightFamily::gauss: return "gauss";
    case WeightFamily::bump: return "bump";
    case WeightFamily::zero: return "zero";
    }
    return "?";
}

std::string to_string(Verdict v) {
    switch (v) {
    case Verdict::converged: return "converged";
    case Verdict::diverged: return "diverged";
    case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

ScatteringProbe ScatteringProbe::family(PhaseFamily phase, WeightFamily weight, std::optional<double> beta) {
    if (beta && !(*beta > 0.0 && std::isfinite(*beta))) throw ParameterError("ScatteringProbe: beta must be > 0");
    ScatteringProbe probe;
    switch (phase) {
    case PhaseFamily::linear: probe.phase = [](double p) { return p; }; break;
    case PhaseFamily::quadratic: probe.phase = [](double p) { return p * p; }; break;
    case PhaseFamily::cubic: probe.phase = [](double p) { return p * p * p; }; break;
    }
    switch (weight) {
    case WeightFamily::gauss: {
        probe.weight = [](double p) { return cplx{std::exp(-p * p), 0.0}; };
        const double cut = 6.0 / std::sqrt(2.0);
        probe.p_min = -cut;
        probe.p_max = cut;
        break;
    }
    case WeightFamily::bump:
        probe.weight = [](double p) {
            const double d = 1.0 - p * p;
            return cplx{d > 0.0 ? std::exp(-1.0 / d) : 0.0, 0.0};
        };
        probe.p_min = -1.0;
        probe.p_max = 1.0;
        break;
    case WeightFamily::zero:
        probe.weight = [](double) { return cplx{}; };
        probe.p_min = -1.0;
        probe.p_max = 1.0;
        break;
    }
    probe.beta = beta;
    probe.label = to_string(phase) + "/" + to_string(weight) + (beta ? "/kms" : "");
    return probe;
}

cplx ScatteringProbe::effective_weight(double p) const {
    const cplx m = weight(p);
    if (!beta) return m;
    return m * -std::expm1(-*beta * phase(p));
}

double ScatteringProbe::weight_l1() const {
    if (!(p_max > p_min)) throw ParameterError("ScatteringProbe: empty interval");
    auto l1 = [&](std::size_t panels) {
        std::vector<double> bp(panels + 1);
        for (std::size_t i = 0; i <= panels; ++i)
            bp[i] = p_min + (p_max - p_min) * static_cast<double>(i) / static_cast<double>(panels);
        double total = 0.0;
        for (std::size_t i = 0; i < panels; ++i)
            total += gauss_kronrod15([&](double p) { return cplx{std::abs(effective_weight(p)), 0.0}; }, bp[i], bp[i + 1])
                         .value.real();
        return total;
    };
    const double coarse = l1(32);
    const double fine = l1(64);
    if (!std::isfinite(fine)) throw ParameterError("ScatteringProbe: weight is not integrable");
    if (std::abs(fine - coarse) > 1e-8 * std::max(fine, 1e-300) && fine != 0.0)
        throw ParameterError("ScatteringProbe: |m| quadrature unstable under refinement");
    return fine;
}

cplx oscillatory_G(const ScatteringProbe& probe, double t) {
    const PhaseTable table(probe);
    return evaluate_G(probe, table, t);
}

cplx gaussian_fresnel_G(double t) {
    return std::sqrt(pi) / std::sqrt(cplx{1.0, -t});
}

cplx gaussian_fresnel_kms_G(double t, double beta) {
    return std::sqrt(pi) * (1.0 / std::sqrt(cplx{1.0, -t}) - 1.0 / std::sqrt(cplx{1.0 + beta, -t}));
}

std::vector<double> geometric_grid(double lo, double hi, std::size_t points) {
    if (!(lo > 0.0 && hi > lo) || points < 2) throw ParameterError("geometric_grid: need 0 < lo < hi, points >= 2");
    std::vector<double> out(points);
    for (std::size_t i = 0; i < points; ++i)
        out[i] = lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(points - 1));
    out.back() = hi;
    return out;
}

DecayFit log_log_fit(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw ParameterError("log_log_fit: need matching samples, >= 2");
    const auto n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0 && y[i] > 0.0)) throw ParameterError("log_log_fit: samples must be positive");
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = std::log(x[i]) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(y[i]) - my);
    }
    DecayFit fit;
    fit.exponent = sxy / sxx;
    if (x.size() > 2) {
        double rss = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double r = std::log(y[i]) - my - fit.exponent * (std::log(x[i]) - mx);
            rss += r * r;
        }
        fit.ci_half_width = 2.0 * std::sqrt(rss / (n - 2.0) / sxx);
    }
    fit.times = x;
    fit.magnitudes = y;
    return fit;
}

DecayFit decay_exponent(const ScatteringProbe& probe, const std::vector<double>& t_window, double floor) {
    if (t_window.size() < 20) throw ParameterError("decay_exponent: window needs at least 20 points");
    if (!is_increasing(t_window) || !(t_window.front() > 0.0))
        throw ParameterError("decay_exponent: window must be positive and increasing");
    const PhaseTable table(probe);
    const auto values = evaluate_many(probe, table, t_window);
    std::vector<double> mags(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        mags[i] = std::abs(values[i]);
        if (mags[i] < floor)
            throw NumericError("decay_exponent: |G| below numeric floor at t = " + std::to_string(t_window[i]),
                               mags[i]);
    }
    return log_log_fit(t_window, mags);
}

ConvergenceVerdict scattering_integral(const ScatteringProbe& probe, const std::vector<double>& T_grid,
                                       const VerdictOptions& options) {
    if (T_grid.empty() || !is_increasing(T_grid) || !(T_grid.front() > 0.0))
        throw ParameterError("scattering_integral: T grid must be positive and increasing");
    ConvergenceVerdict v;
    v.beta = probe.beta;
    const double t_max = T_grid.back();

    if (probe.weight_l1() == 0.0) {
        for (const double T : T_grid) v.I_values.emplace_back(T, cplx{});
        v.remainder_estimate = 0.0;
        v.verdict = Verdict::converged;
        return v;
    }

    const PhaseTable table(probe);
    cplx acc{};
    double prev = 0.0;
    for (const double T : T_grid) {
        acc += integrate_time(probe, table, prev, T);
        v.I_values.emplace_back(T, acc);
        prev = T;
    }

    std::vector<double> tail_t;
    for (int k = 0; k <= 4; ++k) tail_t.push_back(t_max * std::ldexp(1.0, k));
    for (const cplx g : evaluate_many(probe, table, tail_t)) v.tail_sup = std::max(v.tail_sup, std::abs(g));

    const double lo = std::max(T_grid.front(), t_max / 10.0);
    if (lo < t_max) {
        const auto window = geometric_grid(lo, t_max, options.fit_points);
        const auto values = evaluate_many(probe, table, window);
        std::vector<double> mags;
        bool below_floor = false;
        for (const cplx g : values) {
            mags.push_back(std::abs(g));
            below_floor = below_floor || mags.back() < 1e-10;
        }
        if (!below_floor) {
            const auto fit = log_log_fit(window, mags);
            v.decay_exponent = fit.exponent;
            v.exponent_ci = fit.ci_half_width;
            if (fit.exponent < -1.0) v.remainder_estimate = mags.back() * t_max / (-fit.exponent - 1.0);
        } else {
            v.remainder_estimate = 0.0;
        }

        std::vector<double> ts;
        std::vector<double> is;
        for (const auto& [T, I] : v.I_values)
            if (T >= lo) {
                ts.push_back(T);
                is.push_back(std::abs(I));
            }
        if (ts.size() >= 2 && *std::min_element(is.begin(), is.end()) > 0.0) {
            v.growth_exponent = log_log_fit(ts, is).exponent;
            v.monotone_growth = std::is_sorted(is.begin(), is.end());
        }
    }

    const bool integrable = !v.decay_exponent || *v.decay_exponent <= options.integrable_exponent;
    if (v.tail_sup <= options.tail_tol && integrable)
        v.verdict = Verdict::converged;
    else if (v.growth_exponent > options.growth_threshold && v.monotone_growth)
        v.verdict = Verdict::diverged;
    else
        v.verdict = Verdict::inconclusive;
    return v;
}

cplx perturbed_mode_evolution(const ScatteringProbe& probe, cplx f_coupling, double T) {
    if (!std::isfinite(T) || T < 0.0) throw ParameterError("perturbed_mode_evolution: T must be >= 0");
    if (T == 0.0) return {};
    const PhaseTable table(probe);
    return cplx{0.0, 1.0} * integrate_time(probe, table, 0.0, T) * f_coupling;
}

AbelianessReport asymptotic_abelianess(const AbelianessProbe& probe, const std::vector<double>& t_window) {
    if (probe.pairs < 1 || probe.pairs > 2)
        throw ParameterError("asymptotic_abelianess: generators limited to 1 or 2 creators per side");
    if (!probe.dispersion) throw ParameterError("asymptotic_abelianess: dispersion missing");
    if (!(probe.width > 0.0)) throw ParameterError("asymptotic_abelianess: width must be > 0");
    if (t_window.empty() || !is_increasing(t_window) || !(t_window.front() > 0.0))
        throw ParameterError("asymptotic_abelianess: window must be positive and increasing");

    AbelianessReport report;
    report.times = t_window;
    const double w = probe.width;
    const double cut = 6.0 * w / std::sqrt(2.0);

    if (probe.pairs == 1) {
        // delta(p - q) cancels the phase completely.
        const double norm = std::sqrt(pi) * w;
        report.value_at_zero = norm;
        report.magnitudes.assign(t_window.size(), norm);
        report.no_decay_flag = true;
        return report;
    }

    const double P = probe.total_momentum;
    const double r0 = 0.5 * (probe.center_a - probe.center_b);
    const auto h = probe.dispersion;
    ScatteringProbe fibre;
    fibre.phase = [h, P](double r) { return h(0.5 * P + r) + h(0.5 * P - r); };
    fibre.weight = [r0, w](double r) { return cplx{std::exp(-(r - r0) * (r - r0) / (w * w)), 0.0}; };
    fibre.p_min = r0 - cut;
    fibre.p_max = r0 + cut;
    fibre.label = "fibre";

    // The s-integral is the complex conjugate of the r-integral.
    const PhaseTable table(fibre);
    report.value_at_zero = std::norm(evaluate_G(fibre, table, 0.0));
    const auto values = evaluate_many(fibre, table, t_window);
    for (const cplx g : values) report.magnitudes.push_back(std::norm(g));

    std::optional<double> last_sign;
    for (std::size_t i = 0; i < 2001; ++i) {
        const double r = fibre.p_min + (fibre.p_max - fibre.p_min) * static_cast<double>(i) / 2000.0;
        const double dr = 1e-5;
        const double d = (fibre.phase(r + dr) - fibre.phase(r - dr)) / (2.0 * dr);
        if (std::abs(d) < 1e-9) continue;
        const double s = d > 0 ? 1.0 : -1.0;
        if (last_sign && *last_sign != s) ++report.stationary_points;
        last_sign = s;
    }

    const auto [mn, mx] = std::minmax_element(report.magnitudes.begin(), report.magnitudes.end());
    if (*mx - *mn <= 1e-8 * std::max(*mx, 1e-300)) {
        report.no_decay_flag = true;
        return report;
    }
    const auto fit = log_log_fit(t_window, report.magnitudes);
    report.exponent = fit.exponent;
    report.exponent_ci = fit.ci_half_width;
    report.decays = fit.exponent + fit.ci_half_width < -0.1;
    report.no_decay_flag = !report.decays;
    return report;
}

} // namespace fluctuon
