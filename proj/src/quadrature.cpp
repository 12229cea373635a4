#include "fluctuon/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>

#include "fluctuon/errors.hpp"

namespace fluctuon {

namespace {

using cplx = std::complex<double>;

// Kronrod abscissae on [0, 1); odd indices are the Gauss nodes.
constexpr std::array<double, 8> xk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> wk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> wg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a;
    double b;
    cplx value;
    double error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

} // namespace

QuadratureResult gauss_kronrod15(const ComplexIntegrand& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const cplx fc = f(center);
    cplx kron = fc * wk[7];
    cplx gauss = fc * wg[3];
    double abs_sum = std::abs(fc) * wk[7];
    std::array<cplx, 15> vals{};
    vals[7] = fc;
    for (int j = 0; j < 7; ++j) {
        const double dx = half * xk[static_cast<std::size_t>(j)];
        const cplx f1 = f(center - dx);
        const cplx f2 = f(center + dx);
        vals[static_cast<std::size_t>(j)] = f1;
        vals[static_cast<std::size_t>(14 - j)] = f2;
        kron += wk[static_cast<std::size_t>(j)] * (f1 + f2);
        abs_sum += wk[static_cast<std::size_t>(j)] * (std::abs(f1) + std::abs(f2));
        if (j % 2 == 1) gauss += wg[static_cast<std::size_t>(j / 2)] * (f1 + f2);
    }
    // QUADPACK's error scaling against the deviation from the mean.
    const cplx mean = kron * 0.5;
    double asc = wk[7] * std::abs(fc - mean);
    for (int j = 0; j < 7; ++j)
        asc += wk[static_cast<std::size_t>(j)] *
               (std::abs(vals[static_cast<std::size_t>(j)] - mean) + std::abs(vals[static_cast<std::size_t>(14 - j)] - mean));
    asc *= std::abs(half);
    double err = std::abs((kron - gauss) * half);
    if (asc != 0.0 && err != 0.0) err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
    const double eps_floor = 50.0 * std::numeric_limits<double>::epsilon() * abs_sum * std::abs(half);
    err = std::max(err, eps_floor);
    QuadratureResult r;
    r.value = kron * half;
    r.error = err;
    r.intervals = 1;
    r.converged = true;
    return r;
}

QuadratureResult integrate_adaptive(const ComplexIntegrand& f, const std::vector<double>& breakpoints,
                                    double abs_tol, double rel_tol, std::size_t max_intervals) {
    if (breakpoints.size() < 2) throw ParameterError("integrate_adaptive: need at least two breakpoints");
    for (std::size_t i = 1; i < breakpoints.size(); ++i)
        if (!(breakpoints[i] >= breakpoints[i - 1]))
            throw ParameterError("integrate_adaptive: breakpoints must be nondecreasing");

    std::priority_queue<Panel> heap;
    cplx total{};
    double error = 0.0;
    for (std::size_t i = 1; i < breakpoints.size(); ++i) {
        if (breakpoints[i] == breakpoints[i - 1]) continue;
        const auto r = gauss_kronrod15(f, breakpoints[i - 1], breakpoints[i]);
        heap.push({breakpoints[i - 1], breakpoints[i], r.value, r.error});
        total += r.value;
        error += r.error;
    }
    auto target = [&] { return std::max(abs_tol, rel_tol * std::abs(total)); };
    while (!heap.empty() && error > target() && heap.size() < max_intervals) {
        const Panel worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) break;
        heap.pop();
        const auto left = gauss_kronrod15(f, worst.a, mid);
        const auto right = gauss_kronrod15(f, mid, worst.b);
        heap.push({worst.a, mid, left.value, left.error});
        heap.push({mid, worst.b, right.value, right.error});
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
    }
    // Re-sum to shed the drift of the running updates.
    QuadratureResult out;
    out.intervals = heap.size();
    cplx sum{};
    double err = 0.0;
    while (!heap.empty()) {
        sum += heap.top().value;
        err += heap.top().error;
        heap.pop();
    }
    out.value = sum;
    out.error = err;
    out.converged = err <= std::max(abs_tol, rel_tol * std::abs(sum));
    return out;
}

} // namespace fluctuon
