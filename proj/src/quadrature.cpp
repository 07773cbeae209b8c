#include "ringcav/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>
#include <vector>

#include "ringcav/errors.hpp"

namespace ringcav::quadrature {

namespace {

// Nodes and weights of the 7-point Gauss / 15-point Kronrod pair on [-1, 1]
// (QUADPACK qk15). Index 7 is the centre.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct ByError {
    bool operator()(const Panel& x, const Panel& y) const { return x.error < y.error; }
};

}  // namespace

Panel gauss_kronrod15(const Integrand& f, double a, double b, int depth) {
    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    std::complex<double> fv[15];
    fv[7] = f(centre);
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        fv[j] = f(centre - dx);
        fv[14 - j] = f(centre + dx);
    }

    std::complex<double> kronrod = kWgk[7] * fv[7];
    std::complex<double> gauss = kWg[3] * fv[7];
    for (int j = 0; j < 7; ++j) {
        const std::complex<double> pair = fv[j] + fv[14 - j];
        kronrod += kWgk[j] * pair;
        if (j % 2 == 1) gauss += kWg[j / 2] * pair;
    }
    const std::complex<double> mean = 0.5 * kronrod;
    double resasc = kWgk[7] * std::abs(fv[7] - mean);
    for (int j = 0; j < 7; ++j)
        resasc += kWgk[j] * (std::abs(fv[j] - mean) + std::abs(fv[14 - j] - mean));

    Panel p;
    p.a = a;
    p.b = b;
    p.depth = depth;
    p.value = kronrod * half;
    resasc *= std::abs(half);
    double err = std::abs((kronrod - gauss) * half);
    // QUADPACK error scaling: trusts the Kronrod estimate when G and K agree well.
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    p.error = err;
    return p;
}

Result integrate(const Integrand& f, std::span<const double> breakpoints, const Options& opt) {
    if (breakpoints.size() < 2) throw NumericalFailure("integrate: need at least two breakpoints");
    if (!std::is_sorted(breakpoints.begin(), breakpoints.end()))
        throw NumericalFailure("integrate: breakpoints must be ascending");

    std::priority_queue<Panel, std::vector<Panel>, ByError> active;
    std::vector<Panel> exhausted;
    Result out;

    std::complex<double> total = 0.0;
    double total_err = 0.0;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        if (breakpoints[i + 1] <= breakpoints[i]) continue;
        Panel p = gauss_kronrod15(f, breakpoints[i], breakpoints[i + 1]);
        out.evaluations += 15;
        total += p.value;
        total_err += p.error;
        active.push(p);
    }

    auto tolerance = [&] { return std::max(opt.abs_tol, opt.rel_tol * std::abs(total)); };

    std::size_t iterations = 0;
    while (total_err > tolerance()) {
        if (active.empty()) {
            std::ostringstream msg;
            msg << "adaptive quadrature did not converge at max_depth " << opt.max_depth
                << " (error " << total_err << ", target " << tolerance() << ")";
            throw NumericalFailure(msg.str());
        }
        if (active.size() + exhausted.size() >= opt.max_panels)
            throw NumericalFailure("adaptive quadrature exceeded the panel budget");

        Panel worst = active.top();
        active.pop();
        if (worst.depth >= opt.max_depth) {
            exhausted.push_back(worst);
            continue;
        }
        const double mid = 0.5 * (worst.a + worst.b);
        Panel left = gauss_kronrod15(f, worst.a, mid, worst.depth + 1);
        Panel right = gauss_kronrod15(f, mid, worst.b, worst.depth + 1);
        out.evaluations += 30;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        active.push(left);
        active.push(right);

        // Running sums drift through cancellation; refresh them now and then.
        if (++iterations % 256 == 0) {
            total = 0.0;
            total_err = 0.0;
            auto copy = active;
            while (!copy.empty()) {
                total += copy.top().value;
                total_err += copy.top().error;
                copy.pop();
            }
            for (const auto& p : exhausted) {
                total += p.value;
                total_err += p.error;
            }
        }
    }

    // Final sum in ascending-abscissa order so the result does not depend on
    // heap ordering.
    std::vector<Panel> all;
    all.reserve(active.size() + exhausted.size());
    while (!active.empty()) {
        all.push_back(active.top());
        active.pop();
    }
    all.insert(all.end(), exhausted.begin(), exhausted.end());
    std::sort(all.begin(), all.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
    out.value = 0.0;
    out.error = 0.0;
    for (const auto& p : all) {
        out.value += p.value;
        out.error += p.error;
    }
    out.panels = all.size();
    return out;
}

}  // namespace ringcav::quadrature
