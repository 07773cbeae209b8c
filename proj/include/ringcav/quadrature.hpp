#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>

namespace ringcav::quadrature {

struct Options {
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    int max_depth = 40;             // bisections allowed below an initial panel
    std::size_t max_panels = 1'000'000;
};

struct Result {
    std::complex<double> value;
    double error = 0.0;
    std::size_t evaluations = 0;
    std::size_t panels = 0;
};

using Integrand = std::function<std::complex<double>(double)>;

/// One 15-point Gauss-Kronrod panel on [a, b].
struct Panel {
    double a = 0.0;
    double b = 0.0;
    std::complex<double> value;
    double error = 0.0;
    int depth = 0;
};
Panel gauss_kronrod15(const Integrand& f, double a, double b, int depth = 0);

/// Globally adaptive integration over [breakpoints.front(), breakpoints.back()].
/// Interior breakpoints become initial panel edges, so a resonance sitting on
/// a breakpoint is never straddled by an unrefined panel. The panel with the
/// largest error estimate is bisected until the summed estimate drops below
/// max(abs_tol, rel_tol |I|).
///
/// Throws NumericalFailure when every panel still above tolerance has reached
/// max_depth, or when max_panels is exhausted.
Result integrate(const Integrand& f, std::span<const double> breakpoints, const Options& opt = {});

}  // namespace ringcav::quadrature
