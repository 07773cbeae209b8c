#include "ringcav/steady.hpp"

#include <algorithm>
#include <cmath>

#include "ringcav/constants.hpp"
#include "ringcav/errors.hpp"

namespace ringcav {

SteadyState steady_state_at_detuning(const PhysicalParams& p, const DerivedParams& d,
                                     double delta) {
    SteadyState s;
    s.detuning = delta;
    s.amplitude = d.drive_eps / std::complex<double>(p.cavity_decay, delta);
    s.photon_number = std::norm(s.amplitude);
    const double magnitude = 2.0 * d.coupling_g * d.chi * s.photon_number / p.mech_freq;
    s.q_static = p.geometry == Geometry::ThreeMirrorRelative ? -magnitude : magnitude;
    s.p_static = 0.0;
    return s;
}

double self_consistency_residual(const PhysicalParams& p, const DerivedParams& d,
                                 double bare_detuning, double delta) {
    const double gc = d.coupling_g * d.chi;
    const double n = d.drive_eps * d.drive_eps /
                     (p.cavity_decay * p.cavity_decay + delta * delta);
    return delta - bare_detuning + 2.0 * gc * gc * n / p.mech_freq;
}

CubicRoots solve_real_cubic(double a, double b, double c) {
    // Depressed form t^3 + P t + Q with x = t - a/3.
    const double shift = a / 3.0;
    const double P = b - a * a / 3.0;
    const double Q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    const double disc = -(4.0 * P * P * P + 27.0 * Q * Q);
    const double scale = 4.0 * std::abs(P * P * P) + 27.0 * Q * Q;

    std::vector<double> t;
    if (scale == 0.0) {
        t = {0.0};
    } else if (std::abs(disc) <= 1e-12 * scale) {
        // Simple root 3Q/P, double root -3Q/(2P).
        const double single = 3.0 * Q / P;
        const double twice = -1.5 * Q / P;
        t = {single, twice, twice};
    } else if (disc > 0.0) {
        const double m = 2.0 * std::sqrt(-P / 3.0);
        const double arg = std::clamp(3.0 * Q / (P * m), -1.0, 1.0);
        const double theta = std::acos(arg) / 3.0;
        for (int k = 0; k < 3; ++k)
            t.push_back(m * std::cos(theta - 2.0 * constants::pi * k / 3.0));
    } else {
        const double sq = std::sqrt(Q * Q / 4.0 + P * P * P / 27.0);
        t = {std::cbrt(-Q / 2.0 + sq) + std::cbrt(-Q / 2.0 - sq)};
    }

    std::vector<double> x;
    for (double ti : t) x.push_back(ti - shift);
    std::sort(x.begin(), x.end());

    CubicRoots out;
    for (double xi : x) {
        if (!out.roots.empty()) {
            const double prev = out.roots.back();
            if (std::abs(xi - prev) <= 1e-7 * std::max({1.0, std::abs(xi), std::abs(prev)})) {
                out.double_root.back() = true;
                continue;
            }
        }
        out.roots.push_back(xi);
        out.double_root.push_back(false);
    }
    return out;
}

std::vector<SteadyBranch> find_steady_branches(const PhysicalParams& p, const DerivedParams& d,
                                               double bare_detuning) {
    // Work in units of omega_m: x = Delta/omega_m.
    const double wm = p.mech_freq;
    const double k = p.cavity_decay / wm;
    const double x0 = bare_detuning / wm;
    const double gc = d.coupling_g * d.chi;
    const double big_k = 2.0 * gc * gc * d.drive_eps * d.drive_eps / (wm * wm * wm * wm);

    // (x - x0)(k^2 + x^2) + K = x^3 - x0 x^2 + k^2 x + (K - x0 k^2)
    CubicRoots cubic = solve_real_cubic(-x0, k * k, big_k - x0 * k * k);
    if (cubic.roots.empty()) throw NumericalFailure("cubic solver returned no real root");

    auto f = [&](double x) { return x - x0 + big_k / (k * k + x * x); };
    auto df = [&](double x) {
        const double den = k * k + x * x;
        return 1.0 - 2.0 * big_k * x / (den * den);
    };

    std::vector<SteadyBranch> out;
    for (std::size_t i = 0; i < cubic.roots.size(); ++i) {
        double x = cubic.roots[i];
        for (int it = 0; it < 2; ++it) {
            const double slope = df(x);
            if (std::abs(slope) < 1e-8) break;  // tangent: Newton is ill-conditioned
            x -= f(x) / slope;
        }
        out.push_back({steady_state_at_detuning(p, d, x * wm), cubic.double_root[i]});
    }
    std::sort(out.begin(), out.end(), [](const SteadyBranch& a, const SteadyBranch& b) {
        return a.state.detuning < b.state.detuning;
    });
    return out;
}

}  // namespace ringcav
