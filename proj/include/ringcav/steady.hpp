#pragma once

#include <complex>
#include <vector>

#include "ringcav/model.hpp"

namespace ringcav {

/// Steady-state mean values at a given effective detuning.
struct SteadyState {
    double detuning = 0.0;              // effective detuning Delta, rad/s
    std::complex<double> amplitude;     // c^s = eps / (kappa + i Delta)
    double q_static = 0.0;              // static mirror coordinate (dimensionless)
    double p_static = 0.0;              // always 0
    double photon_number = 0.0;         // |c^s|^2
};

/// c^s = eps/(kappa + i Delta). The static coordinate is the relative one
/// (-2 g chi |c|^2 / omega_m) for the three-mirror ring and the total one
/// (+2 g chi |c|^2 / omega_m) for the four-mirror ring.
SteadyState steady_state_at_detuning(const PhysicalParams& p, const DerivedParams& d,
                                     double delta);

struct SteadyBranch {
    SteadyState state;
    bool tangent = false;  // double root of the cubic, reported once
};

/// All self-consistent effective detunings for a bare detuning
/// omega_c - omega_L, i.e. the real roots of
///   (Delta - bare)(kappa^2 + Delta^2) + 2 g^2 chi^2 eps^2 / omega_m = 0,
/// sorted ascending. One to three entries.
std::vector<SteadyBranch> find_steady_branches(const PhysicalParams& p, const DerivedParams& d,
                                               double bare_detuning);

/// Self-consistency residual Delta - bare + 2 g^2 chi^2 |c^s(Delta)|^2 / omega_m, rad/s.
double self_consistency_residual(const PhysicalParams& p, const DerivedParams& d,
                                 double bare_detuning, double delta);

/// Real roots of x^3 + a x^2 + b x + c. Roots closer than a relative 1e-7 are merged;
/// `double_root` flags are set on merged entries.
struct CubicRoots {
    std::vector<double> roots;
    std::vector<bool> double_root;
};
CubicRoots solve_real_cubic(double a, double b, double c);

}  // namespace ringcav
