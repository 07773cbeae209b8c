#pragma once

#include <array>

#include "ringcav/model.hpp"
#include "ringcav/steady.hpp"

namespace ringcav {

/// Linearized drift matrix of the fluctuations, basis (dQ, dP, dx, dy) where
/// dQ, dP are the mirror coordinate the field couples to and dx = dc + dc^+,
/// dy = i(dc^+ - dc) are the cavity quadratures.
struct DriftMatrix {
    std::array<std::array<double, 4>, 4> entries{};
    double delta = 0.0;

    double operator()(int row, int col) const { return entries[row][col]; }
};

DriftMatrix drift_matrix(const PhysicalParams& p, const DerivedParams& d, const SteadyState& s);

/// Left-hand sides of the two Routh-Hurwitz inequalities; stable iff both > 0.
struct RouthHurwitzTerms {
    double first = 0.0;
    double second = 0.0;  // omega_m (kappa^2 + Delta^2) - 4 Delta g^2 chi^2 |c|^2
};

RouthHurwitzTerms routh_hurwitz_terms(const PhysicalParams& p, const DerivedParams& d,
                                      const SteadyState& s);

/// Both inequalities hold strictly. Marginal points are unstable.
bool routh_hurwitz_stable(const PhysicalParams& p, const DerivedParams& d, const SteadyState& s);

/// Largest real part over the four eigenvalues of `a`.
/// Throws NumericalFailure if the eigensolver does not converge.
double max_eigen_real_part(const DriftMatrix& a);

bool eigen_stable(const DriftMatrix& a);

struct StabilityVerdict {
    bool stable = false;
    bool routh_hurwitz = false;
    bool eigen = false;
    double margin = 0.0;  // -max Re(lambda), rad/s
};

/// Joint verdict from both routes. Within 1e-9 omega_m of the boundary the
/// routes may legitimately disagree through rounding and the point is reported
/// unstable; anywhere else a disagreement throws InternalInconsistency.
StabilityVerdict stability_verdict(const PhysicalParams& p, const DerivedParams& d,
                                   const SteadyState& s);

}  // namespace ringcav
