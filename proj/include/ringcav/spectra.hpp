#pragma once

#include <complex>
#include <vector>

#include "ringcav/model.hpp"
#include "ringcav/stability.hpp"
#include "ringcav/steady.hpp"

namespace ringcav {

struct QuadratureConfig {
    double cutoff = 50.0;   // integration runs over [-cutoff, cutoff] omega_m
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    int max_depth = 40;

    bool operator==(const QuadratureConfig&) const = default;
};

/// Throws InvalidParameter unless cutoff > 2 and the tolerances and depth are positive.
void validate(const QuadratureConfig& q);

/// Integrand pieces of the relative-momentum variance in reduced units
/// (frequencies in omega_m): a_term = omega_m^3 A, b_term = omega_m^3 B,
/// c_term = omega_m^3 C and d_val = d / omega_m^4.
struct IntegrandTerms {
    double a_term = 0.0;
    std::complex<double> b_term;
    std::complex<double> c_term;
    std::complex<double> d_val;
};

/// Linear-response fluctuation spectrum of one stable operating point.
///
/// Construction runs the stability verdict and throws UnstableOperatingPoint
/// if the drift matrix has no decaying steady state. All member functions
/// take the reduced frequency u = omega / omega_m.
class FluctuationSpectrum {
public:
    FluctuationSpectrum(const PhysicalParams& p, const DerivedParams& d, const SteadyState& s);

    /// d(omega)/omega_m^4 =
    ///   -4 delta G^2 + (1 - u^2 - i gamma u)[(k - i u)^2 + delta^2]
    std::complex<double> d_reduced(double u) const;

    /// u [1 + coth(hbar omega / 2 k_B T)], with the finite limit at u = 0 and
    /// the T = 0 step limit 2u for u > 0, 0 otherwise.
    double thermal_weight(double u) const;

    /// Throws NumericalFailure if d(u)d(-u) picks up an imaginary part above
    /// 1e-10 relative.
    IntegrandTerms terms(double u) const;

    /// u^2 A + u(u - 2) B + u(u + 2) C.
    std::complex<double> integrand(double u) const;

    /// Panel edges for the adaptive integrator on [-cutoff, cutoff]: the
    /// mechanical and optical resonances, and a graded fan around every pole
    /// of the four denominators d(u), d(-u), d(2 - u), d(-2 - u).
    std::vector<double> breakpoints(double cutoff) const;

    /// The four complex roots of d_reduced.
    std::vector<std::complex<double>> poles() const;

    const StabilityVerdict& verdict() const noexcept { return verdict_; }

private:
    StabilityVerdict verdict_;
    double k_ = 0.0;          // kappa / omega_m
    double gamma_ = 0.0;      // gamma_m / omega_m
    double delta_ = 0.0;      // Delta / omega_m
    double g2_ = 0.0;         // g^2 chi^2 |c|^2 / omega_m^2
    std::complex<double> gc_; // g chi c^s / omega_m
    double n_ = 0.0;
    std::complex<double> m_;
    double thermal_ratio_ = 0.0;
};

/// d(omega) in (rad/s)^4. Needs no stability.
std::complex<double> d_of_omega(double omega, const PhysicalParams& p, const DerivedParams& d,
                                const SteadyState& s);

/// Integrand terms at physical frequency omega; see IntegrandTerms for units.
IntegrandTerms integrand_terms(double omega, const PhysicalParams& p, const DerivedParams& d,
                               const SteadyState& s);

struct VarianceDetail {
    double value = 0.0;        // real part of (1/2pi) \int integrand du
    double imaginary = 0.0;    // imaginary residual of the same integral
    double error = 0.0;        // quadrature error estimate, same normalization
    std::size_t evaluations = 0;
};

VarianceDetail momentum_variance_detail(const PhysicalParams& p, const DerivedParams& d,
                                        const SteadyState& s, const QuadratureConfig& q);

/// Stationary interaction-picture variance of the driven momentum
/// combination, <dP~_-^2> (three-mirror ring) or <dP~_+^2> (four-mirror).
/// Throws UnstableOperatingPoint, or NumericalFailure on non-convergence,
/// an imaginary residual above 1e-8 relative, or a non-positive result.
double momentum_variance(const PhysicalParams& p, const DerivedParams& d, const SteadyState& s,
                         const QuadratureConfig& q);

/// 0.5 + 1/(e^{hbar omega_m / k_B T} - 1); exactly 0.5 at T = 0.
double q_plus_variance(const PhysicalParams& p, const DerivedParams& d);

struct EntanglementResult {
    double var_q_plus = 0.0;
    double var_p_minus = 0.0;
    double product = 0.0;
    double sum = 0.0;
    bool product_entangled = false;  // product < 1
    bool sum_entangled = false;      // sum < 2
    double delta = 0.0;
};

/// Both sufficient criteria at effective detuning `delta`.
EntanglementResult entanglement_result(const PhysicalParams& p, const DerivedParams& d,
                                       double delta, const QuadratureConfig& q);

}  // namespace ringcav
