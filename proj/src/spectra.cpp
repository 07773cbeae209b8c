#include "ringcav/spectra.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "ringcav/constants.hpp"
#include "ringcav/errors.hpp"
#include "ringcav/quadrature.hpp"

namespace ringcav {

using cplx = std::complex<double>;
using namespace std::complex_literals;

void validate(const QuadratureConfig& q) {
    if (!(q.cutoff > 2.0) || !std::isfinite(q.cutoff))
        throw InvalidParameter("cutoff", q.cutoff, "> 2");
    if (!(q.rel_tol > 0.0)) throw InvalidParameter("rel_tol", q.rel_tol, "> 0");
    if (!(q.abs_tol > 0.0)) throw InvalidParameter("abs_tol", q.abs_tol, "> 0");
    if (!(q.max_depth > 0)) throw InvalidParameter("max_depth", q.max_depth, "> 0");
}

FluctuationSpectrum::FluctuationSpectrum(const PhysicalParams& p, const DerivedParams& d,
                                         const SteadyState& s)
    : verdict_(stability_verdict(p, d, s)) {
    if (!verdict_.stable) {
        std::ostringstream msg;
        msg << "operating point Delta/omega_m = " << s.detuning / p.mech_freq
            << " is unstable (margin " << verdict_.margin << " rad/s)";
        throw UnstableOperatingPoint(msg.str());
    }
    const double wm = p.mech_freq;
    k_ = p.cavity_decay / wm;
    gamma_ = d.gamma_m / wm;
    delta_ = s.detuning / wm;
    const double gchi = d.coupling_g * d.chi / wm;
    gc_ = gchi * s.amplitude;
    g2_ = gchi * gchi * s.photon_number;
    n_ = d.n_squeeze;
    m_ = d.m_squeeze;
    thermal_ratio_ = d.thermal_ratio;
}

cplx FluctuationSpectrum::d_reduced(double u) const {
    const cplx optical = (k_ - 1i * u) * (k_ - 1i * u) + delta_ * delta_;
    const cplx mechanical(1.0 - u * u, -gamma_ * u);
    return -4.0 * delta_ * g2_ + mechanical * optical;
}

double FluctuationSpectrum::thermal_weight(double u) const {
    if (std::isinf(thermal_ratio_)) return u > 0.0 ? 2.0 * u : 0.0;
    const double x = thermal_ratio_ * u;  // hbar omega / k_B T
    if (std::abs(x) < 1e-5) return 2.0 / thermal_ratio_ + u + x * u / 6.0;
    // 1 + coth(x/2) = -2 / expm1(-x)
    return -2.0 * u / std::expm1(-x);
}

IntegrandTerms FluctuationSpectrum::terms(double u) const {
    IntegrandTerms t;
    const cplx du = d_reduced(u);
    t.d_val = du;

    const cplx dd = du * d_reduced(-u);
    if (std::abs(dd.imag()) > 1e-10 * std::abs(dd.real()))
        throw NumericalFailure("d(omega) d(-omega) is not real");

    const double k2 = k_ * k_;
    const double radiation =
        8.0 * k_ * g2_ *
        ((n_ + 1.0) * (k2 + (delta_ + u) * (delta_ + u)) + n_ * (k2 + (delta_ - u) * (delta_ - u)));
    const double opt = delta_ * delta_ + k2 - u * u;
    const double thermal =
        2.0 * gamma_ * thermal_weight(u) * (opt * opt + 4.0 * k2 * u * u);
    t.a_term = (radiation + thermal) / dd.real();

    const cplx gc2 = gc_ * gc_;
    t.b_term = 8.0 * k_ * std::conj(gc2) * m_ / (du * d_reduced(2.0 - u)) *
               (k_ - 1i * (delta_ + u)) * (k_ - 1i * (delta_ + 2.0 - u));
    t.c_term = 8.0 * k_ * gc2 * std::conj(m_) / (du * d_reduced(-2.0 - u)) *
               (k_ + 1i * (delta_ - u)) * (k_ + 1i * (delta_ + 2.0 + u));
    return t;
}

cplx FluctuationSpectrum::integrand(double u) const {
    const IntegrandTerms t = terms(u);
    return u * u * t.a_term + u * (u - 2.0) * t.b_term + u * (u + 2.0) * t.c_term;
}

std::vector<cplx> FluctuationSpectrum::poles() const {
    // Monic quartic u^4 + c3 u^3 + c2 u^2 + c1 u + c0.
    const double k2 = k_ * k_ + delta_ * delta_;
    const cplx c3 = 1i * (2.0 * k_ + gamma_);
    const cplx c2 = -k2 - 2.0 * gamma_ * k_ - 1.0;
    const cplx c1 = -1i * (gamma_ * k2 + 2.0 * k_);
    const cplx c0 = k2 - 4.0 * delta_ * g2_;

    Eigen::Matrix4cd companion = Eigen::Matrix4cd::Zero();
    companion(1, 0) = 1.0;
    companion(2, 1) = 1.0;
    companion(3, 2) = 1.0;
    companion(0, 3) = -c0;
    companion(1, 3) = -c1;
    companion(2, 3) = -c2;
    companion(3, 3) = -c3;
    Eigen::ComplexEigenSolver<Eigen::Matrix4cd> solver(companion, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) throw NumericalFailure("pole finder did not converge");
    std::vector<cplx> out;
    for (int i = 0; i < 4; ++i) out.push_back(solver.eigenvalues()(i));
    return out;
}

std::vector<double> FluctuationSpectrum::breakpoints(double cutoff) const {
    std::vector<double> pts = {-cutoff, cutoff, 0.0};
    for (double s : {1.0, -1.0}) {
        pts.push_back(s);
        pts.push_back(s * delta_);
        pts.push_back(s * (2.0 + delta_));
        pts.push_back(s * (2.0 - delta_));
    }
    // d(u) has poles z; d(-u), d(2 - u) and d(-2 - u) have -z, 2 - z, -2 - z.
    static constexpr double kFan[] = {1.0, 3.0, 10.0, 30.0, 100.0};
    for (const cplx z : poles()) {
        for (const cplx pole : {z, -z, 2.0 - z, -2.0 - z}) {
            const double centre = pole.real();
            const double width = std::abs(pole.imag());
            pts.push_back(centre);
            for (double f : kFan) {
                pts.push_back(centre - f * width);
                pts.push_back(centre + f * width);
            }
        }
    }
    std::vector<double> kept;
    for (double x : pts)
        if (x >= -cutoff && x <= cutoff && std::isfinite(x)) kept.push_back(x);
    std::sort(kept.begin(), kept.end());
    std::vector<double> out;
    for (double x : kept)
        if (out.empty() || x - out.back() > 1e-12) out.push_back(x);
    if (out.back() != cutoff) out.back() = cutoff;
    return out;
}

cplx d_of_omega(double omega, const PhysicalParams& p, const DerivedParams& d,
                const SteadyState& s) {
    const double wm = p.mech_freq;
    const double k = p.cavity_decay;
    const double gc = d.coupling_g * d.chi;
    const cplx optical = (k - 1i * omega) * (k - 1i * omega) + s.detuning * s.detuning;
    const cplx mechanical(wm * wm - omega * omega, -d.gamma_m * omega);
    return -4.0 * wm * s.detuning * gc * gc * s.photon_number + mechanical * optical;
}

IntegrandTerms integrand_terms(double omega, const PhysicalParams& p, const DerivedParams& d,
                               const SteadyState& s) {
    return FluctuationSpectrum(p, d, s).terms(omega / p.mech_freq);
}

VarianceDetail momentum_variance_detail(const PhysicalParams& p, const DerivedParams& d,
                                        const SteadyState& s, const QuadratureConfig& q) {
    validate(q);
    const FluctuationSpectrum spectrum(p, d, s);
    const std::vector<double> edges = spectrum.breakpoints(q.cutoff);

    quadrature::Options opt;
    opt.rel_tol = q.rel_tol;
    opt.abs_tol = q.abs_tol;
    opt.max_depth = q.max_depth;
    const auto r = quadrature::integrate([&](double u) { return spectrum.integrand(u); }, edges, opt);

    VarianceDetail out;
    out.value = r.value.real() / constants::two_pi;
    out.imaginary = r.value.imag() / constants::two_pi;
    out.error = r.error / constants::two_pi;
    out.evaluations = r.evaluations;
    return out;
}

double momentum_variance(const PhysicalParams& p, const DerivedParams& d, const SteadyState& s,
                         const QuadratureConfig& q) {
    const VarianceDetail v = momentum_variance_detail(p, d, s, q);
    if (std::abs(v.imaginary) >= 1e-8 * std::abs(v.value)) {
        std::ostringstream msg;
        msg << "momentum variance has imaginary residual " << v.imaginary << " against "
            << v.value;
        throw NumericalFailure(msg.str());
    }
    if (!(v.value > 0.0)) throw NumericalFailure("momentum variance is not positive");
    return v.value;
}

double q_plus_variance(const PhysicalParams&, const DerivedParams& d) {
    return 0.5 + thermal_occupation(d);
}

EntanglementResult entanglement_result(const PhysicalParams& p, const DerivedParams& d,
                                       double delta, const QuadratureConfig& q) {
    const SteadyState s = steady_state_at_detuning(p, d, delta);
    EntanglementResult e;
    e.delta = delta;
    // Same closed form serves <dQ+^2> (three-mirror) and <dQ-^2> (four-mirror).
    e.var_q_plus = q_plus_variance(p, d);
    e.var_p_minus = momentum_variance(p, d, s, q);
    e.product = e.var_q_plus * e.var_p_minus;
    e.sum = e.var_q_plus + e.var_p_minus;
    e.product_entangled = e.product < 1.0;
    e.sum_entangled = e.sum < 2.0;
    return e;
}

}  // namespace ringcav
