#include "ringcav/stability.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <complex>
#include <sstream>

#include "ringcav/errors.hpp"

namespace ringcav {

namespace {

double coupling_sign(Geometry g) { return g == Geometry::ThreeMirrorRelative ? 1.0 : -1.0; }

double real_checked(std::complex<double> z) {
    if (std::abs(z.imag()) > 1e-14 * std::abs(z))
        throw InternalInconsistency("drift-matrix entry has a non-vanishing imaginary part");
    return z.real();
}

}  // namespace

DriftMatrix drift_matrix(const PhysicalParams& p, const DerivedParams& d, const SteadyState& s) {
    using namespace std::complex_literals;
    const double gc = coupling_sign(p.geometry) * d.coupling_g * d.chi;
    const std::complex<double> c = s.amplitude;
    const std::complex<double> cc = std::conj(c);

    const double sum_term = real_checked(-gc * (c + cc));
    const double diff_term = real_checked(1i * gc * (c - cc));

    DriftMatrix a;
    a.delta = s.detuning;
    a.entries[0] = {0.0, p.mech_freq, 0.0, 0.0};
    a.entries[1] = {-p.mech_freq, -d.gamma_m, sum_term, diff_term};
    a.entries[2] = {-diff_term, 0.0, -p.cavity_decay, s.detuning};
    a.entries[3] = {sum_term, 0.0, -s.detuning, -p.cavity_decay};
    return a;
}

RouthHurwitzTerms routh_hurwitz_terms(const PhysicalParams& p, const DerivedParams& d,
                                      const SteadyState& s) {
    const double k = p.cavity_decay;
    const double gm = d.gamma_m;
    const double wm = p.mech_freq;
    const double delta = s.detuning;
    const double k2 = k * k + delta * delta;
    const double coupling =
        d.coupling_g * d.coupling_g * d.chi * d.chi * s.photon_number;  // g^2 cos^4 |c|^2

    RouthHurwitzTerms t;
    t.first = k * gm *
                  (k2 * k2 + (2.0 * k * gm + gm * gm - 2.0 * wm * wm) * k2 +
                   wm * wm * (4.0 * k * k + wm * wm + 2.0 * k * gm)) +
              2.0 * wm * delta * coupling * (2.0 * k + gm) * (2.0 * k + gm);
    t.second = wm * k2 - 4.0 * delta * coupling;
    return t;
}

bool routh_hurwitz_stable(const PhysicalParams& p, const DerivedParams& d, const SteadyState& s) {
    const auto t = routh_hurwitz_terms(p, d, s);
    return t.first > 0.0 && t.second > 0.0;
}

double max_eigen_real_part(const DriftMatrix& a) {
    Eigen::Matrix4d m;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            if (!std::isfinite(a(i, j))) throw NumericalFailure("drift matrix has non-finite entries");
            m(i, j) = a(i, j);
        }
    Eigen::EigenSolver<Eigen::Matrix4d> solver(m, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) throw NumericalFailure("eigensolver did not converge");
    return solver.eigenvalues().real().maxCoeff();
}

bool eigen_stable(const DriftMatrix& a) { return max_eigen_real_part(a) < 0.0; }

StabilityVerdict stability_verdict(const PhysicalParams& p, const DerivedParams& d,
                                   const SteadyState& s) {
    StabilityVerdict v;
    const double max_re = max_eigen_real_part(drift_matrix(p, d, s));
    v.margin = -max_re;
    v.eigen = max_re < 0.0;
    v.routh_hurwitz = routh_hurwitz_stable(p, d, s);
    if (v.eigen != v.routh_hurwitz) {
        if (std::abs(v.margin) >= 1e-9 * p.mech_freq) {
            std::ostringstream msg;
            msg << "Routh-Hurwitz says " << (v.routh_hurwitz ? "stable" : "unstable")
                << " but eigenvalues give margin " << v.margin << " rad/s at Delta = " << s.detuning;
            throw InternalInconsistency(msg.str());
        }
        v.stable = false;
        return v;
    }
    v.stable = v.eigen;
    return v;
}

}  // namespace ringcav
