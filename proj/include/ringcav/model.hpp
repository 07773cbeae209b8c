#pragma once

#include <complex>
#include <string>
#include <string_view>
#include <vector>

#include "ringcav/constants.hpp"

namespace ringcav {

/// Which mirror coordinate the cavity field pushes on.
///
/// ThreeMirrorRelative: one fixed input coupler and two movable mirrors; the
/// radiation pressure drives the relative coordinate Q1 - Q2, and the
/// entanglement pair is (Q+, P~-).
/// FourMirrorTotal: two fixed and two movable mirrors; the field drives the
/// total coordinate Q1 + Q2 with opposite sign, and the pair is (Q-, P~+).
enum class Geometry { ThreeMirrorRelative, FourMirrorTotal };

std::string_view to_string(Geometry g) noexcept;

/// Experimental inputs, SI units throughout. Angular rates are in rad/s.
/// Defaults reproduce baseline_params().
struct PhysicalParams {
    double wavelength = 1064e-9;          // m
    double cavity_length = 25e-3;         // m
    double mirror_mass = 145e-12;         // kg
    double cavity_decay = constants::two_pi * 215e3;  // rad/s, kappa
    double mech_freq = constants::two_pi * 947e3;     // rad/s, omega_m
    double mech_quality = 6700.0;         // omega_m / gamma_m
    double fold_angle = constants::pi / 3.0;  // rad, between incident and reflected beam
    double bath_temp = 41.4e-6;           // K
    double laser_power = 3.8e-3;          // W
    double squeeze_r = 1.0;
    double squeeze_phase = 0.0;           // rad
    Geometry geometry = Geometry::ThreeMirrorRelative;

    bool operator==(const PhysicalParams&) const = default;
};

/// Parameters of the experiment the figures are modelled on:
/// 1064 nm, L = 25 mm, m = 145 ng, kappa = 2pi 215 kHz, omega_m = 2pi 947 kHz,
/// Q' = 6700, theta = pi/3, T = 41.4 uK, P = 3.8 mW, r = 1, phi = 0.
PhysicalParams baseline_params();

struct DerivedParams {
    double gamma_m = 0.0;               // mechanical damping, rad/s
    double omega_laser = 0.0;           // rad/s; also stands in for the cavity frequency
    double coupling_g = 0.0;            // 1/s
    double drive_eps = 0.0;             // 1/s
    double n_squeeze = 0.0;             // sinh^2 r
    std::complex<double> m_squeeze;     // sinh r cosh r e^{i phi}
    double chi = 0.0;                   // cos^2(theta/2)
    double thermal_ratio = 0.0;         // hbar omega_m / (k_B T); +inf at T = 0

    bool operator==(const DerivedParams&) const = default;
};

struct Violation {
    std::string field;
    double value;
    std::string bound;
};

/// Lists every invariant of `p` that does not hold. Empty when valid.
std::vector<Violation> validate(const PhysicalParams& p);

/// Derives coupling, drive, squeezing moments and the thermal ratio.
/// The cavity frequency in g is taken equal to the laser frequency; results
/// are parametrized by the effective detuning, and |omega_c - omega_L| is
/// many orders of magnitude below omega_L.
/// Throws InvalidParameter on the first violated invariant.
DerivedParams derive_params(const PhysicalParams& p);

/// Mean thermal occupation 1/(e^{hbar omega_m / k_B T} - 1); 0 at T = 0.
double thermal_occupation(const DerivedParams& d) noexcept;

}  // namespace ringcav
