#include "ringcav/model.hpp"

#include <cmath>
#include <limits>

#include "ringcav/constants.hpp"
#include "ringcav/errors.hpp"

namespace ringcav {

namespace c = constants;

std::string_view to_string(Geometry g) noexcept {
    switch (g) {
        case Geometry::ThreeMirrorRelative: return "3ring";
        case Geometry::FourMirrorTotal: return "4ring";
    }
    return "?";
}

PhysicalParams baseline_params() { return PhysicalParams{}; }

std::vector<Violation> validate(const PhysicalParams& p) {
    std::vector<Violation> out;
    auto positive = [&](const char* name, double v) {
        if (!(v > 0.0) || !std::isfinite(v)) out.push_back({name, v, "> 0"});
    };
    positive("wavelength", p.wavelength);
    positive("cavity_length", p.cavity_length);
    positive("mirror_mass", p.mirror_mass);
    positive("cavity_decay", p.cavity_decay);
    positive("mech_freq", p.mech_freq);
    positive("mech_quality", p.mech_quality);
    // Zero power is the undriven-cavity limit.
    if (!(p.laser_power >= 0.0) || !std::isfinite(p.laser_power))
        out.push_back({"laser_power", p.laser_power, ">= 0"});
    if (!(p.bath_temp >= 0.0) || !std::isfinite(p.bath_temp))
        out.push_back({"bath_temp", p.bath_temp, ">= 0"});
    if (!(p.squeeze_r >= 0.0) || !std::isfinite(p.squeeze_r))
        out.push_back({"squeeze_r", p.squeeze_r, ">= 0"});
    if (!(p.fold_angle >= 0.0 && p.fold_angle < c::pi))
        out.push_back({"fold_angle", p.fold_angle, "in [0, pi)"});
    if (!std::isfinite(p.squeeze_phase))
        out.push_back({"squeeze_phase", p.squeeze_phase, "finite"});
    return out;
}

DerivedParams derive_params(const PhysicalParams& p) {
    if (auto v = validate(p); !v.empty())
        throw InvalidParameter(v.front().field, v.front().value, v.front().bound);

    DerivedParams d;
    d.gamma_m = p.mech_freq / p.mech_quality;
    d.omega_laser = c::two_pi * c::speed_of_light / p.wavelength;
    d.coupling_g = d.omega_laser / p.cavity_length *
                   std::sqrt(c::hbar / (p.mirror_mass * p.mech_freq));
    d.drive_eps = std::sqrt(2.0 * p.cavity_decay * p.laser_power / (c::hbar * d.omega_laser));

    const double sh = std::sinh(p.squeeze_r);
    const double ch = std::cosh(p.squeeze_r);
    d.n_squeeze = sh * sh;
    d.m_squeeze = std::polar(sh * ch, p.squeeze_phase);

    const double half = std::cos(0.5 * p.fold_angle);
    d.chi = half * half;

    d.thermal_ratio = p.bath_temp > 0.0
                          ? c::hbar * p.mech_freq / (c::k_boltzmann * p.bath_temp)
                          : std::numeric_limits<double>::infinity();
    return d;
}

double thermal_occupation(const DerivedParams& d) noexcept {
    if (std::isinf(d.thermal_ratio)) return 0.0;
    return 1.0 / std::expm1(d.thermal_ratio);
}

}  // namespace ringcav
