#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "ringcav/constants.hpp"
#include "ringcav/errors.hpp"
#include "ringcav/stability.hpp"

using namespace ringcav;

namespace {

DriftMatrix from_rows(std::array<std::array<double, 4>, 4> rows) {
    DriftMatrix a;
    a.entries = rows;
    return a;
}

double det4(const DriftMatrix& a) {
    // Laplace expansion along the first row.
    auto minor3 = [&](int skip_col) {
        double m[3][3];
        for (int i = 1; i < 4; ++i)
            for (int j = 0, c = 0; j < 4; ++j)
                if (j != skip_col) m[i - 1][c++] = a(i, j);
        return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
               m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
               m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    };
    double det = 0.0;
    for (int j = 0; j < 4; ++j) det += (j % 2 ? -1.0 : 1.0) * a(0, j) * minor3(j);
    return det;
}

}  // namespace

TEST_CASE("drift matrix structure") {
    const PhysicalParams p = baseline_params();
    const DerivedParams d = derive_params(p);
    const DriftMatrix a = drift_matrix(p, d, steady_state_at_detuning(p, d, 0.965 * p.mech_freq));
    CHECK(a(0, 0) == 0.0);
    CHECK(a(0, 1) == p.mech_freq);
    CHECK(a(0, 2) == 0.0);
    CHECK(a(0, 3) == 0.0);
    CHECK(a(2, 1) == 0.0);
    CHECK(a(3, 1) == 0.0);
    for (const auto& row : a.entries)
        for (double x : row) CHECK(std::isfinite(x));
}

TEST_CASE("drift matrix at the baseline operating point matches hand substitution") {
    // 50-digit substitution of the baseline into the drift matrix.
    const PhysicalParams p = baseline_params();
    const DerivedParams d = derive_params(p);
    const DriftMatrix a = drift_matrix(p, d, steady_state_at_detuning(p, d, 0.965 * p.mech_freq));
    const double expected[4][4] = {
        {0.0, 5950176.4858990684, 0.0, 0.0},
        {-5950176.4858990684, -888.08604267150275, -338107.65443410824, 1437122.6536878232},
        {-1437122.6536878232, 0.0, -1350884.8410436111, 5741920.308892601},
        {-338107.65443410824, 0.0, -5741920.308892601, -1350884.8410436111}};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) CHECK(a(i, j) == doctest::Approx(expected[i][j]).epsilon(1e-11));
}

TEST_CASE("resonant drive couples only through the amplitude quadrature") {
    const PhysicalParams p = baseline_params();
    const DerivedParams d = derive_params(p);
    const SteadyState s = steady_state_at_detuning(p, d, 0.0);
    const DriftMatrix a = drift_matrix(p, d, s);
    CHECK(a(1, 2) == doctest::Approx(-6446580.7832056694).epsilon(1e-12));
    CHECK(a(1, 2) == doctest::Approx(-2.0 * d.coupling_g * d.chi * s.amplitude.real()));
    CHECK(a(1, 3) == 0.0);
}

TEST_CASE("undriven cavity is block diagonal") {
    PhysicalParams p = baseline_params();
    p.laser_power = 0.0;
    const DerivedParams d = derive_params(p);
    const DriftMatrix a = drift_matrix(p, d, steady_state_at_detuning(p, d, p.mech_freq));
    for (int i : {0, 1})
        for (int j : {2, 3}) {
            CHECK(a(i, j) == 0.0);
            CHECK(a(j, i) == 0.0);
        }
}

TEST_CASE("four-mirror drift matrix is a sign-conjugate of the three-mirror one") {
    PhysicalParams p = baseline_params();
    const DerivedParams d = derive_params(p);
    const SteadyState s = steady_state_at_detuning(p, d, 0.9 * p.mech_freq);
    const DriftMatrix three = drift_matrix(p, d, s);
    p.geometry = Geometry::FourMirrorTotal;
    const DriftMatrix four = drift_matrix(p, d, s);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            const bool coupling_block = (i < 2) != (j < 2);
            CHECK(four(i, j) == (coupling_block ? -three(i, j) : three(i, j)));
        }
    CHECK(max_eigen_real_part(four) == doctest::Approx(max_eigen_real_part(three)).epsilon(1e-12));
}

TEST_CASE("eigen_stable on simple matrices") {
    CHECK(eigen_stable(from_rows({{{-1, 0, 0, 0}, {0, -2, 0, 0}, {0, 0, -3, 0}, {0, 0, 0, -4}}})));
    CHECK_FALSE(eigen_stable(from_rows({{{0.5, 1, 0, 0}, {-1, 0, 0, 0}, {0, 0, -0.1, 0}, {0, 0, 0, -0.1}}})));
    // trace > 0
    CHECK_FALSE(eigen_stable(from_rows({{{-1, 5, 0, 0}, {-5, 1.5, 0, 0}, {0, 0, 0.2, 1}, {0, 0, -1, 0}}})));
    // marginal: purely imaginary pair
    CHECK_FALSE(eigen_stable(from_rows({{{0, 1, 0, 0}, {-1, 0, 0, 0}, {0, 0, -1, 0}, {0, 0, 0, -1}}})));
}

TEST_CASE("non-finite entries are a numerical failure") {
    DriftMatrix a = from_rows({{{-1, 0, 0, 0}, {0, -1, 0, 0}, {0, 0, -1, 0}, {0, 0, 0, -1}}});
    a.entries[2][3] = std::nan("");
    CHECK_THROWS_AS(max_eigen_real_part(a), NumericalFailure);
}

TEST_CASE("undriven cavity is stable with the analytic margin") {
    PhysicalParams p = baseline_params();
    p.laser_power = 0.0;
    const DerivedParams d = derive_params(p);
    const SteadyState s = steady_state_at_detuning(p, d, p.mech_freq);
    CHECK(routh_hurwitz_stable(p, d, s));
    const StabilityVerdict v = stability_verdict(p, d, s);
    CHECK(v.stable);
    // Decoupled blocks: -gamma_m/2 +- i sqrt(...) and -kappa +- i Delta.
    CHECK(v.margin == doctest::Approx(std::min(d.gamma_m / 2.0, p.cavity_decay)).epsilon(1e-9));
}

TEST_CASE("baseline operating point is stable") {
    const PhysicalParams p = baseline_params();
    const DerivedParams d = derive_params(p);
    const SteadyState s = steady_state_at_detuning(p, d, 0.965 * p.mech_freq);
    CHECK(routh_hurwitz_stable(p, d, s));
    CHECK(eigen_stable(drift_matrix(p, d, s)));
    const StabilityVerdict v = stability_verdict(p, d, s);
    CHECK(v.stable);
    CHECK(v.margin > 0.0);
}

TEST_CASE("second Routh-Hurwitz inequality fails beyond its analytic boundary") {
    PhysicalParams p = baseline_params();
    const double delta = 0.965 * p.mech_freq;
    const DerivedParams d0 = derive_params(p);
    // omega_m (kappa^2 + Delta^2) = 4 Delta g^2 chi^2 |c|^2 with |c|^2 = eps^2/(kappa^2 + Delta^2)
    // and eps^2 = 2 kappa P / (hbar omega_L).
    const double k2 = p.cavity_decay * p.cavity_decay + delta * delta;
    const double gc2 = d0.coupling_g * d0.coupling_g * d0.chi * d0.chi;
    const double boundary_photons = p.mech_freq * k2 / (4.0 * delta * gc2);
    const double boundary_power =
        boundary_photons * k2 * constants::hbar * d0.omega_laser / (2.0 * p.cavity_decay);
    CHECK(boundary_power == doctest::Approx(0.06286123860888751).epsilon(1e-10));

    p.laser_power = 0.99 * boundary_power;
    DerivedParams d = derive_params(p);
    SteadyState s = steady_state_at_detuning(p, d, delta);
    CHECK(routh_hurwitz_terms(p, d, s).second > 0.0);

    p.laser_power = 1.01 * boundary_power;
    d = derive_params(p);
    s = steady_state_at_detuning(p, d, delta);
    CHECK(routh_hurwitz_terms(p, d, s).second < 0.0);
    CHECK_FALSE(routh_hurwitz_stable(p, d, s));
    const StabilityVerdict v = stability_verdict(p, d, s);
    CHECK_FALSE(v.stable);
    CHECK_FALSE(v.eigen);
    CHECK(v.margin < 0.0);
}

TEST_CASE("determinant equals omega_m times the second inequality") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    PhysicalParams p = baseline_params();
    for (int i = 0; i < 2000; ++i) {
        p.laser_power = std::pow(10.0, -5.0 + 4.0 * unit(rng));
        p.cavity_decay = constants::two_pi * std::pow(10.0, 4.0 + 2.5 * unit(rng));
        const double delta = (-2.0 + 5.0 * unit(rng)) * p.mech_freq;
        const DerivedParams d = derive_params(p);
        const SteadyState s = steady_state_at_detuning(p, d, delta);
        const double det = det4(drift_matrix(p, d, s));
        const double second = routh_hurwitz_terms(p, d, s).second;
        CHECK(det == doctest::Approx(p.mech_freq * second).epsilon(1e-8));
        if (std::abs(second) > 1e-8 * p.mech_freq * (p.cavity_decay * p.cavity_decay + delta * delta))
            CHECK((det > 0.0) == (second > 0.0));
    }
}
