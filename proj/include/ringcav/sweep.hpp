#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ringcav/model.hpp"
#include "ringcav/spectra.hpp"

namespace ringcav {

/// Axis units: Detuning in omega_m, SqueezeR dimensionless, LaserPower in W,
/// BathTemp in K.
enum class SweepAxis { Detuning, SqueezeR, LaserPower, BathTemp };

std::string_view to_string(SweepAxis a) noexcept;
std::optional<SweepAxis> parse_axis(std::string_view name) noexcept;

struct SweepSpec {
    SweepAxis axis = SweepAxis::Detuning;
    double start = 0.5;
    double stop = 1.5;
    int points = 200;
    PhysicalParams fixed;
    double delta_per_wm = 0.965;  // effective detuning held fixed off the Detuning axis
    QuadratureConfig quadrature;

    bool operator==(const SweepSpec&) const = default;
};

/// Throws InvalidParameter unless start < stop, points >= 2, and the fixed
/// parameters are valid at both ends of the axis.
void validate(const SweepSpec& spec);

/// Evenly spaced axis values, endpoints included.
std::vector<double> sweep_grid(const SweepSpec& spec);

struct SweepRow {
    double axis_value = 0.0;
    bool stable = false;
    std::optional<double> var_q_plus;
    std::optional<double> var_p_minus;
    std::optional<double> product;
    std::optional<double> sum;
    std::string branch_note;
};

/// One row per grid point in axis order. Unstable points are flagged and
/// carry no variances. NumericalFailure from any point is rethrown with its
/// axis value in the message. `threads` = 0 uses the hardware concurrency.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, unsigned threads = 0);

struct ScanMinimum {
    double x = 0.0;
    double value = 0.0;
};

/// Minimizes `f` over [lo, hi]: a `grid`-point scan, then golden-section
/// search inside the two grid cells around the best sample until the bracket
/// is narrower than `x_tol`. `f` returns nullopt where undefined; those
/// samples are skipped. Returns the smallest value actually sampled.
/// Throws NoStablePoint if no grid sample is defined.
ScanMinimum minimize_scan_golden(const std::function<std::optional<double>(double)>& f, double lo,
                                 double hi, int grid = 256, double x_tol = 1e-4,
                                 unsigned threads = 0);

struct DetuningMinimum {
    double delta_star = 0.0;  // rad/s
    double value = 0.0;       // momentum variance at delta_star
};

/// Minimum of the momentum variance over effective detunings in
/// [lo, hi] omega_m, skipping unstable samples.
DetuningMinimum minimize_over_detuning(const PhysicalParams& p, const DerivedParams& d,
                                       double lo, double hi, const QuadratureConfig& q,
                                       int grid = 256, unsigned threads = 0);

/// Runs `count` independent jobs on up to `threads` workers (0: hardware).
/// The first exception by index is rethrown after all workers finish.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& job);

}  // namespace ringcav
