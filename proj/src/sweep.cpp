#include "ringcav/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>
#include <thread>

#include "ringcav/errors.hpp"

namespace ringcav {

std::string_view to_string(SweepAxis a) noexcept {
    switch (a) {
        case SweepAxis::Detuning: return "detuning";
        case SweepAxis::SqueezeR: return "squeeze_r";
        case SweepAxis::LaserPower: return "laser_power";
        case SweepAxis::BathTemp: return "bath_temp";
    }
    return "?";
}

std::optional<SweepAxis> parse_axis(std::string_view name) noexcept {
    for (SweepAxis a : {SweepAxis::Detuning, SweepAxis::SqueezeR, SweepAxis::LaserPower,
                        SweepAxis::BathTemp})
        if (to_string(a) == name) return a;
    return std::nullopt;
}

namespace {

struct AxisPoint {
    PhysicalParams params;
    double delta_per_wm;
};

AxisPoint apply_axis(const SweepSpec& spec, double value) {
    AxisPoint pt{spec.fixed, spec.delta_per_wm};
    switch (spec.axis) {
        case SweepAxis::Detuning: pt.delta_per_wm = value; break;
        case SweepAxis::SqueezeR: pt.params.squeeze_r = value; break;
        case SweepAxis::LaserPower: pt.params.laser_power = value; break;
        case SweepAxis::BathTemp: pt.params.bath_temp = value; break;
    }
    return pt;
}

}  // namespace

void validate(const SweepSpec& spec) {
    if (!(spec.start < spec.stop)) throw InvalidParameter("sweep.start", spec.start, "< stop");
    if (spec.points < 2) throw InvalidParameter("sweep.points", spec.points, ">= 2");
    if (!std::isfinite(spec.delta_per_wm))
        throw InvalidParameter("sweep.delta_per_wm", spec.delta_per_wm, "finite");
    validate(spec.quadrature);
    derive_params(apply_axis(spec, spec.start).params);
    derive_params(apply_axis(spec, spec.stop).params);
}

std::vector<double> sweep_grid(const SweepSpec& spec) {
    std::vector<double> out(static_cast<std::size_t>(spec.points));
    const double step = (spec.stop - spec.start) / (spec.points - 1);
    for (int i = 0; i < spec.points; ++i) out[i] = spec.start + step * i;
    out.back() = spec.stop;
    return out;
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& job) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));

    std::vector<std::exception_ptr> errors(count);
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            try {
                job(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back([&] {
                for (std::size_t i; (i = next.fetch_add(1)) < count;) {
                    try {
                        job(i);
                    } catch (...) {
                        errors[i] = std::current_exception();
                    }
                }
            });
        for (auto& th : pool) th.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, unsigned threads) {
    validate(spec);
    const std::vector<double> grid = sweep_grid(spec);
    std::vector<SweepRow> rows(grid.size());

    parallel_for(grid.size(), threads, [&](std::size_t i) {
        SweepRow& row = rows[i];
        row.axis_value = grid[i];
        const AxisPoint pt = apply_axis(spec, grid[i]);
        const DerivedParams d = derive_params(pt.params);
        const double delta = pt.delta_per_wm * pt.params.mech_freq;
        try {
            const EntanglementResult e = entanglement_result(pt.params, d, delta, spec.quadrature);
            row.stable = true;
            row.var_q_plus = e.var_q_plus;
            row.var_p_minus = e.var_p_minus;
            row.product = e.product;
            row.sum = e.sum;
        } catch (const UnstableOperatingPoint& ex) {
            row.stable = false;
            row.branch_note = ex.what();
        } catch (const NumericalFailure& ex) {
            std::ostringstream msg;
            msg << "at " << to_string(spec.axis) << " = " << grid[i] << ": " << ex.what();
            throw NumericalFailure(msg.str());
        }
    });
    return rows;
}

ScanMinimum minimize_scan_golden(const std::function<std::optional<double>(double)>& f, double lo,
                                 double hi, int grid, double x_tol, unsigned threads) {
    if (!(lo < hi)) throw InvalidParameter("window.lo", lo, "< hi");
    if (grid < 3) throw InvalidParameter("grid", grid, ">= 3");

    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> xs(static_cast<std::size_t>(grid));
    std::vector<double> fs(xs.size(), inf);
    const double step = (hi - lo) / (grid - 1);
    for (int i = 0; i < grid; ++i) xs[i] = lo + step * i;
    xs.back() = hi;

    parallel_for(xs.size(), threads, [&](std::size_t i) {
        if (auto v = f(xs[i])) fs[i] = *v;
    });

    const auto best_it = std::min_element(fs.begin(), fs.end());
    if (*best_it == inf) throw NoStablePoint("no defined sample in the minimization window");
    const std::size_t best = static_cast<std::size_t>(best_it - fs.begin());

    ScanMinimum out{xs[best], fs[best]};
    auto eval = [&](double x) {
        const auto v = f(x);
        const double y = v ? *v : inf;
        if (y < out.value) out = {x, y};
        return y;
    };

    double a = xs[best == 0 ? 0 : best - 1];
    double b = xs[std::min(best + 1, xs.size() - 1)];
    const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - ratio * (b - a);
    double x2 = a + ratio * (b - a);
    double f1 = eval(x1);
    double f2 = eval(x2);
    while (b - a > x_tol) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - ratio * (b - a);
            f1 = eval(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + ratio * (b - a);
            f2 = eval(x2);
        }
    }
    return out;
}

DetuningMinimum minimize_over_detuning(const PhysicalParams& p, const DerivedParams& d,
                                       double lo, double hi, const QuadratureConfig& q, int grid,
                                       unsigned threads) {
    validate(q);
    auto variance = [&](double x) -> std::optional<double> {
        const SteadyState s = steady_state_at_detuning(p, d, x * p.mech_freq);
        try {
            return momentum_variance(p, d, s, q);
        } catch (const UnstableOperatingPoint&) {
            return std::nullopt;
        }
    };
    const ScanMinimum m = minimize_scan_golden(variance, lo, hi, grid, 1e-4, threads);
    return {m.x * p.mech_freq, m.value};
}

}  // namespace ringcav
