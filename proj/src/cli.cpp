#include "ringcav/cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <optional>
#include <sstream>

#include "ringcav/config.hpp"
#include "ringcav/constants.hpp"
#include "ringcav/errors.hpp"
#include "ringcav/report.hpp"
#include "ringcav/stability.hpp"
#include "ringcav/steady.hpp"
#include "ringcav/sweep.hpp"

namespace ringcav::cli {

namespace {

struct Flags {
    std::string config_path;
    std::string output_path;
    std::string format;
    std::string geometry;
    std::string gnuplot_script;
    std::optional<double> r;
    std::optional<double> power_mw;
    std::optional<double> temp_uk;
    std::optional<double> delta_per_wm;
    std::optional<double> cutoff;

    // sweep
    std::string axis;
    std::optional<double> start;
    std::optional<double> stop;
    std::optional<int> points;

    // branches / minimize
    double bare_per_wm = 1.0;
    double lo = 0.5;
    double hi = 1.5;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidParameter("config", "cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunConfig load(const Flags& f, std::ostream& err) {
    RunConfig c;
    if (!f.config_path.empty()) {
        std::vector<std::string> provenance;
        c = parse_config(read_file(f.config_path), &provenance);
        for (const auto& line : provenance) err << "note: " << line << '\n';
    }
    PhysicalParams& p = c.params;
    if (f.r) p.squeeze_r = *f.r;
    if (f.power_mw) p.laser_power = *f.power_mw * 1e-3;
    if (f.temp_uk) p.bath_temp = *f.temp_uk * 1e-6;
    if (f.delta_per_wm) c.delta_per_wm = *f.delta_per_wm;
    if (f.cutoff) c.quadrature.cutoff = *f.cutoff;
    if (!f.geometry.empty()) {
        if (f.geometry == "3ring") p.geometry = Geometry::ThreeMirrorRelative;
        else if (f.geometry == "4ring") p.geometry = Geometry::FourMirrorTotal;
        else throw InvalidParameter("geometry", "expected 3ring or 4ring, got '" + f.geometry + "'");
    }
    if (!f.output_path.empty()) c.output_path = f.output_path;
    if (!f.format.empty()) {
        if (f.format == "csv") c.output_format = OutputFormat::Csv;
        else if (f.format == "json") c.output_format = OutputFormat::Json;
        else throw InvalidParameter("format", "expected csv or json, got '" + f.format + "'");
    }
    if (c.sweep) {
        c.sweep->fixed = c.params;
        c.sweep->delta_per_wm = c.delta_per_wm;
        c.sweep->quadrature = c.quadrature;
    }
    validate(c);
    return c;
}

/// Output sink: the --output file when given, otherwise `out`.
class Sink {
public:
    Sink(const RunConfig& c, std::ostream& out) : out_(&out) {
        if (!c.output_path.empty()) {
            file_.open(c.output_path, std::ios::binary);
            if (!file_) throw InvalidParameter("output", "cannot write '" + c.output_path + "'");
            out_ = &file_;
        }
    }
    std::ostream& stream() { return *out_; }

private:
    std::ofstream file_;
    std::ostream* out_;
};

SweepSpec make_spec(const RunConfig& c, SweepAxis axis, double start, double stop, int points) {
    SweepSpec s;
    s.axis = axis;
    s.start = start;
    s.stop = stop;
    s.points = points;
    s.fixed = c.params;
    s.delta_per_wm = c.delta_per_wm;
    s.quadrature = c.quadrature;
    return s;
}

void emit_sweep(const RunConfig& c, const SweepSpec& spec, const std::vector<SweepRow>& rows,
                std::ostream& out) {
    Sink sink(c, out);
    if (c.output_format == OutputFormat::Json) report::write_sweep_json(sink.stream(), spec.axis, rows);
    else report::write_sweep_csv(sink.stream(), rows);
}

void emit_gnuplot(const Flags& f, const RunConfig& c, SweepAxis axis, int column,
                  const std::string& ylabel) {
    if (f.gnuplot_script.empty()) return;
    if (c.output_path.empty() || c.output_format != OutputFormat::Csv)
        throw InvalidParameter("gnuplot-script", "requires a CSV --output file to reference");
    std::ofstream script(f.gnuplot_script);
    if (!script) throw InvalidParameter("gnuplot-script", "cannot write file");
    const char* xlabel = axis == SweepAxis::Detuning     ? "Delta / omega_m"
                         : axis == SweepAxis::BathTemp   ? "T (K)"
                         : axis == SweepAxis::LaserPower ? "laser power (W)"
                                                         : "r";
    report::write_gnuplot_script(script, c.output_path, xlabel, column, ylabel);
}

int cmd_point(const RunConfig& c, std::ostream& out) {
    const DerivedParams d = derive_params(c.params);
    const double delta = c.delta_per_wm * c.params.mech_freq;
    const SteadyState s = steady_state_at_detuning(c.params, d, delta);
    const EntanglementResult e = entanglement_result(c.params, d, delta, c.quadrature);
    Sink sink(c, out);
    std::ostream& o = sink.stream();
    if (c.output_format == OutputFormat::Json) {
        nlohmann::json j{{"delta_per_wm", c.delta_per_wm},
                         {"photon_number", s.photon_number},
                         {"var_q_plus", e.var_q_plus},
                         {"var_p_minus", e.var_p_minus},
                         {"product", e.product},
                         {"sum", e.sum},
                         {"product_entangled", e.product_entangled},
                         {"sum_entangled", e.sum_entangled},
                         {"geometry", std::string(to_string(c.params.geometry))}};
        o << j.dump(2) << '\n';
    } else {
        using report::number;
        o << "delta_per_wm,photon_number,var_q_plus,var_p_minus,product,sum,product_entangled,"
             "sum_entangled\n"
          << number(c.delta_per_wm) << ',' << number(s.photon_number) << ',' << number(e.var_q_plus)
          << ',' << number(e.var_p_minus) << ',' << number(e.product) << ',' << number(e.sum) << ','
          << (e.product_entangled ? 1 : 0) << ',' << (e.sum_entangled ? 1 : 0) << '\n';
    }
    return kOk;
}

int cmd_branches(const RunConfig& c, double bare_per_wm, std::ostream& out) {
    const DerivedParams d = derive_params(c.params);
    const double wm = c.params.mech_freq;
    const auto branches = find_steady_branches(c.params, d, bare_per_wm * wm);
    Sink sink(c, out);
    std::ostream& o = sink.stream();
    if (c.output_format == OutputFormat::Json) {
        nlohmann::json j = nlohmann::json::array();
        for (const auto& b : branches)
            j.push_back({{"bare_per_wm", bare_per_wm},
                         {"delta_per_wm", b.state.detuning / wm},
                         {"photon_number", b.state.photon_number},
                         {"q_static", b.state.q_static},
                         {"tangent", b.tangent},
                         {"stable", stability_verdict(c.params, d, b.state).stable}});
        o << j.dump(2) << '\n';
    } else {
        using report::number;
        o << "bare_per_wm,delta_per_wm,photon_number,q_static,tangent,stable\n";
        for (const auto& b : branches)
            o << number(bare_per_wm) << ',' << number(b.state.detuning / wm) << ','
              << number(b.state.photon_number) << ',' << number(b.state.q_static) << ','
              << (b.tangent ? 1 : 0) << ','
              << (stability_verdict(c.params, d, b.state).stable ? 1 : 0) << '\n';
    }
    return kOk;
}

int cmd_stability(const RunConfig& c, std::ostream& out) {
    const DerivedParams d = derive_params(c.params);
    const SteadyState s = steady_state_at_detuning(c.params, d, c.delta_per_wm * c.params.mech_freq);
    const StabilityVerdict v = stability_verdict(c.params, d, s);
    Sink sink(c, out);
    std::ostream& o = sink.stream();
    if (c.output_format == OutputFormat::Json) {
        nlohmann::json j{{"delta_per_wm", c.delta_per_wm},  {"stable", v.stable},
                         {"routh_hurwitz", v.routh_hurwitz}, {"eigen", v.eigen},
                         {"margin_rad_s", v.margin}};
        o << j.dump(2) << '\n';
    } else {
        o << "delta_per_wm,stable,routh_hurwitz,eigen,margin_rad_s\n"
          << report::number(c.delta_per_wm) << ',' << (v.stable ? 1 : 0) << ','
          << (v.routh_hurwitz ? 1 : 0) << ',' << (v.eigen ? 1 : 0) << ',' << report::number(v.margin)
          << '\n';
    }
    return kOk;
}

int cmd_minimize(const RunConfig& c, double lo, double hi, unsigned threads, std::ostream& out) {
    const DerivedParams d = derive_params(c.params);
    const DetuningMinimum m = minimize_over_detuning(c.params, d, lo, hi, c.quadrature, 256, threads);
    const double x = m.delta_star / c.params.mech_freq;
    Sink sink(c, out);
    std::ostream& o = sink.stream();
    if (c.output_format == OutputFormat::Json)
        o << nlohmann::json{{"delta_star_per_wm", x}, {"value", m.value}}.dump(2) << '\n';
    else
        o << "delta_star_per_wm,value\n" << report::number(x) << ',' << report::number(m.value) << '\n';
    return kOk;
}

void summarize_minimum(const std::vector<SweepRow>& rows, const RunConfig& c, unsigned threads,
                       std::ostream& err) {
    const SweepRow* best = nullptr;
    for (const auto& r : rows)
        if (r.var_p_minus && (!best || *r.var_p_minus < *best->var_p_minus)) best = &r;
    if (!best) {
        err << "summary: no stable grid point\n";
        return;
    }
    const DerivedParams d = derive_params(c.params);
    const DetuningMinimum m = minimize_over_detuning(c.params, d, 0.5, 1.5, c.quadrature, 256, threads);
    err << "summary: grid minimum var_p_minus = " << report::number(*best->var_p_minus)
        << " at Delta/omega_m = " << report::number(best->axis_value)
        << "; refined minimum = " << report::number(m.value)
        << " at Delta/omega_m = " << report::number(m.delta_star / c.params.mech_freq) << '\n';
}

}  // namespace

unsigned thread_limit_from_env() {
    const char* raw = std::getenv("RINGCAV_THREADS");
    if (!raw || !*raw) return 0;
    char* end = nullptr;
    const long v = std::strtol(raw, &end, 10);
    if (*end != '\0' || v < 1)
        throw InvalidParameter("RINGCAV_THREADS", "expected an integer >= 1, got '" + std::string(raw) + "'");
    return static_cast<unsigned>(v);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Steady states, stability, noise spectra and entanglement of two mirrors in a "
                 "squeezed-light-driven ring cavity"};
    app.require_subcommand(1);
    app.fallthrough();

    Flags f;
    app.add_option("--config", f.config_path, "Config file (key = value with [params], [quadrature], [sweep])");
    app.add_option("--output", f.output_path, "Write data here instead of standard output");
    app.add_option("--format", f.format, "csv or json");
    app.add_option("--geometry", f.geometry, "3ring or 4ring");
    app.add_option("--r", f.r, "Squeezing parameter r");
    app.add_option("--power-mw", f.power_mw, "Laser power in mW");
    app.add_option("--temp-uk", f.temp_uk, "Bath temperature in uK");
    app.add_option("--delta-per-wm", f.delta_per_wm, "Effective detuning in units of omega_m");
    app.add_option("--cutoff", f.cutoff, "Integration cutoff in units of omega_m");
    app.add_option("--gnuplot-script", f.gnuplot_script, "Also write a gnuplot script for the CSV");

    auto* point = app.add_subcommand("point", "Entanglement criteria at one detuning");
    auto* branches = app.add_subcommand("branches", "Multistable steady-state branches");
    branches->add_option("--bare-per-wm", f.bare_per_wm, "Bare detuning omega_c - omega_L in omega_m");
    auto* stability = app.add_subcommand("stability", "Routh-Hurwitz and eigenvalue verdicts");
    auto* sweep = app.add_subcommand("sweep", "Scan one axis");
    sweep->add_option("--axis", f.axis, "detuning, squeeze_r, laser_power or bath_temp");
    sweep->add_option("--start", f.start, "First axis value (axis units)");
    sweep->add_option("--stop", f.stop, "Last axis value (axis units)");
    sweep->add_option("--points", f.points, "Number of grid points");
    auto* minimize = app.add_subcommand("minimize", "Minimize the momentum variance over detuning");
    minimize->add_option("--lo", f.lo, "Window start in omega_m");
    minimize->add_option("--hi", f.hi, "Window end in omega_m");
    auto* fig2 = app.add_subcommand("fig2", "Detuning scan for one squeezing parameter");
    auto* fig3 = app.add_subcommand("fig3", "Detuning scan for one laser power");
    auto* fig4 = app.add_subcommand("fig4", "Temperature scan of the product criterion");

    std::vector<const char*> argv{"ringcav"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInputError;
    }

    try {
        const unsigned threads = thread_limit_from_env();
        RunConfig c = load(f, err);

        if (point->parsed()) return cmd_point(c, out);
        if (branches->parsed()) return cmd_branches(c, f.bare_per_wm, out);
        if (stability->parsed()) return cmd_stability(c, out);
        if (minimize->parsed()) return cmd_minimize(c, f.lo, f.hi, threads, out);

        SweepSpec spec;
        int plot_column = 3;
        std::string plot_label = "var_p_minus";
        if (sweep->parsed()) {
            if (!c.sweep && f.axis.empty() && !f.start && !f.stop && !f.points)
                throw InvalidParameter("sweep", "needs a [sweep] config section or --axis/--start/--stop/--points");
            spec = c.sweep ? *c.sweep : make_spec(c, SweepAxis::Detuning, 0.5, 1.5, 200);
            if (!f.axis.empty()) {
                const auto axis = parse_axis(f.axis);
                if (!axis) throw InvalidParameter("axis", "expected detuning, squeeze_r, laser_power or bath_temp");
                spec.axis = *axis;
            }
            if (f.start) spec.start = *f.start;
            if (f.stop) spec.stop = *f.stop;
            if (f.points) spec.points = *f.points;
        } else if (fig2->parsed() || fig3->parsed()) {
            spec = make_spec(c, SweepAxis::Detuning, 0.5, 1.5, 200);
        } else if (fig4->parsed()) {
            spec = make_spec(c, SweepAxis::BathTemp, 0.0, 200e-6, 201);
            plot_column = 4;
            plot_label = "product";
        }

        const auto rows = run_sweep(spec, threads);
        emit_sweep(c, spec, rows, out);
        emit_gnuplot(f, c, spec.axis, plot_column, plot_label);

        if (fig2->parsed() || fig3->parsed()) summarize_minimum(rows, c, threads, err);
        if (fig4->parsed()) {
            const SweepRow* crossing = nullptr;
            for (const auto& r : rows)
                if (r.product && *r.product >= 1.0) {
                    crossing = &r;
                    break;
                }
            if (rows.front().product)
                err << "summary: product at T = 0 is " << report::number(*rows.front().product) << '\n';
            if (crossing)
                err << "summary: product first reaches 1 at T = " << report::number(crossing->axis_value * 1e6)
                    << " uK\n";
            else
                err << "summary: product stays below 1 over the scan\n";
        }
        return kOk;
    } catch (const ParseError& e) {
        err << "error: config " << e.what() << '\n';
        return kInputError;
    } catch (const InvalidParameter& e) {
        err << "error: invalid " << e.what() << '\n';
        return kInputError;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kNumericalError;
    }
}

}  // namespace ringcav::cli
