#include "ringcav/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "ringcav/constants.hpp"
#include "ringcav/errors.hpp"

namespace ringcav {

namespace {

struct Token {
    std::string text;
    int line = 0;
    int column = 0;      // 1-based column of the value
    int key_column = 0;  // 1-based column of the key
};

std::string_view trim(std::string_view s, std::size_t* lead = nullptr) {
    std::size_t b = 0;
    while (b < s.size() && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
    std::size_t e = s.size();
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    if (lead) *lead = b;
    return s.substr(b, e - b);
}

double to_double(const Token& t) {
    double v = 0.0;
    const char* first = t.text.data();
    const char* last = first + t.text.size();
    if (!t.text.empty() && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || t.text.empty())
        throw ParseError(t.line, t.column, "expected a number, got '" + t.text + "'");
    return v;
}

int to_int(const Token& t) {
    int v = 0;
    const char* first = t.text.data();
    const char* last = first + t.text.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || t.text.empty())
        throw ParseError(t.line, t.column, "expected an integer, got '" + t.text + "'");
    return v;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Entries {
    std::map<std::string, Token> values;  // "section.key" -> value
    std::set<std::string> sections;
};

Entries tokenize(std::string_view text) {
    Entries entries;
    std::string section;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string_view raw =
            text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
        std::size_t lead = 0;
        const std::string_view line = trim(raw, &lead);
        if (line.empty()) continue;
        const int first_col = static_cast<int>(lead + 1);

        if (line.front() == '[') {
            if (line.back() != ']')
                throw ParseError(line_no, static_cast<int>(lead + line.size()), "expected ']'");
            section = std::string(trim(line.substr(1, line.size() - 2)));
            if (section != "params" && section != "quadrature" && section != "sweep")
                throw ParseError(line_no, first_col + 1, "unknown section [" + section + "]");
            if (!entries.sections.insert(section).second)
                throw ParseError(line_no, first_col, "section [" + section + "] repeated");
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ParseError(line_no, first_col, "expected 'key = value'");
        const std::string key(trim(line.substr(0, eq)));
        if (key.empty()) throw ParseError(line_no, first_col, "empty key");
        std::size_t value_lead = 0;
        const std::string_view value = trim(line.substr(eq + 1), &value_lead);
        const int value_col = static_cast<int>(lead + eq + 1 + value_lead + 1);
        if (value.empty()) throw ParseError(line_no, value_col, "missing value for '" + key + "'");

        const std::string full = section.empty() ? key : section + "." + key;
        if (auto it = entries.values.find(full); it != entries.values.end())
            throw ParseError(line_no, first_col,
                             "duplicate key '" + key + "' (first on line " +
                                 std::to_string(it->second.line) + ")");
        entries.values.emplace(full, Token{std::string(value), line_no, value_col, first_col});
    }
    return entries;
}

class Reader {
public:
    Reader(Entries entries, std::vector<std::string>* provenance)
        : entries_(std::move(entries)), provenance_(provenance) {}

    const Token* find(const std::string& key) {
        used_.insert(key);
        auto it = entries_.values.find(key);
        return it == entries_.values.end() ? nullptr : &it->second;
    }

    bool has_section(const std::string& section) const { return entries_.sections.count(section) > 0; }

    void read(const std::string& key, double& out) {
        if (const Token* t = find(key)) out = to_double(*t);
        else defaulted(key, fmt(out));
    }

    void read(const std::string& key, int& out) {
        if (const Token* t = find(key)) out = to_int(*t);
        else defaulted(key, std::to_string(out));
    }

    /// Angular rate given either as `<stem>_rad_s` or `<stem>_hz` (times 2 pi).
    void read_rate(const std::string& stem, double& out) {
        const Token* rad = find(stem + "_rad_s");
        const Token* hz = find(stem + "_hz");
        if (rad && hz)
            throw ParseError(hz->line, hz->column,
                             "both " + stem + "_rad_s and " + stem + "_hz given");
        if (rad) out = to_double(*rad);
        else if (hz) out = constants::two_pi * to_double(*hz);
        else defaulted(stem + "_rad_s", fmt(out));
    }

    void defaulted(const std::string& key, const std::string& value) {
        if (provenance_) provenance_->push_back(key + " defaulted to " + value);
    }

    void reject_unknown() const {
        const std::pair<const std::string, Token>* first = nullptr;
        for (const auto& entry : entries_.values)
            if (!used_.count(entry.first) && (!first || entry.second.line < first->second.line))
                first = &entry;
        if (first) throw UnknownKey(first->second.line, first->second.key_column, first->first);
    }

private:
    Entries entries_;
    std::set<std::string> used_;
    std::vector<std::string>* provenance_;
};

}  // namespace

void validate(const RunConfig& c) {
    derive_params(c.params);
    validate(c.quadrature);
    if (!std::isfinite(c.delta_per_wm)) throw InvalidParameter("delta_per_wm", c.delta_per_wm, "finite");
    if (c.sweep) validate(*c.sweep);
}

RunConfig parse_config(std::string_view text, std::vector<std::string>* provenance) {
    Reader in(tokenize(text), provenance);
    RunConfig c;

    if (const Token* t = in.find("output_path")) c.output_path = t->text;
    if (const Token* t = in.find("output_format")) {
        if (t->text == "csv") c.output_format = OutputFormat::Csv;
        else if (t->text == "json") c.output_format = OutputFormat::Json;
        else throw ParseError(t->line, t->column, "output_format must be csv or json");
    }

    PhysicalParams& p = c.params;
    in.read("params.wavelength", p.wavelength);
    in.read("params.cavity_length", p.cavity_length);
    in.read("params.mirror_mass", p.mirror_mass);
    in.read_rate("params.kappa", p.cavity_decay);
    in.read_rate("params.omega_m", p.mech_freq);
    in.read("params.mech_quality", p.mech_quality);
    in.read("params.fold_angle", p.fold_angle);
    in.read("params.bath_temp", p.bath_temp);
    in.read("params.laser_power", p.laser_power);
    in.read("params.squeeze_r", p.squeeze_r);
    in.read("params.squeeze_phase", p.squeeze_phase);
    in.read("params.delta_per_wm", c.delta_per_wm);
    if (const Token* t = in.find("params.geometry")) {
        if (t->text == "3ring") p.geometry = Geometry::ThreeMirrorRelative;
        else if (t->text == "4ring") p.geometry = Geometry::FourMirrorTotal;
        else throw ParseError(t->line, t->column, "geometry must be 3ring or 4ring");
    } else {
        in.defaulted("params.geometry", "3ring");
    }

    in.read("quadrature.cutoff", c.quadrature.cutoff);
    in.read("quadrature.rel_tol", c.quadrature.rel_tol);
    in.read("quadrature.abs_tol", c.quadrature.abs_tol);
    in.read("quadrature.max_depth", c.quadrature.max_depth);

    if (in.has_section("sweep")) {
        SweepSpec s;
        if (const Token* t = in.find("sweep.axis")) {
            const auto axis = parse_axis(t->text);
            if (!axis)
                throw ParseError(t->line, t->column,
                                 "axis must be detuning, squeeze_r, laser_power or bath_temp");
            s.axis = *axis;
        } else {
            in.defaulted("sweep.axis", "detuning");
        }
        in.read("sweep.start", s.start);
        in.read("sweep.stop", s.stop);
        in.read("sweep.points", s.points);
        s.fixed = c.params;
        s.delta_per_wm = c.delta_per_wm;
        s.quadrature = c.quadrature;
        c.sweep = s;
    }

    in.reject_unknown();
    validate(c);
    return c;
}

std::string serialize_config(const RunConfig& c) {
    std::ostringstream out;
    if (!c.output_path.empty()) out << "output_path = " << c.output_path << '\n';
    out << "output_format = " << (c.output_format == OutputFormat::Json ? "json" : "csv") << '\n';

    const PhysicalParams& p = c.params;
    out << "\n[params]\n"
        << "wavelength = " << fmt(p.wavelength) << '\n'
        << "cavity_length = " << fmt(p.cavity_length) << '\n'
        << "mirror_mass = " << fmt(p.mirror_mass) << '\n'
        << "kappa_rad_s = " << fmt(p.cavity_decay) << '\n'
        << "omega_m_rad_s = " << fmt(p.mech_freq) << '\n'
        << "mech_quality = " << fmt(p.mech_quality) << '\n'
        << "fold_angle = " << fmt(p.fold_angle) << '\n'
        << "bath_temp = " << fmt(p.bath_temp) << '\n'
        << "laser_power = " << fmt(p.laser_power) << '\n'
        << "squeeze_r = " << fmt(p.squeeze_r) << '\n'
        << "squeeze_phase = " << fmt(p.squeeze_phase) << '\n'
        << "geometry = " << to_string(p.geometry) << '\n'
        << "delta_per_wm = " << fmt(c.delta_per_wm) << '\n';

    out << "\n[quadrature]\n"
        << "cutoff = " << fmt(c.quadrature.cutoff) << '\n'
        << "rel_tol = " << fmt(c.quadrature.rel_tol) << '\n'
        << "abs_tol = " << fmt(c.quadrature.abs_tol) << '\n'
        << "max_depth = " << c.quadrature.max_depth << '\n';

    if (c.sweep) {
        out << "\n[sweep]\n"
            << "axis = " << to_string(c.sweep->axis) << '\n'
            << "start = " << fmt(c.sweep->start) << '\n'
            << "stop = " << fmt(c.sweep->stop) << '\n'
            << "points = " << c.sweep->points << '\n';
    }
    return out.str();
}

}  // namespace ringcav
