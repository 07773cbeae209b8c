#include "ringcav/report.hpp"

#include <cstdio>
#include <json.hpp>

namespace ringcav::report {

std::string number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows) {
    out << kSweepHeader << '\n';
    auto opt = [](const std::optional<double>& v) { return v ? number(*v) : std::string(); };
    for (const SweepRow& r : rows) {
        out << number(r.axis_value) << ',' << opt(r.var_q_plus) << ',' << opt(r.var_p_minus) << ','
            << opt(r.product) << ',' << opt(r.sum) << ',' << (r.stable ? 1 : 0) << '\n';
    }
}

void write_sweep_json(std::ostream& out, SweepAxis axis, std::span<const SweepRow> rows) {
    nlohmann::json doc;
    doc["axis"] = std::string(to_string(axis));
    doc["rows"] = nlohmann::json::array();
    auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(); };
    for (const SweepRow& r : rows) {
        nlohmann::json row;
        row["axis_value"] = r.axis_value;
        row["var_q_plus"] = opt(r.var_q_plus);
        row["var_p_minus"] = opt(r.var_p_minus);
        row["product"] = opt(r.product);
        row["sum"] = opt(r.sum);
        row["stable"] = r.stable;
        if (!r.branch_note.empty()) row["note"] = r.branch_note;
        doc["rows"].push_back(std::move(row));
    }
    out << doc.dump(2) << '\n';
}

void write_gnuplot_script(std::ostream& out, const std::string& csv_path, const std::string& xlabel,
                          int column, const std::string& ylabel) {
    out << "set datafile separator ','\n"
        << "set key top right\n"
        << "set xlabel '" << xlabel << "'\n"
        << "set ylabel '" << ylabel << "'\n"
        << "plot '" << csv_path << "' every ::1 using 1:" << column << " with lines title '"
        << ylabel << "', 1 with dots title ''\n";
}

}  // namespace ringcav::report
