#pragma once

#include <ostream>
#include <span>
#include <string>

#include "ringcav/spectra.hpp"
#include "ringcav/sweep.hpp"

namespace ringcav::report {

/// Header of every sweep-shaped CSV table.
inline constexpr const char* kSweepHeader = "axis_value,var_q_plus,var_p_minus,product,sum,stable";

/// Decimal with 12 significant digits.
std::string number(double v);

/// One row per entry; unstable rows leave the variance columns empty.
void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows);
void write_sweep_json(std::ostream& out, SweepAxis axis, std::span<const SweepRow> rows);

/// Plain gnuplot script plotting `column` of `csv_path` against the axis.
void write_gnuplot_script(std::ostream& out, const std::string& csv_path, const std::string& xlabel,
                          int column, const std::string& ylabel);

}  // namespace ringcav::report
