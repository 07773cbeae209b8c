#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ringcav/model.hpp"
#include "ringcav/spectra.hpp"
#include "ringcav/sweep.hpp"

namespace ringcav {

enum class OutputFormat { Csv, Json };

/// Everything a CLI run needs. Built from a config file, then overridden by flags.
struct RunConfig {
    PhysicalParams params;
    double delta_per_wm = 0.965;  // operating point for `point` and `stability`
    QuadratureConfig quadrature;
    std::optional<SweepSpec> sweep;
    std::string output_path;      // empty: standard output
    OutputFormat output_format = OutputFormat::Csv;

    bool operator==(const RunConfig&) const = default;
};

/// Parses the flat `key = value` config format:
///
///     # comment
///     output_format = csv          # top-level keys: output_path, output_format
///     [params]
///     kappa_hz = 215e3             # or kappa_rad_s; likewise omega_m_hz / omega_m_rad_s
///     [quadrature]
///     cutoff = 50
///     [sweep]
///     axis = detuning
///
/// Omitted keys take the baseline values; each default applied is appended to
/// `provenance` when given. Throws ParseError, UnknownKey or InvalidParameter.
RunConfig parse_config(std::string_view text, std::vector<std::string>* provenance = nullptr);

/// Inverse of parse_config: parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& c);

/// Full validation of every nested invariant. Throws InvalidParameter.
void validate(const RunConfig& c);

}  // namespace ringcav
