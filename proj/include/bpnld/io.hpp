#pragma once

#include <string>
#include <vector>

#include "bpnld/characterize.hpp"
#include "bpnld/closed_form.hpp"
#include "bpnld/quadrature.hpp"

namespace bpnld {

// Shortest round-trippable decimal representation (17 significant digits,
// '.' decimal point, locale independent).
std::string format_double(double v);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// columns: <position_column>, rate_norm
std::string pattern_csv(const Pattern& p, const std::string& position_column = "u2_m");

// columns: A, lc_m, slit_m, wire_m, visibility
std::string sweep_summary_csv(const std::vector<SweepRow>& rows);

// columns: u2_m, rate_closed, rate_numeric, abs_diff
std::string oracle_csv(const Pattern& closed, const Pattern& numeric);

// columns: a_s_m, lc_m, A
std::string coherence_curve_csv(const std::vector<CoherenceCurveRow>& rows);

// Matrix CSV with a "u1_m \ u2_m" position header row/column.
std::string coincidence_map_csv(const std::vector<std::vector<double>>& c,
                                const std::vector<double>& row_positions,
                                const std::vector<double>& col_positions);

// Reads `d12_m, visibility` rows; a header line is skipped if present,
// blank lines and '#' comments ignored.
std::vector<VisibilityMeasurement> read_measurements_csv(const std::string& path);

}  // namespace bpnld
