#include "bpnld/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "bpnld/errors.hpp"

namespace bpnld {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << content;
  if (!out) throw Error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string pattern_csv(const Pattern& p, const std::string& position_column) {
  std::ostringstream out;
  out << position_column << ",rate_norm\n";
  for (size_t i = 0; i < p.positions.size(); ++i)
    out << format_double(p.positions[i]) << ',' << format_double(p.values[i]) << '\n';
  return out.str();
}

std::string sweep_summary_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "A,lc_m,slit_m,wire_m,visibility\n";
  for (const auto& r : rows) {
    out << format_double(r.A) << ',' << format_double(r.lc) << ','
        << format_double(r.slit_width) << ',' << format_double(r.wire_width)
        << ',' << format_double(r.vis) << '\n';
  }
  return out.str();
}

std::string oracle_csv(const Pattern& closed, const Pattern& numeric) {
  if (closed.positions.size() != numeric.positions.size())
    throw Error("oracle csv: pattern grids differ");
  std::ostringstream out;
  out << "u2_m,rate_closed,rate_numeric,abs_diff\n";
  for (size_t i = 0; i < closed.positions.size(); ++i) {
    out << format_double(closed.positions[i]) << ','
        << format_double(closed.values[i]) << ','
        << format_double(numeric.values[i]) << ','
        << format_double(std::abs(closed.values[i] - numeric.values[i])) << '\n';
  }
  return out.str();
}

std::string coherence_curve_csv(const std::vector<CoherenceCurveRow>& rows) {
  std::ostringstream out;
  out << "a_s_m,lc_m,A\n";
  for (const auto& r : rows) {
    out << format_double(r.a_s) << ',' << format_double(r.lc) << ','
        << format_double(r.A) << '\n';
  }
  return out.str();
}

std::string coincidence_map_csv(const std::vector<std::vector<double>>& c,
                                const std::vector<double>& row_positions,
                                const std::vector<double>& col_positions) {
  std::ostringstream out;
  out << "u1_m\\u2_m";
  for (double u : col_positions) out << ',' << format_double(u);
  out << '\n';
  for (size_t i = 0; i < c.size(); ++i) {
    out << format_double(row_positions[i]);
    for (double v : c[i]) out << ',' << format_double(v);
    out << '\n';
  }
  return out.str();
}

std::vector<VisibilityMeasurement> read_measurements_csv(const std::string& path) {
  const std::string text = read_text_file(path);
  std::vector<VisibilityMeasurement> out;
  std::istringstream in(text);
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    size_t start = line.find_first_not_of(" \t");
    if (start == std::string::npos || line[start] == '#') continue;
    const size_t comma = line.find(',');
    if (comma == std::string::npos)
      throw Error(path + ":" + std::to_string(lineno) + ": expected 'd12_m,visibility'");
    const std::string a = line.substr(start, comma - start);
    const std::string b = line.substr(comma + 1);
    try {
      VisibilityMeasurement m;
      size_t pos = 0;
      m.d12 = std::stod(a, &pos);
      m.visibility = std::stod(b);
      out.push_back(m);
    } catch (const std::exception&) {
      if (lineno == 1) continue;  // header row
      throw Error(path + ":" + std::to_string(lineno) + ": cannot parse numbers");
    }
  }
  if (out.empty()) throw Error(path + ": no measurements found");
  return out;
}

}  // namespace bpnld
