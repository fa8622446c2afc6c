#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "bpnld/characterize.hpp"
#include "bpnld/closed_form.hpp"
#include "bpnld/frames.hpp"
#include "bpnld/quadrature.hpp"

namespace bpnld {

inline constexpr const char* kToolName = "bpnld";
inline constexpr const char* kToolVersion = "0.1.0";

struct FramesRunConfig {
  size_t n_frames = 40000;
  double pairs_per_frame_mean = 0.5;
  PixelRegion region1{32, 2, 64};
  PixelRegion region2{32, 5, 64};
  int fixed_pixel_index = -1;  // -1: pixel with the largest region-2 marginal
};

struct SweepRunConfig {
  std::vector<double> A_values{0.99, 0.76, 0.5, 0.2};
  std::vector<double> slit_widths{0.2e-3, 0.4e-3, 0.6e-3, 0.8e-3};
};

struct CharacterizeRunConfig {
  CharacterizationSetup setup;
  std::string measurements_csv;
  std::vector<double> curve_spot_sizes;  // empty: a default 2..40 um ramp
  SpotFitOptions fit;
};

struct OracleRunConfig {
  int scan_count = 101;
  double linf_threshold = 0.1;
  std::vector<double> probe_points;  // empty: five points across the window
};

// One schema for every subcommand; sections a subcommand does not consume are
// reported, unknown keys anywhere are rejected.
struct RunConfig {
  ExperimentSpec experiment;
  QuadratureConfig quadrature;
  DetectorModel detector;
  FramesRunConfig frames;
  SweepRunConfig sweep;
  CharacterizeRunConfig characterize;
  OracleRunConfig oracle;
  uint64_t seed = 20250809;
  std::string output_dir = "out";
  std::set<std::string> sections_present;
};

RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& json_text, const std::string& origin);

// Fully resolved configuration (defaults materialized), serialized as JSON.
std::string resolved_config_json(const RunConfig& cfg);

}  // namespace bpnld
