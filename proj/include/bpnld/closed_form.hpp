#pragma once

#include <vector>

#include "bpnld/core.hpp"

namespace bpnld {

// Which physical width feeds the sinc envelope and which the cos fringes.
// kFig2: sinc carries the wire width, cos the slit width (default).
// kEq5:  the opposite assignment.
enum class ApertureMapping { kFig2, kEq5 };

struct ScanGrid {
  double u1 = 0.0;          // fixed detector position, arm 1 (m)
  double u2_min = -2.5e-3;  // scan window (m)
  double u2_max = 2.5e-3;
  int count = 1001;

  void validate() const;
  std::vector<double> positions() const;
};

// One complete closed-form experiment: pump, geometry, apertures, scan.
struct ExperimentSpec {
  PumpSpec pump;
  LayoutSpec layout;
  ApertureSpec slit = ApertureSpec::slit(0.55e-3);
  ApertureSpec wire = ApertureSpec::wire(80e-6);
  PolarizationAngles angles;
  ScanGrid scan;
  ApertureMapping mapping = ApertureMapping::kFig2;

  void validate() const;
  // Width feeding the sinc envelope under the configured mapping.
  double sinc_width() const;
  // Width feeding the cos fringes under the configured mapping.
  double cos_width() const;
};

// The analytic coefficient cascade, evaluated exactly as specified,
// including its self-cancelling factors. Mixed units by construction.
struct CoefficientSet {
  Complex e, B0, A0, A2, C0, b1, b2, D0, f, g, l, m, n, p, s, t;
};

struct Pattern {
  std::vector<double> positions;  // detector coordinate (m)
  std::vector<double> values;     // nonnegative, max-normalized to 1
  ExperimentSpec meta;
};

CoefficientSet coefficients(const ExperimentSpec& spec, double u1, double u2);

// Nonnegative coincidence rate: |D0 * exp-prefactor product| times the
// squared sinc*cos fringe factor. The complex prefactor's magnitude is taken;
// square roots use the principal branch.
double coincidence_rate(const ExperimentSpec& spec, double u1, double u2);

// The sinc*cos factor alone (not squared), as a function of u1 - u2.
double fringe_factor(const ExperimentSpec& spec, double delta_u);

// Evaluates coincidence_rate over the scan grid and normalizes to peak 1.
Pattern scan_pattern(const ExperimentSpec& spec, int threads = 0);

// Fringe visibility (Rmax - Rmin)/(Rmax + Rmin) where Rmin is the smaller of
// the local minima adjacent to the global maximum.
double visibility(const Pattern& p);

struct SweepRow {
  double A = 0.0;
  double lc = 0.0;
  double slit_width = 0.0;
  double wire_width = 0.0;
  double vis = 0.0;
  Pattern pattern;
};

std::vector<SweepRow> sweep(const std::vector<ExperimentSpec>& specs,
                            int threads = 0);

// Analytic zero positions of the fringe factor (cos and sinc zeros) that fall
// inside the spec's scan window, sorted ascending. u2 coordinates, u1 fixed.
std::vector<double> expected_pattern_zeros(const ExperimentSpec& spec);

// Spacing of adjacent cos^2 fringe peaks in u2.
double expected_fringe_peak_spacing(const ExperimentSpec& spec);

}  // namespace bpnld
