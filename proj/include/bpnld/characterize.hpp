#pragma once

#include <optional>
#include <vector>

#include "bpnld/core.hpp"

namespace bpnld {

// Double-slit measurement geometry used to characterize the pump coherence.
struct CharacterizationSetup {
  double focal_length = 0.2;       // collimating lens focal length (m)
  std::vector<double> d12;         // slit separations (m)
  double slit_width = 0.15e-3;     // recorded, unused by the model (m)
  double wavelength_pump = 405e-9; // m

  void validate() const;
  double pump_wavenumber() const { return kTwoPi / wavelength_pump; }
};

struct VisibilityMeasurement {
  double d12 = 0.0;        // slit separation (m)
  double visibility = 0.0; // in [0, 1]
  std::optional<double> uncertainty;
};

// |2 J1(nu)/nu|, the two-slit visibility of a circularly symmetric
// incoherent spot; equals 1 at nu = 0.
double bessel_visibility(double nu);

// nu = kp * d12 * a_s / f.
double nu_parameter(double kp, double d12, double a_s, double f);

struct SpotFitOptions {
  double a_min = 0.0;  // bracket lower edge (0 = auto)
  double a_max = 0.0;  // bracket upper edge (0 = auto)
  int scan_points = 256;
  double tolerance = 1e-12;  // absolute bracket width (m)
};

struct SpotFit {
  double a_s = 0.0;      // fitted spot size (m)
  double residual = 0.0; // sum of squared visibility errors at the fit
};

// One-parameter least squares of bessel_visibility(nu_parameter(.)) over the
// spot size, by a bracket scan followed by golden-section refinement.
SpotFit fit_spot_size(const std::vector<VisibilityMeasurement>& measurements,
                      const CharacterizationSetup& setup,
                      const SpotFitOptions& options = {});

// l_c = 3.832 f / (kp a_s).
double transverse_coherence_length(double f, double kp, double a_s);

struct CoherenceCurveRow {
  std::size_t original_index = 0;
  double a_s = 0.0;
  double lc = 0.0;
  double A = 0.0;
};

// (a_s, l_c, A) rows sorted by spot size ascending; A is evaluated for a pump
// of the given beam size. Larger spots give shorter coherence and smaller A.
std::vector<CoherenceCurveRow> coherence_curve(
    const std::vector<double>& spot_sizes, double pump_w0,
    const CharacterizationSetup& setup);

}  // namespace bpnld
