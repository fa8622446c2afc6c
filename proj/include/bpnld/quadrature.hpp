#pragma once

#include <utility>
#include <vector>

#include "bpnld/closed_form.hpp"
#include "bpnld/core.hpp"

namespace bpnld {

// Resolution controls for the direct evaluation of the fourfold coincidence
// integral. A value of 0 for the point counts or the extent means
// "derive automatically from the oscillation guard / geometry heuristic".
struct QuadratureConfig {
  int aperture_points = 0;     // nodes per impulse-response integral (0 = auto)
  double rho_extent = 0.0;     // half-width of each transverse grid, m (0 = auto)
  int rho_points = 0;          // samples per transverse axis (0 = auto)
  int oscillation_guard = 8;   // min samples per 2*pi of local phase
  int kernel_power = 1;        // biphoton kernel exponent (sensitivity knob)

  void validate() const;
};

// Complex samples on a uniform, strictly increasing grid.
struct ComplexField1D {
  std::vector<double> grid;
  std::vector<Complex> values;

  void validate() const;
};

// Default transverse-grid half-width: 4 * max(pump w0, aperture half-width
// plus three Fresnel zones).
double default_rho_extent(const ExperimentSpec& spec);

// Samples per axis needed to honor the oscillation guard at this extent,
// for the worst-phase arm of the given experiment at detector offset u.
int required_rho_points(const ExperimentSpec& spec, const QuadratureConfig& cfg,
                        double extent, double u_abs);

// h(u, rho) = 1/(lambda^2 z0 z1) * Int exp(-ik(rho-v)^2/2z0)
//                                      exp(-ik(v-u)^2/2z1) A(v) dv.
// Bounded transmitting intervals are integrated with composite 16-point
// Gauss-Legendre panels; the unbounded part of an open or wire aperture uses
// the exact Gaussian (Fresnel) integral over the whole line, with the wire's
// blocked strip subtracted by quadrature.
ComplexField1D impulse_response(double u, const std::vector<double>& rho,
                                const LayoutSpec& layout, const ApertureSpec& ap,
                                const QuadratureConfig& cfg);

// The biphoton cross-correlation kernel with unit normalization constant.
Complex cross_spectral_density(double rs, double ri, double rps, double rpi,
                               const PumpSpec& pump, const LayoutSpec& layout,
                               const PolarizationAngles& angles);

// Fourfold integral of the kernel against h1 h2 h1* h2*, contracted over the
// sum variables x = rho_s + rho_i and x' = rho'_s + rho'_i. Returns the real
// part and enforces |imag| <= 1e-6 |real|.
double coincidence_rate_numeric(double u1, double u2, const ExperimentSpec& spec,
                                const QuadratureConfig& cfg);

// Scan of coincidence_rate_numeric over `count` points spanning the spec's
// window, normalized to peak 1.
Pattern scan_numeric(const ExperimentSpec& spec, const QuadratureConfig& cfg,
                     int count, int threads = 0);

struct PatternComparison {
  double linf = 0.0;
  double l2 = 0.0;  // sqrt(mean squared difference)
  // (analytic zero position, offset of the nearest local minimum of b).
  std::vector<std::pair<double, double>> zero_offsets;
};

// Compares two patterns on identical grids. Zero positions are predicted from
// pattern a's metadata (its analytic fringe zeros) and located in pattern b.
PatternComparison compare_patterns(const Pattern& a, const Pattern& b);

struct ConvergenceProbe {
  double u2 = 0.0;
  double rate_coarse = 0.0;
  double rate_fine = 0.0;
  double rel_change = 0.0;
  double imag_residual = 0.0;
};

struct ConvergenceReport {
  int rho_points_coarse = 0;
  int rho_points_fine = 0;
  int aperture_points_coarse = 0;
  int aperture_points_fine = 0;
  double max_rel_change = 0.0;
  double max_imag_residual = 0.0;
  std::vector<ConvergenceProbe> probes;
};

// Halves all quadrature spacings at the given probe points and reports the
// relative change of the numeric rate.
ConvergenceReport convergence_check(const ExperimentSpec& spec,
                                    const QuadratureConfig& cfg,
                                    const std::vector<double>& probe_u2,
                                    int threads = 0);

}  // namespace bpnld
