#pragma once

#include <limits>
#include <vector>

#include "bpnld/numeric.hpp"

namespace bpnld {

// Gaussian Schell-model pump. All lengths in meters. lc may be
// +infinity, which represents a fully coherent pump exactly.
struct PumpSpec {
  double wavelength = 405e-9;  // pump wavelength (m)
  double w0 = 2.3e-3;          // 1/e^2 intensity radius (m)
  double lc = std::numeric_limits<double>::infinity();  // transverse coherence length (m)

  PumpSpec() = default;
  PumpSpec(double wavelength_m, double w0_m, double lc_m);

  double wavenumber() const { return kTwoPi / wavelength; }
  bool coherent() const { return std::isinf(lc); }
  // 1/lc^2, exactly 0 in the coherent limit.
  double inv_lc2() const { return coherent() ? 0.0 : 1.0 / (lc * lc); }
};

// Optical distances and the degenerate signal/idler wavelength.
struct LayoutSpec {
  double wavelength_si = 810e-9;  // signal/idler wavelength (m)
  double z0 = 0.1;                // crystal -> aperture (m)
  double z1 = 0.2;                // aperture -> detector (m)
  double z = 0.1;                 // propagation distance inside the biphoton kernel (m)

  LayoutSpec() = default;
  LayoutSpec(double wavelength_si_m, double z0_m, double z1_m, double z_m);

  double wavenumber() const { return kTwoPi / wavelength_si; }
};

struct PolarizationAngles {
  double theta_s = kPi / 4;  // rad
  double theta_i = kPi / 4;  // rad

  PolarizationAngles() = default;
  PolarizationAngles(double theta_s_rad, double theta_i_rad);
};

// Transmission function of one arm's aperture.
class ApertureSpec {
 public:
  enum class Kind { kSlit, kWire, kOpen, kCustom };

  static ApertureSpec slit(double width_m);
  static ApertureSpec wire(double width_m);
  static ApertureSpec open();
  // Sampled transmission profile; linear interpolation between samples,
  // zero outside the sampled range.
  static ApertureSpec custom(std::vector<double> positions_m,
                             std::vector<double> transmissions);

  Kind kind() const { return kind_; }
  double width() const { return width_; }
  // Half-width of the finite feature: transmitting support for a slit,
  // blocked strip for a wire, sampled range for a custom profile.
  double feature_halfwidth() const;
  double transmission(double v) const;

  const std::vector<double>& sample_positions() const { return positions_; }
  const std::vector<double>& sample_transmissions() const { return values_; }

 private:
  ApertureSpec(Kind k, double w) : kind_(k), width_(w) {}
  Kind kind_;
  double width_ = 0.0;
  std::vector<double> positions_;
  std::vector<double> values_;
};

// delta = sqrt(1 / (1/lc^2 + 1/(4 w0^2))); in (0, 2 w0].
double effective_spectral_width(const PumpSpec& pump);

// A = delta / (2 w0); in (0, 1], 1 iff fully coherent.
double degree_of_coherence(const PumpSpec& pump);

// Inverse of degree_of_coherence at fixed w0: lc = 2 w0 A / sqrt(1 - A^2).
double coherence_length_for_A(double w0, double A);

// w_k = sqrt(1/lc^2 + 1/w0^2).
double momentum_correlation_width(const PumpSpec& pump);

double aperture_transmission(const ApertureSpec& ap, double v);

}  // namespace bpnld
