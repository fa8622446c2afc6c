#include "bpnld/core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bpnld/errors.hpp"

namespace bpnld {

PumpSpec::PumpSpec(double wavelength_m, double w0_m, double lc_m)
    : wavelength(wavelength_m), w0(w0_m), lc(lc_m) {
  if (!(wavelength > 0.0) || std::isinf(wavelength))
    throw std::invalid_argument("pump wavelength must be positive and finite");
  if (!(w0 > 0.0) || std::isinf(w0))
    throw std::invalid_argument("pump w0 must be positive and finite");
  if (!(lc > 0.0)) throw std::invalid_argument("pump lc must be positive (+inf allowed)");
}

LayoutSpec::LayoutSpec(double wavelength_si_m, double z0_m, double z1_m, double z_m)
    : wavelength_si(wavelength_si_m), z0(z0_m), z1(z1_m), z(z_m) {
  for (double v : {wavelength_si, z0, z1, z}) {
    if (!(v > 0.0) || std::isinf(v))
      throw std::invalid_argument("layout lengths must be positive and finite");
  }
}

PolarizationAngles::PolarizationAngles(double theta_s_rad, double theta_i_rad)
    : theta_s(theta_s_rad), theta_i(theta_i_rad) {
  if (!(theta_s >= 0.0 && theta_s <= kPi / 2) ||
      !(theta_i >= 0.0 && theta_i <= kPi / 2))
    throw std::invalid_argument("polarization angles must be in [0, pi/2]");
}

ApertureSpec ApertureSpec::slit(double width_m) {
  if (!(width_m > 0.0)) throw std::invalid_argument("slit width must be positive");
  return ApertureSpec(Kind::kSlit, width_m);
}

ApertureSpec ApertureSpec::wire(double width_m) {
  if (!(width_m > 0.0)) throw std::invalid_argument("wire width must be positive");
  return ApertureSpec(Kind::kWire, width_m);
}

ApertureSpec ApertureSpec::open() { return ApertureSpec(Kind::kOpen, 0.0); }

ApertureSpec ApertureSpec::custom(std::vector<double> positions_m,
                                  std::vector<double> transmissions) {
  if (positions_m.size() < 2 || positions_m.size() != transmissions.size())
    throw std::invalid_argument("custom aperture needs >= 2 matching samples");
  if (!std::is_sorted(positions_m.begin(), positions_m.end()))
    throw std::invalid_argument("custom aperture positions must be sorted");
  for (double t : transmissions) {
    if (!(t >= 0.0 && t <= 1.0))
      throw std::invalid_argument("custom transmissions must be in [0,1]");
  }
  ApertureSpec ap(Kind::kCustom, positions_m.back() - positions_m.front());
  ap.positions_ = std::move(positions_m);
  ap.values_ = std::move(transmissions);
  return ap;
}

double ApertureSpec::feature_halfwidth() const {
  switch (kind_) {
    case Kind::kSlit:
    case Kind::kWire:
      return width_ / 2.0;
    case Kind::kOpen:
      return 0.0;
    case Kind::kCustom:
      return std::max(std::abs(positions_.front()), std::abs(positions_.back()));
  }
  return 0.0;
}

double ApertureSpec::transmission(double v) const {
  switch (kind_) {
    case Kind::kSlit:
      // rect convention: the boundary |v| == width/2 transmits.
      return std::abs(v) <= width_ / 2.0 ? 1.0 : 0.0;
    case Kind::kWire:
      return std::abs(v) <= width_ / 2.0 ? 0.0 : 1.0;
    case Kind::kOpen:
      return 1.0;
    case Kind::kCustom: {
      if (v < positions_.front() || v > positions_.back()) return 0.0;
      auto it = std::upper_bound(positions_.begin(), positions_.end(), v);
      if (it == positions_.begin()) return values_.front();
      if (it == positions_.end()) return values_.back();
      const size_t hi = static_cast<size_t>(it - positions_.begin());
      const size_t lo = hi - 1;
      const double span = positions_[hi] - positions_[lo];
      if (span <= 0.0) return values_[lo];
      const double f = (v - positions_[lo]) / span;
      return values_[lo] + f * (values_[hi] - values_[lo]);
    }
  }
  return 0.0;
}

double effective_spectral_width(const PumpSpec& pump) {
  return std::sqrt(1.0 / (pump.inv_lc2() + 1.0 / (4.0 * pump.w0 * pump.w0)));
}

double degree_of_coherence(const PumpSpec& pump) {
  return effective_spectral_width(pump) / (2.0 * pump.w0);
}

double coherence_length_for_A(double w0, double A) {
  if (!(w0 > 0.0)) throw std::invalid_argument("w0 must be positive");
  if (A >= 1.0) throw Error("fully coherent has no finite lc");
  if (!(A > 0.0)) throw std::invalid_argument("degree of coherence must be in (0,1)");
  return 2.0 * w0 * A / std::sqrt(1.0 - A * A);
}

double momentum_correlation_width(const PumpSpec& pump) {
  return std::sqrt(pump.inv_lc2() + 1.0 / (pump.w0 * pump.w0));
}

double aperture_transmission(const ApertureSpec& ap, double v) {
  return ap.transmission(v);
}

}  // namespace bpnld
