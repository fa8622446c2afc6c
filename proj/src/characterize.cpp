#include "bpnld/characterize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "bpnld/bessel.hpp"
#include "bpnld/errors.hpp"

namespace bpnld {
namespace {

constexpr double kFirstJ1Zero = 3.8317059702075123;

double fit_objective(double a_s,
                     const std::vector<VisibilityMeasurement>& measurements,
                     const CharacterizationSetup& setup) {
  const double kp = setup.pump_wavenumber();
  double sum = 0.0;
  for (const auto& m : measurements) {
    const double model =
        bessel_visibility(nu_parameter(kp, m.d12, a_s, setup.focal_length));
    const double d = model - m.visibility;
    sum += d * d;
  }
  return sum;
}

}  // namespace

void CharacterizationSetup::validate() const {
  if (!(focal_length > 0.0))
    throw std::invalid_argument("focal length must be positive");
  if (!(wavelength_pump > 0.0))
    throw std::invalid_argument("pump wavelength must be positive");
  for (double d : d12) {
    if (!(d > 0.0)) throw std::invalid_argument("slit separations must be positive");
  }
  std::vector<double> sorted = d12;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("slit separations must be distinct");
}

double bessel_visibility(double nu) {
  if (!(nu >= 0.0)) throw std::invalid_argument("nu must be >= 0");
  if (nu < 1e-12) return 1.0;
  return std::abs(2.0 * bessel_j1(nu) / nu);
}

double nu_parameter(double kp, double d12, double a_s, double f) {
  if (!(kp > 0.0 && d12 >= 0.0 && a_s > 0.0 && f > 0.0))
    throw std::invalid_argument("nu_parameter arguments must be positive");
  return kp * d12 * a_s / f;
}

SpotFit fit_spot_size(const std::vector<VisibilityMeasurement>& measurements,
                      const CharacterizationSetup& setup,
                      const SpotFitOptions& options) {
  if (measurements.size() < 2)
    throw FitFailed("need at least two visibility measurements at distinct separations");
  for (const auto& m : measurements) {
    if (!(m.d12 > 0.0)) throw std::invalid_argument("measurement d12 must be positive");
    if (!(m.visibility >= 0.0 && m.visibility <= 1.0))
      throw std::invalid_argument("measured visibility must be in [0,1]");
  }
  {
    std::vector<double> seps;
    for (const auto& m : measurements) seps.push_back(m.d12);
    std::sort(seps.begin(), seps.end());
    if (std::adjacent_find(seps.begin(), seps.end()) != seps.end())
      throw FitFailed("measurements must use distinct separations");
  }

  const double kp = setup.pump_wavenumber();
  double dmax = 0.0;
  for (const auto& m : measurements) dmax = std::max(dmax, m.d12);
  // Keep the bracket's lower edge inside the monotone region: the largest
  // separation must stay short of the first Bessel zero there.
  const double a_first_zero = kFirstJ1Zero * setup.focal_length / (kp * dmax);
  double lo = options.a_min > 0.0 ? options.a_min : 0.02 * a_first_zero;
  double hi = options.a_max > 0.0 ? options.a_max : 10.0 * a_first_zero;
  if (!(lo < hi)) throw FitFailed("empty spot-size bracket");
  if (!(lo * kp * dmax / setup.focal_length < kFirstJ1Zero))
    throw FitFailed("bracket lower edge is beyond the first visibility zero");

  const int scan = std::max(options.scan_points, 8);
  std::vector<double> xs(scan), ys(scan);
  for (int i = 0; i < scan; ++i) {
    xs[i] = lo + (hi - lo) * i / (scan - 1);
    ys[i] = fit_objective(xs[i], measurements, setup);
  }
  const int best = static_cast<int>(
      std::min_element(ys.begin(), ys.end()) - ys.begin());
  if (best == 0 || best == scan - 1) {
    std::ostringstream trace;
    trace << "no interior minimum in bracket [" << lo << ", " << hi << "] m; scan:";
    for (int i = 0; i < scan; i += std::max(scan / 16, 1))
      trace << " (" << xs[i] << ", " << ys[i] << ")";
    throw FitFailed(trace.str());
  }

  double a = xs[best - 1];
  double b = xs[best + 1];
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = fit_objective(c, measurements, setup);
  double fd = fit_objective(d, measurements, setup);
  while (b - a > options.tolerance) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = fit_objective(c, measurements, setup);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = fit_objective(d, measurements, setup);
    }
  }
  SpotFit fit;
  fit.a_s = 0.5 * (a + b);
  fit.residual = fit_objective(fit.a_s, measurements, setup);
  return fit;
}

double transverse_coherence_length(double f, double kp, double a_s) {
  if (!(f > 0.0 && kp > 0.0 && a_s > 0.0))
    throw std::invalid_argument("coherence length arguments must be positive");
  return 3.832 * f / (kp * a_s);
}

std::vector<CoherenceCurveRow> coherence_curve(
    const std::vector<double>& spot_sizes, double pump_w0,
    const CharacterizationSetup& setup) {
  if (spot_sizes.empty())
    throw std::invalid_argument("coherence_curve needs at least one spot size");
  if (!(pump_w0 > 0.0)) throw std::invalid_argument("pump w0 must be positive");
  const double kp = setup.pump_wavenumber();

  std::vector<std::size_t> order(spot_sizes.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return spot_sizes[i] < spot_sizes[j];
  });

  std::vector<CoherenceCurveRow> rows;
  rows.reserve(spot_sizes.size());
  for (std::size_t idx : order) {
    CoherenceCurveRow row;
    row.original_index = idx;
    row.a_s = spot_sizes[idx];
    row.lc = transverse_coherence_length(setup.focal_length, kp, row.a_s);
    row.A = degree_of_coherence(PumpSpec(setup.wavelength_pump, pump_w0, row.lc));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace bpnld
