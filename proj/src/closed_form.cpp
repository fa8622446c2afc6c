#include "bpnld/closed_form.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "bpnld/errors.hpp"

namespace bpnld {
namespace {

void check_usable(const char* symbol, Complex v) {
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
    throw DegenerateCoefficients(symbol, "non-finite value");
  if (std::abs(v) < 1e-300)
    throw DegenerateCoefficients(symbol, "magnitude below 1e-300");
}

int resolve_threads(int threads) {
  if (threads > 0) return threads;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Evaluates fn(i) for i in [0, n) on up to `threads` workers. Each index is
// computed independently and stored by position, so results do not depend on
// scheduling.
template <typename F>
void parallel_index_for(int n, int threads, F&& fn) {
  threads = std::min(resolve_threads(threads), n);
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (int i = t; i < n; i += threads) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

void ScanGrid::validate() const {
  if (count < 2) throw std::invalid_argument("scan count must be >= 2");
  if (!(u2_min < u2_max)) throw std::invalid_argument("scan window must have min < max");
}

std::vector<double> ScanGrid::positions() const {
  validate();
  std::vector<double> u(count);
  const double step = (u2_max - u2_min) / (count - 1);
  for (int i = 0; i < count; ++i) u[i] = u2_min + i * step;
  return u;
}

void ExperimentSpec::validate() const {
  scan.validate();
  if (slit.kind() != ApertureSpec::Kind::kSlit)
    throw std::invalid_argument("experiment slit aperture must be a slit");
  if (wire.kind() != ApertureSpec::Kind::kWire)
    throw std::invalid_argument("experiment wire aperture must be a wire");
}

double ExperimentSpec::sinc_width() const {
  return mapping == ApertureMapping::kFig2 ? wire.width() : slit.width();
}

double ExperimentSpec::cos_width() const {
  return mapping == ApertureMapping::kFig2 ? slit.width() : wire.width();
}

CoefficientSet coefficients(const ExperimentSpec& spec, double u1, double u2) {
  spec.validate();
  const double k = spec.layout.wavenumber();
  const double kp = spec.pump.wavenumber();
  const double z0 = spec.layout.z0;
  const double z1 = spec.layout.z1;
  const double z = spec.layout.z;
  const double w0 = spec.pump.w0;
  const double lc = spec.pump.lc;
  const double lam = spec.layout.wavelength_si;
  const Complex i(0.0, 1.0);

  CoefficientSet c;
  c.e = i * k / (2.0 * z0) + i * k / (2.0 * z1);
  check_usable("e", c.e);
  // The (w0^2 + 2 lc^2) factor cancels between numerator and denominator;
  // kept in place deliberately.
  c.B0 = kp * kp * lc * lc * (w0 * w0 + 2.0 * lc * lc) /
         (4.0 * z * z * (w0 * w0 + 2.0 * lc * lc));
  check_usable("B0", c.B0);
  c.A0 = -i * kp / z + i * k / z - c.B0 + k * k / (4.0 * c.e * z0 * z0);
  check_usable("A0", c.A0);
  c.A2 = -i * kp / z + i * k / z - c.B0 - k * k / (4.0 * c.e * z0 * z0);
  c.C0 = 4.0 * w0 * w0 * lc * lc * kp * kp /
         (2.0 * z * z * (w0 * w0 + 4.0 * lc * lc));
  c.b1 = k * k * u1 / (2.0 * c.e * z0 * z1);
  c.b2 = k * k * u2 / (2.0 * c.e * z0 * z1);
  c.f = c.b2 + c.B0 / c.A0;
  c.l = c.A0 - c.B0 * c.B0 / c.A0;
  check_usable("l", c.l);
  c.g = c.C0 * (1.0 + c.B0 * c.C0 / c.A0);
  c.m = c.A2 - c.C0 * c.C0 / (4.0 * c.A0) - c.B0 * c.B0 / c.l -
        c.g * c.g / (4.0 * c.l) + c.g * c.B0 / c.l;
  check_usable("m", c.m);
  c.n = c.b1 + c.C0 * c.b1 / (2.0 * c.A0) - c.B0 / c.l + c.g * c.f / (2.0 * c.l);
  c.p = -c.g * c.g / (2.0 * c.l) + c.g * c.B0 / c.l - c.C0 / (2.0 * c.A0);
  c.s = c.A2 - c.C0 * c.C0 / (4.0 * c.A0) - c.p * c.p / (4.0 * c.m) -
        c.g * c.g / (4.0 * c.l);
  check_usable("s", c.s);
  c.t = c.C0 * c.b1 / (2.0 * c.A0) + c.b2 + c.g * c.f / (2.0 * c.l) -
        c.n * c.p / (2.0 * c.m);
  c.D0 = 1.0 / (lam * lam * lam * lam * z0 * z0 * z1 * z1) * kPi * kPi /
         std::sqrt(c.A0 * c.s * c.m * c.e);
  check_usable("D0", c.D0);
  return c;
}

double fringe_factor(const ExperimentSpec& spec, double delta_u) {
  const double k = spec.layout.wavenumber();
  const double z1 = spec.layout.z1;
  return sinc(k * delta_u * spec.sinc_width() / z1) *
         std::cos(k * delta_u * spec.cos_width() / z1);
}

double coincidence_rate(const ExperimentSpec& spec, double u1, double u2) {
  const CoefficientSet c = coefficients(spec, u1, u2);
  const double k = spec.layout.wavenumber();
  const double z1 = spec.layout.z1;
  // Sum the exponents first and exponentiate the real part once: the
  // magnitude of a product of exponentials depends only on the summed
  // real parts, and this avoids intermediate overflow.
  const Complex expo = k * k * (u1 * u1 + u2 * u2) / (2.0 * z1 * z1 * c.e) +
                       c.f * c.f / (4.0 * c.l) + c.b1 * c.b1 / (4.0 * c.A0) +
                       c.n * c.n / (4.0 * c.m) + c.t * c.t / (4.0 * c.s);
  const double fr = fringe_factor(spec, u1 - u2);
  return std::abs(c.D0) * std::exp(expo.real()) * fr * fr;
}

Pattern scan_pattern(const ExperimentSpec& spec, int threads) {
  spec.validate();
  Pattern p;
  p.meta = spec;
  p.positions = spec.scan.positions();
  p.values.assign(p.positions.size(), 0.0);
  parallel_index_for(static_cast<int>(p.positions.size()), threads, [&](int i) {
    p.values[i] = coincidence_rate(spec, spec.scan.u1, p.positions[i]);
  });
  const double peak = *std::max_element(p.values.begin(), p.values.end());
  if (!(peak > 0.0)) throw Error("degenerate pattern: all scan values are zero");
  for (double& v : p.values) v /= peak;
  return p;
}

double visibility(const Pattern& p) {
  const auto& v = p.values;
  const size_t n = v.size();
  if (n < 3) throw Error("insufficient fringe structure: pattern has fewer than 3 points");
  const size_t pk = static_cast<size_t>(
      std::max_element(v.begin(), v.end()) - v.begin());
  const double rmax = v[pk];

  // Walk outward along non-increasing values; the stopping point counts as an
  // adjacent local minimum only if it lies strictly below the peak.
  double rmin = -1.0;
  if (pk > 0) {
    size_t j = pk;
    while (j > 0 && v[j - 1] <= v[j]) --j;
    if (v[j] < rmax) rmin = v[j];
  }
  if (pk + 1 < n) {
    size_t j = pk;
    while (j + 1 < n && v[j + 1] <= v[j]) ++j;
    if (v[j] < rmax && (rmin < 0.0 || v[j] < rmin)) rmin = v[j];
  }
  if (rmin < 0.0) throw Error("insufficient fringe structure: no local minimum");
  return (rmax - rmin) / (rmax + rmin);
}

std::vector<SweepRow> sweep(const std::vector<ExperimentSpec>& specs, int threads) {
  if (specs.empty()) throw std::invalid_argument("sweep needs at least one spec");
  std::vector<SweepRow> rows(specs.size());
  for (size_t i = 0; i < specs.size(); ++i) {
    try {
      SweepRow row;
      row.A = degree_of_coherence(specs[i].pump);
      row.lc = specs[i].pump.lc;
      row.slit_width = specs[i].slit.width();
      row.wire_width = specs[i].wire.width();
      row.pattern = scan_pattern(specs[i], threads);
      row.vis = visibility(row.pattern);
      rows[i] = std::move(row);
    } catch (const std::exception& ex) {
      throw Error("sweep row " + std::to_string(i) + ": " + ex.what());
    }
  }
  return rows;
}

std::vector<double> expected_pattern_zeros(const ExperimentSpec& spec) {
  const double k = spec.layout.wavenumber();
  const double z1 = spec.layout.z1;
  const double u1 = spec.scan.u1;
  std::vector<double> zeros;
  // cos zeros: k*du*cw/z1 = (2n-1) pi/2; sinc zeros: k*du*sw/z1 = n pi.
  const double cw = spec.cos_width();
  const double sw = spec.sinc_width();
  const double du_max =
      std::max(std::abs(spec.scan.u2_min - u1), std::abs(spec.scan.u2_max - u1));
  for (int n = 1;; ++n) {
    const double du = (2.0 * n - 1.0) * kPi * z1 / (2.0 * k * cw);
    if (du > du_max) break;
    zeros.push_back(u1 - du);
    zeros.push_back(u1 + du);
  }
  for (int n = 1;; ++n) {
    const double du = n * kPi * z1 / (k * sw);
    if (du > du_max) break;
    zeros.push_back(u1 - du);
    zeros.push_back(u1 + du);
  }
  std::sort(zeros.begin(), zeros.end());
  zeros.erase(std::remove_if(zeros.begin(), zeros.end(),
                             [&](double u) {
                               return u < spec.scan.u2_min || u > spec.scan.u2_max;
                             }),
              zeros.end());
  return zeros;
}

double expected_fringe_peak_spacing(const ExperimentSpec& spec) {
  return spec.layout.wavelength_si * spec.layout.z1 / (2.0 * spec.cos_width());
}

}  // namespace bpnld
