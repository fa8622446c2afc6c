#include "bpnld/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "bpnld/errors.hpp"

namespace bpnld {
namespace {

// Quadratic chirp rate of the whole-line (unapertured) propagation term after
// the kernel chirp is folded in; sets the worst sampling requirement on the
// transverse grids when an arm has unbounded transmitting support.
double open_chirp_rate(const LayoutSpec& lay) {
  const double k = lay.wavenumber();
  return k * lay.z1 / (2.0 * lay.z0 * (lay.z0 + lay.z1));
}

int ceil_to_panels(int points) {
  const int panels = (points + 15) / 16;
  return std::max(panels, 2) * 16;
}

// Gauss-Legendre node budget needed for the aperture integral at the worst
// grid point, from the peak local slope of the two Fresnel phases.
int required_aperture_points(const LayoutSpec& lay, double rho_max, double u_abs,
                             double v_lo, double v_hi, int guard) {
  const double k = lay.wavenumber();
  const double vmax = std::max(std::abs(v_lo), std::abs(v_hi));
  const double slope = k * (rho_max / lay.z0 + u_abs / lay.z1) +
                       k * (1.0 / lay.z0 + 1.0 / lay.z1) * vmax;
  const double cycles = slope * (v_hi - v_lo) / kTwoPi;
  return std::max(static_cast<int>(std::ceil(cycles * guard)), 32);
}

// Exact whole-line Fresnel integral of the two propagation kernels
// (aperture identically 1), principal branch of the square root.
Complex open_line_integral(double u, double rho, const LayoutSpec& lay) {
  const double k = lay.wavenumber();
  const Complex i(0.0, 1.0);
  const Complex ecoef = i * k * (1.0 / lay.z0 + 1.0 / lay.z1) / 2.0;
  const Complex beta = i * k * (rho / lay.z0 + u / lay.z1);
  const Complex gamma = -i * k / 2.0 * (rho * rho / lay.z0 + u * u / lay.z1);
  return std::sqrt(kPi / ecoef) * std::exp(beta * beta / (4.0 * ecoef) + gamma);
}

// Quadrature over one bounded transmitting interval, transmission profile
// applied per node.
void add_interval_quadrature(std::vector<Complex>& acc, double u,
                             const std::vector<double>& rho,
                             const LayoutSpec& lay, const ApertureSpec& ap,
                             double v_lo, double v_hi, double sign,
                             const QuadratureConfig& cfg) {
  const double rho_max = std::max(std::abs(rho.front()), std::abs(rho.back()));
  const int required =
      required_aperture_points(lay, rho_max, std::abs(u), v_lo, v_hi,
                               cfg.oscillation_guard);
  int points = cfg.aperture_points;
  if (points != 0 && points < required) {
    throw RefusedUnderresolved(
        "aperture integral needs >= " + std::to_string(required) +
        " nodes at oscillation_guard " + std::to_string(cfg.oscillation_guard) +
        ", configured aperture_points is " + std::to_string(points));
  }
  if (points == 0) points = required;
  const int panels = ceil_to_panels(points) / 16;

  const double k = lay.wavenumber();
  const bool profiled = ap.kind() == ApertureSpec::Kind::kCustom;

  struct Node {
    double v;
    double w;
  };
  std::vector<Node> nodes;
  nodes.reserve(static_cast<size_t>(panels) * 16);
  gauss_legendre_panels(v_lo, v_hi, panels, [&](double v, double w) {
    if (profiled) w *= ap.transmission(v);
    nodes.push_back({v, w});
  });
  // exp(-ik(v-u)^2/2z1) is rho-independent; fold it into the node weight.
  std::vector<Complex> wv(nodes.size());
  for (size_t q = 0; q < nodes.size(); ++q) {
    const double dv = nodes[q].v - u;
    const double ph = -k * dv * dv / (2.0 * lay.z1);
    wv[q] = nodes[q].w * Complex(std::cos(ph), std::sin(ph));
  }
  for (size_t r = 0; r < rho.size(); ++r) {
    CompensatedComplexSum sum;
    for (size_t q = 0; q < nodes.size(); ++q) {
      const double dr = rho[r] - nodes[q].v;
      const double ph = -k * dr * dr / (2.0 * lay.z0);
      sum.add(wv[q] * Complex(std::cos(ph), std::sin(ph)));
    }
    acc[r] += sign * sum.value();
  }
}

struct KernelCoefficients {
  double chirp = 0.0;  // coefficient of i*rho^2 in the reduced amplitudes
  double c1 = 0.0;     // Gaussian confinement of the sum coordinate
  double c2 = 0.0;     // cross coupling between primed and unprimed sums
  double sin_factor = 1.0;
};

KernelCoefficients kernel_coefficients(const PumpSpec& pump,
                                       const LayoutSpec& lay,
                                       const PolarizationAngles& angles,
                                       int power) {
  const double kp = pump.wavenumber();
  const double d2 = [&] {
    const double d = effective_spectral_width(pump);
    return d * d;
  }();
  const double inv_lc2 = pump.inv_lc2();
  const double w02 = pump.w0 * pump.w0;
  KernelCoefficients kc;
  kc.chirp = power * kp / (4.0 * lay.z);
  kc.c1 = power * (2.0 * w02 * inv_lc2 + 1.0) * d2 * kp * kp / (16.0 * lay.z * lay.z);
  kc.c2 = power * (w02 * inv_lc2) * d2 * kp * kp / (4.0 * lay.z * lay.z);
  kc.sin_factor =
      std::pow(std::sin(2.0 * angles.theta_s) * std::sin(2.0 * angles.theta_i),
               power);
  return kc;
}

}  // namespace

void QuadratureConfig::validate() const {
  if (aperture_points != 0 && aperture_points < 16)
    throw std::invalid_argument("aperture_points must be 0 (auto) or >= 16");
  if (rho_points != 0 && rho_points < 16)
    throw std::invalid_argument("rho_points must be 0 (auto) or >= 16");
  if (rho_extent < 0.0)
    throw std::invalid_argument("rho_extent must be positive or 0 (auto)");
  if (oscillation_guard < 8)
    throw std::invalid_argument("oscillation_guard must be >= 8");
  if (kernel_power != 1 && kernel_power != 2)
    throw std::invalid_argument("kernel_power must be 1 or 2");
}

void ComplexField1D::validate() const {
  if (grid.size() != values.size() || grid.size() < 2)
    throw std::invalid_argument("field grid/value size mismatch");
  const double step = grid[1] - grid[0];
  if (!(step > 0.0)) throw std::invalid_argument("field grid must be increasing");
  for (size_t i = 1; i < grid.size(); ++i) {
    const double d = grid[i] - grid[i - 1];
    if (std::abs(d - step) > 1e-9 * std::abs(step))
      throw std::invalid_argument("field grid must be uniform");
  }
}

double default_rho_extent(const ExperimentSpec& spec) {
  const double fresnel =
      std::sqrt(spec.layout.wavelength_si * spec.layout.z0);
  const double half = std::max(spec.slit.feature_halfwidth(),
                               spec.wire.feature_halfwidth());
  return 4.0 * std::max(spec.pump.w0, half + 3.0 * fresnel);
}

int required_rho_points(const ExperimentSpec& spec, const QuadratureConfig& cfg,
                        double extent, double u_abs) {
  const double k = spec.layout.wavenumber();
  const double kp = spec.pump.wavenumber();
  const double residual_chirp =
      std::abs(cfg.kernel_power * kp / (2.0 * spec.layout.z) - k / spec.layout.z0);
  const double half = std::max(spec.slit.feature_halfwidth(),
                               spec.wire.feature_halfwidth());
  double slope = residual_chirp * extent + k * half / spec.layout.z0 +
                 k * u_abs / spec.layout.z1;
  // Wire arms carry the unbounded open term and its quadratic chirp.
  slope += 2.0 * open_chirp_rate(spec.layout) * extent;
  const int pts = static_cast<int>(
      std::ceil(cfg.oscillation_guard * slope * 2.0 * extent / kTwoPi));
  return std::max(pts, 64);
}

ComplexField1D impulse_response(double u, const std::vector<double>& rho,
                                const LayoutSpec& layout, const ApertureSpec& ap,
                                const QuadratureConfig& cfg) {
  cfg.validate();
  if (rho.size() < 2) throw std::invalid_argument("rho grid needs >= 2 points");
  ComplexField1D field;
  field.grid = rho;
  field.values.assign(rho.size(), Complex(0.0, 0.0));

  switch (ap.kind()) {
    case ApertureSpec::Kind::kSlit:
      add_interval_quadrature(field.values, u, rho, layout, ap,
                              -ap.width() / 2.0, ap.width() / 2.0, 1.0, cfg);
      break;
    case ApertureSpec::Kind::kWire:
      for (size_t r = 0; r < rho.size(); ++r)
        field.values[r] = open_line_integral(u, rho[r], layout);
      add_interval_quadrature(field.values, u, rho, layout, ap,
                              -ap.width() / 2.0, ap.width() / 2.0, -1.0, cfg);
      break;
    case ApertureSpec::Kind::kOpen:
      for (size_t r = 0; r < rho.size(); ++r)
        field.values[r] = open_line_integral(u, rho[r], layout);
      break;
    case ApertureSpec::Kind::kCustom:
      add_interval_quadrature(field.values, u, rho, layout, ap,
                              ap.sample_positions().front(),
                              ap.sample_positions().back(), 1.0, cfg);
      break;
  }
  const double lam = layout.wavelength_si;
  const Complex norm = 1.0 / (lam * lam * layout.z0 * layout.z1);
  for (auto& v : field.values) v *= norm;
  field.validate();
  return field;
}

Complex cross_spectral_density(double rs, double ri, double rps, double rpi,
                               const PumpSpec& pump, const LayoutSpec& layout,
                               const PolarizationAngles& angles) {
  const double kp = pump.wavenumber();
  const KernelCoefficients kc = kernel_coefficients(pump, layout, angles, 1);
  const double x = rs + ri;
  const double xp = rps + rpi;
  const double phase =
      kp / (4.0 * layout.z) * (rs * rs + ri * ri - rps * rps - rpi * rpi);
  const double damp = -kc.c1 * (x * x + xp * xp) - kc.c2 * x * xp;
  return Complex(std::cos(phase), std::sin(phase)) * std::exp(damp) *
         kc.sin_factor;
}

namespace {

struct RawRate {
  Complex value;
  double imag_residual = 0.0;
};

RawRate rate_numeric_raw(double u1, double u2, const ExperimentSpec& spec,
                         const QuadratureConfig& cfg) {
  cfg.validate();
  spec.validate();
  const double extent =
      cfg.rho_extent > 0.0 ? cfg.rho_extent : default_rho_extent(spec);
  const int required = required_rho_points(
      spec, cfg, extent, std::max(std::abs(u1), std::abs(u2)));
  int n = cfg.rho_points;
  if (n != 0 && n < required) {
    throw RefusedUnderresolved(
        "transverse grid needs >= " + std::to_string(required) +
        " points at oscillation_guard " + std::to_string(cfg.oscillation_guard) +
        ", configured rho_points is " + std::to_string(n));
  }
  if (n == 0) n = required;

  const std::vector<double> rho = uniform_grid(extent, n);
  const double dr = rho[1] - rho[0];
  const ComplexField1D h1 = impulse_response(u1, rho, spec.layout, spec.slit, cfg);
  const ComplexField1D h2 = impulse_response(u2, rho, spec.layout, spec.wire, cfg);

  const KernelCoefficients kc =
      kernel_coefficients(spec.pump, spec.layout, spec.angles, cfg.kernel_power);

  // Reduced one-arm amplitudes: kernel chirp and trapezoid end weights folded
  // into the samples.
  std::vector<Complex> a(n), b(n);
  for (int j = 0; j < n; ++j) {
    const double ph = kc.chirp * rho[j] * rho[j];
    const Complex chirp(std::cos(ph), std::sin(ph));
    const double w = (j == 0 || j == n - 1) ? 0.5 : 1.0;
    a[j] = h1.values[j] * chirp * w;
    b[j] = h2.values[j] * chirp * w;
  }

  // G(x) on the sum-coordinate lattice x = -2E + m*dr. The Gaussian
  // confinement of the sum coordinate is exactly zero outside a narrow
  // window in double precision; skipping those lattice points drops only
  // terms that multiply to 0.
  const int nx = 2 * n - 1;
  std::vector<int> active;
  std::vector<double> xs;
  std::vector<Complex> g;
  active.reserve(256);
  for (int m = 0; m < nx; ++m) {
    const double x = -2.0 * extent + m * dr;
    const double damp = std::exp(-kc.c1 * x * x);
    if (damp == 0.0) continue;
    CompensatedComplexSum conv;
    const int jlo = std::max(0, m - (n - 1));
    const int jhi = std::min(n - 1, m);
    for (int j = jlo; j <= jhi; ++j) conv.add(a[j] * b[m - j]);
    active.push_back(m);
    xs.push_back(x);
    g.push_back(conv.value() * dr * damp);
  }

  CompensatedComplexSum total;
  for (size_t i = 0; i < xs.size(); ++i) {
    for (size_t jj = 0; jj < xs.size(); ++jj) {
      total.add(g[i] * std::conj(g[jj]) * std::exp(-kc.c2 * xs[i] * xs[jj]));
    }
  }
  const Complex r = total.value() * dr * dr * kc.sin_factor;
  const double scale = std::max(std::abs(r.real()), 1e-300);
  return RawRate{r, std::abs(r.imag()) / scale};
}

}  // namespace

double coincidence_rate_numeric(double u1, double u2, const ExperimentSpec& spec,
                                const QuadratureConfig& cfg) {
  const RawRate raw = rate_numeric_raw(u1, u2, spec, cfg);
  if (raw.imag_residual > 1e-6) {
    throw NonHermitianResidual(
        "imaginary residual " + std::to_string(raw.imag_residual) +
        " exceeds 1e-6; quadrature under-resolved");
  }
  return std::max(raw.value.real(), 0.0);
}

Pattern scan_numeric(const ExperimentSpec& spec, const QuadratureConfig& cfg,
                     int count, int threads) {
  if (count < 2) throw std::invalid_argument("scan count must be >= 2");
  ExperimentSpec s = spec;
  s.scan.count = count;
  Pattern p;
  p.meta = s;
  p.positions = s.scan.positions();
  p.values.assign(p.positions.size(), 0.0);

  int workers = threads > 0 ? threads
                            : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<int>(workers, count);
  std::exception_ptr first_error;
  auto run = [&](int begin, int stride) {
    for (int i = begin; i < count; i += stride) {
      p.values[i] = coincidence_rate_numeric(s.scan.u1, p.positions[i], s, cfg);
    }
  };
  if (workers <= 1) {
    run(0, 1);
  } else {
    std::vector<std::thread> pool;
    std::mutex err_mutex;
    for (int t = 0; t < workers; ++t) {
      pool.emplace_back([&, t] {
        try {
          run(t, workers);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
  }
  const double peak = *std::max_element(p.values.begin(), p.values.end());
  if (!(peak > 0.0)) throw Error("degenerate pattern: all scan values are zero");
  for (double& v : p.values) v /= peak;
  return p;
}

PatternComparison compare_patterns(const Pattern& a, const Pattern& b) {
  if (a.positions.size() != b.positions.size())
    throw Error("pattern grid mismatch: different sizes");
  const double range = a.positions.back() - a.positions.front();
  for (size_t i = 0; i < a.positions.size(); ++i) {
    if (std::abs(a.positions[i] - b.positions[i]) > 1e-12 * std::abs(range))
      throw Error("pattern grid mismatch: positions differ");
  }
  PatternComparison cmp;
  double sq = 0.0;
  for (size_t i = 0; i < a.values.size(); ++i) {
    const double d = std::abs(a.values[i] - b.values[i]);
    cmp.linf = std::max(cmp.linf, d);
    sq += d * d;
  }
  cmp.l2 = std::sqrt(sq / static_cast<double>(a.values.size()));

  const std::vector<double> zeros = expected_pattern_zeros(a.meta);
  const double halfwin = expected_fringe_peak_spacing(a.meta) / 2.0;
  for (double zu : zeros) {
    size_t best = b.values.size();
    for (size_t i = 0; i < b.positions.size(); ++i) {
      if (std::abs(b.positions[i] - zu) > halfwin) continue;
      if (best == b.values.size() || b.values[i] < b.values[best]) best = i;
    }
    if (best == b.values.size()) continue;
    cmp.zero_offsets.emplace_back(zu, b.positions[best] - zu);
  }
  return cmp;
}

ConvergenceReport convergence_check(const ExperimentSpec& spec,
                                    const QuadratureConfig& cfg,
                                    const std::vector<double>& probe_u2,
                                    int threads) {
  (void)threads;
  cfg.validate();
  const double extent =
      cfg.rho_extent > 0.0 ? cfg.rho_extent : default_rho_extent(spec);
  double u_abs = std::abs(spec.scan.u1);
  for (double u : probe_u2) u_abs = std::max(u_abs, std::abs(u));
  const int n_coarse = cfg.rho_points != 0
                           ? cfg.rho_points
                           : required_rho_points(spec, cfg, extent, u_abs);

  QuadratureConfig fine = cfg;
  fine.rho_points = 2 * n_coarse;
  fine.oscillation_guard = 2 * cfg.oscillation_guard;
  if (cfg.aperture_points != 0) fine.aperture_points = 2 * cfg.aperture_points;

  ConvergenceReport rep;
  rep.rho_points_coarse = n_coarse;
  rep.rho_points_fine = fine.rho_points;
  rep.aperture_points_coarse = cfg.aperture_points;
  rep.aperture_points_fine = fine.aperture_points;
  for (double u : probe_u2) {
    ConvergenceProbe probe;
    probe.u2 = u;
    const RawRate coarse = rate_numeric_raw(spec.scan.u1, u, spec, cfg);
    const RawRate finer = rate_numeric_raw(spec.scan.u1, u, spec, fine);
    probe.rate_coarse = coarse.value.real();
    probe.rate_fine = finer.value.real();
    const double denom = std::max(std::abs(probe.rate_fine), 1e-300);
    probe.rel_change = std::abs(probe.rate_fine - probe.rate_coarse) / denom;
    probe.imag_residual = std::max(coarse.imag_residual, finer.imag_residual);
    rep.max_rel_change = std::max(rep.max_rel_change, probe.rel_change);
    rep.max_imag_residual = std::max(rep.max_imag_residual, probe.imag_residual);
    rep.probes.push_back(probe);
  }
  return rep;
}

}  // namespace bpnld
