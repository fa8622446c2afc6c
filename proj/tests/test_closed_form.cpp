#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "bpnld/closed_form.hpp"
#include "bpnld/errors.hpp"

using namespace bpnld;

namespace {

ExperimentSpec fig2_spec(double A, double slit_width) {
  ExperimentSpec spec;
  spec.pump = PumpSpec(405e-9, 2.3e-3, coherence_length_for_A(2.3e-3, A));
  spec.slit = ApertureSpec::slit(slit_width);
  spec.wire = ApertureSpec::wire(80e-6);
  return spec;
}

// Local maxima above a floor, returned as indices.
std::vector<size_t> local_maxima(const std::vector<double>& v, double floor) {
  std::vector<size_t> out;
  for (size_t i = 1; i + 1 < v.size(); ++i) {
    if (v[i] > v[i - 1] && v[i] > v[i + 1] && v[i] > floor) out.push_back(i);
  }
  return out;
}

}  // namespace

TEST_CASE("coefficient e at z0 = z1 = 0.1 m") {
  ExperimentSpec spec = fig2_spec(0.5, 0.4e-3);
  spec.layout = LayoutSpec(810e-9, 0.1, 0.1, 0.1);
  const CoefficientSet c = coefficients(spec, 0.0, 0.0);
  const double k = kTwoPi / 810e-9;
  CHECK(c.e.real() == 0.0);
  CHECK(c.e.imag() == doctest::Approx(k * 10.0).epsilon(1e-14));
}

TEST_CASE("B0 is independent of w0 as printed") {
  const double lc = 2.3e-3;
  Complex b0[3];
  int idx = 0;
  for (double w0 : {2.3e-3, 3e-3, 4e-3}) {
    ExperimentSpec spec;
    spec.pump = PumpSpec(405e-9, w0, lc);
    spec.slit = ApertureSpec::slit(0.4e-3);
    b0[idx++] = coefficients(spec, 0.0, 1e-3).B0;
  }
  const double kp = kTwoPi / 405e-9;
  const double simplified = kp * kp * lc * lc / (4.0 * 0.1 * 0.1);
  for (const Complex& b : b0) {
    CHECK(b.imag() == 0.0);
    CHECK(b.real() == doctest::Approx(simplified).epsilon(1e-12));
  }
}

TEST_CASE("b1 and b2 vanish at the origin") {
  const ExperimentSpec spec = fig2_spec(0.76, 0.4e-3);
  const CoefficientSet c = coefficients(spec, 0.0, 0.0);
  CHECK(std::abs(c.b1) == 0.0);
  CHECK(std::abs(c.b2) == 0.0);
}

TEST_CASE("fully coherent pump degenerates the cascade") {
  ExperimentSpec spec = fig2_spec(0.5, 0.4e-3);
  spec.pump = PumpSpec(405e-9, 2.3e-3, std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(coefficients(spec, 0.0, 0.0), DegenerateCoefficients);
  CHECK_THROWS_AS(coincidence_rate(spec, 0.0, 1e-4), DegenerateCoefficients);
}

TEST_CASE("equal detector positions give the bare prefactor") {
  const ExperimentSpec spec = fig2_spec(0.5, 0.4e-3);
  CHECK(fringe_factor(spec, 0.0) == 1.0);
  const double r0 = coincidence_rate(spec, 2e-4, 2e-4);
  const double r1 = coincidence_rate(spec, 5e-4, 5e-4);
  CHECK(r0 > 0.0);
  CHECK(r1 > 0.0);
  // both are pure prefactor values; the fringe factor contributes exactly 1
  CHECK(coincidence_rate(spec, 2e-4, 2e-4) == r0);
}

TEST_CASE("analytic fringe zeros") {
  const ExperimentSpec spec = fig2_spec(0.99, 0.4e-3);
  const double peak = coincidence_rate(spec, 0.0, 0.0);
  // first sinc zero from the 80 um wire: lambda z1 / (2 * 80um)
  const double du_sinc = 810e-9 * 0.2 / (2.0 * 80e-6);
  CHECK(du_sinc == doctest::Approx(1.0125e-3).epsilon(1e-12));
  // first cos zero from the 0.4 mm slit: lambda z1 / (4 * 0.4mm)
  const double du_cos = 810e-9 * 0.2 / (4.0 * 0.4e-3);
  CHECK(du_cos == doctest::Approx(101.25e-6).epsilon(1e-12));
  CHECK(coincidence_rate(spec, 0.0, du_sinc) <= 1e-9 * peak);
  CHECK(coincidence_rate(spec, 0.0, du_cos) <= 1e-9 * peak);
  // sinc envelope zeros n = 1, 2, 3
  for (int n = 1; n <= 3; ++n)
    CHECK(coincidence_rate(spec, 0.0, n * du_sinc) <= 1e-9 * peak);
}

TEST_CASE("aperture mapping switch swaps the fringe widths") {
  ExperimentSpec spec = fig2_spec(0.5, 0.4e-3);
  CHECK(spec.sinc_width() == 80e-6);
  CHECK(spec.cos_width() == 0.4e-3);
  spec.mapping = ApertureMapping::kEq5;
  CHECK(spec.sinc_width() == 0.4e-3);
  CHECK(spec.cos_width() == 80e-6);
}

TEST_CASE("scan pattern basics") {
  ExperimentSpec spec = fig2_spec(0.5, 0.4e-3);
  const Pattern p = scan_pattern(spec);
  REQUIRE(p.values.size() == 1001);
  CHECK(*std::max_element(p.values.begin(), p.values.end()) == 1.0);
  for (double v : p.values) CHECK(v >= 0.0);

  // two-point grid
  spec.scan.count = 2;
  const Pattern p2 = scan_pattern(spec);
  CHECK(p2.values.size() == 2);
  CHECK(*std::max_element(p2.values.begin(), p2.values.end()) == 1.0);
}

TEST_CASE("scan pattern symmetry about the center") {
  // The fringe factor is exactly even in u2 - u1; the prefactor carries a
  // small odd component through the position-dependent cascade sums, so the
  // pattern is symmetric only to ~1e-5 at high A.
  for (double A : {0.99, 0.5, 0.2}) {
    const Pattern p = scan_pattern(fig2_spec(A, 0.55e-3));
    const size_t n = p.values.size();
    double asym = 0.0;
    for (size_t i = 0; i < n; ++i)
      asym = std::max(asym, std::abs(p.values[i] - p.values[n - 1 - i]));
    CHECK(asym < 1e-4);
  }
  for (double du : {1e-4, 3.7e-4, 9.9e-4}) {
    const ExperimentSpec spec = fig2_spec(0.5, 0.4e-3);
    CHECK(fringe_factor(spec, du) == fringe_factor(spec, -du));
  }
}

TEST_CASE("fringe count in the central envelope lobe doubles with slit width") {
  auto count_fringes = [](double slit_width) {
    const ExperimentSpec spec = fig2_spec(0.5, slit_width);
    const Pattern p = scan_pattern(spec);
    const double lobe = 810e-9 * 0.2 / (2.0 * 80e-6);
    const auto peaks = local_maxima(p.values, 1e-3);
    int inside = 0;
    for (size_t i : peaks) {
      if (std::abs(p.positions[i]) < lobe) ++inside;
    }
    return inside;
  };
  const int n02 = count_fringes(0.2e-3);
  const int n04 = count_fringes(0.4e-3);
  CHECK(std::abs(n04 - 2 * n02) <= 1);
}

TEST_CASE("fringe peak spacing matches the analytic value on fine grids") {
  for (double bs : {0.2e-3, 0.4e-3, 0.8e-3}) {
    ExperimentSpec spec = fig2_spec(0.76, bs);
    spec.scan.count = 2001;
    const Pattern p = scan_pattern(spec);
    const double step = (spec.scan.u2_max - spec.scan.u2_min) / (spec.scan.count - 1);
    const double lobe = 810e-9 * 0.2 / (2.0 * 80e-6);
    const auto peaks = local_maxima(p.values, 1e-3);
    std::vector<double> spacings;
    for (size_t i = 1; i < peaks.size(); ++i) {
      if (std::abs(p.positions[peaks[i]]) < lobe &&
          std::abs(p.positions[peaks[i - 1]]) < lobe)
        spacings.push_back(p.positions[peaks[i]] - p.positions[peaks[i - 1]]);
    }
    REQUIRE(!spacings.empty());
    std::sort(spacings.begin(), spacings.end());
    const double median = spacings[spacings.size() / 2];
    CHECK(std::abs(median - expected_fringe_peak_spacing(spec)) <= step + 1e-15);
  }
}

TEST_CASE("normalization is idempotent and deterministic") {
  const ExperimentSpec spec = fig2_spec(0.2, 0.6e-3);
  const Pattern a = scan_pattern(spec);
  const Pattern b = scan_pattern(spec);
  REQUIRE(a.values.size() == b.values.size());
  for (size_t i = 0; i < a.values.size(); ++i) CHECK(a.values[i] == b.values[i]);
}

TEST_CASE("visibility definition") {
  Pattern p;
  p.positions = {0, 1, 2};
  p.values = {1.0, 0.0, 1.0};
  CHECK(visibility(p) == doctest::Approx(1.0));

  p.positions = {0, 1, 2, 3, 4};
  p.values = {0.4, 0.8, 0.4, 0.8, 0.4};
  CHECK(visibility(p) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

  p.values = {0.5, 0.5, 0.5, 0.5, 0.5};
  CHECK_THROWS_AS(visibility(p), Error);

  p.positions = {0, 1};
  p.values = {0.1, 0.9};
  CHECK_THROWS_AS(visibility(p), Error);
}

TEST_CASE("visibility of the pure fringe factor is 1") {
  const ExperimentSpec spec = fig2_spec(0.5, 0.4e-3);
  Pattern p;
  const double du_cos = 810e-9 * 0.2 / (4.0 * 0.4e-3);
  for (int i = -8; i <= 8; ++i) {
    const double du = i * du_cos;
    p.positions.push_back(du);
    const double f = fringe_factor(spec, du);
    p.values.push_back(f * f);
  }
  CHECK(visibility(p) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sweep over the four A and four slit widths") {
  std::vector<ExperimentSpec> specs;
  for (double A : {0.99, 0.76, 0.5, 0.2}) {
    for (double bs : {0.2e-3, 0.4e-3, 0.6e-3, 0.8e-3}) specs.push_back(fig2_spec(A, bs));
  }
  const auto rows = sweep(specs);
  REQUIRE(rows.size() == 16);
  for (const auto& r : rows) {
    CHECK(r.vis >= 0.9);
    CHECK(r.wire_width == 80e-6);
  }
  // single spec equals direct evaluation
  const auto one = sweep({specs[5]});
  REQUIRE(one.size() == 1);
  const Pattern direct = scan_pattern(specs[5]);
  CHECK(one[0].vis == visibility(direct));
  for (size_t i = 0; i < direct.values.size(); ++i)
    CHECK(one[0].pattern.values[i] == direct.values[i]);

  // visibility spread across A at fixed apertures
  for (int b = 0; b < 4; ++b) {
    double vmin = 1.0, vmax = 0.0;
    for (int a = 0; a < 4; ++a) {
      vmin = std::min(vmin, rows[a * 4 + b].vis);
      vmax = std::max(vmax, rows[a * 4 + b].vis);
    }
    CHECK(vmax - vmin <= 0.05);
  }
}

TEST_CASE("expected zeros are sorted and inside the window") {
  const ExperimentSpec spec = fig2_spec(0.5, 0.4e-3);
  const auto zeros = expected_pattern_zeros(spec);
  REQUIRE(!zeros.empty());
  CHECK(std::is_sorted(zeros.begin(), zeros.end()));
  for (double z : zeros) {
    CHECK(z >= spec.scan.u2_min);
    CHECK(z <= spec.scan.u2_max);
    const double f = fringe_factor(spec, spec.scan.u1 - z);
    CHECK(std::abs(f) < 1e-9);
  }
}
