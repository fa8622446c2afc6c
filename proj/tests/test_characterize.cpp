#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "bpnld/bessel.hpp"
#include "bpnld/characterize.hpp"
#include "bpnld/errors.hpp"
#include "bpnld/rng.hpp"

using namespace bpnld;

namespace {

// Independent oracle: 30-term ascending power series for J1, kept separate
// from the implementation on purpose.
double j1_series_oracle(double x) {
  double term = x / 2.0;
  double sum = term;
  for (int m = 1; m <= 30; ++m) {
    term *= -(x * x / 4.0) / (m * (m + 1.0));
    sum += term;
  }
  return sum;
}

CharacterizationSetup paper_setup() {
  CharacterizationSetup s;
  s.focal_length = 0.2;
  s.d12 = {0.25e-3, 0.5e-3, 0.75e-3, 1e-3};
  s.slit_width = 0.15e-3;
  s.wavelength_pump = 405e-9;
  return s;
}

std::vector<VisibilityMeasurement> synthetic_measurements(
    const CharacterizationSetup& setup, double a_s, double noise_sd, uint64_t seed) {
  Rng rng(seed);
  std::vector<VisibilityMeasurement> out;
  for (double d : setup.d12) {
    VisibilityMeasurement m;
    m.d12 = d;
    m.visibility =
        bessel_visibility(nu_parameter(setup.pump_wavenumber(), d, a_s,
                                       setup.focal_length));
    if (noise_sd > 0.0) {
      // Box-Muller
      const double u1 = std::max(rng.uniform(), 1e-12);
      const double u2 = rng.uniform();
      m.visibility += noise_sd * std::sqrt(-2.0 * std::log(u1)) *
                      std::cos(kTwoPi * u2);
      m.visibility = std::clamp(m.visibility, 0.0, 1.0);
    }
    out.push_back(m);
  }
  return out;
}

}  // namespace

TEST_CASE("J1 matches the independent series on [0, 12]") {
  double max_err = 0.0;
  for (int i = 0; i <= 1200; ++i) {
    const double x = i * 0.01;
    max_err = std::max(max_err, std::abs(bessel_j1(x) - j1_series_oracle(x)));
  }
  CHECK(max_err <= 1e-10);
}

TEST_CASE("J1 zeros by bracketing the implementation") {
  const double known[] = {3.8317059702075123, 7.0155866698156188,
                          10.1734681350627247};
  for (double z : known) {
    double lo = z - 0.5, hi = z + 0.5;
    REQUIRE(bessel_j1(lo) * bessel_j1(hi) < 0.0);
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (bessel_j1(lo) * bessel_j1(mid) <= 0.0) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    CHECK(0.5 * (lo + hi) == doctest::Approx(z).epsilon(1e-3));
  }
}

TEST_CASE("bessel visibility values") {
  CHECK(bessel_visibility(0.0) == 1.0);
  CHECK(bessel_visibility(3.8317) <= 1e-4);
  CHECK(bessel_visibility(3.8785) == doctest::Approx(0.009656).epsilon(2e-3));
  for (int i = 0; i <= 500; ++i) {
    const double nu = i * 0.1;
    CHECK(bessel_visibility(nu) <= 1.0 + 1e-15);
  }
  CHECK_THROWS(bessel_visibility(-1.0));
}

TEST_CASE("nu parameter") {
  const double kp = kTwoPi / 405e-9;
  CHECK(nu_parameter(kp, 0.5e-3, 1e-4, 0.2) ==
        doctest::Approx(3.8785).epsilon(1e-4));
  CHECK(nu_parameter(kp, 0.0, 1e-4, 0.2) == 0.0);
  CHECK(nu_parameter(kp, 1.0e-3, 1e-4, 0.2) ==
        doctest::Approx(2.0 * nu_parameter(kp, 0.5e-3, 1e-4, 0.2)).epsilon(1e-14));
}

TEST_CASE("transverse coherence length") {
  const double kp = kTwoPi / 405e-9;
  const double lc = transverse_coherence_length(0.2, kp, 1e-4);
  CHECK(lc == doctest::Approx(0.494e-3).epsilon(1e-3));
  CHECK(transverse_coherence_length(0.2, kp, 2e-4) ==
        doctest::Approx(lc / 2.0).epsilon(1e-14));
  CHECK(lc * kp * 1e-4 / 0.2 == doctest::Approx(3.832).epsilon(1e-12));
}

TEST_CASE("spot size fit recovers noise-free data") {
  const CharacterizationSetup setup = paper_setup();
  for (double a_true : {3e-5, 8e-5, 1e-4, 2e-4}) {
    const auto meas = synthetic_measurements(setup, a_true, 0.0, 0);
    const SpotFit fit = fit_spot_size(meas, setup);
    CHECK(fit.a_s == doctest::Approx(a_true).epsilon(1e-3));
    CHECK(fit.residual <= 1e-12);
  }
}

TEST_CASE("spot size fit tolerates 1% noise") {
  const CharacterizationSetup setup = paper_setup();
  const double a_true = 1e-4;
  const auto meas = synthetic_measurements(setup, a_true, 0.01, 42);
  const SpotFit fit = fit_spot_size(meas, setup);
  CHECK(std::abs(fit.a_s - a_true) / a_true <= 0.05);
}

TEST_CASE("spot size fit failure modes") {
  const CharacterizationSetup setup = paper_setup();
  CHECK_THROWS_AS(fit_spot_size({{0.5e-3, 0.8, {}}}, setup), FitFailed);
  // visibilities still ~1 at every separation: the objective decreases
  // toward a vanishing spot and the scan minimum sits on the bracket edge
  std::vector<VisibilityMeasurement> flat;
  for (double d : setup.d12) flat.push_back({d, 1.0, {}});
  CHECK_THROWS_AS(fit_spot_size(flat, setup), FitFailed);
}

TEST_CASE("coherence curve is monotone and annotated") {
  const CharacterizationSetup setup = paper_setup();
  const std::vector<double> spots = {30e-6, 5e-6, 80e-6, 12e-6};
  const auto rows = coherence_curve(spots, 2.3e-3, setup);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].original_index == 1);
  CHECK(rows[1].original_index == 3);
  CHECK(rows[2].original_index == 0);
  CHECK(rows[3].original_index == 2);
  for (size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i].a_s > rows[i - 1].a_s);
    CHECK(rows[i].lc < rows[i - 1].lc);
    CHECK(rows[i].A < rows[i - 1].A);
  }
  CHECK_THROWS(coherence_curve({}, 2.3e-3, setup));
}

TEST_CASE("spot sizes reaching the reported coherence range") {
  // spots chosen so A spans {0.76, 0.5, 0.2} at w0 = 2.3 mm
  const CharacterizationSetup setup = paper_setup();
  const double kp = setup.pump_wavenumber();
  const double targets_A[] = {0.76, 0.5, 0.2};
  const double targets_lc[] = {5.3791e-3, 2.6558e-3, 0.93897e-3};
  std::vector<double> spots;
  for (double A : targets_A)
    spots.push_back(3.832 * setup.focal_length /
                    (kp * coherence_length_for_A(2.3e-3, A)));
  const auto rows = coherence_curve(spots, 2.3e-3, setup);
  for (size_t i = 0; i < rows.size(); ++i) {
    // rows are sorted by spot size ascending = A descending
    CHECK(rows[i].lc == doctest::Approx(targets_lc[i]).epsilon(1e-4));
    CHECK(rows[i].A == doctest::Approx(targets_A[i]).epsilon(1e-9));
  }
}
