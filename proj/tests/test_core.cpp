#include <doctest.h>

#include <cmath>
#include <limits>

#include "bpnld/core.hpp"
#include "bpnld/errors.hpp"

using namespace bpnld;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("effective spectral width") {
  CHECK(effective_spectral_width(PumpSpec(405e-9, 2.3e-3, kInf)) ==
        doctest::Approx(4.6e-3).epsilon(1e-14));
  // 1/(1/lc^2 + 1/(4 w0^2)) at lc = w0 = 2.3 mm, evaluated by hand.
  CHECK(effective_spectral_width(PumpSpec(405e-9, 2.3e-3, 2.3e-3)) ==
        doctest::Approx(2.0571825392998065e-3).epsilon(1e-12));
  // lc -> 0 limit: delta/lc -> 1.
  const PumpSpec tiny(405e-9, 2.3e-3, 2.3e-9);
  CHECK(effective_spectral_width(tiny) / tiny.lc == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("degree of coherence") {
  CHECK(degree_of_coherence(PumpSpec(405e-9, 1.7e-3, kInf)) == 1.0);
  CHECK(degree_of_coherence(PumpSpec(405e-9, 2.3e-3, 2.3e-3)) ==
        doctest::Approx(1.0 / std::sqrt(5.0)).epsilon(1e-13));
  // inverse-then-forward identity
  const double lc = coherence_length_for_A(2.3e-3, 0.5);
  CHECK(degree_of_coherence(PumpSpec(405e-9, 2.3e-3, lc)) ==
        doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("coherence length for A") {
  // 2 * 2.3mm * 0.5 / sqrt(0.75)
  CHECK(coherence_length_for_A(2.3e-3, 0.5) ==
        doctest::Approx(2.6558112382722788e-3).epsilon(1e-12));
  const double lc99 = coherence_length_for_A(2.3e-3, 0.99);
  CHECK(lc99 == doctest::Approx(32.28e-3).epsilon(1e-3));
  CHECK(degree_of_coherence(PumpSpec(405e-9, 2.3e-3, lc99)) ==
        doctest::Approx(0.99).epsilon(1e-12));
  CHECK_THROWS_AS(coherence_length_for_A(2.3e-3, 1.0), Error);
  CHECK_THROWS(coherence_length_for_A(2.3e-3, 0.0));
}

TEST_CASE("momentum correlation width") {
  CHECK(momentum_correlation_width(PumpSpec(405e-9, 2.3e-3, kInf)) ==
        doctest::Approx(434.78260869565217).epsilon(1e-12));
  CHECK(momentum_correlation_width(PumpSpec(405e-9, 2.3e-3, 2.3e-3)) ==
        doctest::Approx(std::sqrt(2.0) / 2.3e-3).epsilon(1e-12));
  const double wk1 = momentum_correlation_width(PumpSpec(405e-9, 2.3e-3, 1.0e-3));
  const double wk2 = momentum_correlation_width(PumpSpec(405e-9, 2.3e-3, 0.5e-3));
  CHECK(wk2 > wk1);
}

TEST_CASE("coherence algebra invariants over lc/w0 in [0.1, 100]") {
  const double w0 = 2.3e-3;
  double prev_wk = kInf;
  for (int i = 0; i <= 30; ++i) {
    const double ratio = 0.1 * std::pow(1000.0, i / 30.0);
    const PumpSpec pump(405e-9, w0, ratio * w0);
    const double A = degree_of_coherence(pump);
    // A reproduces delta
    CHECK(2.0 * w0 * A ==
          doctest::Approx(effective_spectral_width(pump)).epsilon(1e-14));
    // round trip lc -> A -> lc
    CHECK(coherence_length_for_A(w0, A) ==
          doctest::Approx(pump.lc).epsilon(1e-12));
    // w_k decreasing in lc
    const double wk = momentum_correlation_width(pump);
    CHECK(wk < prev_wk);
    prev_wk = wk;
  }
  // lc -> inf limit of w_k
  CHECK(momentum_correlation_width(PumpSpec(405e-9, w0, 1e3 * w0)) ==
        doctest::Approx(1.0 / w0).epsilon(1e-6));
}

TEST_CASE("aperture transmissions") {
  const ApertureSpec slit = ApertureSpec::slit(0.55e-3);
  const ApertureSpec wire = ApertureSpec::wire(80e-6);
  const ApertureSpec open = ApertureSpec::open();
  CHECK(aperture_transmission(slit, 0.0) == 1.0);
  CHECK(aperture_transmission(slit, 0.3e-3) == 0.0);
  CHECK(aperture_transmission(wire, 0.0) == 0.0);
  CHECK(aperture_transmission(wire, 1e-3) == 1.0);
  CHECK(aperture_transmission(open, 123.0) == 1.0);
  // boundary convention: the rect edge transmits
  CHECK(aperture_transmission(slit, 0.275e-3) == 1.0);
  CHECK(aperture_transmission(wire, 40e-6) == 0.0);

  // Babinet complement at every probe including edges
  const ApertureSpec s2 = ApertureSpec::slit(0.2e-3);
  const ApertureSpec w2 = ApertureSpec::wire(0.2e-3);
  for (int i = -40; i <= 40; ++i) {
    const double v = i * 12.5e-6;
    CHECK(aperture_transmission(s2, v) + aperture_transmission(w2, v) == 1.0);
  }
}

TEST_CASE("custom aperture") {
  const ApertureSpec ap =
      ApertureSpec::custom({-1e-3, 0.0, 1e-3}, {0.0, 1.0, 0.5});
  CHECK(ap.transmission(-2e-3) == 0.0);
  CHECK(ap.transmission(2e-3) == 0.0);
  CHECK(ap.transmission(0.0) == 1.0);
  CHECK(ap.transmission(-0.5e-3) == doctest::Approx(0.5));
  CHECK(ap.transmission(0.5e-3) == doctest::Approx(0.75));
  CHECK_THROWS(ApertureSpec::custom({0.0, 1e-3}, {0.5, 1.5}));
  CHECK_THROWS(ApertureSpec::custom({1e-3, 0.0}, {0.5, 0.5}));
}

TEST_CASE("spec validation") {
  CHECK_THROWS(PumpSpec(405e-9, -1e-3, kInf));
  CHECK_THROWS(PumpSpec(-405e-9, 1e-3, 1e-3));
  CHECK_THROWS(PumpSpec(405e-9, 1e-3, 0.0));
  CHECK_THROWS(LayoutSpec(810e-9, 0.0, 0.2, 0.1));
  CHECK_THROWS(PolarizationAngles(-0.1, 0.2));
  CHECK_THROWS(ApertureSpec::slit(0.0));
}
