#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

namespace bpnld {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// sin(x)/x with the removable singularity filled in.
inline double sinc(double x) {
  if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

// Neumaier-compensated accumulator; summation result is insensitive to
// reduction order well below the 1e-13 relative contract.
template <typename T>
class CompensatedSum {
 public:
  void add(T v) {
    T t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  T value() const { return sum_ + comp_; }

 private:
  T sum_{};
  T comp_{};
};

class CompensatedComplexSum {
 public:
  void add(Complex v) {
    re_.add(v.real());
    im_.add(v.imag());
  }
  Complex value() const { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum<double> re_;
  CompensatedSum<double> im_;
};

// 16-point Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendre16 {
  static constexpr std::array<double, 16> nodes = {
      -0.9894009349916499325962, -0.9445750230732325760780,
      -0.8656312023878317438805, -0.7554044083550030338951,
      -0.6178762444026437484467, -0.4580167776572273863424,
      -0.2816035507792589132305, -0.0950125098376374401853,
      0.0950125098376374401853,  0.2816035507792589132305,
      0.4580167776572273863424,  0.6178762444026437484467,
      0.7554044083550030338951,  0.8656312023878317438805,
      0.9445750230732325760780,  0.9894009349916499325962};
  static constexpr std::array<double, 16> weights = {
      0.0271524594117540948518, 0.0622535239386478928628,
      0.0951585116824927848099, 0.1246289712555338720525,
      0.1495959888165767320815, 0.1691565193950025381893,
      0.1826034150449235888667, 0.1894506104550684962854,
      0.1894506104550684962854, 0.1826034150449235888667,
      0.1691565193950025381893, 0.1495959888165767320815,
      0.1246289712555338720525, 0.0951585116824927848099,
      0.0622535239386478928628, 0.0271524594117540948518};
};

// Composite 16-point panels over [a, b]; calls f(x, w) per node.
template <typename F>
void gauss_legendre_panels(double a, double b, int panels, F&& f) {
  const double step = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * step;
    const double mid = lo + 0.5 * step;
    const double half = 0.5 * step;
    for (int i = 0; i < 16; ++i) {
      f(mid + half * GaussLegendre16::nodes[i],
        half * GaussLegendre16::weights[i]);
    }
  }
}

inline std::vector<double> uniform_grid(double extent, int points) {
  std::vector<double> g(points);
  const double step = 2.0 * extent / (points - 1);
  for (int i = 0; i < points; ++i) g[i] = -extent + i * step;
  return g;
}

}  // namespace bpnld
