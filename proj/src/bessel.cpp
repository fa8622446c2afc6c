#include "bpnld/bessel.hpp"

#include <cmath>

#include "bpnld/numeric.hpp"

namespace bpnld {
namespace {

// Hankel asymptotic modulus/phase series for J_nu, mu = 4 nu^2.
// term_n = prod_{j=1..n} (mu - (2j-1)^2) / (n! (8x)^n); P sums even n with
// alternating sign, Q sums odd n.
void hankel_pq(double mu, double x, double* p, double* q) {
  const double inv8x = 1.0 / (8.0 * x);
  double term = 1.0;
  double psum = 1.0;
  double qsum = 0.0;
  int sign_p = -1;
  int sign_q = 1;
  for (int n = 1; n <= 10; ++n) {
    const double odd = 2.0 * n - 1.0;
    term *= (mu - odd * odd) * inv8x / n;
    if (n % 2 == 1) {
      qsum += sign_q * term;
      sign_q = -sign_q;
    } else {
      psum += sign_p * term;
      sign_p = -sign_p;
    }
  }
  *p = psum;
  *q = qsum;
}

double j0_series(double x) {
  const double q = -x * x / 4.0;
  double term = 1.0;
  double sum = 1.0;
  for (int m = 1; m <= 40; ++m) {
    term *= q / (static_cast<double>(m) * m);
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

double j1_series(double x) {
  const double q = -x * x / 4.0;
  double term = x / 2.0;
  double sum = term;
  for (int m = 1; m <= 40; ++m) {
    term *= q / (static_cast<double>(m) * (m + 1.0));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

}  // namespace

double bessel_j0(double x) {
  x = std::abs(x);
  if (x < 8.0) return j0_series(x);
  double p, q;
  hankel_pq(0.0, x, &p, &q);
  const double chi = x - kPi / 4.0;
  return std::sqrt(2.0 / (kPi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

double bessel_j1(double x) {
  const double sign = x < 0.0 ? -1.0 : 1.0;
  x = std::abs(x);
  if (x < 8.0) return sign * j1_series(x);
  double p, q;
  hankel_pq(4.0, x, &p, &q);
  const double chi = x - 3.0 * kPi / 4.0;
  return sign * std::sqrt(2.0 / (kPi * x)) *
         (p * std::cos(chi) - q * std::sin(chi));
}

}  // namespace bpnld
