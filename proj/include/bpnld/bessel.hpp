#pragma once

namespace bpnld {

// Bessel functions of the first kind, self-contained: ascending power series
// below |x| = 8, Hankel asymptotic expansion beyond. Absolute accuracy is
// better than 1e-10 on [0, 30].
double bessel_j0(double x);
double bessel_j1(double x);

}  // namespace bpnld
