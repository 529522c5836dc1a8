#pragma once

namespace latdisc {

/// Bessel function of the first kind J_nu(x) for 0 <= nu <= 4, x >= 0.
/// Power series in extended precision below x = 12; above, the trigonometric
/// closed form for half-integer orders and the Hankel expansion otherwise
/// (summed until its terms stop decreasing). Absolute error ~1e-12 on [0, 1e3].
double bessel_j(double nu, double x);

/// sup_{t > 0} sqrt(t) |J_nu(t)| for nu >= 1/2, rounded up. Beyond the
/// sampled range the bound uses that t (J_nu^2 + Y_nu^2) decreases in t.
double bessel_envelope(double nu);

}  // namespace latdisc
