#pragma once

namespace condensate {

/// Riemann zeta for real s != 1 (Euler-Maclaurin; reflection for s < 0).
double riemann_zeta(double s);

/// Li_{1/2}(e^w) for w < 0. Taking the exponent rather than z keeps full
/// relative accuracy as z -> 1, where the function blows up like
/// sqrt(pi / -w).
double polylog_half_exp(double w);

/// Li_{1/2}(z) for 0 <= z < 1.
double polylog_half(double z);

}  // namespace condensate
