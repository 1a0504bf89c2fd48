#include "condensate/special_functions.hpp"

#include <array>
#include <cmath>
#include <limits>

#include "condensate/bulk_spectrum.hpp"
#include "condensate/error.hpp"

namespace condensate {

namespace {

// B_{2j} / (2j)!, j = 1..12.
constexpr std::array<double, 12> kBernoulliOverFactorial = {
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
    1.0 / 74724249600.0,
    -3617.0 / 10670622842880000.0,
    43867.0 / 5109094217170944000.0,
    -174611.0 / 802857662698291200000.0,
    77683.0 / 14101100039391805440000.0,
    -236364091.0 / 1693824136731743669452800000.0,
};

double zeta_euler_maclaurin(double s) {
  constexpr int kTerms = 24;
  const double n = kTerms;
  double sum = 0.0;
  for (int k = kTerms - 1; k >= 1; --k) sum += std::pow(static_cast<double>(k), -s);
  sum += std::pow(n, 1.0 - s) / (s - 1.0);
  sum += 0.5 * std::pow(n, -s);
  // Rising factorial s (s+1) ... (s+2j-2) times N^{-s-2j+1}.
  double rising = s;
  double power = std::pow(n, -s - 1.0);
  for (std::size_t j = 0; j < kBernoulliOverFactorial.size(); ++j) {
    const double term = kBernoulliOverFactorial[j] * rising * power;
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    rising *= (s + 2.0 * j + 1.0) * (s + 2.0 * j + 2.0);
    power /= n * n;
  }
  return sum;
}

// zeta(1/2 - k) / k!, via the reflection formula
// zeta(s) = 2^s pi^{s-1} sin(pi s / 2) Gamma(1 - s) zeta(1 - s).
double reflected_coefficient(int k) {
  if (k == 0) return zeta_euler_maclaurin(0.5);
  const double s = 0.5 - k;
  const double log_mag = s * std::log(2.0) + (s - 1.0) * std::log(kPi) +
                         std::lgamma(1.0 - s) - std::lgamma(k + 1.0);
  return std::exp(log_mag) * std::sin(0.5 * kPi * s) * zeta_euler_maclaurin(1.0 - s);
}

struct HalfCoefficients {
  std::array<double, 40> c{};
  HalfCoefficients() {
    for (int k = 0; k < static_cast<int>(c.size()); ++k) c[k] = reflected_coefficient(k);
  }
};

const HalfCoefficients& half_coefficients() {
  static const HalfCoefficients table;
  return table;
}

}  // namespace

double riemann_zeta(double s) {
  if (s == 1.0) throw DomainError("riemann_zeta: pole at s = 1");
  if (s >= 0.0) return zeta_euler_maclaurin(s);
  const double one_minus = 1.0 - s;
  return std::pow(2.0, s) * std::pow(kPi, s - 1.0) * std::sin(0.5 * kPi * s) *
         std::tgamma(one_minus) * zeta_euler_maclaurin(one_minus);
}

double polylog_half_exp(double w) {
  if (!(w < 0.0)) throw DomainError("polylog_half_exp: need w < 0");
  if (w < -1.0) {
    // Direct series sum_k z^k / sqrt(k); z <= 1/e, so 40 terms reach 1e-17.
    const double z = std::exp(w);
    double sum = 0.0, zk = z;
    for (int k = 1; k < 200; ++k) {
      const double term = zk / std::sqrt(static_cast<double>(k));
      sum += term;
      if (term < 1e-17 * sum) break;
      zk *= z;
    }
    return sum;
  }
  // Li_s(e^w) = Gamma(1-s) (-w)^{s-1} + sum_k zeta(s-k) w^k / k!, |w| < 2 pi.
  const auto& c = half_coefficients().c;
  double series = 0.0, wk = 1.0;
  for (std::size_t k = 0; k < c.size(); ++k) {
    const double term = c[k] * wk;
    series += term;
    if (k > 2 && std::abs(term) < 1e-18) break;
    wk *= w;
  }
  return std::sqrt(kPi / -w) + series;
}

double polylog_half(double z) {
  if (!(z >= 0.0) || !(z < 1.0)) throw DomainError("polylog_half: need 0 <= z < 1");
  if (z == 0.0) return 0.0;
  return polylog_half_exp(std::log(z));
}

}  // namespace condensate
