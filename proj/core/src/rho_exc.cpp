#include <cmath>
#include <limits>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "condensate/bulk_spectrum.hpp"
#include "condensate/error.hpp"
#include "condensate/special_functions.hpp"
#include "condensate/thermo.hpp"

namespace condensate {

namespace {

constexpr double kTermRel = 1e-16;
constexpr int kMaxLadder = 100000;

// Li_{1/2}(e^{beta (mu - eps_n)}) / sqrt(2 pi beta) for one ladder n.
double series_term(double beta, double gap) {
  return polylog_half_exp(-beta * gap) / std::sqrt(2.0 * kPi * beta);
}

// (sqrt 2 / pi) int_0^inf dx / expm1(beta (x^2 + gap)).
double quadrature_term(double beta, double gap) {
  using boost::math::quadrature::gauss_kronrod;
  const double peak = 1.0 / std::expm1(beta * gap);
  auto f = [&](double x) { return 1.0 / std::expm1(beta * (x * x + gap)); };

  // Past x_tail the integrand sits below 1e-16 of its peak.
  const double x_tail = std::sqrt((40.0 + std::max(0.0, std::log(peak))) / beta);

  // Near the pole the integrand is a Lorentzian of width sqrt(gap); split
  // geometrically from that scale so every panel is well resolved.
  std::vector<double> cuts{0.0};
  double w = std::sqrt(gap);
  if (w < x_tail) {
    while (w < x_tail) {
      cuts.push_back(w);
      w *= 4.0;
    }
  }
  cuts.push_back(x_tail);

  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    total += gauss_kronrod<double, 31>::integrate(f, cuts[i], cuts[i + 1], 15, 1e-12);
  }
  return std::sqrt(2.0) / kPi * total;
}

}  // namespace

double rho_exc(double beta, double mu, double d, RhoExcMethod method) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("rho_exc: beta must be positive");
  if (!(d > 0.0) || !std::isfinite(d)) throw DomainError("rho_exc: d must be positive");
  if (std::isnan(mu)) throw DomainError("rho_exc: mu is NaN");
  const double e0 = bulk_threshold(d);
  if (mu > e0) throw DomainError("rho_exc: mu above the bulk threshold 2 pi^2 / d^2");
  if (mu == e0) return std::numeric_limits<double>::infinity();
  if (mu == -std::numeric_limits<double>::infinity()) return 0.0;

  double sum = 0.0;
  for (int n = 1; n <= kMaxLadder; ++n) {
    const double level = e0 * static_cast<double>(n) * n;
    // n = 1 keeps the gap exact in the form e0 - mu.
    const double gap = n == 1 ? e0 - mu : level - mu;
    const double term = method == RhoExcMethod::series ? series_term(beta, gap)
                                                       : quadrature_term(beta, gap);
    sum += term;
    if (term <= kTermRel * sum || term == 0.0) break;
  }
  return sum;
}

}  // namespace condensate
