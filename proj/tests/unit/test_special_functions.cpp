#include <doctest.h>

#include <cmath>

#include <boost/math/special_functions/zeta.hpp>

#include <condensate/error.hpp>
#include <condensate/special_functions.hpp>
#include <condensate/thermo.hpp>

using namespace condensate;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("zeta against boost and frozen values") {
  for (double s : {0.5, -0.5, -1.5, -3.5, -7.5, -15.5, 2.0, 3.5, 0.1, 0.9, 1.1, -30.5})
    CHECK(rel(riemann_zeta(s), boost::math::zeta(s)) < 1e-12);
  // mpmath, 30 digits
  CHECK(rel(riemann_zeta(0.5), -1.46035450880958681289) < 1e-14);
  CHECK(rel(riemann_zeta(-0.5), -0.207886224977354566017) < 1e-14);
  CHECK(rel(riemann_zeta(-7.5), 0.00326903957260022002172) < 1e-13);
  CHECK_THROWS_AS(riemann_zeta(1.0), DomainError);
}

TEST_CASE("Li_1/2 on both branches") {
  // mpmath polylog(0.5, e^w)
  const std::pair<double, double> table[] = {
      {-0.001, 54.5897655286506567034},  {-0.5, 1.14686610041998642091},
      {-0.99, 0.513167983605706839312},  {-1.01, 0.499022060345756555175},
      {-3.0, 0.0516142769525407434159},  {-20.0, 2.06115362544259793582e-9},
  };
  for (auto [w, want] : table) CHECK(rel(polylog_half_exp(w), want) < 1e-13);
  // continuity across the switch at w = -1
  CHECK(rel(polylog_half_exp(-1.0 + 1e-12), polylog_half_exp(-1.0 - 1e-12)) < 1e-11);
  CHECK(polylog_half(0.0) == 0.0);
  CHECK(rel(polylog_half(0.25), 0.305734930399296380174) < 1e-13);  // mpmath
  CHECK_THROWS_AS(polylog_half_exp(0.0), DomainError);
  CHECK_THROWS_AS(polylog_half(1.0), DomainError);
}

TEST_CASE("rho_exc frozen values") {
  // mpmath quadrature of the defining integral, summed over 30 ladders
  struct Row { double beta, mu, d, want; };
  const Row rows[] = {
      {1.0, 0.0, 1.0, 1.06728549390872406060e-9},
      {1.0, 19.0, 1.0, 0.298161050074783780734},
      {0.5, -3.0, 2.0, 0.0108275055367780125872},
      {2.0, 4.9, 2.0, 1.48729109392866439146},
  };
  for (const auto& r : rows) {
    CHECK(rel(rho_exc(r.beta, r.mu, r.d, RhoExcMethod::series), r.want) < 1e-10);
    CHECK(rel(rho_exc(r.beta, r.mu, r.d, RhoExcMethod::quadrature), r.want) < 1e-9);
  }
}

TEST_CASE("rho_exc limits, monotonicity and errors") {
  const double e0 = bulk_threshold(1.0);
  CHECK(rho_exc(1.0, -1e4, 1.0) == 0.0);
  CHECK(rho_exc(1.0, -200.0, 1.0) < 1e-90);
  CHECK(std::isinf(rho_exc(1.0, e0, 1.0)));
  CHECK_THROWS_AS(rho_exc(1.0, e0 * (1 + 1e-12), 1.0), DomainError);
  CHECK_THROWS_AS(rho_exc(0.0, 0.0, 1.0), DomainError);

  double prev = 0.0;
  for (double gap : {30.0, 10.0, 1.0, 0.1, 1e-3, 1e-6}) {
    const double v = rho_exc(1.0, e0 - gap, 1.0);
    CHECK(v > prev);
    prev = v;
  }
  prev = 1e300;
  for (double beta : {0.2, 0.5, 1.0, 2.0, 5.0}) {
    const double v = rho_exc(beta, 0.5 * e0, 1.0);
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("n = 2 ladder is suppressed at large beta") {
  const double d = 1.0, e0 = bulk_threshold(d);
  for (double beta : {1.0, 2.0, 4.0}) {
    const double mu = e0 - 1.0;
    const double t1 = polylog_half_exp(-beta * (e0 - mu));
    const double t2 = polylog_half_exp(-beta * (4.0 * e0 - mu));
    CHECK(t2 / t1 < 2.0 * std::exp(-beta * 6.0 * kPi * kPi / (d * d)));
  }
}
