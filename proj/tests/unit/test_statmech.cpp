#include <doctest.h>

#include <cmath>
#include <random>

#include <condensate/error.hpp>
#include <condensate/graph_spectrum.hpp>
#include <condensate/statmech.hpp>

using namespace condensate;

namespace {

FiniteSystem toy(std::vector<double> bulk, std::vector<double> surface, double L = 4.0) {
  FiniteSystem s;
  s.wire = {1.0, L};
  s.bulk.eigenvalues = std::move(bulk);
  s.bulk.cutoff_energy = 1e6;  // tail bound negligible for toys
  s.surface_levels = std::move(surface);
  return s;
}

PhysicalParams params(double beta, double alpha, double lambda, double rho) {
  PhysicalParams p;
  p.beta = beta;
  p.alpha = alpha;
  p.lambda = lambda;
  p.rho = rho;
  return p;
}

double bose(double gap, double beta) { return 1.0 / (std::exp(beta * gap) - 1.0); }

// Scalar bisection oracle for rho = mean_j bose(l_j - alpha + lambda rho - mu).
double oracle_rho_s(const std::vector<double>& l, double mu, double alpha, double lambda,
                    double beta) {
  const double lmin = *std::min_element(l.begin(), l.end());
  double lo = std::max(0.0, (mu + alpha - lmin) / lambda), hi = lo + 1.0;
  auto f = [&](double r) {
    double s = 0.0;
    for (double x : l) s += bose(x - alpha + lambda * r - mu, beta);
    return r - s / l.size();
  };
  while (f(hi) < 0.0) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("occupation examples") {
  CHECK(occupation(std::log(2.0), 0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  const double tail = occupation(50.0, 0.0, 1.0);
  CHECK(tail < 2e-22);
  CHECK(tail == doctest::Approx(std::exp(-50.0)).epsilon(1e-12));
  CHECK(occupation(1.0, 0.0, 2.0) == doctest::Approx(0.156517642749665651818).epsilon(1e-14));
  CHECK_THROWS_AS(occupation(1.0, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(occupation(1.0, 2.0, 1.0), DomainError);
  CHECK(occupation(2.0, 0.0, 1.0) < occupation(1.0, 0.0, 1.0));
  CHECK(occupation(2.0, 0.5, 1.0) > occupation(2.0, 0.0, 1.0));
}

TEST_CASE("surface fixed point") {
  const std::vector<double> one{0.0};
  SurfaceState s = surface_fixed_point(one, -1.0, params(1.0, 0.0, 1.0, 1.0));
  CHECK(s.rho_s == doctest::Approx(0.349976485401125442627).epsilon(1e-12));
  CHECK(std::abs(s.rho_s - oracle_rho_s(one, -1.0, 0.0, 1.0, 1.0)) < 1e-10);
  CHECK(s.residual <= 1e-12);

  s = surface_fixed_point(one, -2.0, params(1.0, 1.0, 0.0, 1.0));
  CHECK(s.rho_s == doctest::Approx(0.581976706869326424385).epsilon(1e-14));

  CHECK_THROWS_AS(surface_fixed_point(one, -1.0, params(1.0, 1.0, 0.0, 1.0)), DomainError);

  double prev = 1e300;
  for (double mu : {0.0, -5.0, -20.0, -80.0, -700.0}) {
    const double r = surface_fixed_point(one, mu, params(1.0, 0.0, 1.0, 1.0)).rho_s;
    CHECK(r < prev);
    prev = r;
  }
  CHECK(prev < 1e-300);
}

TEST_CASE("interacting fixed point against the scalar oracle") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  for (int t = 0; t < 60; ++t) {
    const auto lat = DefectLattice::build(1 + t % 9, WeightSpec::random(0.1, 3.0, 100 + t));
    const auto eig = graph_spectrum(lat);
    const double alpha = u(rng), lambda = u(rng), beta = u(rng);
    // mu both below and well above lambda_min - alpha; the fixed point exists for every mu.
    for (double mu : {-3.0, 0.0, 4.0, 25.0}) {
      const auto s = surface_fixed_point(eig, mu, params(beta, alpha, lambda, 1.0));
      CHECK(std::abs(s.rho_s - oracle_rho_s(eig, mu, alpha, lambda, beta)) <=
            1e-9 * std::max(1.0, s.rho_s));
      const double ulp = std::nextafter(s.rho_s, 1e300) - s.rho_s;
      CHECK(s.residual <= std::max(1e-12, 8.0 * ulp));
      CHECK(mu < lambda * s.rho_s - alpha);
    }
  }
}

TEST_CASE("two-term density by hand") {
  // lambda = 0, one defect at 0, one bulk level at 3, alpha = 1, L = 4
  const FiniteSystem sys = toy({3.0}, {0.0});
  const PhysicalParams p = params(1.5, 1.0, 0.0, 1.0);
  for (double mu : {-1.2, -2.0, -7.0}) {
    const double want = (bose(-1.0 - mu, 1.5) + bose(3.0 - mu, 1.5)) / 4.0;
    CHECK(total_density(mu, sys, p) == doctest::Approx(want).epsilon(1e-14));
  }
  CHECK_THROWS_AS(total_density(-1.0, sys, p), DomainError);
  CHECK(mu_upper_bound(sys, p) == -1.0);
}

TEST_CASE("density is increasing in mu and diverges at the pole") {
  const FiniteSystem sys = toy({2.0, 2.5, 4.0}, {0.0, 1.0, 3.0});
  const PhysicalParams p = params(1.0, 0.5, 2.0, 1.0);
  double prev = 0.0;
  for (double mu : {-200.0, -20.0, -2.0, 0.0, 1.0, 1.9, 1.999, 2.0 - 1e-9}) {
    const double d = total_density(mu, sys, p);
    CHECK(d > prev);
    prev = d;
  }
  CHECK(prev > 1e7);
  CHECK(total_density(-700.0, sys, p) < 1e-300);
}

TEST_CASE("solve_mu round trip and constraints") {
  const FiniteSystem sys = toy({2.0, 2.5, 4.0, 6.0}, {0.0, 1.0, 3.0});
  for (double lambda : {0.0, 0.3, 3.0}) {
    for (double alpha : {0.0, 1.0}) {
      const PhysicalParams p = params(1.3, alpha, lambda, 1.0);
      const double top = mu_upper_bound(sys, p);
      for (double mu_star : {top - 5.0, top - 0.5, top - 1e-4}) {
        const double rho = total_density(mu_star, sys, p);
        const auto s = solve_mu(rho, sys, p);
        CHECK(std::abs(s.mu - mu_star) < 1e-9);
        CHECK(std::abs(s.density_residual) <= 1e-10 * std::max(1.0, rho));
        CHECK(s.fixed_point_residual <= 1e-12);
        CHECK(s.mu < 2.0);
        if (lambda == 0.0)
          CHECK(s.mu < -alpha);
        else
          CHECK(s.mu < lambda * s.rho_s - alpha);
        double sum = s.surface_density;
        for (double n : s.bulk_occupations) {
          CHECK(n >= 0.0);
          sum += n / sys.length();
        }
        CHECK(std::abs(sum - rho) <= 1e-9 * std::max(1.0, rho));
      }
    }
  }
}

TEST_CASE("tiny density pushes mu far down") {
  const FiniteSystem sys = toy({2.0, 2.5}, {0.0, 1.0});
  const auto s = solve_mu(1e-8, sys, params(1.0, 1.0, 0.0, 1.0));
  CHECK(s.mu < -15.0);
  for (double n : s.surface_occupations) CHECK(n <= 1e-8 * sys.length());
  for (double n : s.bulk_occupations) CHECK(n <= 1e-8 * sys.length());
}

TEST_CASE("brute-force grid scan reproduces the solver") {
  // Scan (mu, rho_s) on a grid; the cell where both equations change sign
  // must contain the solver's answer.
  const FiniteSystem sys = toy({2.0, 2.2, 2.9, 3.5, 5.0}, {0.0, 0.7, 2.1}, 3.0);
  const PhysicalParams p = params(1.0, 0.4, 1.5, 2.0);
  const auto s = solve_mu(p.rho, sys, p);

  const int N = 400;
  const double mu_lo = -4.0, mu_hi = 2.0 - 1e-6, r_lo = 0.0, r_hi = 4.0;
  const double dmu = (mu_hi - mu_lo) / N, dr = (r_hi - r_lo) / N;
  double best = 1e300, best_mu = 0.0, best_r = 0.0;
  for (int i = 0; i <= N; ++i) {
    const double mu = mu_lo + i * dmu;
    for (int j = 0; j <= N; ++j) {
      const double r = r_lo + j * dr;
      bool ok = true;
      double surf = 0.0;
      for (double l : sys.surface_levels) {
        const double g = l - p.alpha + p.lambda * r - mu;
        if (g <= 0.0) { ok = false; break; }
        surf += bose(g, p.beta);
      }
      if (!ok) continue;
      double bulk = 0.0;
      for (double e : sys.bulk.eigenvalues) bulk += bose(e - mu, p.beta);
      const double f1 = r - surf / 3.0;
      const double f2 = (surf + bulk) / sys.length() - p.rho;
      const double score = std::abs(f1) + std::abs(f2);
      if (score < best) best = score, best_mu = mu, best_r = r;
    }
  }
  CHECK(std::abs(best_mu - s.mu) <= 2.0 * dmu);
  CHECK(std::abs(best_r - s.rho_s) <= 2.0 * dr);
}

TEST_CASE("macroscopic diagnostics partition rho") {
  const FiniteSystem sys = toy({2.0, 2.5, 4.0}, {0.0, 1.0});
  const auto s = solve_mu(1.5, sys, params(1.0, 0.2, 0.7, 1.5));
  const auto d = macroscopic_occupation_diagnostics(s, sys.length());
  CHECK(d.has_first_excited);
  CHECK(d.has_surface);
  CHECK(d.ground.ratio >= 0.0);
  CHECK(d.ground.ratio <= 1.5);
  CHECK(d.ground.occupation == doctest::Approx(d.ground.ratio * sys.length()));
  CHECK(std::abs(d.total - 1.5) < 1e-9);
}

TEST_CASE("parameter validation names the field") {
  auto field_of = [](PhysicalParams p) {
    try {
      p.validate();
    } catch (const ValidationError& e) {
      return e.field();
    }
    return std::string();
  };
  CHECK(field_of(params(0.0, 0.0, 0.0, 1.0)) == "physics.beta");
  CHECK(field_of(params(1.0, -1.0, 0.0, 1.0)) == "physics.alpha");
  CHECK(field_of(params(1.0, 0.0, -1.0, 1.0)) == "physics.lambda");
  CHECK(field_of(params(1.0, 0.0, 0.0, 0.0)) == "physics.rho");
  PhysicalParams p = params(1.0, 0.0, 0.0, 1.0);
  p.nu = 1.0;
  CHECK(field_of(p) == "physics.nu");
}

TEST_CASE("tail bound and truncated spectrum") {
  WireParams w{1.0, 50.0};
  const double cutoff = statmech_cutoff(w, 1.0);
  const double mu = separable_ground(w) - 1e-6;
  CHECK(bulk_tail_bound(w, cutoff, mu, 1.0) < 1e-15);
  CHECK(bulk_tail_bound(w, separable_ground(w) + 1.0, mu, 1.0) > 1e-3);

  FiniteSystem sys;
  sys.wire = w;
  sys.bulk = separable_spectrum(w, separable_ground(w) + 2.0);
  CHECK_THROWS_AS(solve_mu(5.0, sys, params(1.0, 0.0, 0.0, 5.0)), SolverError);
}
