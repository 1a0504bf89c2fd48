#include "condensate/statmech.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "condensate/error.hpp"
#include "condensate/fingerprint.hpp"

namespace condensate {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double ulp(double x) {
  const double a = std::abs(x);
  return std::nextafter(a, kInf) - a;
}

// Levels measured from the pole of the chemical potential. Everything the
// solver sums is offset + gap with offset >= 0, so nothing cancels near the
// pole.
struct Prepared {
  double top = 0.0;
  std::vector<double> bulk_offsets;     // E_n - top
  std::vector<double> surface_rel;      // lambda_j - lambda_min
  double lambda_min = 0.0;
  double surface_base = 0.0;            // lambda_min - alpha - top (lambda = 0 only)
};

Prepared prepare(const FiniteSystem& system, const PhysicalParams& params, double top) {
  Prepared p;
  p.top = top;
  p.bulk_offsets.reserve(system.bulk.size());
  for (double e : system.bulk.eigenvalues) p.bulk_offsets.push_back(e - top);
  if (!system.surface_levels.empty()) {
    p.lambda_min = *std::min_element(system.surface_levels.begin(), system.surface_levels.end());
    p.surface_rel.reserve(system.surface_levels.size());
    for (double l : system.surface_levels) p.surface_rel.push_back(l - p.lambda_min);
    p.surface_base = (p.lambda_min - params.alpha) - top;
  }
  return p;
}

double mean_occupation(std::span<const double> rel, double g, double beta,
                       double* derivative = nullptr) {
  double sum = 0.0, dsum = 0.0;
  for (double r : rel) {
    const double n = 1.0 / std::expm1(beta * (r + g));
    sum += n;
    dsum += beta * n * (1.0 + n);
  }
  const double inv = 1.0 / static_cast<double>(rel.size());
  if (derivative) *derivative = dsum * inv;
  return sum * inv;
}

// Interacting surface: unknown g = lambda rho_s - alpha - mu + lambda_min, the
// gap of the lowest surface level above mu. Solves
//   G(g) = (g - lambda_min + alpha + mu) / lambda - <n>(g) = 0.
SurfaceState solve_interacting_surface(std::span<const double> rel, double lambda_min,
                                       double alpha_plus_mu, const PhysicalParams& params,
                                       const SolverTolerances& tol) {
  const double lambda = params.lambda;
  const double beta = params.beta;
  auto rho_of = [&](double g) { return (g - lambda_min + alpha_plus_mu) / lambda; };
  auto eval = [&](double g, double& dg) {
    double dmean = 0.0;
    const double mean = mean_occupation(rel, g, beta, &dmean);
    dg = 1.0 / lambda + dmean;
    return rho_of(g) - mean;
  };

  // rho_s >= 0 puts a floor on g; g > 0 keeps every occupation finite.
  const double g_floor = std::max(0.0, lambda_min - alpha_plus_mu);
  double a = g_floor;  // G(a) < 0 (or -inf at a = 0)
  double b = g_floor + 1.0 / beta;
  double db = 0.0;
  double gb = eval(b, db);
  int doublings = 0;
  while (!(gb > 0.0)) {
    if (gb < 0.0) a = b;
    if (++doublings > tol.max_bracket_doublings)
      throw SolverError("surface fixed point: bracket expansion failed (mu + alpha = " +
                        format_double(alpha_plus_mu) + ", lambda = " + format_double(lambda) +
                        ", last g = " + format_double(b) + ")");
    b = g_floor + (b - g_floor) * 2.0;
    gb = eval(b, db);
  }

  double x = b, gx = gb, dx = db;
  int it = 0;
  for (; it < tol.max_fixed_point_iterations; ++it) {
    const double rho = rho_of(x);
    const double target = 0.25 * std::max(tol.fixed_point_abs, 8.0 * ulp(rho));
    if (std::abs(gx) <= target) break;
    if (b - a <= 2.0 * ulp(b)) break;

    double next = x - gx / dx;  // Newton
    const bool newton_ok = std::isfinite(next) && next > a && next < b &&
                           std::abs(next - x) < 0.5 * (b - a);
    if (!newton_ok) {
      if (a == 0.0)
        next = b * 1e-2;
      else if (b / a > 4.0)
        next = std::sqrt(a * b);
      else
        next = 0.5 * (a + b);
    }
    if (!(next > a && next < b)) break;  // bracket exhausted at double precision
    x = next;
    gx = eval(x, dx);
    if (gx < 0.0)
      a = x;
    else if (gx > 0.0)
      b = x;
    else
      break;
  }

  SurfaceState out;
  out.shift = x - lambda_min;
  out.lowest_gap = x;
  // Take rho_s from the occupations: rho_of(x) cancels when mu + alpha is
  // far below lambda_min and loses all relative accuracy.
  out.rho_s = mean_occupation(rel, x, beta);
  out.residual = std::abs(rho_of(x) - out.rho_s);
  out.iterations = it;
  const double allowed = std::max(tol.fixed_point_abs, 8.0 * ulp(out.rho_s));
  if (!(out.residual <= allowed))
    throw SolverError("surface fixed point: residual " + format_double(out.residual) +
                      " above tolerance " + format_double(allowed) + " after " +
                      std::to_string(it) + " iterations (bracket [" + format_double(a) + ", " +
                      format_double(b) + "])");
  return out;
}

SurfaceState free_surface(std::span<const double> rel, double lambda_min, double base_gap,
                          double beta) {
  if (!(base_gap > 0.0))
    throw DomainError("non-interacting surface needs mu < lambda_min - alpha (gap " +
                      format_double(base_gap) + ")");
  SurfaceState out;
  out.shift = base_gap - lambda_min;
  out.lowest_gap = base_gap;
  out.rho_s = mean_occupation(rel, base_gap, beta);
  return out;
}

GrandCanonicalSolution evaluate(const Prepared& p, double gap, const FiniteSystem& system,
                                const PhysicalParams& params, const SolverTolerances& tol) {
  GrandCanonicalSolution s;
  s.L = system.length();
  s.defects = system.defects();
  s.mu_top = p.top;
  s.mu_gap = gap;
  s.mu = p.top - gap;

  const double beta = params.beta;
  s.bulk_occupations.reserve(p.bulk_offsets.size());
  double bulk_sum = 0.0;
  for (double off : p.bulk_offsets) {
    const double x = off + gap;
    if (!(x > 0.0))
      throw DomainError("bulk level at or below mu (E - mu = " + format_double(x) + ")");
    const double n = occupation_from_gap(x, beta);
    s.bulk_occupations.push_back(n);
    bulk_sum += n;
  }

  double surface_sum = 0.0;
  if (!p.surface_rel.empty()) {
    SurfaceState st;
    if (params.lambda > 0.0) {
      st = solve_interacting_surface(p.surface_rel, p.lambda_min, params.alpha + s.mu, params,
                                     tol);
    } else {
      st = free_surface(p.surface_rel, p.lambda_min, p.surface_base + gap, beta);
    }
    s.surface_gap = st.lowest_gap;
    s.rho_s = st.rho_s;
    s.fixed_point_residual = st.residual;
    s.iterations = st.iterations;
    const double g = st.lowest_gap;
    s.surface_occupations.reserve(p.surface_rel.size());
    for (double r : p.surface_rel) {
      const double n = occupation_from_gap(r + g, beta);
      s.surface_occupations.push_back(n);
      surface_sum += n;
    }
  }

  const double L = system.length();
  s.surface_density = surface_sum / L;
  s.rho0 = s.bulk_occupations.empty() ? 0.0 : s.bulk_occupations.front() / L;
  s.excited_density = (bulk_sum - (s.bulk_occupations.empty() ? 0.0 : s.bulk_occupations.front())) / L;
  s.density = (surface_sum + bulk_sum) / L;
  s.density_residual = s.density - params.rho;
  s.tail_bound = bulk_tail_bound(system.wire, system.bulk.cutoff_energy, s.mu, beta);
  return s;
}

void check_system(const FiniteSystem& system) {
  system.wire.validate();
  if (system.bulk.eigenvalues.empty())
    throw ValidationError("bulk", "bulk spectrum is empty");
}

}  // namespace

void PhysicalParams::validate() const {
  if (!(beta > 0.0) || !std::isfinite(beta))
    throw ValidationError("physics.beta", "beta must be positive");
  if (!(alpha >= 0.0) || !std::isfinite(alpha))
    throw ValidationError("physics.alpha", "alpha must be >= 0");
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw ValidationError("physics.lambda", "lambda must be >= 0");
  if (!(rho > 0.0) || !std::isfinite(rho))
    throw ValidationError("physics.rho", "rho must be positive");
  if (!(nu > 1.0) || !std::isfinite(nu)) throw ValidationError("physics.nu", "nu must be > 1");
}

double occupation_from_gap(double gap, double beta) {
  if (!(gap > 0.0))
    throw DomainError("occupation: need E > mu (E - mu = " + format_double(gap) + ")");
  return 1.0 / std::expm1(beta * gap);
}

double occupation(double energy, double mu, double beta) {
  if (!(energy > mu))
    throw DomainError("occupation: need E > mu (E = " + format_double(energy) +
                      ", mu = " + format_double(mu) + ")");
  return occupation_from_gap(energy - mu, beta);
}

SurfaceState surface_fixed_point(std::span<const double> graph_eigs, double mu,
                                 const PhysicalParams& params, const SolverTolerances& tol) {
  if (graph_eigs.empty()) throw ValidationError("lattice", "no surface levels");
  const double lambda_min = *std::min_element(graph_eigs.begin(), graph_eigs.end());
  std::vector<double> rel;
  rel.reserve(graph_eigs.size());
  for (double l : graph_eigs) rel.push_back(l - lambda_min);
  if (params.lambda > 0.0)
    return solve_interacting_surface(rel, lambda_min, params.alpha + mu, params, tol);
  return free_surface(rel, lambda_min, lambda_min - params.alpha - mu, params.beta);
}

double mu_upper_bound(const FiniteSystem& system, const PhysicalParams& params) {
  double top = system.bulk.ground();
  if (params.lambda == 0.0 && !system.surface_levels.empty()) {
    const double lmin =
        *std::min_element(system.surface_levels.begin(), system.surface_levels.end());
    top = std::min(top, lmin - params.alpha);
  }
  return top;
}

GrandCanonicalSolution evaluate_at_mu(double mu, const FiniteSystem& system,
                                      const PhysicalParams& params, const SolverTolerances& tol) {
  check_system(system);
  params.validate();
  const double top = mu_upper_bound(system, params);
  if (!(mu < top))
    throw DomainError("chemical potential " + format_double(mu) +
                      " is not below the admissible bound " + format_double(top));
  // Measure from mu itself: offsets are then plain E - mu.
  const Prepared p = prepare(system, params, mu);
  return evaluate(p, 0.0, system, params, tol);
}

double total_density(double mu, const FiniteSystem& system, const PhysicalParams& params,
                     const SolverTolerances& tol) {
  return evaluate_at_mu(mu, system, params, tol).density;
}

GrandCanonicalSolution solve_mu(double target_rho, const FiniteSystem& system,
                                const PhysicalParams& params, const SolverTolerances& tol) {
  check_system(system);
  PhysicalParams pp = params;
  pp.rho = target_rho;
  pp.validate();

  const Prepared p = prepare(system, pp, mu_upper_bound(system, pp));
  const double beta = pp.beta;
  auto at = [&](double gap) { return evaluate(p, gap, system, pp, tol); };

  // Density falls monotonically as the gap to the pole grows. Expand
  // geometrically until the target is bracketed.
  double hi = 1.0 / beta;
  GrandCanonicalSolution s_hi = at(hi);
  int expansions = 0;
  while (s_hi.density > target_rho) {
    if (++expansions > tol.max_bracket_doublings)
      throw SolverError("solve_mu: lower mu bracket expansion failed (L = " +
                        format_double(system.length()) + ", mu = " + format_double(s_hi.mu) + ")");
    hi *= 2.0;
    s_hi = at(hi);
  }
  double lo = hi * 0.5;
  GrandCanonicalSolution s_lo = at(lo);
  while (s_lo.density < target_rho) {
    if (++expansions > tol.max_bracket_doublings || lo < 1e-300)
      throw SolverError("solve_mu: upper mu bracket failed (L = " +
                        format_double(system.length()) + ", gap = " + format_double(lo) + ")");
    hi = lo;
    s_hi = std::move(s_lo);
    lo *= 0.5;
    s_lo = at(lo);
  }

  // Bisection in log(gap) until the bracket collapses.
  const double density_tol = tol.density_rel * std::max(1.0, target_rho);
  int it = 0;
  for (; it < tol.max_bisection; ++it) {
    if (hi - lo <= 4.0 * ulp(hi)) break;
    double mid = std::sqrt(lo * hi);
    if (!(mid > lo && mid < hi)) mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    GrandCanonicalSolution s_mid = at(mid);
    if (s_mid.density > target_rho) {
      lo = mid;
      s_lo = std::move(s_mid);
    } else {
      hi = mid;
      s_hi = std::move(s_mid);
    }
    const bool mu_resolved = hi - lo <= tol.mu_abs;
    const double best = std::min(std::abs(s_lo.density_residual), std::abs(s_hi.density_residual));
    if (mu_resolved && best <= 1e-3 * density_tol) break;
  }

  GrandCanonicalSolution best = std::abs(s_lo.density_residual) <= std::abs(s_hi.density_residual)
                                    ? std::move(s_lo)
                                    : std::move(s_hi);
  best.iterations = it;
  if (!(std::abs(best.density_residual) <= density_tol))
    throw SolverError("solve_mu: density residual " + format_double(best.density_residual) +
                      " above tolerance after " + std::to_string(it) +
                      " bisections; last bracket mu in [" + format_double(p.top - lo) + ", " +
                      format_double(p.top - hi) + "]");
  if (!(best.tail_bound <= tol.tail_rel * target_rho))
    throw SolverError("solve_mu: bulk spectrum truncated too low; omitted tail bound " +
                      format_double(best.tail_bound) + " exceeds " +
                      format_double(tol.tail_rel) + " * rho (cutoff " +
                      format_double(system.bulk.cutoff_energy) + ")");
  return best;
}

double bulk_tail_bound(const WireParams& wire, double cutoff_energy, double mu, double beta) {
  // Ladder k: levels eps_k + p^2 with p = pi m / (sqrt 2 L). Omitted part is
  // p > p_k, p_k^2 = cutoff - eps_k. Bound the sum by the integral plus one
  // boundary level.
  const double L = wire.L;
  double total = 0.0;
  for (int k = 1; k < 100000; ++k) {
    const double eps = bulk_threshold(wire.d) * k * k;
    const double pk2 = std::max(0.0, cutoff_energy - eps);
    const double floor_energy = std::max(cutoff_energy, eps);
    if (!(floor_energy > mu)) return kInf;
    const double lead = std::exp(-beta * (floor_energy - mu));
    // e^{beta p_k^2} * int_{p_k}^inf e^{-beta p^2} dp
    const double x = std::sqrt(beta * pk2);
    const double scaled_erfc =
        x < 20.0 ? std::erfc(x) * std::exp(x * x) : 1.0 / (x * std::sqrt(kPi));
    const double integral = 0.5 * std::sqrt(kPi / beta) * scaled_erfc;
    // exp(-beta (eps + p^2 - mu)) summed as Bose tail: factor 1/(1 - e^{-x})
    const double bose = 1.0 / -std::expm1(-beta * (floor_energy - mu));
    const double ladder =
        lead * bose * (std::sqrt(2.0) * L / kPi * integral + 1.0) / L;
    total += ladder;
    if (eps > cutoff_energy && ladder < 1e-30 * total) break;
    if (ladder == 0.0 && eps > cutoff_energy) break;
  }
  return total;
}

MacroscopicDiagnostics macroscopic_occupation_diagnostics(const GrandCanonicalSolution& solution,
                                                          double L) {
  MacroscopicDiagnostics d;
  const auto& bulk = solution.bulk_occupations;
  if (!bulk.empty()) d.ground = {bulk[0], bulk[0] / L};
  if (bulk.size() > 1) {
    d.first_excited = {bulk[1], bulk[1] / L};
    d.has_first_excited = true;
  }
  if (!solution.surface_occupations.empty()) {
    const double top = *std::max_element(solution.surface_occupations.begin(),
                                         solution.surface_occupations.end());
    d.lowest_surface = {top, top / L};
    d.has_surface = true;
  }
  double surface = 0.0, excited = 0.0;
  for (double n : solution.surface_occupations) surface += n;
  for (std::size_t i = 1; i < bulk.size(); ++i) excited += bulk[i];
  d.surface_density = surface / L;
  d.excited_bulk_density = excited / L;
  d.total = d.surface_density + d.ground.ratio + d.excited_bulk_density;
  return d;
}

}  // namespace condensate
