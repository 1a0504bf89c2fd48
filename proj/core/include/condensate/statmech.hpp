#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "condensate/bulk_spectrum.hpp"

namespace condensate {

struct PhysicalParams {
  double beta = 1.0;    // inverse temperature
  double alpha = 0.0;   // surface tension: uniform downward shift of surface levels
  double lambda = 0.0;  // mean-field pair repulsion in the defects
  double rho = 1.0;     // target pair density per unit length
  double nu = 2.0;      // margin in the destruction condition, > 1

  void validate() const;
};

/// One finite wire: bulk levels E_n(L) and the defect-chain Laplacian levels
/// lambda_j(L). An empty surface_levels list means no defects at all.
struct FiniteSystem {
  WireParams wire;
  Spectrum bulk;
  std::vector<double> surface_levels;

  double length() const noexcept { return wire.L; }
  std::size_t defects() const noexcept { return surface_levels.size(); }
};

struct SolverTolerances {
  double density_rel = 1e-10;      // |density - rho| <= density_rel * max(1, rho)
  double fixed_point_abs = 1e-12;  // |rho_s - <occupation>| on the surface
  double mu_abs = 1e-12;
  double tail_rel = 1e-13;         // omitted bulk tail relative to rho
  int max_bisection = 600;
  int max_bracket_doublings = 1100;
  int max_fixed_point_iterations = 400;
};

struct GrandCanonicalSolution {
  double L = 0.0;
  std::size_t defects = 0;
  double mu = 0.0;
  // mu = mu_top - mu_gap. mu_top is the pole nearest from above (bulk ground
  // level, or the lowest surface level when lambda = 0); the gap is carried
  // separately so occupations near the pole keep full precision.
  double mu_top = 0.0;
  double mu_gap = 0.0;
  double rho_s = 0.0;              // surface pair density per defect
  double surface_gap = 0.0;        // lowest surface level minus mu
  std::vector<double> surface_occupations;
  std::vector<double> bulk_occupations;
  double rho0 = 0.0;               // ground-level bulk occupation / L
  double surface_density = 0.0;    // n rho_s / L
  double excited_density = 0.0;    // bulk occupation above the ground level / L
  double density = 0.0;            // total / L at this mu
  double density_residual = 0.0;   // density - target
  double fixed_point_residual = 0.0;
  double tail_bound = 0.0;         // bound on omitted bulk levels, per unit length
  int iterations = 0;
};

/// 1 / (e^{beta (E - mu)} - 1). Throws DomainError when E <= mu.
double occupation(double energy, double mu, double beta);

/// Same, from the gap E - mu directly.
double occupation_from_gap(double gap, double beta);

struct SurfaceState {
  double rho_s = 0.0;
  double shift = 0.0;        // lambda rho_s - alpha - mu, common to every surface level
  double lowest_gap = 0.0;   // lambda_min + shift, kept separately for precision
  double residual = 0.0;  // |rho_s - (1/n) sum_j occupation|
  int iterations = 0;
};

/// Self-consistent surface density: for lambda > 0 the unique
/// rho_s > max(0, (mu + alpha - lambda_min) / lambda) with
/// rho_s = (1/n) sum_j occupation(lambda_j - alpha + lambda rho_s, mu, beta);
/// for lambda = 0 the plain average (requires mu < lambda_min - alpha).
SurfaceState surface_fixed_point(std::span<const double> graph_eigs, double mu,
                                 const PhysicalParams& params,
                                 const SolverTolerances& tol = {});

/// Every field of the solution at a given mu (target density taken from
/// params.rho for the residual).
GrandCanonicalSolution evaluate_at_mu(double mu, const FiniteSystem& system,
                                      const PhysicalParams& params,
                                      const SolverTolerances& tol = {});

/// (1/L) [ sum_j n_j(surface) + sum_n n_n(bulk) ] at chemical potential mu.
double total_density(double mu, const FiniteSystem& system, const PhysicalParams& params,
                     const SolverTolerances& tol = {});

/// Chemical potential reproducing target_rho, with all solution fields.
GrandCanonicalSolution solve_mu(double target_rho, const FiniteSystem& system,
                                const PhysicalParams& params,
                                const SolverTolerances& tol = {});

/// Largest admissible mu: min(E_0(L), lambda_min - alpha) without interaction,
/// E_0(L) otherwise.
double mu_upper_bound(const FiniteSystem& system, const PhysicalParams& params);

/// Conservative bound on the density carried by bulk levels above the
/// spectrum's cutoff, using the separable density of states.
double bulk_tail_bound(const WireParams& wire, double cutoff_energy, double mu, double beta);

struct OccupationDiagnostic {
  double occupation = 0.0;  // as in the macroscopic-occupation criterion
  double ratio = 0.0;       // occupation / L
};

struct MacroscopicDiagnostics {
  OccupationDiagnostic ground;
  OccupationDiagnostic first_excited;
  OccupationDiagnostic lowest_surface;
  bool has_first_excited = false;
  bool has_surface = false;
  double surface_density = 0.0;
  double excited_bulk_density = 0.0;  // all bulk levels above the ground
  double total = 0.0;                 // should reproduce rho
};

MacroscopicDiagnostics macroscopic_occupation_diagnostics(const GrandCanonicalSolution& solution,
                                                          double L);

}  // namespace condensate
