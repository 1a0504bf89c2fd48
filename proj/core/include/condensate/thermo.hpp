#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "condensate/bulk_spectrum.hpp"
#include "condensate/graph_spectrum.hpp"
#include "condensate/statmech.hpp"

namespace condensate {

class SpectrumCache;

// ---------------------------------------------------------------------------
// Excited-state density in the thermodynamic limit
// ---------------------------------------------------------------------------

enum class RhoExcMethod { series, quadrature };

/// (sqrt 2 / pi) sum_{n>=1} int_0^inf dx / (e^{beta 2 pi^2 n^2 / d^2} e^{beta (x^2 - mu)} - 1).
/// Series route: (2 pi beta)^{-1/2} sum_n Li_{1/2}(e^{beta (mu - 2 pi^2 n^2 / d^2)}).
/// Quadrature route: adaptive Gauss-Kronrod per n with a relative tail cut.
/// Infinite at mu = 2 pi^2 / d^2; DomainError above it.
double rho_exc(double beta, double mu, double d, RhoExcMethod method = RhoExcMethod::series);

// ---------------------------------------------------------------------------
// Finite-size sweeps
// ---------------------------------------------------------------------------

/// How the number of defects grows with the wire length.
struct LatticeRule {
  enum class Growth {
    linear,       // n(L) = max(1, round(L / delta)), delta > 0
    superlinear,  // n(L) = round(L log(1 + L)); realizes delta = 0
    none,         // no defects at all: bare bulk
  };

  Growth growth = Growth::linear;
  double delta = 1.0;
  WeightSpec weights;

  std::size_t count_at(double L) const;
  /// lim L / n(L) for this rule (0 for superlinear growth; nullopt without defects).
  std::optional<double> limit_delta() const;
  void validate() const;
};

std::string to_string(LatticeRule::Growth growth);
LatticeRule::Growth growth_from_string(const std::string& name);

struct BulkOptions {
  SpectrumSource method = SpectrumSource::separable;
  double h = 1.0 / 32.0;      // fd2d only
  std::size_t n_lowest = 64;  // fd2d only
};

struct SweepSpec {
  std::vector<double> schedule;  // strictly increasing lengths
  WireParams wire;               // d and outer_bc; L is taken from the schedule
  LatticeRule lattice;
  BulkOptions bulk;
  PhysicalParams physics;
  SolverTolerances tolerances;
  unsigned jobs = 1;
  SpectrumCache* cache = nullptr;  // optional, not owned

  void validate() const;
};

/// Affine least-squares fit value(L) = intercept + slope / L.
struct InverseLengthFit {
  double intercept = 0.0;
  double slope = 0.0;
  double intercept_error = 0.0;  // OLS standard error (0 with two points)
  double rms = 0.0;
  std::size_t points = 0;
};

InverseLengthFit fit_inverse_length(std::span<const double> lengths,
                                    std::span<const double> values);

/// Fit over the upper half of a schedule.
InverseLengthFit fit_upper_half(std::span<const double> lengths, std::span<const double> values);

struct SweepPoint {
  double L = 0.0;
  std::size_t defects = 0;
  GrandCanonicalSolution solution;
  MacroscopicDiagnostics diagnostics;
  double balance_residual = 0.0;  // finite-L analogue; NaN when mu_L >= 2 pi^2 / d^2
};

struct Extrapolation {
  InverseLengthFit mu;
  InverseLengthFit rho_s;
  InverseLengthFit rho0;
  InverseLengthFit surface_density;     // n(L) rho_s / L
  InverseLengthFit ground_occupation;   // unnormalized
  InverseLengthFit first_excited_ratio;
};

struct ThermoSweep {
  std::vector<double> schedule;
  std::optional<double> delta;
  PhysicalParams physics;
  double d = 1.0;
  std::vector<SweepPoint> per_L;
  Extrapolation extrapolated;
  double rho_exc_value = 0.0;     // at the extrapolated mu; inf if undefined
  bool limit_defined = false;     // mu_limit + its fit error below 2 pi^2 / d^2
  double balance_residual = 0.0;  // |sigma + rho0 - (rho - rho_exc)| in the limit
  double fit_error = 0.0;         // propagated intercept errors
  double identity_residual = 0.0; // |rho_s - (rho_tilde - delta rho0)|, delta > 0 only
  std::vector<std::string> warnings;

  double mu_limit() const noexcept { return extrapolated.mu.intercept; }
  double rho0_limit() const noexcept { return extrapolated.rho0.intercept; }
  double rho_s_limit() const noexcept { return extrapolated.rho_s.intercept; }
};

/// Finite system at length L for a sweep specification.
FiniteSystem build_system(const SweepSpec& spec, double L);

/// Solves every L of the schedule (in parallel when jobs > 1), then
/// extrapolates and evaluates the limit balance.
ThermoSweep run_sweep(const SweepSpec& spec);

/// Geometric or linear schedule helper.
std::vector<double> make_schedule(double L_min, double L_max, std::size_t count, bool geometric);

// ---------------------------------------------------------------------------
// Verdicts
// ---------------------------------------------------------------------------

struct Verdict {
  std::string name;
  bool passed = false;
  std::vector<std::pair<std::string, double>> values;
  std::vector<std::string> notes;

  void record(std::string key, double value) { values.emplace_back(std::move(key), value); }
  std::optional<double> value(const std::string& key) const;
};

/// Non-interacting destruction: ground and first excited bulk ratios decrease
/// along the schedule and extrapolate to zero; mu_L < -alpha throughout.
Verdict check_destruction_I(const ThermoSweep& sweep, double tolerance = 1e-3);

/// Bare bulk (no defects): the unnormalized ground occupation extrapolates to
/// a positive value; the per-length ratio is reported alongside.
Verdict check_bare_bulk_occupation(const ThermoSweep& sweep);

struct ConditionRecord {
  double rho_tilde = 0.0;
  double bound = 0.0;             // (E_0 + alpha) / (nu lambda)
  bool condition_met = false;     // rho_tilde < bound
  double corollary_lhs = 0.0;     // delta * rho
  bool corollary_met = false;     // delta rho < bound
};

/// rho_tilde(mu, delta) = delta (rho - rho_exc(beta, mu, d)) against
/// (E_0 + alpha) / (nu lambda). Requires lambda > 0.
ConditionRecord check_condition_lemma(const PhysicalParams& params, double delta, double mu_limit,
                                      double d);

/// Extrapolated rho0 within tolerance of zero.
Verdict check_no_condensate(const ThermoSweep& sweep, const std::string& name,
                            double tolerance = 1e-3);

// ---------------------------------------------------------------------------
// Critical density
// ---------------------------------------------------------------------------

struct CriticalOptions {
  double eps_cond = 1e-3;     // condensation indicator: extrapolated rho0 > eps_cond
  double rel_width = 1e-2;    // stop when hi - lo <= rel_width * rho_crit
  int max_steps = 80;
};

struct BracketStep {
  int step = 0;
  std::string phase;  // "probe" or "bisect"
  double rho = 0.0;
  double rho0_limit = 0.0;
  bool condensed = false;
  double lo = 0.0;
  double hi = 0.0;
};

struct CriticalResult {
  double rho_crit = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  std::vector<BracketStep> history;
};

/// Indicator used by the critical-density search.
bool condensation_indicator(const ThermoSweep& sweep, double eps_cond);

/// Bisection on rho between a non-condensed lower end and a condensed upper
/// end. Throws SolverError carrying both indicator values when the ends do
/// not straddle. Requires delta > 0, lambda > 0.
CriticalResult find_critical_density(const SweepSpec& base, double rho_lo, double rho_hi,
                                     const CriticalOptions& options = {});

// ---------------------------------------------------------------------------
// Scripted verification suites
// ---------------------------------------------------------------------------

struct VerifyOptions {
  double tolerance = 1e-3;
  double stability_rel = 0.1;  // reconstruction: rho0 change when max L doubles
  double critical_rho_lo = 1.0;
  double critical_rho_hi = 128.0;
  std::vector<double> corollary_lambdas{0.1, 1.0, 10.0};
  CriticalOptions critical;
};

struct VerificationReport {
  std::vector<Verdict> verdicts;
  bool all_passed() const;
};

/// Destruction I, the lemma regime, the delta = 0 corollary, and
/// reconstruction, each built from `base` with the suite's overrides.
VerificationReport run_verification(const SweepSpec& base, const VerifyOptions& options = {});

Verdict verify_destruction_I(const SweepSpec& base, const VerifyOptions& options);
Verdict verify_lemma_regime(const SweepSpec& base, const VerifyOptions& options);
Verdict verify_corollary_delta_zero(const SweepSpec& base, const VerifyOptions& options);
Verdict verify_reconstruction(const SweepSpec& base, const VerifyOptions& options);

}  // namespace condensate
