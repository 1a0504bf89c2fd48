#include <algorithm>
#include <cmath>
#include <limits>

#include "condensate/error.hpp"
#include "condensate/fingerprint.hpp"
#include "condensate/thermo.hpp"

namespace condensate {

std::optional<double> Verdict::value(const std::string& key) const {
  for (const auto& [k, v] : values)
    if (k == key) return v;
  return std::nullopt;
}

bool VerificationReport::all_passed() const {
  for (const auto& v : verdicts)
    if (!v.passed) return false;
  return !verdicts.empty();
}

Verdict check_destruction_I(const ThermoSweep& sweep, double tolerance) {
  Verdict v;
  v.name = "destruction_I";
  if (sweep.physics.lambda != 0.0) {
    v.notes.push_back("requires lambda = 0");
    return v;
  }
  const auto& pts = sweep.per_L;
  bool ground_dec = true, first_dec = true, mu_ok = true;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (!(pts[i].solution.mu < -sweep.physics.alpha)) mu_ok = false;
    if (i == 0) continue;
    if (!(pts[i].diagnostics.ground.ratio < pts[i - 1].diagnostics.ground.ratio))
      ground_dec = false;
    if (!(pts[i].diagnostics.first_excited.ratio < pts[i - 1].diagnostics.first_excited.ratio))
      first_dec = false;
  }
  const auto& g = sweep.extrapolated.rho0;
  const auto& f = sweep.extrapolated.first_excited_ratio;
  v.record("ground_ratio_limit", g.intercept);
  v.record("ground_ratio_slope", g.slope);
  v.record("first_excited_ratio_limit", f.intercept);
  v.record("first_excited_ratio_slope", f.slope);
  double mu_max = -std::numeric_limits<double>::infinity();
  for (const auto& p : pts) mu_max = std::max(mu_max, p.solution.mu);
  v.record("mu_max", mu_max);
  v.record("minus_alpha", -sweep.physics.alpha);

  if (!ground_dec) v.notes.push_back("ground ratio not strictly decreasing");
  if (!first_dec) v.notes.push_back("first excited ratio not strictly decreasing");
  if (!mu_ok) v.notes.push_back("some mu_L >= -alpha");
  const bool limits = std::abs(g.intercept) <= tolerance && std::abs(f.intercept) <= tolerance;
  if (!limits) v.notes.push_back("ratio limit not within tolerance of zero");
  v.passed = ground_dec && first_dec && mu_ok && limits;
  return v;
}

Verdict check_bare_bulk_occupation(const ThermoSweep& sweep) {
  Verdict v;
  v.name = "bare_bulk_occupation";
  const auto& occ = sweep.extrapolated.ground_occupation;
  v.record("ground_occupation_limit", occ.intercept);
  v.record("ground_occupation_error", occ.intercept_error);
  v.record("ground_ratio_limit", sweep.extrapolated.rho0.intercept);
  v.passed = occ.intercept > occ.intercept_error && occ.intercept > 0.0;
  if (!(sweep.extrapolated.rho0.intercept > 1e-3))
    v.notes.push_back("occupation / L does not stay positive; only the unnormalized count does");
  return v;
}

ConditionRecord check_condition_lemma(const PhysicalParams& params, double delta, double mu_limit,
                                      double d) {
  if (!(params.lambda > 0.0))
    throw ValidationError("physics.lambda", "condition lemma needs lambda > 0");
  if (!(params.nu > 1.0)) throw ValidationError("physics.nu", "nu must be > 1");
  if (!(delta >= 0.0)) throw ValidationError("lattice.delta", "delta must be >= 0");
  ConditionRecord r;
  const double e0 = bulk_threshold(d);
  r.bound = (e0 + params.alpha) / (params.nu * params.lambda);
  if (delta == 0.0) {
    r.rho_tilde = 0.0;
  } else if (mu_limit < e0) {
    r.rho_tilde = delta * (params.rho - rho_exc(params.beta, mu_limit, d));
  } else {
    // rho_exc diverges at the threshold, so rho_tilde -> -inf there.
    r.rho_tilde = -std::numeric_limits<double>::infinity();
  }
  r.condition_met = r.rho_tilde < r.bound;
  r.corollary_lhs = delta * params.rho;
  r.corollary_met = r.corollary_lhs < r.bound;
  return r;
}

Verdict check_no_condensate(const ThermoSweep& sweep, const std::string& name, double tolerance) {
  Verdict v;
  v.name = name;
  const auto& r = sweep.extrapolated.rho0;
  v.record("rho0_limit", r.intercept);
  v.record("rho0_limit_error", r.intercept_error);
  v.record("mu_limit", sweep.mu_limit());
  v.passed = std::abs(r.intercept) <= tolerance;
  if (!v.passed) v.notes.push_back("extrapolated rho0 " + format_double(r.intercept) +
                                   " outside tolerance " + format_double(tolerance));
  return v;
}

// ---------------------------------------------------------------------------

Verdict verify_destruction_I(const SweepSpec& base, const VerifyOptions& options) {
  SweepSpec spec = base;
  spec.physics.lambda = 0.0;
  if (spec.lattice.growth == LatticeRule::Growth::none) spec.lattice.growth = LatticeRule::Growth::linear;
  Verdict v = check_destruction_I(run_sweep(spec), options.tolerance);

  // Sanity: with no defects the bulk ground state keeps a finite occupation.
  SweepSpec bare = spec;
  bare.lattice.growth = LatticeRule::Growth::none;
  const Verdict b = check_bare_bulk_occupation(run_sweep(bare));
  for (const auto& [k, x] : b.values) v.record("bare_" + k, x);
  v.notes.push_back(std::string("bare bulk unnormalized ground occupation ") +
                    (b.passed ? "stays positive" : "does not stay positive"));
  return v;
}

Verdict verify_lemma_regime(const SweepSpec& base, const VerifyOptions& options) {
  SweepSpec spec = base;
  spec.lattice.growth = LatticeRule::Growth::linear;
  if (!(spec.physics.lambda > 0.0)) spec.physics.lambda = 1.0;
  const double delta = spec.lattice.delta;
  const double bound =
      (bulk_threshold(spec.wire.d) + spec.physics.alpha) / (spec.physics.nu * spec.physics.lambda);
  // Half the corollary threshold keeps delta rho safely inside the regime.
  if (!(delta * spec.physics.rho < bound)) spec.physics.rho = 0.5 * bound / delta;

  const ThermoSweep sweep = run_sweep(spec);
  Verdict v = check_no_condensate(sweep, "lemma_regime", options.tolerance);
  const ConditionRecord c = check_condition_lemma(spec.physics, delta, sweep.mu_limit(), spec.wire.d);
  v.record("rho", spec.physics.rho);
  v.record("delta", delta);
  v.record("rho_tilde", c.rho_tilde);
  v.record("bound", c.bound);
  v.record("delta_rho", c.corollary_lhs);
  if (!c.condition_met) v.notes.push_back("lemma condition not met at the extrapolated mu");
  v.passed = v.passed && c.condition_met && c.corollary_met;
  return v;
}

Verdict verify_corollary_delta_zero(const SweepSpec& base, const VerifyOptions& options) {
  Verdict v;
  v.name = "corollary_delta_zero";
  v.passed = true;
  for (double lambda : options.corollary_lambdas) {
    SweepSpec spec = base;
    spec.lattice.growth = LatticeRule::Growth::superlinear;
    spec.physics.lambda = lambda;
    const ThermoSweep sweep = run_sweep(spec);
    const std::string tag = "lambda_" + format_double(lambda);
    v.record(tag + "_rho0_limit", sweep.rho0_limit());
    v.record(tag + "_mu_limit", sweep.mu_limit());
    if (!(std::abs(sweep.rho0_limit()) <= options.tolerance)) {
      v.passed = false;
      v.notes.push_back(tag + ": extrapolated rho0 outside tolerance");
    }
  }
  return v;
}

Verdict verify_reconstruction(const SweepSpec& base, const VerifyOptions& options) {
  Verdict v;
  v.name = "reconstruction";
  SweepSpec spec = base;
  spec.lattice.growth = LatticeRule::Growth::linear;
  if (!(spec.physics.lambda > 0.0)) spec.physics.lambda = 1.0;

  CriticalResult crit;
  try {
    crit = find_critical_density(spec, options.critical_rho_lo, options.critical_rho_hi,
                                 options.critical);
  } catch (const SolverError& e) {
    v.notes.push_back(e.what());
    return v;
  }
  v.record("rho_crit", crit.rho_crit);
  v.record("bracket_lo", crit.lo);
  v.record("bracket_hi", crit.hi);
  const double width = crit.hi - crit.lo;
  v.record("relative_width", width / crit.rho_crit);
  bool ok = crit.rho_crit > 0.0 && width <= options.critical.rel_width * crit.rho_crit;

  SweepSpec twice = spec;
  twice.physics.rho = 2.0 * crit.rho_crit;
  const ThermoSweep a = run_sweep(twice);
  for (double& L : twice.schedule) L *= 2.0;
  const ThermoSweep b = run_sweep(twice);
  const double r_a = a.rho0_limit(), r_b = b.rho0_limit();
  v.record("rho0_limit", r_a);
  v.record("rho0_limit_doubled", r_b);
  const double change = std::abs(r_b - r_a) / std::max(std::abs(r_a), 1e-300);
  v.record("relative_change", change);
  if (!(r_a > options.critical.eps_cond && r_b > options.critical.eps_cond)) {
    ok = false;
    v.notes.push_back("rho0 at 2 rho_crit is not positive on both schedules");
  }
  if (!(change <= options.stability_rel)) {
    ok = false;
    v.notes.push_back("rho0 at 2 rho_crit moves by more than " +
                      format_double(options.stability_rel) + " relative when max L doubles");
  }
  v.passed = ok;
  return v;
}

VerificationReport run_verification(const SweepSpec& base, const VerifyOptions& options) {
  VerificationReport r;
  r.verdicts.push_back(verify_destruction_I(base, options));
  r.verdicts.push_back(verify_lemma_regime(base, options));
  r.verdicts.push_back(verify_corollary_delta_zero(base, options));
  r.verdicts.push_back(verify_reconstruction(base, options));
  return r;
}

}  // namespace condensate
