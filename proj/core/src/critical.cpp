#include <cmath>

#include "condensate/error.hpp"
#include "condensate/fingerprint.hpp"
#include "condensate/thermo.hpp"

namespace condensate {

bool condensation_indicator(const ThermoSweep& sweep, double eps_cond) {
  return sweep.rho0_limit() > eps_cond;
}

CriticalResult find_critical_density(const SweepSpec& base, double rho_lo, double rho_hi,
                                     const CriticalOptions& options) {
  if (!(base.physics.lambda > 0.0))
    throw ValidationError("physics.lambda", "critical density needs lambda > 0");
  if (base.lattice.growth != LatticeRule::Growth::linear)
    throw ValidationError("lattice.growth", "critical density needs linear growth (delta > 0)");
  if (!(rho_lo > 0.0) || !(rho_hi > rho_lo))
    throw ValidationError("critical.rho_bracket", "need 0 < rho_lo < rho_hi");

  CriticalResult out;
  int step = 0;
  auto probe = [&](double rho, const char* phase) {
    SweepSpec spec = base;
    spec.physics.rho = rho;
    const ThermoSweep sweep = run_sweep(spec);
    BracketStep s;
    s.step = step++;
    s.phase = phase;
    s.rho = rho;
    s.rho0_limit = sweep.rho0_limit();
    s.condensed = condensation_indicator(sweep, options.eps_cond);
    return s;
  };

  BracketStep lo = probe(rho_lo, "probe");
  lo.lo = rho_lo;
  lo.hi = rho_hi;
  out.history.push_back(lo);
  BracketStep hi = probe(rho_hi, "probe");
  hi.lo = rho_lo;
  hi.hi = rho_hi;
  out.history.push_back(hi);
  if (lo.condensed == hi.condensed)
    throw SolverError("find_critical_density: indicator does not change across the bracket (rho0 " +
                      format_double(lo.rho0_limit) + " at rho " + format_double(rho_lo) +
                      ", " + format_double(hi.rho0_limit) + " at rho " +
                      format_double(rho_hi) + ")");
  if (lo.condensed)
    throw SolverError("find_critical_density: lower end condensed and upper end not (rho0 " +
                      format_double(lo.rho0_limit) + " at rho " + format_double(rho_lo) +
                      ", " + format_double(hi.rho0_limit) + " at rho " +
                      format_double(rho_hi) + ")");

  double a = rho_lo, b = rho_hi;
  for (int i = 0; i < options.max_steps; ++i) {
    const double mid = 0.5 * (a + b);
    if (b - a <= options.rel_width * mid) break;
    BracketStep s = probe(mid, "bisect");
    if (s.condensed)
      b = mid;
    else
      a = mid;
    s.lo = a;
    s.hi = b;
    out.history.push_back(s);
  }
  out.lo = a;
  out.hi = b;
  out.rho_crit = 0.5 * (a + b);
  if (!(b - a <= options.rel_width * out.rho_crit))
    throw SolverError("find_critical_density: bracket [" + format_double(a) + ", " +
                      format_double(b) + "] still wider than requested after " +
                      std::to_string(options.max_steps) + " steps");
  return out;
}

}  // namespace condensate
