#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "condensate/error.hpp"
#include "condensate/fingerprint.hpp"
#include "condensate/spectrum_cache.hpp"
#include "condensate/thermo.hpp"

namespace condensate {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <class Get>
InverseLengthFit fit_field(const std::vector<SweepPoint>& points, Get get) {
  std::vector<double> L, v;
  L.reserve(points.size());
  v.reserve(points.size());
  for (const auto& p : points) {
    L.push_back(p.L);
    v.push_back(get(p));
  }
  return fit_upper_half(L, v);
}

template <class Get>
bool strictly_decreasing(const std::vector<SweepPoint>& points, Get get) {
  for (std::size_t i = 1; i < points.size(); ++i)
    if (!(get(points[i]) < get(points[i - 1]))) return false;
  return true;
}

SweepPoint solve_point(const SweepSpec& spec, double L) {
  const FiniteSystem system = build_system(spec, L);
  SweepPoint pt;
  pt.L = L;
  pt.defects = system.defects();
  pt.solution = solve_mu(spec.physics.rho, system, spec.physics, spec.tolerances);
  pt.diagnostics = macroscopic_occupation_diagnostics(pt.solution, L);
  const double e0 = bulk_threshold(spec.wire.d);
  if (pt.solution.mu < e0) {
    const double exc = rho_exc(spec.physics.beta, pt.solution.mu, spec.wire.d);
    pt.balance_residual =
        std::abs(pt.solution.surface_density + pt.solution.rho0 - (spec.physics.rho - exc));
  } else {
    pt.balance_residual = kNaN;
  }
  return pt;
}

[[noreturn]] void rethrow_at(std::exception_ptr e, double L) {
  const std::string where = " [at L = " + format_double(L) + "]";
  try {
    std::rethrow_exception(e);
  } catch (const ValidationError& err) {
    throw ValidationError(err.field(), std::string(err.what()) + where);
  } catch (const SizingError& err) {
    throw SizingError(err.what() + where);
  } catch (const DomainError& err) {
    throw DomainError(err.what() + where);
  } catch (const SolverError& err) {
    throw SolverError(err.what() + where);
  } catch (const std::exception& err) {
    throw SolverError(err.what() + where);
  }
}

}  // namespace

// ---------------------------------------------------------------------------

std::size_t LatticeRule::count_at(double L) const {
  switch (growth) {
    case Growth::linear:
      return static_cast<std::size_t>(std::max(1.0, std::round(L / delta)));
    case Growth::superlinear:
      return static_cast<std::size_t>(std::max(1.0, std::round(L * std::log1p(L))));
    case Growth::none:
      return 0;
  }
  return 0;
}

std::optional<double> LatticeRule::limit_delta() const {
  switch (growth) {
    case Growth::linear:
      return delta;
    case Growth::superlinear:
      return 0.0;
    case Growth::none:
      return std::nullopt;
  }
  return std::nullopt;
}

void LatticeRule::validate() const {
  if (growth == Growth::linear && (!(delta > 0.0) || !std::isfinite(delta)))
    throw ValidationError("lattice.delta", "delta must be positive for linear growth");
  if (growth == Growth::none) return;
  const bool listed = weights.kind == WeightSpec::Kind::explicit_list;
  (void)weights.generate(listed ? weights.values.size() : 1);
}

std::string to_string(LatticeRule::Growth growth) {
  switch (growth) {
    case LatticeRule::Growth::linear:
      return "linear";
    case LatticeRule::Growth::superlinear:
      return "superlinear";
    case LatticeRule::Growth::none:
      return "none";
  }
  return "linear";
}

LatticeRule::Growth growth_from_string(const std::string& name) {
  if (name == "linear") return LatticeRule::Growth::linear;
  if (name == "superlinear") return LatticeRule::Growth::superlinear;
  if (name == "none") return LatticeRule::Growth::none;
  throw ValidationError("lattice.growth", "unknown growth rule '" + name + "'");
}

void SweepSpec::validate() const {
  if (schedule.size() < 4)
    throw ValidationError("schedule", "need at least 4 lengths for extrapolation");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (!(schedule[i] > wire.d) || !std::isfinite(schedule[i]))
      throw ValidationError("schedule", "every length must be finite and exceed wire.d");
    if (i > 0 && !(schedule[i] > schedule[i - 1]))
      throw ValidationError("schedule", "lengths must be strictly increasing");
  }
  WireParams w = wire;
  w.L = schedule.back();
  w.validate();
  lattice.validate();
  physics.validate();
  if (bulk.method == SpectrumSource::fd2d) {
    if (!(bulk.h > 0.0)) throw ValidationError("bulk.h", "mesh spacing must be positive");
    if (bulk.n_lowest < 1) throw ValidationError("bulk.n_lowest", "need at least one level");
  }
  if (jobs < 1) throw ValidationError("jobs", "need at least one worker");
}

// ---------------------------------------------------------------------------

InverseLengthFit fit_inverse_length(std::span<const double> lengths,
                                    std::span<const double> values) {
  if (lengths.size() != values.size() || lengths.size() < 2)
    throw ValidationError("schedule", "fit needs at least two (L, value) pairs");
  const std::size_t m = lengths.size();
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sx += 1.0 / lengths[i];
    sy += values[i];
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0.0, sxy = 0.0, sx2 = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double x = 1.0 / lengths[i];
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (values[i] - my);
    sx2 += x * x;
  }
  InverseLengthFit fit;
  fit.points = m;
  fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  fit.intercept = my - fit.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double r = values[i] - (fit.intercept + fit.slope / lengths[i]);
    rss += r * r;
  }
  fit.rms = std::sqrt(rss / m);
  if (m > 2 && sxx > 0.0) {
    const double s2 = rss / static_cast<double>(m - 2);
    fit.intercept_error = std::sqrt(s2 * sx2 / (m * sxx));
  }
  return fit;
}

InverseLengthFit fit_upper_half(std::span<const double> lengths, std::span<const double> values) {
  const std::size_t n = lengths.size();
  const std::size_t take = std::max<std::size_t>(2, n - n / 2);
  if (n < 2) throw ValidationError("schedule", "fit needs at least two lengths");
  return fit_inverse_length(lengths.subspan(n - take), values.subspan(n - take));
}

std::vector<double> make_schedule(double L_min, double L_max, std::size_t count, bool geometric) {
  if (!(L_min > 0.0) || !(L_max > L_min))
    throw ValidationError("schedule", "need 0 < L_min < L_max");
  if (count < 2) throw ValidationError("schedule.count", "need at least two lengths");
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(count - 1);
    out[i] = geometric ? L_min * std::pow(L_max / L_min, t) : L_min + (L_max - L_min) * t;
  }
  out.front() = L_min;
  out.back() = L_max;
  return out;
}

FiniteSystem build_system(const SweepSpec& spec, double L) {
  FiniteSystem sys;
  sys.wire = spec.wire;
  sys.wire.L = L;
  sys.wire.validate();

  BulkRequest req;
  req.method = spec.bulk.method;
  if (req.method == SpectrumSource::separable) {
    req.cutoff_energy = statmech_cutoff(sys.wire, spec.physics.beta);
  } else {
    req.h = spec.bulk.h;
    req.n_lowest = spec.bulk.n_lowest;
  }
  sys.bulk = spec.cache ? spec.cache->fetch_or_compute(sys.wire, req)
                        : compute_bulk_spectrum(sys.wire, req);

  const std::size_t n = spec.lattice.count_at(L);
  if (n > 0) {
    const double delta = spec.lattice.limit_delta().value_or(0.0);
    sys.surface_levels = graph_spectrum(DefectLattice::build(n, spec.lattice.weights, delta));
  }
  return sys;
}

ThermoSweep run_sweep(const SweepSpec& spec) {
  spec.validate();
  const std::size_t count = spec.schedule.size();
  std::vector<SweepPoint> points(count);
  std::vector<std::exception_ptr> errors(count);

  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(spec.jobs, count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      try {
        points[i] = solve_point(spec, spec.schedule[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    auto work = [&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          points[i] = solve_point(spec, spec.schedule[i]);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    };
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  for (std::size_t i = 0; i < count; ++i)
    if (errors[i]) rethrow_at(errors[i], spec.schedule[i]);

  ThermoSweep out;
  out.schedule = spec.schedule;
  out.delta = spec.lattice.limit_delta();
  out.physics = spec.physics;
  out.d = spec.wire.d;
  out.per_L = std::move(points);

  const auto& pts = out.per_L;
  Extrapolation& ex = out.extrapolated;
  ex.mu = fit_field(pts, [](const SweepPoint& p) { return p.solution.mu; });
  ex.rho_s = fit_field(pts, [](const SweepPoint& p) { return p.solution.rho_s; });
  ex.rho0 = fit_field(pts, [](const SweepPoint& p) { return p.solution.rho0; });
  ex.surface_density =
      fit_field(pts, [](const SweepPoint& p) { return p.solution.surface_density; });
  ex.ground_occupation =
      fit_field(pts, [](const SweepPoint& p) { return p.diagnostics.ground.occupation; });
  ex.first_excited_ratio =
      fit_field(pts, [](const SweepPoint& p) { return p.diagnostics.first_excited.ratio; });

  if (!strictly_decreasing(pts, [](const SweepPoint& p) { return p.diagnostics.ground.ratio; }))
    out.warnings.push_back("ground bulk ratio is not strictly decreasing along the schedule");
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (pts[i].solution.mu < pts[i - 1].solution.mu) {
      out.warnings.push_back("mu_L is not monotone along the schedule");
      break;
    }
  }

  const double beta = spec.physics.beta, d = spec.wire.d, rho = spec.physics.rho;
  const double e0 = bulk_threshold(d);
  const double mu_lim = ex.mu.intercept;
  const double sigma_mu = ex.mu.intercept_error;
  double fit_error = ex.surface_density.intercept_error + ex.rho0.intercept_error;
  // The limit is only usable when the threshold lies outside the mu error bar;
  // rho_exc has a square-root pole there.
  if (mu_lim + sigma_mu < e0) {
    out.limit_defined = true;
    out.rho_exc_value = rho_exc(beta, mu_lim, d);
    if (sigma_mu > 0.0) fit_error += rho_exc(beta, mu_lim + sigma_mu, d) - out.rho_exc_value;
    out.balance_residual = std::abs(ex.surface_density.intercept + ex.rho0.intercept -
                                    (rho - out.rho_exc_value));
    if (out.delta && *out.delta > 0.0) {
      const double delta = *out.delta;
      const double rho_tilde = delta * (rho - out.rho_exc_value);
      out.identity_residual =
          std::abs(ex.rho_s.intercept - (rho_tilde - delta * ex.rho0.intercept));
    }
  } else {
    out.limit_defined = false;
    out.rho_exc_value = kInf;
    out.balance_residual = kInf;
    out.identity_residual = kInf;
    out.warnings.push_back("extrapolated mu " + format_double(mu_lim) + " +- " +
                           format_double(sigma_mu) +
                           " reaches 2 pi^2 / d^2; excited density diverges there");
  }
  out.fit_error = fit_error;
  return out;
}

}  // namespace condensate
