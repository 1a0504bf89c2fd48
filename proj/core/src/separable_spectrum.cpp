#include <algorithm>
#include <cmath>

#include "condensate/bulk_spectrum.hpp"
#include "condensate/error.hpp"
#include "condensate/fingerprint.hpp"

namespace condensate {

std::string to_string(OuterBoundary bc) {
  return bc == OuterBoundary::dirichlet ? "dirichlet" : "neumann";
}

OuterBoundary outer_boundary_from_string(const std::string& name) {
  if (name == "dirichlet") return OuterBoundary::dirichlet;
  if (name == "neumann") return OuterBoundary::neumann;
  throw ValidationError("wire.outer_bc", "expected 'dirichlet' or 'neumann', got '" + name + "'");
}

std::string to_string(SpectrumSource source) {
  return source == SpectrumSource::separable ? "separable" : "fd2d";
}

SpectrumSource spectrum_source_from_string(const std::string& name) {
  if (name == "separable") return SpectrumSource::separable;
  if (name == "fd2d") return SpectrumSource::fd2d;
  throw ValidationError("bulk.method", "expected 'separable' or 'fd2d', got '" + name + "'");
}

void WireParams::validate() const {
  if (!(d > 0.0) || !std::isfinite(d)) throw ValidationError("wire.d", "d must be positive");
  if (!(L > 0.0) || !std::isfinite(L)) throw ValidationError("wire.L", "L must be positive");
  if (!(d < L)) throw ValidationError("wire.d", "pair extent d must be smaller than L");
}

double bulk_threshold(double d) noexcept { return 2.0 * kPi * kPi / (d * d); }

double separable_level(double d, double L, int k, int m) noexcept {
  const double rel = 2.0 * kPi * kPi * k * k / (d * d);
  const double com = kPi * kPi * static_cast<double>(m) * m / (2.0 * L * L);
  return rel + com;
}

namespace {
int first_com_mode(OuterBoundary bc) { return bc == OuterBoundary::dirichlet ? 1 : 0; }
}  // namespace

double separable_ground(const WireParams& wire) {
  wire.validate();
  return separable_level(wire.d, wire.L, 1, first_com_mode(wire.outer_bc));
}

Spectrum separable_spectrum(const WireParams& wire, double cutoff_energy) {
  wire.validate();
  if (!std::isfinite(cutoff_energy))
    throw ValidationError("bulk.cutoff", "cutoff must be finite");
  const int m0 = first_com_mode(wire.outer_bc);
  Spectrum s;
  s.source = SpectrumSource::separable;
  s.cutoff_energy = cutoff_energy;
  for (int k = 1; bulk_threshold(wire.d) * k * k <= cutoff_energy; ++k) {
    for (int m = m0;; ++m) {
      const double e = separable_level(wire.d, wire.L, k, m);
      if (e > cutoff_energy) break;
      s.eigenvalues.push_back(e);
    }
  }
  if (s.eigenvalues.empty())
    throw DomainError("separable spectrum is empty: cutoff " + format_double(cutoff_energy) +
                      " is below the ground level " +
                      format_double(separable_ground(wire)));
  std::sort(s.eigenvalues.begin(), s.eigenvalues.end());
  s.fingerprint = Fingerprint{}
                      .add("separable")
                      .add(wire.d)
                      .add(wire.L)
                      .add(to_string(wire.outer_bc))
                      .add(cutoff_energy)
                      .hex();
  return s;
}

std::size_t separable_count(const WireParams& wire, double cutoff_energy) {
  wire.validate();
  const int m0 = first_com_mode(wire.outer_bc);
  std::size_t count = 0;
  // Loose rectangular bounds on (k, m), then test every lattice point.
  const int k_max = static_cast<int>(std::sqrt(std::max(cutoff_energy, 0.0)) * wire.d /
                                     (std::sqrt(2.0) * kPi)) + 2;
  const int m_max = static_cast<int>(std::sqrt(std::max(cutoff_energy, 0.0)) *
                                     std::sqrt(2.0) * wire.L / kPi) + 2;
  for (int k = 1; k <= k_max; ++k)
    for (int m = m0; m <= m_max; ++m)
      if (separable_level(wire.d, wire.L, k, m) <= cutoff_energy) ++count;
  return count;
}

double statmech_cutoff(const WireParams& wire, double beta) {
  if (!(beta > 0.0)) throw ValidationError("physics.beta", "beta must be positive");
  // e^{-40} ~ 4e-18 per omitted level; the log term absorbs the O(L) count
  // of levels per unit energy near the cutoff.
  const double margin = 40.0 + std::log1p(wire.L);
  return separable_ground(wire) + margin / beta;
}

}  // namespace condensate
