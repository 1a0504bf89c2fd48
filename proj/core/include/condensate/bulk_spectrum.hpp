#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace condensate {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

enum class OuterBoundary { dirichlet, neumann };

std::string to_string(OuterBoundary bc);
OuterBoundary outer_boundary_from_string(const std::string& name);

/// Geometry of the pair on a finite wire [0, L]: d is the pair extent set by
/// the hard-wall binding potential.
struct WireParams {
  double d = 1.0;
  double L = 10.0;
  OuterBoundary outer_bc = OuterBoundary::dirichlet;

  void validate() const;
};

/// 2 pi^2 / d^2: infimum of the bulk spectrum on the infinite wire.
double bulk_threshold(double d) noexcept;

enum class SpectrumSource { separable, fd2d };

std::string to_string(SpectrumSource source);
SpectrumSource spectrum_source_from_string(const std::string& name);

struct Spectrum {
  std::vector<double> eigenvalues;  // ascending, with multiplicity
  SpectrumSource source = SpectrumSource::separable;
  double cutoff_energy = 0.0;
  std::optional<double> mesh_h;
  std::string fingerprint;

  double ground() const { return eigenvalues.front(); }
  std::size_t size() const noexcept { return eigenvalues.size(); }
};

// ---------------------------------------------------------------------------
// Separable model
//
// Rotating to relative/center-of-mass coordinates turns the antisymmetric
// hard-wall strip into a product: a Dirichlet interval of width d/sqrt(2) in
// the relative coordinate (levels 2 pi^2 k^2 / d^2, k >= 1) and an interval
// of length sqrt(2) L for the center of mass (pi^2 m^2 / (2 L^2)). The
// corner coupling at the wire ends is dropped, an O(d/L) error.
// ---------------------------------------------------------------------------

/// E_{k,m} for the separable model (m >= 1 Dirichlet, m >= 0 Neumann).
double separable_level(double d, double L, int k, int m) noexcept;

/// Lowest separable level for the wire.
double separable_ground(const WireParams& wire);

/// All separable levels <= cutoff_energy, ascending. Throws DomainError when
/// no level lies below the cutoff.
Spectrum separable_spectrum(const WireParams& wire, double cutoff_energy);

/// Number of separable levels below the cutoff, counted by brute force over
/// the (k, m) lattice. Kept separate from separable_spectrum for checks.
std::size_t separable_count(const WireParams& wire, double cutoff_energy);

/// Cutoff used by the statistical-mechanics sums: high enough above the
/// lowest level that the Bose occupation of any omitted level, and the
/// summed tail, is negligible for every mu below the bulk ground state.
double statmech_cutoff(const WireParams& wire, double beta);

// ---------------------------------------------------------------------------
// Finite-difference oracle
// ---------------------------------------------------------------------------

struct Fd2dOptions {
  std::size_t dense_limit = 900;   // unknowns up to which a dense solve is used
  double tolerance = 1e-11;        // relative Ritz residual
  int max_iterations = 4000;
  std::size_t extra_vectors = 8;   // guard vectors in the subspace iteration
  unsigned seed = 20240611u;
};

/// Unknowns of the five-point grid on the half-domain
/// {0 <= y < x <= L, x - y <= d} at spacing h.
std::size_t fd2d_unknowns(const WireParams& wire, double h);

/// Lowest n_lowest eigenvalues of the five-point Laplacian on the half-domain,
/// Dirichlet on x = y and x - y = d, outer_bc on y = 0 and x = L.
Spectrum fd2d_spectrum(const WireParams& wire, double h, std::size_t n_lowest,
                       const Fd2dOptions& options = {});

struct RichardsonResult {
  std::vector<double> mesh;
  std::vector<double> ground;   // raw fd2d ground value per mesh
  double extrapolated = 0.0;
};

/// Ground value extrapolated to h -> 0 assuming an even expansion in h.
RichardsonResult richardson_ground(const WireParams& wire, std::span<const double> mesh,
                                   const Fd2dOptions& options = {});

/// Polynomial extrapolation in h^2 through all (h, value) pairs, evaluated at 0.
double richardson_extrapolate(std::span<const double> mesh, std::span<const double> values);

}  // namespace condensate
