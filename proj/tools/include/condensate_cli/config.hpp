#pragma once

#include <optional>
#include <string>
#include <vector>

#include <condensate/bulk_spectrum.hpp>
#include <condensate/statmech.hpp>
#include <condensate/thermo.hpp>

namespace condensate::cli {

enum class OutputFormat { csv, json };

std::string to_string(OutputFormat f);
OutputFormat output_format_from_string(const std::string& name);

// Parsed form of the JSON run configuration:
//
// {
//   "wire":       {"d": 1, "L": 10, "outer_bc": "dirichlet"},
//   "lattice":    {"growth": "linear", "delta": 1, "count": 3,
//                  "weights": {"kind": "constant", "value": 1}},
//   "physics":    {"beta": 1, "alpha": 0, "lambda": 0, "rho": 1, "nu": 2},
//   "bulk":       {"method": "separable", "cutoff": 25, "h": 0.03125, "n_lowest": 64},
//   "schedule":   [25, 50, 100, 200]  |  {"L_min": 25, "L_max": 400, "count": 8,
//                                        "spacing": "geometric"},
//   "tolerances": {"density_rel": 1e-10, ...},
//   "critical":   {"rho_lo": 1, "rho_hi": 128, "eps_cond": 1e-3, "rel_width": 1e-2},
//   "verify":     {"tolerance": 1e-3, "stability_rel": 0.1, "corollary_lambdas": [...]},
//   "output":     {"format": "csv", "path": "out.csv"},
//   "cache_dir":  "cache",
//   "jobs":       4
// }
//
// weights.kind is one of constant{value}, explicit{values}, reciprocal{scale,
// offset, power}, random{low, high, seed}. lattice.count pins n(L) for the
// spectrum and solve commands; sweeps always use the growth rule.
struct RunConfig {
  WireParams wire;
  LatticeRule lattice;
  std::optional<std::size_t> lattice_count;
  PhysicalParams physics;
  BulkOptions bulk;
  std::optional<double> bulk_cutoff;
  std::vector<double> schedule;
  SolverTolerances tolerances;
  VerifyOptions verify;  // also carries the critical-density bracket
  std::optional<OutputFormat> output_format;
  std::optional<std::string> output_path;
  std::optional<std::string> cache_dir;
  unsigned jobs = 1;

  std::string fingerprint;  // FNV-1a of the canonical JSON text

  /// Defect count at length L: the pinned count if given, else the rule.
  std::size_t defects_at(double L) const;
  SweepSpec sweep_spec() const;
};

/// Parses and validates. Throws ValidationError naming the dotted field.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

}  // namespace condensate::cli
