#pragma once

#include <string>

#include <json.hpp>

#include <condensate/bulk_spectrum.hpp>
#include <condensate/statmech.hpp>
#include <condensate/thermo.hpp>

#include "condensate_cli/config.hpp"

namespace condensate::cli {

inline constexpr const char* kToolVersion = CONDENSATE_VERSION;

// Sweep CSV columns, fixed.
inline constexpr const char* kSweepColumns =
    "L,n_L,mu,rho_s,rho0,ground_occupation,balance_residual";

/// Number as JSON; non-finite values become the strings "nan", "inf", "-inf"
/// so nothing is silently turned into null.
nlohmann::json number_json(double x);

nlohmann::json to_json(const Spectrum& s);
nlohmann::json to_json(const GrandCanonicalSolution& s);
nlohmann::json to_json(const InverseLengthFit& f);
nlohmann::json to_json(const ThermoSweep& s);
nlohmann::json to_json(const Verdict& v);
nlohmann::json to_json(const CriticalResult& r);

std::string spectrum_csv(const Spectrum& s);
std::string graph_csv(const std::vector<double>& eigenvalues);
std::string solution_csv(const GrandCanonicalSolution& s);
std::string sweep_csv(const ThermoSweep& s);
std::string verdicts_csv(const VerificationReport& r);
std::string critical_csv(const CriticalResult& r);

/// Wraps a payload with the provenance header every emitted file carries.
std::string render_json(const std::string& command, const RunConfig& config,
                        nlohmann::json payload);
std::string render_csv(const std::string& command, const RunConfig& config,
                       const std::string& body);

}  // namespace condensate::cli
