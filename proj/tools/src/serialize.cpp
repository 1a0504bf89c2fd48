#include "condensate_cli/serialize.hpp"

#include <cmath>
#include <sstream>

#include <condensate/fingerprint.hpp>

namespace condensate::cli {

using nlohmann::json;

json number_json(double x) {
  if (std::isfinite(x)) return x;
  return format_double(x);
}

namespace {

json numbers(const std::vector<double>& xs) {
  json a = json::array();
  for (double x : xs) a.push_back(number_json(x));
  return a;
}

std::string num(double x) { return format_double(x); }

}  // namespace

json to_json(const Spectrum& s) {
  json j;
  j["source"] = to_string(s.source);
  j["cutoff"] = number_json(s.cutoff_energy);
  j["h"] = s.mesh_h ? number_json(*s.mesh_h) : json(nullptr);
  j["fingerprint"] = s.fingerprint;
  j["eigenvalues"] = numbers(s.eigenvalues);
  return j;
}

json to_json(const GrandCanonicalSolution& s) {
  json j;
  j["L"] = number_json(s.L);
  j["n_L"] = s.defects;
  j["mu"] = number_json(s.mu);
  j["mu_top"] = number_json(s.mu_top);
  j["mu_gap"] = number_json(s.mu_gap);
  j["rho_s"] = number_json(s.rho_s);
  j["surface_gap"] = number_json(s.surface_gap);
  j["rho0"] = number_json(s.rho0);
  j["surface_density"] = number_json(s.surface_density);
  j["excited_density"] = number_json(s.excited_density);
  j["density"] = number_json(s.density);
  j["density_residual"] = number_json(s.density_residual);
  j["fixed_point_residual"] = number_json(s.fixed_point_residual);
  j["tail_bound"] = number_json(s.tail_bound);
  j["iterations"] = s.iterations;
  j["surface_occupations"] = numbers(s.surface_occupations);
  j["bulk_occupations"] = numbers(s.bulk_occupations);
  const MacroscopicDiagnostics d = macroscopic_occupation_diagnostics(s, s.L);
  j["diagnostics"] = {
      {"ground_occupation", number_json(d.ground.occupation)},
      {"ground_ratio", number_json(d.ground.ratio)},
      {"first_excited_occupation", number_json(d.first_excited.occupation)},
      {"first_excited_ratio", number_json(d.first_excited.ratio)},
      {"lowest_surface_occupation", number_json(d.lowest_surface.occupation)},
      {"lowest_surface_ratio", number_json(d.lowest_surface.ratio)},
      {"total", number_json(d.total)},
  };
  return j;
}

json to_json(const InverseLengthFit& f) {
  return {{"intercept", number_json(f.intercept)},
          {"slope", number_json(f.slope)},
          {"intercept_error", number_json(f.intercept_error)},
          {"rms", number_json(f.rms)},
          {"points", f.points}};
}

json to_json(const ThermoSweep& s) {
  json j;
  j["schedule"] = numbers(s.schedule);
  j["delta"] = s.delta ? number_json(*s.delta) : json(nullptr);
  j["d"] = number_json(s.d);
  j["physics"] = {{"beta", number_json(s.physics.beta)},  {"alpha", number_json(s.physics.alpha)},
                  {"lambda", number_json(s.physics.lambda)}, {"rho", number_json(s.physics.rho)},
                  {"nu", number_json(s.physics.nu)}};
  json rows = json::array();
  for (const auto& p : s.per_L) {
    const auto& sol = p.solution;
    rows.push_back({{"L", number_json(p.L)},
                    {"n_L", p.defects},
                    {"mu", number_json(sol.mu)},
                    {"rho_s", number_json(sol.rho_s)},
                    {"rho0", number_json(sol.rho0)},
                    {"surface_density", number_json(sol.surface_density)},
                    {"excited_density", number_json(sol.excited_density)},
                    {"ground_occupation", number_json(p.diagnostics.ground.occupation)},
                    {"first_excited_ratio", number_json(p.diagnostics.first_excited.ratio)},
                    {"density_residual", number_json(sol.density_residual)},
                    {"fixed_point_residual", number_json(sol.fixed_point_residual)},
                    {"balance_residual", number_json(p.balance_residual)}});
  }
  j["per_L"] = rows;
  const auto& e = s.extrapolated;
  j["extrapolated"] = {{"mu", to_json(e.mu)},
                       {"rho_s", to_json(e.rho_s)},
                       {"rho0", to_json(e.rho0)},
                       {"surface_density", to_json(e.surface_density)},
                       {"ground_occupation", to_json(e.ground_occupation)},
                       {"first_excited_ratio", to_json(e.first_excited_ratio)}};
  j["mu_limit"] = number_json(s.mu_limit());
  j["rho_s_limit"] = number_json(s.rho_s_limit());
  j["rho0_limit"] = number_json(s.rho0_limit());
  j["rho_exc_value"] = number_json(s.rho_exc_value);
  j["limit_defined"] = s.limit_defined;
  j["balance_residual"] = number_json(s.balance_residual);
  j["fit_error"] = number_json(s.fit_error);
  j["identity_residual"] = number_json(s.identity_residual);
  j["warnings"] = s.warnings;
  return j;
}

json to_json(const Verdict& v) {
  json values = json::object();
  for (const auto& [k, x] : v.values) values[k] = number_json(x);
  return {{"name", v.name}, {"passed", v.passed}, {"values", values}, {"notes", v.notes}};
}

json to_json(const CriticalResult& r) {
  json rows = json::array();
  for (const auto& s : r.history)
    rows.push_back({{"step", s.step},
                    {"phase", s.phase},
                    {"rho", number_json(s.rho)},
                    {"rho0_limit", number_json(s.rho0_limit)},
                    {"condensed", s.condensed},
                    {"lo", number_json(s.lo)},
                    {"hi", number_json(s.hi)}});
  return {{"rho_crit", number_json(r.rho_crit)},
          {"lo", number_json(r.lo)},
          {"hi", number_json(r.hi)},
          {"history", rows}};
}

// ---------------------------------------------------------------------------

std::string spectrum_csv(const Spectrum& s) {
  std::ostringstream o;
  o << "# source=" << to_string(s.source) << " cutoff=" << num(s.cutoff_energy);
  if (s.mesh_h) o << " h=" << num(*s.mesh_h);
  o << " fingerprint=" << s.fingerprint << "\n";
  o << "index,eigenvalue\n";
  for (std::size_t i = 0; i < s.eigenvalues.size(); ++i)
    o << i << "," << num(s.eigenvalues[i]) << "\n";
  return o.str();
}

std::string graph_csv(const std::vector<double>& eigenvalues) {
  std::ostringstream o;
  o << "index,eigenvalue\n";
  for (std::size_t i = 0; i < eigenvalues.size(); ++i) o << i << "," << num(eigenvalues[i]) << "\n";
  return o.str();
}

std::string solution_csv(const GrandCanonicalSolution& s) {
  const MacroscopicDiagnostics d = macroscopic_occupation_diagnostics(s, s.L);
  std::ostringstream o;
  o << "field,value\n";
  auto row = [&](const char* k, double x) { o << k << "," << num(x) << "\n"; };
  row("L", s.L);
  o << "n_L," << s.defects << "\n";
  row("mu", s.mu);
  row("mu_gap", s.mu_gap);
  row("rho_s", s.rho_s);
  row("rho0", s.rho0);
  row("surface_density", s.surface_density);
  row("excited_density", s.excited_density);
  row("density", s.density);
  row("density_residual", s.density_residual);
  row("fixed_point_residual", s.fixed_point_residual);
  row("tail_bound", s.tail_bound);
  row("ground_occupation", d.ground.occupation);
  row("first_excited_ratio", d.first_excited.ratio);
  return o.str();
}

std::string sweep_csv(const ThermoSweep& s) {
  std::ostringstream o;
  o << "# mu_limit=" << num(s.mu_limit()) << " rho_s_limit=" << num(s.rho_s_limit())
    << " rho0_limit=" << num(s.rho0_limit()) << " rho_exc=" << num(s.rho_exc_value)
    << " balance_residual=" << num(s.balance_residual) << " fit_error=" << num(s.fit_error)
    << "\n";
  o << kSweepColumns << "\n";
  for (const auto& p : s.per_L)
    o << num(p.L) << "," << p.defects << "," << num(p.solution.mu) << ","
      << num(p.solution.rho_s) << "," << num(p.solution.rho0) << ","
      << num(p.diagnostics.ground.occupation) << "," << num(p.balance_residual) << "\n";
  return o.str();
}

std::string verdicts_csv(const VerificationReport& r) {
  std::ostringstream o;
  o << "verdict,passed,key,value\n";
  for (const auto& v : r.verdicts) {
    o << v.name << "," << (v.passed ? "true" : "false") << ",,\n";
    for (const auto& [k, x] : v.values)
      o << v.name << "," << (v.passed ? "true" : "false") << "," << k << "," << num(x) << "\n";
  }
  return o.str();
}

std::string critical_csv(const CriticalResult& r) {
  std::ostringstream o;
  o << "# rho_crit=" << num(r.rho_crit) << " lo=" << num(r.lo) << " hi=" << num(r.hi) << "\n";
  o << "step,phase,rho,rho0_limit,condensed,lo,hi\n";
  for (const auto& s : r.history)
    o << s.step << "," << s.phase << "," << num(s.rho) << "," << num(s.rho0_limit) << ","
      << (s.condensed ? "true" : "false") << "," << num(s.lo) << "," << num(s.hi) << "\n";
  return o.str();
}

std::string render_json(const std::string& command, const RunConfig& config, json payload) {
  json doc;
  doc["tool_version"] = kToolVersion;
  doc["config_fingerprint"] = config.fingerprint;
  doc["command"] = command;
  doc["result"] = std::move(payload);
  return doc.dump(2) + "\n";
}

std::string render_csv(const std::string& command, const RunConfig& config,
                       const std::string& body) {
  return "# tool_version=" + std::string(kToolVersion) +
         " config_fingerprint=" + config.fingerprint + " command=" + command + "\n" + body;
}

}  // namespace condensate::cli
