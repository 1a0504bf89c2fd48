#include "condensate_cli/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

#include <condensate/error.hpp>
#include <condensate/fingerprint.hpp>

namespace condensate::cli {

using nlohmann::json;

namespace {

std::string join(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

void reject_unknown(const json& obj, const std::string& prefix,
                    std::initializer_list<const char*> allowed) {
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ValidationError(join(prefix, key), "unknown key");
  }
}

const json& section(const json& root, const char* key) {
  static const json empty = json::object();
  if (!root.contains(key)) return empty;
  const json& s = root.at(key);
  if (!s.is_object()) throw ValidationError(key, "must be an object");
  return s;
}

double number(const json& obj, const std::string& prefix, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) throw ValidationError(join(prefix, key), "must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ValidationError(join(prefix, key), "must be finite");
  return x;
}

std::uint64_t unsigned_int(const json& obj, const std::string& prefix, const char* key,
                           std::uint64_t fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
    throw ValidationError(join(prefix, key), "must be a nonnegative integer");
  return v.get<std::uint64_t>();
}

std::string text(const json& obj, const std::string& prefix, const char* key,
                 const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_string()) throw ValidationError(join(prefix, key), "must be a string");
  return v.get<std::string>();
}

std::vector<double> number_list(const json& v, const std::string& field) {
  if (!v.is_array()) throw ValidationError(field, "must be an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw ValidationError(field, "must be an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

WeightSpec parse_weights(const json& w) {
  if (!w.is_object()) throw ValidationError("lattice.weights", "must be an object");
  const std::string p = "lattice.weights";
  const std::string kind = text(w, p, "kind", "constant");
  WeightSpec spec;
  if (kind == "constant") {
    reject_unknown(w, p, {"kind", "value"});
    spec = WeightSpec::constant_weight(number(w, p, "value", 1.0));
  } else if (kind == "explicit") {
    reject_unknown(w, p, {"kind", "values"});
    if (!w.contains("values")) throw ValidationError(p + ".values", "required for explicit weights");
    spec = WeightSpec::explicit_weights(number_list(w.at("values"), p + ".values"));
  } else if (kind == "reciprocal") {
    reject_unknown(w, p, {"kind", "scale", "offset", "power"});
    spec = WeightSpec::reciprocal(number(w, p, "scale", 1.0), number(w, p, "offset", 1.0),
                                  number(w, p, "power", 1.0));
  } else if (kind == "random") {
    reject_unknown(w, p, {"kind", "low", "high", "seed"});
    if (!w.contains("seed")) throw ValidationError(p + ".seed", "random weights need a seed");
    spec = WeightSpec::random(number(w, p, "low", 0.5), number(w, p, "high", 1.5),
                              unsigned_int(w, p, "seed", 0));
  } else {
    throw ValidationError(p + ".kind", "unknown weight kind '" + kind + "'");
  }
  return spec;
}

std::vector<double> parse_schedule(const json& s) {
  if (s.is_array()) {
    std::vector<double> out = number_list(s, "schedule");
    if (out.empty()) throw ValidationError("schedule", "must not be empty");
    return out;
  }
  if (!s.is_object()) throw ValidationError("schedule", "must be a list or an object");
  reject_unknown(s, "schedule", {"L_min", "L_max", "count", "spacing"});
  const std::string spacing = text(s, "schedule", "spacing", "geometric");
  if (spacing != "geometric" && spacing != "linear")
    throw ValidationError("schedule.spacing", "must be 'linear' or 'geometric'");
  const double lo = number(s, "schedule", "L_min", 25.0);
  const double hi = number(s, "schedule", "L_max", 400.0);
  const auto count = unsigned_int(s, "schedule", "count", 8);
  if (!(lo > 0.0)) throw ValidationError("schedule.L_min", "must be positive");
  if (!(hi > lo)) throw ValidationError("schedule.L_max", "must exceed L_min");
  if (count < 2) throw ValidationError("schedule.count", "need at least two lengths");
  return make_schedule(lo, hi, count, spacing == "geometric");
}

}  // namespace

std::string to_string(OutputFormat f) { return f == OutputFormat::csv ? "csv" : "json"; }

OutputFormat output_format_from_string(const std::string& name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "json") return OutputFormat::json;
  throw ValidationError("output.format", "must be 'csv' or 'json'");
}

std::size_t RunConfig::defects_at(double L) const {
  return lattice_count ? *lattice_count : lattice.count_at(L);
}

SweepSpec RunConfig::sweep_spec() const {
  SweepSpec s;
  s.schedule = schedule;
  s.wire = wire;
  s.lattice = lattice;
  s.bulk = bulk;
  s.physics = physics;
  s.tolerances = tolerances;
  s.jobs = jobs;
  return s;
}

RunConfig parse_config(const std::string& body) {
  json root;
  try {
    root = json::parse(body);
  } catch (const json::parse_error& e) {
    throw ValidationError("config", std::string("not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ValidationError("config", "top level must be an object");
  reject_unknown(root, "", {"wire", "lattice", "physics", "bulk", "schedule", "tolerances",
                            "critical", "verify", "output", "cache_dir", "jobs"});

  RunConfig c;
  c.fingerprint = fingerprint_hex(root.dump());

  const json& w = section(root, "wire");
  reject_unknown(w, "wire", {"d", "L", "outer_bc"});
  c.wire.d = number(w, "wire", "d", 1.0);
  c.wire.L = number(w, "wire", "L", 10.0);
  c.wire.outer_bc = outer_boundary_from_string(text(w, "wire", "outer_bc", "dirichlet"));
  c.wire.validate();

  const json& l = section(root, "lattice");
  reject_unknown(l, "lattice", {"growth", "delta", "count", "weights"});
  c.lattice.growth = growth_from_string(text(l, "lattice", "growth", "linear"));
  c.lattice.delta = number(l, "lattice", "delta", 1.0);
  if (l.contains("weights")) c.lattice.weights = parse_weights(l.at("weights"));
  if (l.contains("count")) {
    const auto n = unsigned_int(l, "lattice", "count", 1);
    if (n < 1) throw ValidationError("lattice.count", "must be at least 1");
    c.lattice_count = static_cast<std::size_t>(n);
  }
  c.lattice.validate();

  const json& p = section(root, "physics");
  reject_unknown(p, "physics", {"beta", "alpha", "lambda", "rho", "nu"});
  c.physics.beta = number(p, "physics", "beta", 1.0);
  c.physics.alpha = number(p, "physics", "alpha", 0.0);
  c.physics.lambda = number(p, "physics", "lambda", 0.0);
  c.physics.rho = number(p, "physics", "rho", 1.0);
  c.physics.nu = number(p, "physics", "nu", 2.0);
  c.physics.validate();

  const json& b = section(root, "bulk");
  reject_unknown(b, "bulk", {"method", "cutoff", "h", "n_lowest"});
  c.bulk.method = spectrum_source_from_string(text(b, "bulk", "method", "separable"));
  if (b.contains("cutoff")) {
    c.bulk_cutoff = number(b, "bulk", "cutoff", 0.0);
    if (!(*c.bulk_cutoff > bulk_threshold(c.wire.d)))
      throw ValidationError("bulk.cutoff", "must exceed 2 pi^2 / d^2");
  }
  c.bulk.h = number(b, "bulk", "h", c.bulk.h);
  if (!(c.bulk.h > 0.0)) throw ValidationError("bulk.h", "must be positive");
  c.bulk.n_lowest = unsigned_int(b, "bulk", "n_lowest", c.bulk.n_lowest);
  if (c.bulk.n_lowest < 1) throw ValidationError("bulk.n_lowest", "must be at least 1");

  c.schedule = root.contains("schedule") ? parse_schedule(root.at("schedule"))
                                         : make_schedule(25.0, 400.0, 8, true);
  for (std::size_t i = 0; i < c.schedule.size(); ++i) {
    if (!(c.schedule[i] > c.wire.d))
      throw ValidationError("schedule", "every length must exceed wire.d");
    if (i > 0 && !(c.schedule[i] > c.schedule[i - 1]))
      throw ValidationError("schedule", "lengths must be strictly increasing");
  }

  const json& t = section(root, "tolerances");
  reject_unknown(t, "tolerances", {"density_rel", "fixed_point_abs", "mu_abs", "tail_rel",
                                   "max_bisection", "max_bracket_doublings",
                                   "max_fixed_point_iterations"});
  auto& tol = c.tolerances;
  tol.density_rel = number(t, "tolerances", "density_rel", tol.density_rel);
  tol.fixed_point_abs = number(t, "tolerances", "fixed_point_abs", tol.fixed_point_abs);
  tol.mu_abs = number(t, "tolerances", "mu_abs", tol.mu_abs);
  tol.tail_rel = number(t, "tolerances", "tail_rel", tol.tail_rel);
  tol.max_bisection = static_cast<int>(unsigned_int(t, "tolerances", "max_bisection", tol.max_bisection));
  tol.max_bracket_doublings = static_cast<int>(
      unsigned_int(t, "tolerances", "max_bracket_doublings", tol.max_bracket_doublings));
  tol.max_fixed_point_iterations = static_cast<int>(
      unsigned_int(t, "tolerances", "max_fixed_point_iterations", tol.max_fixed_point_iterations));
  for (const char* k : {"density_rel", "fixed_point_abs", "mu_abs", "tail_rel"})
    if (t.contains(k) && !(t.at(k).get<double>() > 0.0))
      throw ValidationError(std::string("tolerances.") + k, "must be positive");

  const json& cr = section(root, "critical");
  reject_unknown(cr, "critical", {"rho_lo", "rho_hi", "eps_cond", "rel_width", "max_steps"});
  auto& v = c.verify;
  v.critical_rho_lo = number(cr, "critical", "rho_lo", v.critical_rho_lo);
  v.critical_rho_hi = number(cr, "critical", "rho_hi", v.critical_rho_hi);
  v.critical.eps_cond = number(cr, "critical", "eps_cond", v.critical.eps_cond);
  v.critical.rel_width = number(cr, "critical", "rel_width", v.critical.rel_width);
  v.critical.max_steps =
      static_cast<int>(unsigned_int(cr, "critical", "max_steps", v.critical.max_steps));
  if (!(v.critical_rho_lo > 0.0)) throw ValidationError("critical.rho_lo", "must be positive");
  if (!(v.critical_rho_hi > v.critical_rho_lo))
    throw ValidationError("critical.rho_hi", "must exceed rho_lo");
  if (!(v.critical.eps_cond > 0.0)) throw ValidationError("critical.eps_cond", "must be positive");
  if (!(v.critical.rel_width > 0.0))
    throw ValidationError("critical.rel_width", "must be positive");

  const json& ve = section(root, "verify");
  reject_unknown(ve, "verify", {"tolerance", "stability_rel", "corollary_lambdas"});
  v.tolerance = number(ve, "verify", "tolerance", v.tolerance);
  v.stability_rel = number(ve, "verify", "stability_rel", v.stability_rel);
  if (ve.contains("corollary_lambdas")) {
    v.corollary_lambdas = number_list(ve.at("corollary_lambdas"), "verify.corollary_lambdas");
    for (double x : v.corollary_lambdas)
      if (!(x > 0.0)) throw ValidationError("verify.corollary_lambdas", "must be positive");
  }
  if (!(v.tolerance > 0.0)) throw ValidationError("verify.tolerance", "must be positive");

  const json& o = section(root, "output");
  reject_unknown(o, "output", {"format", "path"});
  if (o.contains("format")) c.output_format = output_format_from_string(text(o, "output", "format", ""));
  if (o.contains("path")) c.output_path = text(o, "output", "path", "");

  if (root.contains("cache_dir")) c.cache_dir = text(root, "", "cache_dir", "");
  c.jobs = static_cast<unsigned>(unsigned_int(root, "", "jobs", 1));
  if (c.jobs < 1) throw ValidationError("jobs", "must be at least 1");
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config", "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace condensate::cli
