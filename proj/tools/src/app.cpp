#include "condensate_cli/app.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include <condensate/error.hpp>
#include <condensate/graph_spectrum.hpp>
#include <condensate/spectrum_cache.hpp>

#include "condensate_cli/config.hpp"
#include "condensate_cli/serialize.hpp"

namespace condensate::cli {

using nlohmann::json;

namespace {

struct Flags {
  std::string config_path;
  std::optional<std::string> output;
  std::optional<std::string> format;
  std::optional<std::string> cache_dir;
  std::optional<unsigned> jobs;
  std::string which = "bulk";
  std::optional<double> L;
  std::optional<double> at_mu;
};

void report(std::ostream& err, const char* kind, const std::string& message,
            const std::string* field = nullptr) {
  json e{{"error", kind}, {"message", message}};
  if (field) e["field"] = *field;
  err << e.dump() << "\n";
}

class Session {
 public:
  Session(const Flags& flags, std::ostream& out, std::ostream& err)
      : flags_(flags), out_(out), err_(err), config_(load_config(flags.config_path)) {
    if (flags.jobs) {
      if (*flags.jobs < 1) throw ValidationError("jobs", "must be at least 1");
      config_.jobs = *flags.jobs;
    }
    format_ = flags.format ? output_format_from_string(*flags.format)
                           : config_.output_format.value_or(OutputFormat::json);
    path_ = flags.output ? flags.output : config_.output_path;
  }

  const RunConfig& config() const { return config_; }

  std::optional<std::string> cache_dir() const {
    if (flags_.cache_dir) return flags_.cache_dir;
    if (const char* env = std::getenv("CONDENSATE_LAB_CACHE"); env && *env) return std::string(env);
    return config_.cache_dir;
  }

  SpectrumCache* cache() {
    if (!cache_) {
      const auto dir = cache_dir();
      if (!dir) return nullptr;
      cache_ = std::make_unique<SpectrumCache>(
          *dir, [this](const std::string& w) { report(err_, "warning", w); });
    }
    return cache_.get();
  }

  void emit(const std::string& command, const json& payload, const std::string& csv) {
    const std::string text = format_ == OutputFormat::json
                                 ? render_json(command, config_, payload)
                                 : render_csv(command, config_, csv);
    if (path_) {
      std::ofstream f(*path_, std::ios::binary | std::ios::trunc);
      if (!f) throw ValidationError("output.path", "cannot write '" + *path_ + "'");
      f << text;
    } else {
      out_ << text;
    }
  }

  SweepSpec sweep_spec() {
    SweepSpec s = config_.sweep_spec();
    s.cache = cache();
    return s;
  }

 private:
  const Flags& flags_;
  std::ostream& out_;
  std::ostream& err_;
  RunConfig config_;
  OutputFormat format_ = OutputFormat::json;
  std::optional<std::string> path_;
  std::unique_ptr<SpectrumCache> cache_;
};

WireParams wire_at(const RunConfig& c, double L) {
  WireParams w = c.wire;
  w.L = L;
  w.validate();
  return w;
}

int cmd_spectrum(Session& s, const Flags& f) {
  const RunConfig& c = s.config();
  const double L = f.L.value_or(c.wire.L);
  if (f.which == "graph") {
    const std::size_t n = c.defects_at(L);
    if (n == 0) throw ValidationError("lattice.growth", "no defects: growth is 'none'");
    const DefectLattice lattice = DefectLattice::build(n, c.lattice.weights);
    const SymmetricTridiagonal m = build_path_laplacian(lattice);
    const std::vector<double> eig = eigenvalues_tridiagonal(m);
    json j{{"count", n},
           {"weights", lattice.weights},
           {"eigenvalues", json::array()},
           {"zero_mode_residual", number_json(zero_mode_residual(m))},
           {"trace", number_json(m.trace())},
           {"fingerprint", m.fingerprint()}};
    for (double x : eig) j["eigenvalues"].push_back(number_json(x));
    s.emit("spectrum", j, graph_csv(eig));
    return kExitOk;
  }
  if (f.which != "bulk") throw ValidationError("which", "must be 'bulk' or 'graph'");
  const WireParams wire = wire_at(c, L);
  BulkRequest req;
  req.method = c.bulk.method;
  req.cutoff_energy = c.bulk_cutoff.value_or(statmech_cutoff(wire, c.physics.beta));
  req.h = c.bulk.h;
  req.n_lowest = c.bulk.n_lowest;
  SpectrumCache* cache = s.cache();
  const Spectrum spec = cache ? cache->fetch_or_compute(wire, req) : compute_bulk_spectrum(wire, req);
  s.emit("spectrum", to_json(spec), spectrum_csv(spec));
  return kExitOk;
}

int cmd_solve(Session& s, const Flags& f) {
  const RunConfig& c = s.config();
  SweepSpec spec = s.sweep_spec();
  const double L = f.L.value_or(c.wire.L);
  FiniteSystem system = build_system(spec, L);
  if (c.lattice_count) {
    const DefectLattice lattice = DefectLattice::build(*c.lattice_count, c.lattice.weights);
    system.surface_levels = graph_spectrum(lattice);
  }
  const GrandCanonicalSolution sol =
      f.at_mu ? evaluate_at_mu(*f.at_mu, system, c.physics, c.tolerances)
              : solve_mu(c.physics.rho, system, c.physics, c.tolerances);
  s.emit("solve", to_json(sol), solution_csv(sol));
  return kExitOk;
}

int cmd_sweep(Session& s) {
  const ThermoSweep sweep = run_sweep(s.sweep_spec());
  s.emit("sweep", to_json(sweep), sweep_csv(sweep));
  return kExitOk;
}

int cmd_verify(Session& s) {
  const VerificationReport r = run_verification(s.sweep_spec(), s.config().verify);
  json verdicts = json::array();
  for (const auto& v : r.verdicts) verdicts.push_back(to_json(v));
  s.emit("verify", {{"all_passed", r.all_passed()}, {"verdicts", verdicts}}, verdicts_csv(r));
  return r.all_passed() ? kExitOk : kExitVerdictFailure;
}

int cmd_critical(Session& s) {
  const auto& v = s.config().verify;
  const CriticalResult r =
      find_critical_density(s.sweep_spec(), v.critical_rho_lo, v.critical_rho_hi, v.critical);
  s.emit("critical", to_json(r), critical_csv(r));
  return kExitOk;
}

int cmd_cache_clear(Session& s, std::ostream& out) {
  SpectrumCache* cache = s.cache();
  if (!cache) throw ValidationError("cache_dir", "no cache directory configured");
  const std::size_t removed = cache->clear();
  out << json{{"removed", removed}, {"cache_dir", cache->directory().string()}}.dump() << "\n";
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"condensate-lab: electron-pair condensate on a wire with surface defects"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  Flags f;
  auto common = [&f](CLI::App* sub) {
    sub->add_option("--config", f.config_path, "JSON run configuration")->required();
    sub->add_option("--output", f.output, "write results here instead of stdout");
    sub->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--cache-dir", f.cache_dir, "spectrum cache directory");
    sub->add_option("--jobs", f.jobs, "parallel per-L solves");
  };

  CLI::App* spectrum = app.add_subcommand("spectrum", "bulk or graph eigenvalues");
  common(spectrum);
  spectrum->add_option("--which", f.which, "bulk or graph")->check(CLI::IsMember({"bulk", "graph"}));
  spectrum->add_option("--L", f.L, "wire length (default: wire.L)");

  CLI::App* solve = app.add_subcommand("solve", "grand-canonical solve at one length");
  common(solve);
  solve->add_option("--L", f.L, "wire length (default: wire.L)");
  solve->add_option("--at-mu", f.at_mu, "evaluate at this chemical potential instead");

  CLI::App* sweep = app.add_subcommand("sweep", "finite-size sweep and extrapolation");
  common(sweep);
  CLI::App* verify = app.add_subcommand("verify", "scripted condensation verdicts");
  common(verify);
  CLI::App* critical = app.add_subcommand("critical", "critical pair density by bisection");
  common(critical);
  CLI::App* cache_clear = app.add_subcommand("cache-clear", "remove cached spectra");
  common(cache_clear);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    const std::string field = "cli";
    report(err, "config_invalid", e.what(), &field);
    return kExitConfigInvalid;
  }

  try {
    Session s(f, out, err);
    if (spectrum->parsed()) return cmd_spectrum(s, f);
    if (solve->parsed()) return cmd_solve(s, f);
    if (sweep->parsed()) return cmd_sweep(s);
    if (verify->parsed()) return cmd_verify(s);
    if (critical->parsed()) return cmd_critical(s);
    if (cache_clear->parsed()) return cmd_cache_clear(s, out);
  } catch (const ValidationError& e) {
    report(err, "config_invalid", e.what(), &e.field());
    return kExitConfigInvalid;
  } catch (const std::exception& e) {
    report(err, "solver_failure", e.what());
    return kExitSolverFailure;
  }
  return kExitConfigInvalid;
}

}  // namespace condensate::cli
