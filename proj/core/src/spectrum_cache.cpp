#include "condensate/spectrum_cache.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "condensate/error.hpp"
#include "condensate/fingerprint.hpp"

namespace condensate {

using nlohmann::json;

std::string BulkRequest::fingerprint(const WireParams& wire) const {
  Fingerprint fp;
  fp.add(to_string(method)).add(wire.d).add(wire.L).add(to_string(wire.outer_bc));
  if (method == SpectrumSource::separable)
    fp.add(cutoff_energy);
  else
    fp.add(h).add(static_cast<std::uint64_t>(n_lowest));
  return fp.hex();
}

Spectrum compute_bulk_spectrum(const WireParams& wire, const BulkRequest& request) {
  if (request.method == SpectrumSource::separable)
    return separable_spectrum(wire, request.cutoff_energy);
  return fd2d_spectrum(wire, request.h, request.n_lowest);
}

SpectrumCache::SpectrumCache(std::filesystem::path directory, WarningSink warn)
    : dir_(std::move(directory)), warn_(std::move(warn)) {
  std::filesystem::create_directories(dir_);
}

std::filesystem::path SpectrumCache::path_for(const std::string& fingerprint) const {
  return dir_ / (fingerprint + ".json");
}

namespace {

std::optional<Spectrum> load(const std::filesystem::path& path, const std::string& fingerprint,
                             SpectrumSource expected, std::string& problem) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  try {
    json doc = json::parse(in);
    if (doc.at("fingerprint").get<std::string>() != fingerprint) {
      problem = "fingerprint mismatch";
      return std::nullopt;
    }
    Spectrum s;
    s.source = spectrum_source_from_string(doc.at("source").get<std::string>());
    if (s.source != expected) {
      problem = "source mismatch";
      return std::nullopt;
    }
    s.eigenvalues = doc.at("eigenvalues").get<std::vector<double>>();
    s.cutoff_energy = doc.at("cutoff").get<double>();
    if (!doc.at("h").is_null()) s.mesh_h = doc.at("h").get<double>();
    s.fingerprint = fingerprint;
    if (s.eigenvalues.empty() ||
        !std::is_sorted(s.eigenvalues.begin(), s.eigenvalues.end())) {
      problem = "eigenvalue list empty or unsorted";
      return std::nullopt;
    }
    return s;
  } catch (const std::exception& e) {
    problem = e.what();
    return std::nullopt;
  }
}

}  // namespace

Spectrum SpectrumCache::fetch_or_compute(const WireParams& wire, const BulkRequest& request) {
  wire.validate();
  const std::string fp = request.fingerprint(wire);
  const auto path = path_for(fp);
  std::string problem;
  if (std::filesystem::exists(path)) {
    if (auto cached = load(path, fp, request.method, problem)) {
      ++hits_;
      return *cached;
    }
    ++recoveries_;
    if (warn_) warn_("spectrum cache entry " + path.string() + " is corrupt (" + problem +
                     "); recomputing");
  }
  ++misses_;
  Spectrum s = compute_bulk_spectrum(wire, request);
  s.fingerprint = fp;
  persist(fp, wire, request, s);
  return s;
}

void SpectrumCache::persist(const std::string& fingerprint, const WireParams& wire,
                            const BulkRequest& request, const Spectrum& spectrum) const {
  json params = {{"method", to_string(request.method)},
                 {"d", wire.d},
                 {"L", wire.L},
                 {"outer_bc", to_string(wire.outer_bc)}};
  if (request.method == SpectrumSource::separable) {
    params["cutoff"] = request.cutoff_energy;
  } else {
    params["h"] = request.h;
    params["n_lowest"] = request.n_lowest;
  }
  json doc = {{"fingerprint", fingerprint},
              {"params", params},
              {"eigenvalues", spectrum.eigenvalues},
              {"source", to_string(spectrum.source)},
              {"h", spectrum.mesh_h ? json(*spectrum.mesh_h) : json(nullptr)},
              {"cutoff", spectrum.cutoff_energy}};

  std::ostringstream tag;
  tag << std::this_thread::get_id() << '/' << std::random_device{}();
  const auto tmp = dir_ / (fingerprint + ".tmp." + fingerprint_hex(tag.str()));
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw Error("cannot write spectrum cache file " + tmp.string());
    out << doc.dump() << '\n';
    if (!out.flush()) throw Error("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path_for(fingerprint));
}

std::size_t SpectrumCache::clear() {
  std::size_t removed = 0;
  if (!std::filesystem::exists(dir_)) return 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir_)) {
    if (!entry.is_regular_file()) continue;
    const auto name = entry.path().filename().string();
    if (entry.path().extension() == ".json" || name.find(".tmp.") != std::string::npos) {
      std::filesystem::remove(entry.path());
      ++removed;
    }
  }
  return removed;
}

std::filesystem::path resolve_cache_dir(const std::filesystem::path& fallback) {
  if (const char* env = std::getenv("CONDENSATE_LAB_CACHE"); env && *env) return env;
  return fallback;
}

}  // namespace condensate
