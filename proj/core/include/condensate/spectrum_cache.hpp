#pragma once

#include <atomic>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <string>

#include "condensate/bulk_spectrum.hpp"

namespace condensate {

/// Everything besides the wire that determines a bulk spectrum.
struct BulkRequest {
  SpectrumSource method = SpectrumSource::separable;
  double cutoff_energy = 0.0;  // separable
  double h = 1.0 / 32.0;       // fd2d
  std::size_t n_lowest = 1;    // fd2d

  /// Bit-exact key over wire + request; differs whenever any input bit does.
  std::string fingerprint(const WireParams& wire) const;
};

/// Compute a bulk spectrum without caching.
Spectrum compute_bulk_spectrum(const WireParams& wire, const BulkRequest& request);

/// On-disk spectrum cache: one JSON document per fingerprint. Concurrent
/// readers are fine; writers publish through an atomic rename of a temp file.
class SpectrumCache {
 public:
  using WarningSink = std::function<void(const std::string&)>;

  explicit SpectrumCache(std::filesystem::path directory, WarningSink warn = {});

  /// Cached spectrum if the fingerprint file is present and intact; otherwise
  /// compute, persist, and return. Corrupt files are recomputed and
  /// overwritten with a warning.
  Spectrum fetch_or_compute(const WireParams& wire, const BulkRequest& request);

  /// Removes every cache document; returns how many were deleted.
  std::size_t clear();

  std::filesystem::path path_for(const std::string& fingerprint) const;
  const std::filesystem::path& directory() const noexcept { return dir_; }

  std::size_t hits() const noexcept { return hits_; }
  std::size_t misses() const noexcept { return misses_; }
  std::size_t recoveries() const noexcept { return recoveries_; }

 private:
  void persist(const std::string& fingerprint, const WireParams& wire,
               const BulkRequest& request, const Spectrum& spectrum) const;

  std::filesystem::path dir_;
  WarningSink warn_;
  std::atomic<std::size_t> hits_{0}, misses_{0}, recoveries_{0};
};

/// Cache directory: CONDENSATE_LAB_CACHE if set, else the fallback.
std::filesystem::path resolve_cache_dir(const std::filesystem::path& fallback);

}  // namespace condensate
