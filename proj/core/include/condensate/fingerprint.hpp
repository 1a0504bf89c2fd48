#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace condensate {

/// Streaming 64-bit FNV-1a. Stable across platforms and runs, which is all
/// the cache and output fingerprints need.
class Fingerprint {
 public:
  Fingerprint& add(std::string_view bytes);
  Fingerprint& add(double value);  // bit pattern, so 0.1 != 0.1 + ulp
  Fingerprint& add(std::uint64_t value);
  Fingerprint& add(std::span<const double> values);

  std::uint64_t value() const noexcept { return state_; }
  std::string hex() const;

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

std::string fingerprint_hex(std::string_view text);

/// Shortest round-trip decimal form of a double ("nan"/"inf" spelled out).
std::string format_double(double value);

}  // namespace condensate
