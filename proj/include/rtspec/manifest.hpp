#pragma once

#include <cstdint>
#include <string>

#include "rtspec/params.hpp"

namespace rtspec {

/// Reproducibility record for one CLI run. Everything that determines the
/// output bytes goes into the content hash; execution details (thread
/// count, wall-clock time) deliberately do not, so re-running an identical
/// manifest reproduces outputs bit-for-bit.
struct RunManifest {
  std::string command;
  FluidConfig config;
  int mesh = 0;
  double tol = 0;
  std::string extra;       // canonical rendering of command-specific flags
  std::string input_hash;  // FNV-1a 64 of the canonical input string
  std::string created_at;  // RFC 3339; logged, never written to outputs

  static RunManifest make(const std::string& command, const FluidConfig& cfg,
                          int mesh, double tol, const std::string& extra);

  // Canonical string the hash covers.
  std::string canonical() const;

  // JSON object for output files (excludes the timestamp).
  std::string output_json() const;
};

std::uint64_t fnv1a64(const std::string& data);

// Round-trip-exact decimal rendering of a double (17 significant digits).
std::string format_double(double v);

}  // namespace rtspec
