#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "rtspec/geometry.hpp"
#include "rtspec/manifest.hpp"

namespace rtspec {

/// Parsed command-line options shared by the batch commands.
struct CliOptions {
  std::string config_path;
  int mesh = 128;        // elements per layer
  double tol = 1e-10;    // relative root tolerance
  int threads = 0;       // 0 = hardware concurrency
  std::string out;       // output path; empty = stdout
  std::string format = "csv";  // csv | json (dispersion, convergence)

  double xi_max = 0;          // dispersion
  int n1 = 0, n2 = 0;         // mode / convergence lattice index
  double time = 0;            // mode sample time
  GridSpec grid{8, 8, 17};    // mode grid
  bool physical = false;      // mode: push to physical coordinates
  std::string normalize = "L2";  // mode amplitude convention: L2 | J
  double amplitude = 1.0;        // extra scalar on the exported mode
  std::vector<int> meshes;    // convergence mesh list
};

// Exit codes: 0 success, 2 input error, 3 regime precondition,
// 4 numerical failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitRegime = 3;
inline constexpr int kExitNumerical = 4;

int cmd_classify(const CliOptions& opt, std::ostream& out, std::ostream& err);
int cmd_dispersion(const CliOptions& opt, std::ostream& out,
                   std::ostream& err);
int cmd_sharp_rate(const CliOptions& opt, std::ostream& out,
                   std::ostream& err);
int cmd_mode(const CliOptions& opt, std::ostream& out, std::ostream& err);
int cmd_convergence(const CliOptions& opt, std::ostream& out,
                    std::ostream& err);

}  // namespace rtspec
