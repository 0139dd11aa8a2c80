#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "rtspec/errors.hpp"

namespace rtspec {

/// Physical and domain parameters of the two-layer problem.
///
/// The equilibrium is a layer of fluid (density rho_minus, viscosity
/// mu_minus) occupying -b < x3 < 0 below a layer (rho_plus, mu_plus)
/// occupying 0 < x3 < 1, horizontally periodic with periods 2*pi*L1 and
/// 2*pi*L2, under downward gravity g. sigma_plus acts on the free upper
/// surface, sigma_minus on the internal interface. Inputs are assumed
/// nondimensionalized so the upper-layer depth is exactly 1.
struct FluidConfig {
  double rho_plus = 0;     // upper-layer density, > 0
  double rho_minus = 0;    // lower-layer density, > 0
  double mu_plus = 0;      // upper-layer viscosity, > 0
  double mu_minus = 0;     // lower-layer viscosity, > 0
  double g = 0;            // gravity, > 0
  double sigma_plus = 0;   // surface tension on the upper surface, >= 0
  double sigma_minus = 0;  // surface tension on the interface, >= 0
  double b = 0;            // lower-layer depth, > 0
  double L1 = 0;           // horizontal period scale, > 0
  double L2 = 0;           // horizontal period scale, > 0

  // Throws ConfigError with a field-level message if any invariant fails,
  // including the surface-tension pairing rule: either sigma_plus > 0 (and
  // sigma_minus >= 0), or both sigma fields are zero.
  void validate() const;
};

/// One spatial frequency of the horizontal lattice.
///
/// Stored as exact integer lattice indices (n1, n2) so that +/- symmetry
/// and sort tie-breaking are exact; the real components xi = (n1/L1, n2/L2)
/// are derived.
struct Frequency {
  int n1 = 0;
  int n2 = 0;
  double xi1 = 0;
  double xi2 = 0;

  Frequency() = default;
  Frequency(int n1_, int n2_, const FluidConfig& cfg)
      : n1(n1_), n2(n2_), xi1(n1_ / cfg.L1), xi2(n2_ / cfg.L2) {}

  double magnitude() const { return std::hypot(xi1, xi2); }
  // Exact-rational magnitude key: equal keys <=> equal |xi| (up to the
  // floating representation of L1, L2), used for dedup and tie-breaks.
  double magnitude_key(const FluidConfig& cfg) const {
    return double(n1) * n1 * (cfg.L2 * cfg.L2) +
           double(n2) * n2 * (cfg.L1 * cfg.L1);
  }
};

enum class RegimeLabel {
  UnstableNoST,    // jump > 0, no surface tension
  UnstableST,      // jump > 0, sigma_minus below critical
  StableAlmostExp, // jump < 0, no surface tension
  StableExp,       // exponential decay regimes
  CriticalLWP,     // borderline: only local well-posedness is known
};

enum class SigmaCase {
  NotApplicable,  // jump <= 0: no critical tension exists
  NoST,           // sigma_plus = sigma_minus = 0
  BelowCritical,
  AtCritical,
  AboveCritical,
};

struct Regime {
  RegimeLabel label;
  int jump_sign;      // sign of rho_plus - rho_minus within tolerance
  SigmaCase st_case;
};

std::string to_string(RegimeLabel label);
std::string to_string(SigmaCase c);

// rho_plus - rho_minus.
double jump_density(const FluidConfig& cfg);

// Critical interface tension g * jump * max(L1^2, L2^2).
// Throws NotApplicableError when the density jump is not positive.
double sigma_critical(const FluidConfig& cfg);

// Critical frequency sqrt(g * jump / sigma_minus); +infinity when
// sigma_minus = 0 (all frequencies lie below it). Throws
// NotApplicableError when the density jump is not positive.
double xi_critical(const FluidConfig& cfg);

// Stability classification. Pure function of (sign of jump, sigma case).
// Equality comparisons use a 1e-12 relative tolerance band; values inside
// the band classify as the critical label.
Regime classify_regime(const FluidConfig& cfg);

// All nonzero lattice frequencies (n1/L1, n2/L2) with 0 < |xi| <= xi_max,
// sorted ascending by magnitude, ties broken lexicographically on (n1, n2).
std::vector<Frequency> lattice_frequencies(const FluidConfig& cfg,
                                           double xi_max);

// Relative tolerance band used for regime equality comparisons.
inline constexpr double kRegimeTol = 1e-12;

// Config file I/O: a flat JSON object holding exactly the ten FluidConfig
// fields as numbers; unknown keys are rejected. Throws ConfigError.
FluidConfig load_config(const std::string& path);
FluidConfig parse_config(const std::string& json_text);
std::string dump_config(const FluidConfig& cfg);

}  // namespace rtspec
