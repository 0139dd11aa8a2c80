#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rtspec/eigensolve.hpp"

namespace rtspec {

struct GrowthOptions {
  double tol_rel = 1e-10;       // relative tolerance on the root s
  double fix_tol = 5e-10;       // extra bisection until |s^2 + alpha| below
  int max_doublings = 10;       // cap on upper-bracket doublings
  double stable_tol = 1e-12;    // alpha >= -stable_tol at the probe => Stable
};

// Growth-rate ceiling b g [rho] / (4 mu_-); the root bracket upper end.
double lambda_ceiling(const FluidConfig& cfg);

// sqrt(2 |xi| (g [rho] - sigma_- |xi|^2) / rho_-), NaN when the radicand
// is negative.
double lambda_proof_bound(const FluidConfig& cfg, double xi_abs);

/// Verdict of the fixed-point solve at one frequency magnitude.
struct GrowthResult {
  bool unstable = false;
  // Unstable branch: lambda = s_star solves s^2 + alpha(s) = 0.
  double lambda = 0;
  double s_star = 0;
  double alpha_at_star = 0;
  Profile psi;
  bool degenerate = false;
  // Stable branch: alpha at the smallest probed s (>= -tolerance).
  double alpha_floor = 0;
  // All (s, s^2 + alpha(s)) evaluations, in evaluation order.
  std::vector<std::pair<double, double>> h_evals;
};

// Solves the fixed point s = sqrt(-alpha(|xi|; s)) by bisection on the
// strictly increasing h(s) = s^2 + alpha(s). Returns the Stable branch when
// alpha stays nonnegative at the smallest probe. Throws BracketFailureError
// when h cannot be bracketed above within the doubling cap.
GrowthResult growth_rate(const Mesh& mesh, const FluidConfig& cfg,
                         double xi_abs, const GrowthOptions& opt = {});

// Same, reusing an already-built operator.
GrowthResult growth_rate(const AlphaOperator& op, const FluidConfig& cfg,
                         const GrowthOptions& opt = {});

struct DispersionPoint {
  Frequency xi;
  std::optional<GrowthResult> result;  // empty on per-point failure
  std::string error;                   // failure message when empty
};

// Per-frequency growth rates; equal-|xi| lattice points share one solve
// (lambda depends on xi only through |xi|). Per-point errors are recorded,
// not thrown. n_threads = 0 means hardware concurrency.
std::vector<DispersionPoint> dispersion_curve(
    const Mesh& mesh, const FluidConfig& cfg,
    const std::vector<Frequency>& frequencies, const GrowthOptions& opt = {},
    int n_threads = 1);

struct Truncation {
  bool applied = false;      // sigma_- = 0 shell scan was truncated by rule
  bool hit_cap = false;      // the hard |xi| cap stopped the scan
  double xi_cap = 0;         // cap in effect
  int shells_scanned = 0;
  int consecutive_rule = 3;  // K decreasing shells
  double fraction_rule = 0.5;
};

struct SharpRate {
  double lattice_max = 0;                 // max lambda over lattice points
  std::optional<Frequency> achieved_at;   // smallest-|xi| witness
  double continuous_envelope = 0;         // refined max over continuous |xi|
  double envelope_xi = 0;
  bool sigma_minus_zero = false;          // value is Lambda_* in that case
  Truncation truncation;
  double ceiling = 0;                     // b g [rho] / (4 mu_-)
  std::vector<double> scanned_xi;         // |xi| values visited in the scan
};

struct SharpRateOptions {
  GrowthOptions growth;
  int coarse_points = 17;      // continuous-envelope coarse grid
  double golden_tol = 1e-8;    // relative interval tolerance
  double cap_spacings = 64;    // sigma_-=0 hard cap in min lattice spacings
  int n_threads = 1;
};

// Largest growth rate over sub-critical frequencies: the lattice maximum,
// plus a golden-section-refined continuous envelope. Requires an Unstable
// regime (throws NotUnstableError otherwise).
SharpRate sharp_rate(const Mesh& mesh, const FluidConfig& cfg,
                     const SharpRateOptions& opt = {});

}  // namespace rtspec
