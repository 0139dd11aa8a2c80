#pragma once

#include <complex>
#include <span>
#include <vector>

#include "rtspec/modes.hpp"

namespace rtspec {

/// A surface function on Sigma_+ or Sigma_- as a finite Fourier sum
///   f(x') = Re( sum_k c_k e^{i xi_k . x'} )
/// over lattice frequencies xi_k = (n1/L1, n2/L2). Truncation is the data
/// model: every workflow here produces finitely many modes.
struct SurfaceCoef {
  int n1 = 0, n2 = 0;
  std::complex<double> c;
};

struct SurfaceFunction {
  std::vector<SurfaceCoef> coefs;
  double L1 = 1, L2 = 1;
  bool zero_average = true;  // requires a vanishing (0,0) amplitude

  // Real value / horizontal derivatives at x' (d1 + d2 <= small).
  double eval(double x1, double x2, int d1 = 0, int d2 = 0) const;

  void validate() const;  // zero-average flag vs (0,0) amplitude

  // eta(x') = Re(amp e^{i xi . x'}): the hermitian single-mode pair.
  static SurfaceFunction single_mode(const Frequency& xi,
                                     std::complex<double> amp, double L1,
                                     double L2);
  // Scale all amplitudes (e.g. by e^{lambda t}).
  SurfaceFunction scaled(double factor) const;
};

/// Decay rates and weights of the upward extension: the weights alpha
/// solve the Vandermonde system V(rates) alpha = (1, ..., 1)^T with
/// V_ij = (-rates_j)^i, which matches m vertical derivatives at the
/// interface.
struct ExtensionCoeffs {
  std::vector<double> decay_rates;  // 0 < r0 < r1 < ... < rm
  std::vector<double> alphas;
  double residual = 0;  // |V alpha - q| after the solve

  int order() const { return static_cast<int>(decay_rates.size()) - 1; }
};

// Solves the Vandermonde system; throws IllConditionedError when the
// verified residual exceeds 1e-8.
ExtensionCoeffs vandermonde_coeffs(std::span<const double> decay_rates);

// Default order-4 coefficients with rates (1, 2, 3, 4, 5).
const ExtensionCoeffs& default_extension_coeffs();

enum class ExtensionKind {
  MinusAt1,  // downward from x3 = 1: kernel e^{|xi| (x3 - 1)}
  MinusAt0,  // downward from x3 = 0: kernel e^{|xi| x3}
  PlusAt0,   // upward from x3 = 0: kernel sum_j alpha_j e^{-|xi| r_j x3}
};

// Evaluates (a derivative of) the truncated Poisson extension at a point
// of the kernel's half-space. d1, d2 are horizontal derivative orders, d3
// vertical.
double poisson_extend(const SurfaceFunction& f, ExtensionKind kind,
                      const ExtensionCoeffs& coeffs, double x1, double x2,
                      double x3, int d1 = 0, int d2 = 0, int d3 = 0);

/// Flattening-map data at one spatial point: the mapped vertical
/// coordinate, the nontrivial Jacobian entries (A = d1 Theta3,
/// B = d2 Theta3, J_jac = d3 Theta3, K = 1/J), the transport coefficient
/// W = dt(Theta3) K when time-derivative data is supplied, and the
/// non-unit normal / tangents of the nearest bounding surface (Sigma_-
/// for x3 <= 0, Sigma_+ above).
struct FlattenSample {
  double theta3 = 0;
  double A = 0, B = 0, J_jac = 1, K = 1;
  double W = 0;
  bool has_W = false;
  double N[3] = {0, 0, 1};
  double T1[3] = {1, 0, 0};
  double T2[3] = {0, 1, 0};
};

// The map uses the upper branch x3 + x3^2 (eta_bar_+ - (1 + 1/b)
// eta_bar_-) + (1 + x3/b) eta_bar_- for x3 > 0 and the lower branch
// x3 + (1 + x3/b) eta_bar_- for x3 <= 0, with eta_bar_+ extended by
// MinusAt1 and eta_bar_- by PlusAt0 / MinusAt0 per layer.
// Throws DegenerateJacobianError when J <= 0 unless allow_degenerate.
FlattenSample flatten_map(const SurfaceFunction& eta_plus,
                          const SurfaceFunction& eta_minus,
                          const ExtensionCoeffs& coeffs,
                          const FluidConfig& cfg, double x1, double x2,
                          double x3,
                          const SurfaceFunction* deta_plus_dt = nullptr,
                          const SurfaceFunction* deta_minus_dt = nullptr,
                          bool allow_degenerate = false);

/// Field samples re-indexed to physical coordinates y = Theta(t, x).
/// y1, y2 equal the flat axes; y3 and the Jacobian are per grid point.
struct PhysicalFieldSample {
  FieldSample flat;                // the input, by value
  std::vector<double> y3;          // mapped vertical coordinate per point
  std::vector<double> jacobian;    // J at each point
};

// Pushes a sampled mode to the moving physical domain through the
// flattening map at the sample's time. Pure re-parameterization of the
// grid; throws DegenerateJacobianError naming the first failing sample.
PhysicalFieldSample push_mode_to_physical(const NormalMode& mode,
                                          const FieldSample& sample,
                                          const SurfaceFunction& eta_plus,
                                          const SurfaceFunction& eta_minus,
                                          const ExtensionCoeffs& coeffs,
                                          const FluidConfig& cfg);

}  // namespace rtspec
