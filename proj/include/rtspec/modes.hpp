#pragma once

#include <complex>
#include <vector>

#include "rtspec/growth.hpp"

namespace rtspec {

/// Pressure profile recovered from psi, sampled at element-interior Gauss
/// nodes (nodes are never sampled; psi'' is one-sided there), with the
/// prescribed jump across the interface.
struct PressureProfile {
  std::vector<double> x;      // composite Gauss abscissae, ascending
  std::vector<double> value;  // pi at the abscissae
  double jump_at_zero = 0;    // pi_+(0) - pi_-(0)
  double at_top = 0;          // anchored value pi(1)
  std::vector<double> elem_right;  // pi at each element's right edge
};

/// Rotated-frame horizontal profiles. In the frame where xi maps to
/// (|xi|, 0) the divergence constraint forces phi_mag = -psi'/|xi| and a
/// zero second component; the lab-frame pair is the inverse rotation
/// (phi, theta) = (c1 phi_mag, c2 phi_mag).
struct HorizontalProfiles {
  double c1 = 1, c2 = 0;
  double xi_abs = 0;
  Mesh mesh;
  Profile psi;

  double phi_mag(double x, Side side = Side::Right) const;
  // d/dx3 of phi_mag (uses the one-sided psi'').
  double phi_mag_prime(double x, Side side = Side::Right) const;
  double phi(double x, Side side = Side::Right) const {
    return c1 * phi_mag(x, side);
  }
  double theta(double x, Side side = Side::Right) const {
    return c2 * phi_mag(x, side);
  }
};

HorizontalProfiles recover_horizontal(const Mesh& mesh, const Profile& psi,
                                      const Frequency& xi);

// Integrates pi' = -lambda rho psi - mu (|xi|^2 psi - psi'') downward from
// the anchored value at x3 = 1, applying the interface jump
// (g [rho] psi(0) - sigma_- |xi|^2 psi(0) + 2 [mu] lambda psi'(0)) / lambda
// when crossing 0.
PressureProfile recover_pressure(const Profile& psi, double lambda,
                                 const Mesh& mesh, const FluidConfig& cfg,
                                 double xi_abs);

// pi at x3 (side picks the branch at the interface), from the recovered
// per-element data; exact for the element polynomial representation.
double pressure_at(const PressureProfile& pi, const Profile& psi,
                   double lambda, const Mesh& mesh, const FluidConfig& cfg,
                   double xi_abs, double x3, Side side = Side::Right);

/// A reconstructed growing normal mode. The complex fields are
///   w1 = -i phi e^{i xi.x'}, w2 = -i theta e^{i xi.x'},
///   w3 = psi e^{i xi.x'},    p  = pi  e^{i xi.x'},
/// all scaled by e^{lambda t}; exported physical fields are real parts.
struct NormalMode {
  Frequency xi;
  double lambda = 0;
  Mesh mesh;
  Profile psi;
  double c1 = 1, c2 = 0;  // inverse-rotation coefficients xi / |xi|
  PressureProfile pi;
  std::complex<double> eta_plus{0, 0};   // psi(1) / lambda
  std::complex<double> eta_minus{0, 0};  // psi(0) / lambda

  double psi_at(double x, int deriv = 0, Side side = Side::Right) const {
    return evaluate_profile(psi, mesh, x, deriv, side);
  }
  double phi_mag_at(double x, Side side = Side::Right) const {
    return -evaluate_profile(psi, mesh, x, 1, side) / xi.magnitude();
  }
};

// Builds the full mode from an Unstable dispersion point; the config must
// be the one the point was computed with.
NormalMode build_mode(const DispersionPoint& point, const Mesh& mesh,
                      const FluidConfig& cfg);

// Combined L2 norm of (u, eta_plus, eta_minus) at t = 0: the modal
// amplitude in the physical-field sense (the variational construction
// normalizes J(psi) = 1 instead).
double mode_l2_norm(const NormalMode& mode, const FluidConfig& cfg);

// The same mode with every linear field scaled by the factor.
NormalMode scale_mode(const NormalMode& mode, double factor);

struct GridSpec {
  int n1 = 2, n2 = 2, n3 = 2;
};

/// Real-part field samples on a tensor grid over T^2 x (-b, 1).
/// Index layout: idx = (i1 * n2 + i2) * n3 + i3.
struct FieldSample {
  GridSpec grid;
  std::vector<double> x1, x2, x3;  // axes; x3 includes both endpoints
  std::vector<double> u1, u2, u3, p;
  std::vector<double> eta_plus, eta_minus;  // n1 x n2, idx = i1 * n2 + i2
  double time = 0;
  double lambda = 0;
};

// Samples the mode at time t; norms scale by exactly e^{lambda t}.
// Pressure at x3 = 0 takes the lower-layer branch.
FieldSample sample_fields(const NormalMode& mode, const FluidConfig& cfg,
                          double t, const GridSpec& grid);

// Residual of the linear energy balance evaluated modally on the mode:
// every term carries e^{2 lambda t}, so the balance reduces to a
// t-independent scalar relation among modal integrals. Returns the
// relative residual (0 for the zero mode).
double check_energy_identity(const NormalMode& mode, const FluidConfig& cfg,
                             double t0, double t1);

}  // namespace rtspec
