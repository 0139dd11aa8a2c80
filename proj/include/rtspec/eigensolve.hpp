#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "rtspec/discretize.hpp"

namespace rtspec {

/// Result of the constrained minimization
///   alpha(|xi|; s) = inf { s E1(psi) + E0(psi) : J(psi) = 1 }
/// solved as the smallest eigenpair of (s E1 + E0) psi = alpha J psi.
struct AlphaResult {
  double alpha = 0;
  Profile psi;          // minimizer, J(psi) = 1, psi(0) >= 0 sign convention
  double residual = 0;  // eigen residual relative to form norms
  double s = 0;
  double xi_abs = 0;
  bool degenerate = false;  // smallest eigenvalue has multiplicity > 1
};

/// Reduced operator for repeated alpha solves at fixed (mesh, cfg, |xi|).
///
/// J = L L^T is factored once; each s costs one dense symmetric
/// eigensolve of s*E1r + E0r with E1r = L^-1 E1 L^-T etc.
class AlphaOperator {
 public:
  AlphaOperator(const Mesh& mesh, const FluidConfig& cfg, double xi_abs);

  // Smallest eigenvalue only (no eigenvector extraction).
  double alpha_only(double s) const;

  // Full result with minimizer, residual, and multiplicity flag.
  AlphaResult solve(double s) const;

  const QuadForm& e1() const { return e1_; }
  const QuadForm& e0() const { return e0_; }
  const QuadForm& j() const { return j_; }
  double xi_abs() const { return xi_abs_; }

 private:
  double xi_abs_;
  QuadForm e1_, e0_, j_;
  Eigen::MatrixXd e1r_, e0r_;     // congruence-reduced forms
  Eigen::MatrixXd linvT_;         // L^-T, maps reduced vectors back
  double e1_norm_ = 0, e0_norm_ = 0, j_norm_ = 0;  // Frobenius norms
  int interface_value_dof_ = 0;   // DOF of psi(0), for the sign convention
  int top_value_dof_ = 0;         // DOF of psi(1)
};

// One-shot convenience wrapper around AlphaOperator.
AlphaResult solve_alpha(const Mesh& mesh, const FluidConfig& cfg,
                        double xi_abs, double s);

struct OracleOptions {
  int starts = 32;
  int max_iters = 10000;
  double grad_tol = 1e-9;
  std::uint64_t seed = 0x5eed5eedULL;
};

// Independent brute-force estimate of alpha: projected-gradient descent on
// the Rayleigh quotient E(psi)/J(psi) from random starts. Each step moves
// along the gradient with conjugate momentum, with the step length from
// the closed-form 1-D quotient minimization. Returns the best value found
// (an upper bound on the discrete infimum). Intended for small meshes;
// never calls the eigensolver.
double oracle_alpha(const Mesh& mesh, const FluidConfig& cfg, double xi_abs,
                    double s, const OracleOptions& opt = {});

// Euclidean norm of (s E1 + E0 - alpha J) psi over the DOF space; small
// values certify the discrete weak form of the modified eigenvalue problem.
double euler_lagrange_residual(const AlphaResult& res, const Mesh& mesh,
                               const FluidConfig& cfg);

}  // namespace rtspec
