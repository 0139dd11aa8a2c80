#pragma once

#include <Eigen/Dense>
#include <vector>

#include "rtspec/params.hpp"

namespace rtspec {

/// Coefficient vector of one vertical profile psi in the clamped C1 space.
///
/// Cubic Hermite elements: two degrees of freedom (value, slope) per node,
/// with the pair at x3 = -b eliminated, so psi(-b) = psi'(-b) = 0 by
/// construction and psi, psi' are continuous everywhere (in particular
/// across the interface x3 = 0).
using Profile = Eigen::VectorXd;

enum class Side { Left, Right };

/// 1-D mesh of [-b, 1] with 0 always a node (the interface is a mesh point).
struct Mesh {
  std::vector<double> nodes;  // strictly increasing, nodes[0] = -b, back = 1
  int n_lower = 0;            // elements in (-b, 0)
  int n_upper = 0;            // elements in (0, 1)
  double b = 0;

  int num_elements() const { return n_lower + n_upper; }
  int num_nodes() const { return static_cast<int>(nodes.size()); }
  int num_dofs() const { return 2 * (num_nodes() - 1); }
  int interface_node() const { return n_lower; }

  // Global DOF index of the value / slope at a node; -1 for the clamped
  // node at -b.
  int value_dof(int node) const { return node == 0 ? -1 : 2 * (node - 1); }
  int slope_dof(int node) const { return node == 0 ? -1 : 2 * node - 1; }

  // Element containing x; at an interior node the side flag picks the
  // element (Left = the element ending at x).
  int find_element(double x, Side side = Side::Right) const;

  // True if element e lies in the lower layer (-b, 0).
  bool element_in_lower(int e) const { return e < n_lower; }
};

// Uniform nodes on [-b, 0] and [0, 1] with the given element counts.
// Requires n_lower, n_upper >= 2.
Mesh build_mesh(double b, int n_lower, int n_upper);

Profile zero_profile(const Mesh& mesh);

// psi, psi' or one-sided psi'' of the element representation at x3.
// deriv in 0..2; the side flag matters only for deriv = 2 at a node.
double evaluate_profile(const Profile& p, const Mesh& mesh, double x3,
                        int deriv = 0, Side side = Side::Right);

// One-sided third derivative (piecewise constant per element).
double evaluate_profile_third(const Profile& p, const Mesh& mesh, double x3,
                              Side side = Side::Right);

// Interpolate a smooth function into the element space: nodal values and
// slopes are taken from f and df (the clamped node is skipped).
template <typename F, typename DF>
Profile interpolate_profile(const Mesh& mesh, F&& f, DF&& df) {
  Profile p = Profile::Zero(mesh.num_dofs());
  for (int i = 1; i < mesh.num_nodes(); ++i) {
    p[mesh.value_dof(i)] = f(mesh.nodes[i]);
    p[mesh.slope_dof(i)] = df(mesh.nodes[i]);
  }
  return p;
}

enum class FormKind { E1, E0, J };

/// Symmetric quadratic form over Profile DOFs; value(p) includes the 1/2
/// factors of the energy definitions, i.e. value(p) = p^T mat p.
struct QuadForm {
  FormKind kind;
  double xi_abs = 0;
  Eigen::MatrixXd mat;

  double value(const Profile& p) const { return p.dot(mat * p); }
  double bilinear(const Profile& p, const Profile& q) const {
    return p.dot(mat * q);
  }
};

// E1(psi) = 1/2 integral of mu (4 xi^2 |psi'|^2 + |xi^2 psi + psi''|^2),
// mu piecewise constant per layer. The squared term is assembled from its
// expanded blocks so the matrix is symmetric to machine precision.
QuadForm assemble_E1(const Mesh& mesh, const FluidConfig& cfg, double xi_abs);

// E0(psi) = 1/2 xi^2 (sigma_+ xi^2 + g rho_+) psi(1)^2
//         + 1/2 xi^2 (sigma_- xi^2 - g [rho]) psi(0)^2   (rank <= 2).
QuadForm assemble_E0(const Mesh& mesh, const FluidConfig& cfg, double xi_abs);

// J(psi) = 1/2 integral of rho (xi^2 |psi|^2 + |psi'|^2); positive definite
// on the clamped space.
QuadForm assemble_J(const Mesh& mesh, const FluidConfig& cfg, double xi_abs);

// Hermite shape functions and derivatives on an element [xl, xl+h] at
// local coordinate t in [0, 1]; order is (v_left, s_left, v_right, s_right).
void hermite_shape(double t, double h, int deriv, double out[4]);

// 4-point Gauss-Legendre rule on [0, 1] (exact through degree 7).
inline constexpr int kGaussN = 4;
extern const double kGaussX[kGaussN];
extern const double kGaussW[kGaussN];

}  // namespace rtspec
