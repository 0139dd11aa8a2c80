#include "rtspec/discretize.hpp"

#include <algorithm>
#include <cmath>

#include "rtspec/errors.hpp"

namespace rtspec {

// Gauss-Legendre nodes/weights mapped from [-1, 1] to [0, 1].
const double kGaussX[kGaussN] = {
    0.5 - 0.5 * 0.8611363115940526, 0.5 - 0.5 * 0.3399810435848563,
    0.5 + 0.5 * 0.3399810435848563, 0.5 + 0.5 * 0.8611363115940526};
const double kGaussW[kGaussN] = {
    0.5 * 0.3478548451374538, 0.5 * 0.6521451548625461,
    0.5 * 0.6521451548625461, 0.5 * 0.3478548451374538};

Mesh build_mesh(double b, int n_lower, int n_upper) {
  if (!(b > 0)) throw ConfigError("mesh: b must be > 0");
  if (n_lower < 2 || n_upper < 2) {
    throw ConfigError("mesh: element counts must be >= 2 per layer");
  }
  Mesh mesh;
  mesh.b = b;
  mesh.n_lower = n_lower;
  mesh.n_upper = n_upper;
  mesh.nodes.reserve(n_lower + n_upper + 1);
  for (int i = 0; i < n_lower; ++i) {
    mesh.nodes.push_back(-b + b * i / n_lower);
  }
  mesh.nodes.push_back(0.0);
  for (int i = 1; i <= n_upper; ++i) {
    mesh.nodes.push_back(static_cast<double>(i) / n_upper);
  }
  mesh.nodes.front() = -b;
  mesh.nodes.back() = 1.0;
  return mesh;
}

int Mesh::find_element(double x, Side side) const {
  const double lo = nodes.front(), hi = nodes.back();
  if (x < lo - 1e-12 * (1 + b) || x > hi + 1e-12 * (1 + b)) {
    throw Error("evaluate: x3 outside [-b, 1]");
  }
  x = std::clamp(x, lo, hi);
  // First node strictly greater than x.
  auto it = std::upper_bound(nodes.begin(), nodes.end(), x);
  int e = static_cast<int>(it - nodes.begin()) - 1;
  e = std::clamp(e, 0, num_elements() - 1);
  // Exactly at a node: Left picks the element ending here.
  if (side == Side::Left && e > 0 && x == nodes[e]) e -= 1;
  if (x == hi) e = num_elements() - 1;
  return e;
}

void hermite_shape(double t, double h, int deriv, double out[4]) {
  switch (deriv) {
    case 0:
      out[0] = 1 + t * t * (2 * t - 3);
      out[1] = h * t * (1 + t * (t - 2));
      out[2] = t * t * (3 - 2 * t);
      out[3] = h * t * t * (t - 1);
      return;
    case 1:
      out[0] = 6 * t * (t - 1) / h;
      out[1] = 1 + t * (3 * t - 4);
      out[2] = 6 * t * (1 - t) / h;
      out[3] = t * (3 * t - 2);
      return;
    case 2:
      out[0] = (12 * t - 6) / (h * h);
      out[1] = (6 * t - 4) / h;
      out[2] = (6 - 12 * t) / (h * h);
      out[3] = (6 * t - 2) / h;
      return;
    case 3:
      out[0] = 12 / (h * h * h);
      out[1] = 6 / (h * h);
      out[2] = -12 / (h * h * h);
      out[3] = 6 / (h * h);
      return;
    default:
      throw Error("hermite_shape: deriv must be 0..3");
  }
}

Profile zero_profile(const Mesh& mesh) {
  return Profile::Zero(mesh.num_dofs());
}

namespace {

// Element DOF values (clamped node contributes zeros).
void gather_element(const Profile& p, const Mesh& mesh, int e, double out[4]) {
  const int vl = mesh.value_dof(e), sl = mesh.slope_dof(e);
  const int vr = mesh.value_dof(e + 1), sr = mesh.slope_dof(e + 1);
  out[0] = vl >= 0 ? p[vl] : 0.0;
  out[1] = sl >= 0 ? p[sl] : 0.0;
  out[2] = vr >= 0 ? p[vr] : 0.0;
  out[3] = sr >= 0 ? p[sr] : 0.0;
}

double eval_in_element(const Profile& p, const Mesh& mesh, int e, double x,
                       int deriv) {
  const double xl = mesh.nodes[e];
  const double h = mesh.nodes[e + 1] - xl;
  const double t = (x - xl) / h;
  double shp[4], dofs[4];
  hermite_shape(t, h, deriv, shp);
  gather_element(p, mesh, e, dofs);
  return shp[0] * dofs[0] + shp[1] * dofs[1] + shp[2] * dofs[2] +
         shp[3] * dofs[3];
}

}  // namespace

double evaluate_profile(const Profile& p, const Mesh& mesh, double x3,
                        int deriv, Side side) {
  if (deriv < 0 || deriv > 2) throw Error("evaluate_profile: deriv must be 0..2");
  const int e = mesh.find_element(x3, side);
  return eval_in_element(p, mesh, e, x3, deriv);
}

double evaluate_profile_third(const Profile& p, const Mesh& mesh, double x3,
                              Side side) {
  const int e = mesh.find_element(x3, side);
  return eval_in_element(p, mesh, e, x3, 3);
}

namespace {

struct ElementMatrices {
  // Integrals over one element of shape-function products:
  // mass = N N, grad = N' N', by2 = N N'', curv = N'' N''.
  Eigen::Matrix4d mass, grad, by2, curv;
};

ElementMatrices element_integrals(double h) {
  ElementMatrices m;
  m.mass.setZero();
  m.grad.setZero();
  m.by2.setZero();
  m.curv.setZero();
  for (int q = 0; q < kGaussN; ++q) {
    double n0[4], n1[4], n2[4];
    hermite_shape(kGaussX[q], h, 0, n0);
    hermite_shape(kGaussX[q], h, 1, n1);
    hermite_shape(kGaussX[q], h, 2, n2);
    const double w = kGaussW[q] * h;
    // Products before the weight multiply keep the blocks exactly
    // symmetric (x * y == y * x in IEEE arithmetic).
    for (int a = 0; a < 4; ++a) {
      for (int c = 0; c < 4; ++c) {
        m.mass(a, c) += w * (n0[a] * n0[c]);
        m.grad(a, c) += w * (n1[a] * n1[c]);
        m.by2(a, c) += w * (n0[a] * n2[c]);
        m.curv(a, c) += w * (n2[a] * n2[c]);
      }
    }
  }
  return m;
}

template <typename ElementBlock>
Eigen::MatrixXd assemble(const Mesh& mesh, ElementBlock&& block) {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(mesh.num_dofs(), mesh.num_dofs());
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const double h = mesh.nodes[e + 1] - mesh.nodes[e];
    const Eigen::Matrix4d ke = block(e, element_integrals(h));
    const int dofs[4] = {mesh.value_dof(e), mesh.slope_dof(e),
                         mesh.value_dof(e + 1), mesh.slope_dof(e + 1)};
    for (int a = 0; a < 4; ++a) {
      if (dofs[a] < 0) continue;
      for (int c = 0; c < 4; ++c) {
        if (dofs[c] < 0) continue;
        A(dofs[a], dofs[c]) += ke(a, c);
      }
    }
  }
  return A;
}

}  // namespace

QuadForm assemble_E1(const Mesh& mesh, const FluidConfig& cfg, double xi_abs) {
  if (!(xi_abs > 0)) throw Error("assemble_E1: xi_abs must be > 0");
  const double k2 = xi_abs * xi_abs;
  QuadForm f{FormKind::E1, xi_abs, {}};
  f.mat = assemble(mesh, [&](int e, const ElementMatrices& m) {
    const double mu = mesh.element_in_lower(e) ? cfg.mu_minus : cfg.mu_plus;
    // |xi^2 psi + psi''|^2 expanded: k^4 NN + k^2 (N N'' + N'' N) + N'' N''.
    Eigen::Matrix4d ke = 4 * k2 * m.grad + k2 * k2 * m.mass +
                         k2 * (m.by2 + m.by2.transpose()) + m.curv;
    return Eigen::Matrix4d(0.5 * mu * ke);
  });
  return f;
}

QuadForm assemble_J(const Mesh& mesh, const FluidConfig& cfg, double xi_abs) {
  if (!(xi_abs > 0)) throw Error("assemble_J: xi_abs must be > 0");
  const double k2 = xi_abs * xi_abs;
  QuadForm f{FormKind::J, xi_abs, {}};
  f.mat = assemble(mesh, [&](int e, const ElementMatrices& m) {
    const double rho = mesh.element_in_lower(e) ? cfg.rho_minus : cfg.rho_plus;
    return Eigen::Matrix4d(0.5 * rho * (k2 * m.mass + m.grad));
  });
  return f;
}

QuadForm assemble_E0(const Mesh& mesh, const FluidConfig& cfg, double xi_abs) {
  if (!(xi_abs > 0)) throw Error("assemble_E0: xi_abs must be > 0");
  const double k2 = xi_abs * xi_abs;
  QuadForm f{FormKind::E0, xi_abs, {}};
  f.mat = Eigen::MatrixXd::Zero(mesh.num_dofs(), mesh.num_dofs());
  const int top = mesh.value_dof(mesh.num_nodes() - 1);
  const int mid = mesh.value_dof(mesh.interface_node());
  f.mat(top, top) = 0.5 * k2 * (cfg.sigma_plus * k2 + cfg.g * cfg.rho_plus);
  f.mat(mid, mid) =
      0.5 * k2 * (cfg.sigma_minus * k2 - cfg.g * jump_density(cfg));
  return f;
}

}  // namespace rtspec
