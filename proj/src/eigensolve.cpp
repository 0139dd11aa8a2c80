#include "rtspec/eigensolve.hpp"

#include <cmath>
#include <random>

#include "rtspec/errors.hpp"

namespace rtspec {

AlphaOperator::AlphaOperator(const Mesh& mesh, const FluidConfig& cfg,
                             double xi_abs)
    : xi_abs_(xi_abs),
      e1_(assemble_E1(mesh, cfg, xi_abs)),
      e0_(assemble_E0(mesh, cfg, xi_abs)),
      j_(assemble_J(mesh, cfg, xi_abs)) {
  Eigen::LLT<Eigen::MatrixXd> llt(j_.mat);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("J form is not positive definite");
  }
  const Eigen::MatrixXd L = llt.matrixL();
  const int n = j_.mat.rows();
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd linv =
      L.triangularView<Eigen::Lower>().solve(I);
  linvT_ = linv.transpose();
  e1r_ = linv * e1_.mat * linvT_;
  e0r_ = linv * e0_.mat * linvT_;
  // Symmetrize against rounding drift.
  e1r_ = 0.5 * (e1r_ + e1r_.transpose()).eval();
  e0r_ = 0.5 * (e0r_ + e0r_.transpose()).eval();
  e1_norm_ = e1_.mat.norm();
  e0_norm_ = e0_.mat.norm();
  j_norm_ = j_.mat.norm();
  interface_value_dof_ = mesh.value_dof(mesh.interface_node());
  top_value_dof_ = mesh.value_dof(mesh.num_nodes() - 1);
}

double AlphaOperator::alpha_only(double s) const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s * e1r_ + e0r_,
                                                    Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw NumericalError("eigenvalue iteration did not converge");
  }
  return es.eigenvalues()(0);
}

AlphaResult AlphaOperator::solve(double s) const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s * e1r_ + e0r_);
  if (es.info() != Eigen::Success) {
    throw NumericalError("eigenvalue iteration did not converge");
  }
  AlphaResult res;
  res.alpha = es.eigenvalues()(0);
  res.s = s;
  res.xi_abs = xi_abs_;
  const int n = e1r_.rows();
  if (n > 1) {
    res.degenerate = es.eigenvalues()(1) - es.eigenvalues()(0) <=
                     1e-12 * std::max(1.0, std::abs(res.alpha));
  }
  // Back-transform; unit reduced vector gives J(psi) = 1 exactly.
  res.psi = linvT_ * es.eigenvectors().col(0);

  // Sign convention: psi(0) >= 0, falling back to psi(1) >= 0.
  const double nrm = res.psi.norm();
  const double at0 = res.psi[interface_value_dof_];
  if (std::abs(at0) >= 1e-14 * nrm) {
    if (at0 < 0) res.psi = -res.psi;
  } else if (res.psi[top_value_dof_] < 0) {
    res.psi = -res.psi;
  }

  const Eigen::VectorXd r =
      (s * e1_.mat + e0_.mat) * res.psi - res.alpha * (j_.mat * res.psi);
  const double denom =
      (s * e1_norm_ + e0_norm_ + std::abs(res.alpha) * j_norm_) *
          res.psi.norm() +
      1e-300;
  res.residual = r.norm() / denom;
  return res;
}

AlphaResult solve_alpha(const Mesh& mesh, const FluidConfig& cfg,
                        double xi_abs, double s) {
  if (!(s > 0)) throw Error("solve_alpha: s must be > 0");
  AlphaOperator op(mesh, cfg, xi_abs);
  return op.solve(s);
}

double oracle_alpha(const Mesh& mesh, const FluidConfig& cfg, double xi_abs,
                    double s, const OracleOptions& opt) {
  const QuadForm e1 = assemble_E1(mesh, cfg, xi_abs);
  const QuadForm e0 = assemble_E0(mesh, cfg, xi_abs);
  const QuadForm jf = assemble_J(mesh, cfg, xi_abs);
  const Eigen::MatrixXd A = s * e1.mat + e0.mat;
  const Eigen::MatrixXd& B = jf.mat;
  const int n = A.rows();

  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  // Exact step along a direction d: the stationarity condition of
  // R(x + t d) is a quadratic in t (cross moments of A and B on
  // span{x, d}); pick the root with the lower quotient.
  auto line_step = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& d,
                       double axx, double bxx) {
    const Eigen::VectorXd Ad = A * d;
    const Eigen::VectorXd Bd = B * d;
    const double axd = x.dot(Ad), add = d.dot(Ad);
    const double bxd = x.dot(Bd), bdd = d.dot(Bd);
    const double c2 = add * bxd - axd * bdd;
    const double c1 = add * bxx - axx * bdd;
    const double c0 = axd * bxx - axx * bxd;
    auto quot_at = [&](double t) {
      const double num = axx + 2 * t * axd + t * t * add;
      const double den = bxx + 2 * t * bxd + t * t * bdd;
      return den > 0 ? num / den : std::numeric_limits<double>::infinity();
    };
    double t = 0;
    if (std::abs(c2) > 1e-300) {
      const double disc = c1 * c1 - 4 * c2 * c0;
      if (disc >= 0) {
        const double r = std::sqrt(disc);
        const double t1 = (-c1 + r) / (2 * c2);
        const double t2 = (-c1 - r) / (2 * c2);
        t = quot_at(t1) <= quot_at(t2) ? t1 : t2;
      }
    } else if (std::abs(c1) > 1e-300) {
      t = -c0 / c1;
    }
    if (!(quot_at(t) < quot_at(0))) t = 0;
    return t;
  };

  double best = std::numeric_limits<double>::infinity();
  for (int start = 0; start < opt.starts; ++start) {
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x[i] = gauss(rng);
    x /= std::sqrt(x.dot(B * x));
    double quot = x.dot(A * x);

    // Gradient descent with conjugate (Polak-Ribiere) momentum and the
    // exact step; momentum restarts whenever the combined direction stops
    // being a descent direction.
    Eigen::VectorXd g_prev, dir;
    for (int it = 0; it < opt.max_iters; ++it) {
      const Eigen::VectorXd grad = 2.0 * (A * x - quot * (B * x));
      if (grad.norm() <= opt.grad_tol * (1.0 + std::abs(quot))) break;
      double beta = 0;
      if (it > 0) {
        beta = grad.dot(grad - g_prev) / g_prev.squaredNorm();
        beta = std::max(0.0, beta);
      }
      if (it == 0 || beta == 0) {
        dir = -grad;
      } else {
        dir = -grad + beta * dir;
        // Keep the search direction tangent to the constraint surface.
        dir -= dir.dot(B * x) * x;
        if (dir.dot(grad) >= 0) dir = -grad;
      }
      const double t = line_step(x, dir, quot, 1.0);
      if (t == 0) break;  // stationary along the direction
      Eigen::VectorXd y = x + t * dir;
      const double jn = y.dot(B * y);
      if (!(jn > 0)) break;
      y /= std::sqrt(jn);
      const double q = y.dot(A * y);
      if (!(q < quot)) break;
      x = std::move(y);
      quot = q;
      g_prev = grad;
    }
    best = std::min(best, quot);
  }
  return best;
}

double euler_lagrange_residual(const AlphaResult& res, const Mesh& mesh,
                               const FluidConfig& cfg) {
  const QuadForm e1 = assemble_E1(mesh, cfg, res.xi_abs);
  const QuadForm e0 = assemble_E0(mesh, cfg, res.xi_abs);
  const QuadForm jf = assemble_J(mesh, cfg, res.xi_abs);
  const Eigen::VectorXd r =
      (res.s * e1.mat + e0.mat) * res.psi - res.alpha * (jf.mat * res.psi);
  return r.norm();
}

}  // namespace rtspec
