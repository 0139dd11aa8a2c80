#include "rtspec/modes.hpp"

#include <cmath>

#include "rtspec/errors.hpp"

namespace rtspec {

double HorizontalProfiles::phi_mag(double x, Side side) const {
  return -evaluate_profile(psi, mesh, x, 1, side) / xi_abs;
}

double HorizontalProfiles::phi_mag_prime(double x, Side side) const {
  return -evaluate_profile(psi, mesh, x, 2, side) / xi_abs;
}

HorizontalProfiles recover_horizontal(const Mesh& mesh, const Profile& psi,
                                      const Frequency& xi) {
  const double k = xi.magnitude();
  if (!(k > 0)) throw Error("recover_horizontal: |xi| must be > 0");
  HorizontalProfiles h;
  h.c1 = xi.xi1 / k;
  h.c2 = xi.xi2 / k;
  h.xi_abs = k;
  h.mesh = mesh;
  h.psi = psi;
  return h;
}

namespace {

// pi' within one element: -lambda rho psi - mu (k^2 psi - psi'').
// Evaluated through element e's polynomial even at its edges.
double pi_prime(const Profile& psi, const Mesh& mesh, int e, double x,
                double lambda, double rho, double mu, double k2) {
  const double xl = mesh.nodes[e];
  const double h = mesh.nodes[e + 1] - xl;
  const double t = (x - xl) / h;
  double n0[4], n2[4];
  hermite_shape(t, h, 0, n0);
  hermite_shape(t, h, 2, n2);
  const int dofs[4] = {mesh.value_dof(e), mesh.slope_dof(e),
                       mesh.value_dof(e + 1), mesh.slope_dof(e + 1)};
  double v = 0, vpp = 0;
  for (int a = 0; a < 4; ++a) {
    if (dofs[a] < 0) continue;
    v += n0[a] * psi[dofs[a]];
    vpp += n2[a] * psi[dofs[a]];
  }
  return -lambda * rho * v - mu * (k2 * v - vpp);
}

// Integral of pi' over [x, right edge] of element e (4-pt Gauss, exact for
// the cubic integrand).
double integral_to_right(const Profile& psi, const Mesh& mesh, int e, double x,
                         double lambda, double rho, double mu, double k2) {
  const double xr = mesh.nodes[e + 1];
  const double len = xr - x;
  double acc = 0;
  for (int q = 0; q < kGaussN; ++q) {
    const double xq = x + kGaussX[q] * len;
    acc += kGaussW[q] * len *
           pi_prime(psi, mesh, e, xq, lambda, rho, mu, k2);
  }
  return acc;
}

void layer_constants(const Mesh& mesh, const FluidConfig& cfg, int e,
                     double* rho, double* mu) {
  const bool lower = mesh.element_in_lower(e);
  *rho = lower ? cfg.rho_minus : cfg.rho_plus;
  *mu = lower ? cfg.mu_minus : cfg.mu_plus;
}

}  // namespace

PressureProfile recover_pressure(const Profile& psi, double lambda,
                                 const Mesh& mesh, const FluidConfig& cfg,
                                 double xi_abs) {
  if (!(lambda > 0)) throw Error("recover_pressure: lambda must be > 0");
  const double k2 = xi_abs * xi_abs;
  PressureProfile out;

  const double psi1 = evaluate_profile(psi, mesh, 1.0);
  const double dpsi1 = evaluate_profile(psi, mesh, 1.0, 1);
  out.at_top = (cfg.g * cfg.rho_plus * psi1 + cfg.sigma_plus * k2 * psi1 +
                2 * cfg.mu_plus * lambda * dpsi1) /
               lambda;

  const double psi0 = evaluate_profile(psi, mesh, 0.0);
  const double dpsi0 = evaluate_profile(psi, mesh, 0.0, 1);
  out.jump_at_zero = (cfg.g * jump_density(cfg) * psi0 -
                      cfg.sigma_minus * k2 * psi0 +
                      2 * (cfg.mu_plus - cfg.mu_minus) * lambda * dpsi0) /
                     lambda;

  const int ne = mesh.num_elements();
  out.elem_right.assign(ne, 0.0);
  out.elem_right[ne - 1] = out.at_top;
  for (int e = ne - 1; e >= 0; --e) {
    double rho, mu;
    layer_constants(mesh, cfg, e, &rho, &mu);
    const double left = out.elem_right[e] - integral_to_right(psi, mesh, e,
                                                              mesh.nodes[e],
                                                              lambda, rho, mu,
                                                              k2);
    if (e > 0) {
      out.elem_right[e - 1] =
          e == mesh.n_lower ? left - out.jump_at_zero : left;
    }
  }

  // Samples at element-interior Gauss nodes.
  out.x.reserve(ne * kGaussN);
  out.value.reserve(ne * kGaussN);
  for (int e = 0; e < ne; ++e) {
    double rho, mu;
    layer_constants(mesh, cfg, e, &rho, &mu);
    const double xl = mesh.nodes[e], h = mesh.nodes[e + 1] - xl;
    for (int q = 0; q < kGaussN; ++q) {
      const double xq = xl + kGaussX[q] * h;
      out.x.push_back(xq);
      out.value.push_back(out.elem_right[e] -
                          integral_to_right(psi, mesh, e, xq, lambda, rho, mu,
                                            k2));
    }
  }
  return out;
}

double pressure_at(const PressureProfile& pi, const Profile& psi,
                   double lambda, const Mesh& mesh, const FluidConfig& cfg,
                   double xi_abs, double x3, Side side) {
  const int e = mesh.find_element(x3, side);
  double rho, mu;
  layer_constants(mesh, cfg, e, &rho, &mu);
  return pi.elem_right[e] - integral_to_right(psi, mesh, e, x3, lambda, rho,
                                              mu, xi_abs * xi_abs);
}

NormalMode build_mode(const DispersionPoint& point, const Mesh& mesh,
                      const FluidConfig& cfg) {
  if (!point.result || !point.result->unstable) {
    throw NotUnstableError("build_mode requires an Unstable dispersion point");
  }
  const GrowthResult& g = *point.result;
  NormalMode mode;
  mode.xi = point.xi;
  mode.lambda = g.lambda;
  mode.mesh = mesh;
  mode.psi = g.psi;
  const HorizontalProfiles h = recover_horizontal(mesh, g.psi, point.xi);
  mode.c1 = h.c1;
  mode.c2 = h.c2;
  mode.pi = recover_pressure(g.psi, g.lambda, mesh, cfg, point.xi.magnitude());
  mode.eta_plus = evaluate_profile(g.psi, mesh, 1.0) / g.lambda;
  mode.eta_minus = evaluate_profile(g.psi, mesh, 0.0) / g.lambda;
  return mode;
}

double mode_l2_norm(const NormalMode& mode, const FluidConfig& cfg) {
  const double k = mode.xi.magnitude();
  // Volume part: each horizontal Fourier factor integrates to |T^2|/2.
  double vol = 0;
  const Mesh& mesh = mode.mesh;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const double xl = mesh.nodes[e], h = mesh.nodes[e + 1] - xl;
    for (int q = 0; q < kGaussN; ++q) {
      const double x = xl + kGaussX[q] * h;
      const double ps = evaluate_profile(mode.psi, mesh, x);
      const double dps = evaluate_profile(mode.psi, mesh, x, 1);
      const double phim = -dps / k;
      vol += kGaussW[q] * h * (phim * phim + ps * ps);
    }
  }
  const double surf = std::norm(mode.eta_plus) + std::norm(mode.eta_minus);
  const double area = 4 * M_PI * M_PI * cfg.L1 * cfg.L2;
  return std::sqrt(0.5 * area * (vol + surf));
}

NormalMode scale_mode(const NormalMode& mode, double factor) {
  NormalMode out = mode;
  out.psi *= factor;
  for (double& v : out.pi.value) v *= factor;
  for (double& v : out.pi.elem_right) v *= factor;
  out.pi.jump_at_zero *= factor;
  out.pi.at_top *= factor;
  out.eta_plus *= factor;
  out.eta_minus *= factor;
  return out;
}

FieldSample sample_fields(const NormalMode& mode, const FluidConfig& cfg,
                          double t, const GridSpec& grid) {
  if (t < 0) throw Error("sample_fields: t must be >= 0");
  if (grid.n1 < 2 || grid.n2 < 2 || grid.n3 < 2) {
    throw Error("sample_fields: grid resolutions must be >= 2");
  }
  FieldSample fs;
  fs.grid = grid;
  fs.time = t;
  fs.lambda = mode.lambda;
  const double P1 = 2 * M_PI * cfg.L1, P2 = 2 * M_PI * cfg.L2;
  fs.x1.resize(grid.n1);
  fs.x2.resize(grid.n2);
  fs.x3.resize(grid.n3);
  for (int i = 0; i < grid.n1; ++i) fs.x1[i] = P1 * i / grid.n1;
  for (int i = 0; i < grid.n2; ++i) fs.x2[i] = P2 * i / grid.n2;
  for (int i = 0; i < grid.n3; ++i) {
    fs.x3[i] = -cfg.b + (1 + cfg.b) * i / (grid.n3 - 1);
  }
  fs.x3.back() = 1.0;

  const double gr = std::exp(mode.lambda * t);
  const double k = mode.xi.magnitude();

  // Vertical profiles are shared across horizontal positions.
  std::vector<double> psi_v(grid.n3), phi_v(grid.n3), pi_v(grid.n3);
  for (int i3 = 0; i3 < grid.n3; ++i3) {
    const double x3 = fs.x3[i3];
    const Side side = x3 <= 0 ? Side::Left : Side::Right;
    psi_v[i3] = evaluate_profile(mode.psi, mode.mesh, x3);
    phi_v[i3] = x3 == -cfg.b
                    ? 0.0
                    : -evaluate_profile(mode.psi, mode.mesh, x3, 1) / k;
    pi_v[i3] = pressure_at(mode.pi, mode.psi, mode.lambda, mode.mesh, cfg, k,
                           x3, x3 == -cfg.b ? Side::Right : side);
  }

  const size_t nvol = static_cast<size_t>(grid.n1) * grid.n2 * grid.n3;
  fs.u1.resize(nvol);
  fs.u2.resize(nvol);
  fs.u3.resize(nvol);
  fs.p.resize(nvol);
  fs.eta_plus.resize(static_cast<size_t>(grid.n1) * grid.n2);
  fs.eta_minus.resize(static_cast<size_t>(grid.n1) * grid.n2);

  const double zp = mode.eta_plus.real(), zm = mode.eta_minus.real();
  for (int i1 = 0; i1 < grid.n1; ++i1) {
    for (int i2 = 0; i2 < grid.n2; ++i2) {
      const double phase = mode.xi.xi1 * fs.x1[i1] + mode.xi.xi2 * fs.x2[i2];
      const double cp = std::cos(phase), sp = std::sin(phase);
      fs.eta_plus[i1 * grid.n2 + i2] = zp * cp * gr;
      fs.eta_minus[i1 * grid.n2 + i2] = zm * cp * gr;
      for (int i3 = 0; i3 < grid.n3; ++i3) {
        const size_t idx =
            (static_cast<size_t>(i1) * grid.n2 + i2) * grid.n3 + i3;
        fs.u1[idx] = mode.c1 * phi_v[i3] * sp * gr;
        fs.u2[idx] = mode.c2 * phi_v[i3] * sp * gr;
        fs.u3[idx] = psi_v[i3] * cp * gr;
        fs.p[idx] = pi_v[i3] * cp * gr;
      }
    }
  }
  return fs;
}

double check_energy_identity(const NormalMode& mode, const FluidConfig& cfg,
                             double t0, double t1) {
  if (!(t1 > t0) || t0 < 0) {
    throw Error("check_energy_identity: need t1 > t0 >= 0");
  }
  const double k = mode.xi.magnitude();
  const double lam = mode.lambda;
  if (mode.psi.size() == 0 || mode.psi.isZero(0)) return 0.0;

  // Modal integrals of the physical-field integrands (composite Gauss).
  double I_rho = 0;   // integral rho (phi^2 + theta^2 + psi^2)
  double I_visc = 0;  // integral mu (4 k^2 phi_m^2 + 4 psi'^2 + 2 (phi_m' - k psi)^2)
  const Mesh& mesh = mode.mesh;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const bool lower = mesh.element_in_lower(e);
    const double rho = lower ? cfg.rho_minus : cfg.rho_plus;
    const double mu = lower ? cfg.mu_minus : cfg.mu_plus;
    const double xl = mesh.nodes[e], h = mesh.nodes[e + 1] - xl;
    for (int q = 0; q < kGaussN; ++q) {
      const double x = xl + kGaussX[q] * h;
      const double w = kGaussW[q] * h;
      const double ps = evaluate_profile(mode.psi, mesh, x);
      const double dps = evaluate_profile(mode.psi, mesh, x, 1);
      const double ddps = evaluate_profile(mode.psi, mesh, x, 2,
                                           Side::Right);
      const double phim = -dps / k;
      const double dphim = -ddps / k;
      I_rho += w * rho * (phim * phim + ps * ps);
      I_visc += w * mu *
                (4 * k * k * phim * phim + 4 * dps * dps +
                 2 * (dphim - k * ps) * (dphim - k * ps));
    }
  }
  const double psi1 = evaluate_profile(mode.psi, mesh, 1.0);
  const double psi0 = evaluate_profile(mode.psi, mesh, 0.0);
  const double S =
      (cfg.sigma_plus * k * k + cfg.g * cfg.rho_plus) * psi1 * psi1 +
      (cfg.sigma_minus * k * k - cfg.g * jump_density(cfg)) * psi0 * psi0;

  // d/dt of (1/2)(lam^2 I_rho + S) e^{2 lam t} plus (1/2) lam^2 I_visc
  // e^{2 lam t}; the common e^{2 lam t} makes the relative residual
  // t-independent, checked at both ends anyway.
  const double resid = lam * (lam * lam * I_rho + S) + 0.5 * lam * lam * I_visc;
  const double scale = lam * lam * lam * I_rho + lam * std::abs(S) +
                       0.5 * lam * lam * I_visc;
  if (scale == 0) return 0.0;
  double worst = 0;
  for (double t : {t0, t1}) {
    const double f = std::exp(2 * lam * t);
    worst = std::max(worst, std::abs(resid * f) / (scale * f));
  }
  return worst;
}

}  // namespace rtspec
