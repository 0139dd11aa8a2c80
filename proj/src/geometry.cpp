#include "rtspec/geometry.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <sstream>

#include "rtspec/errors.hpp"

namespace rtspec {

void SurfaceFunction::validate() const {
  if (!zero_average) return;
  for (const auto& sc : coefs) {
    if (sc.n1 == 0 && sc.n2 == 0 && std::abs(sc.c) > 0) {
      throw ConfigError("surface function: zero-average flag set but the "
                        "(0,0) amplitude is nonzero");
    }
  }
}

double SurfaceFunction::eval(double x1, double x2, int d1, int d2) const {
  std::complex<double> acc{0, 0};
  for (const auto& sc : coefs) {
    const double k1 = sc.n1 / L1, k2 = sc.n2 / L2;
    std::complex<double> term =
        sc.c * std::exp(std::complex<double>(0, k1 * x1 + k2 * x2));
    for (int d = 0; d < d1; ++d) term *= std::complex<double>(0, k1);
    for (int d = 0; d < d2; ++d) term *= std::complex<double>(0, k2);
    acc += term;
  }
  return acc.real();
}

SurfaceFunction SurfaceFunction::single_mode(const Frequency& xi,
                                             std::complex<double> amp,
                                             double L1, double L2) {
  SurfaceFunction f;
  f.L1 = L1;
  f.L2 = L2;
  // Re(amp e^{i xi.x}) = (amp/2) e^{i xi.x} + conj(amp)/2 e^{-i xi.x}.
  f.coefs.push_back({xi.n1, xi.n2, amp * 0.5});
  f.coefs.push_back({-xi.n1, -xi.n2, std::conj(amp) * 0.5});
  f.zero_average = !(xi.n1 == 0 && xi.n2 == 0);
  return f;
}

SurfaceFunction SurfaceFunction::scaled(double factor) const {
  SurfaceFunction f = *this;
  for (auto& sc : f.coefs) sc.c *= factor;
  return f;
}

ExtensionCoeffs vandermonde_coeffs(std::span<const double> decay_rates) {
  const int n = static_cast<int>(decay_rates.size());
  if (n == 0) throw Error("vandermonde_coeffs: need at least one rate");
  for (int i = 0; i < n; ++i) {
    if (!(decay_rates[i] > 0)) {
      throw Error("vandermonde_coeffs: rates must be positive");
    }
    if (i > 0 && !(decay_rates[i] > decay_rates[i - 1])) {
      throw Error("vandermonde_coeffs: rates must be strictly increasing");
    }
  }
  Eigen::MatrixXd V(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      V(i, j) = std::pow(-decay_rates[j], i);
    }
  }
  const Eigen::VectorXd q = Eigen::VectorXd::Ones(n);
  const Eigen::VectorXd a = V.fullPivLu().solve(q);
  ExtensionCoeffs out;
  out.decay_rates.assign(decay_rates.begin(), decay_rates.end());
  out.alphas.assign(a.data(), a.data() + n);
  out.residual = (V * a - q).norm();
  if (!(out.residual <= 1e-8)) {
    std::ostringstream ss;
    ss << "vandermonde_coeffs: residual " << out.residual
       << " exceeds 1e-8 (order too large?)";
    throw IllConditionedError(ss.str());
  }
  return out;
}

const ExtensionCoeffs& default_extension_coeffs() {
  static const ExtensionCoeffs c = [] {
    const double rates[] = {1, 2, 3, 4, 5};
    return vandermonde_coeffs(rates);
  }();
  return c;
}

double poisson_extend(const SurfaceFunction& f, ExtensionKind kind,
                      const ExtensionCoeffs& coeffs, double x1, double x2,
                      double x3, int d1, int d2, int d3) {
  std::complex<double> acc{0, 0};
  for (const auto& sc : f.coefs) {
    const double k1 = sc.n1 / f.L1, k2 = sc.n2 / f.L2;
    const double kabs = std::hypot(k1, k2);
    std::complex<double> term =
        sc.c * std::exp(std::complex<double>(0, k1 * x1 + k2 * x2));
    for (int d = 0; d < d1; ++d) term *= std::complex<double>(0, k1);
    for (int d = 0; d < d2; ++d) term *= std::complex<double>(0, k2);
    double vert = 0;
    switch (kind) {
      case ExtensionKind::MinusAt1:
        vert = std::pow(kabs, d3) * std::exp(kabs * (x3 - 1));
        break;
      case ExtensionKind::MinusAt0:
        vert = std::pow(kabs, d3) * std::exp(kabs * x3);
        break;
      case ExtensionKind::PlusAt0: {
        for (size_t j = 0; j < coeffs.decay_rates.size(); ++j) {
          const double r = coeffs.decay_rates[j];
          vert += coeffs.alphas[j] * std::pow(-kabs * r, d3) *
                  std::exp(-kabs * r * x3);
        }
        break;
      }
    }
    // |xi| = 0 extends constantly; its vertical derivatives vanish.
    if (kabs == 0) vert = d3 == 0 ? 1.0 : 0.0;
    acc += term * vert;
  }
  return acc.real();
}

namespace {

struct BarValues {
  double v = 0, d1 = 0, d2 = 0, d3 = 0;
};

BarValues bar_eta(const SurfaceFunction& f, ExtensionKind kind,
                  const ExtensionCoeffs& coeffs, double x1, double x2,
                  double x3) {
  BarValues b;
  b.v = poisson_extend(f, kind, coeffs, x1, x2, x3, 0, 0, 0);
  b.d1 = poisson_extend(f, kind, coeffs, x1, x2, x3, 1, 0, 0);
  b.d2 = poisson_extend(f, kind, coeffs, x1, x2, x3, 0, 1, 0);
  b.d3 = poisson_extend(f, kind, coeffs, x1, x2, x3, 0, 0, 1);
  return b;
}

}  // namespace

FlattenSample flatten_map(const SurfaceFunction& eta_plus,
                          const SurfaceFunction& eta_minus,
                          const ExtensionCoeffs& coeffs,
                          const FluidConfig& cfg, double x1, double x2,
                          double x3, const SurfaceFunction* deta_plus_dt,
                          const SurfaceFunction* deta_minus_dt,
                          bool allow_degenerate) {
  const double b = cfg.b;
  const double bt = 1 + x3 / b;
  const bool upper = x3 > 0;
  const ExtensionKind minus_kind =
      upper ? ExtensionKind::PlusAt0 : ExtensionKind::MinusAt0;

  const BarValues em = bar_eta(eta_minus, minus_kind, coeffs, x1, x2, x3);
  FlattenSample s;
  if (upper) {
    const BarValues ep =
        bar_eta(eta_plus, ExtensionKind::MinusAt1, coeffs, x1, x2, x3);
    const double c = 1 + 1 / b;
    s.theta3 = x3 + x3 * x3 * (ep.v - c * em.v) + bt * em.v;
    s.A = x3 * x3 * (ep.d1 - c * em.d1) + em.d1 * bt;
    s.B = x3 * x3 * (ep.d2 - c * em.d2) + em.d2 * bt;
    s.J_jac = 1 + 2 * x3 * (ep.v - c * em.v) + x3 * x3 * (ep.d3 - c * em.d3) +
              em.v / b + em.d3 * bt;
    if (deta_plus_dt && deta_minus_dt) {
      const double dtp = poisson_extend(*deta_plus_dt, ExtensionKind::MinusAt1,
                                        coeffs, x1, x2, x3);
      const double dtm =
          poisson_extend(*deta_minus_dt, minus_kind, coeffs, x1, x2, x3);
      s.W = (x3 * x3 * (dtp - c * dtm) + bt * dtm);
      s.has_W = true;
    }
  } else {
    s.theta3 = x3 + bt * em.v;
    s.A = em.d1 * bt;
    s.B = em.d2 * bt;
    s.J_jac = 1 + em.v / b + em.d3 * bt;
    if (deta_minus_dt) {
      const double dtm =
          poisson_extend(*deta_minus_dt, minus_kind, coeffs, x1, x2, x3);
      s.W = bt * dtm;
      s.has_W = true;
    }
  }

  if (s.J_jac <= 0) {
    if (!allow_degenerate) {
      std::ostringstream ss;
      ss << "flatten_map: degenerate Jacobian J = " << s.J_jac << " at ("
         << x1 << ", " << x2 << ", " << x3 << ")";
      throw DegenerateJacobianError(ss.str());
    }
    s.K = 0;
  } else {
    s.K = 1 / s.J_jac;
  }
  if (s.has_W) s.W *= s.K;

  // Normal / tangents of the bounding surface of this layer.
  const SurfaceFunction& eta = upper ? eta_plus : eta_minus;
  const double e1 = eta.eval(x1, x2, 1, 0);
  const double e2 = eta.eval(x1, x2, 0, 1);
  s.N[0] = -e1;
  s.N[1] = -e2;
  s.N[2] = 1;
  s.T1[0] = 1;
  s.T1[1] = 0;
  s.T1[2] = e1;
  s.T2[0] = 0;
  s.T2[1] = 1;
  s.T2[2] = e2;
  return s;
}

PhysicalFieldSample push_mode_to_physical(const NormalMode& mode,
                                          const FieldSample& sample,
                                          const SurfaceFunction& eta_plus,
                                          const SurfaceFunction& eta_minus,
                                          const ExtensionCoeffs& coeffs,
                                          const FluidConfig& cfg) {
  if (sample.lambda != mode.lambda) {
    throw Error("push_mode_to_physical: sample was built from a different "
                "mode (growth rates differ)");
  }
  PhysicalFieldSample out;
  out.flat = sample;
  const auto& g = sample.grid;
  out.y3.resize(sample.u1.size());
  out.jacobian.resize(sample.u1.size());
  for (int i1 = 0; i1 < g.n1; ++i1) {
    for (int i2 = 0; i2 < g.n2; ++i2) {
      for (int i3 = 0; i3 < g.n3; ++i3) {
        const size_t idx = (static_cast<size_t>(i1) * g.n2 + i2) * g.n3 + i3;
        FlattenSample fsamp;
        try {
          fsamp = flatten_map(eta_plus, eta_minus, coeffs, cfg,
                              sample.x1[i1], sample.x2[i2], sample.x3[i3]);
        } catch (const DegenerateJacobianError& e) {
          std::ostringstream ss;
          ss << e.what() << " [grid index (" << i1 << ", " << i2 << ", " << i3
             << "), t = " << sample.time << "]";
          throw DegenerateJacobianError(ss.str());
        }
        out.y3[idx] = fsamp.theta3;
        out.jacobian[idx] = fsamp.J_jac;
      }
    }
  }
  return out;
}

}  // namespace rtspec
