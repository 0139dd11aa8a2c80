#include "rtspec/growth.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <thread>

#include "rtspec/errors.hpp"

namespace rtspec {

double lambda_ceiling(const FluidConfig& cfg) {
  return cfg.b * cfg.g * jump_density(cfg) / (4 * cfg.mu_minus);
}

double lambda_proof_bound(const FluidConfig& cfg, double xi_abs) {
  const double rad =
      2 * xi_abs * (cfg.g * jump_density(cfg) - cfg.sigma_minus * xi_abs * xi_abs) /
      cfg.rho_minus;
  return rad >= 0 ? std::sqrt(rad) : std::numeric_limits<double>::quiet_NaN();
}

GrowthResult growth_rate(const AlphaOperator& op, const FluidConfig& cfg,
                         const GrowthOptions& opt) {
  GrowthResult res;
  const double jump = jump_density(cfg);
  const double ceiling = lambda_ceiling(cfg);
  const double probe_scale =
      jump > 0 ? ceiling : cfg.b * cfg.g * (cfg.rho_plus + cfg.rho_minus) /
                               (4 * cfg.mu_minus);
  double s_lo = 1e-8 * probe_scale;

  double a_lo = op.alpha_only(s_lo);
  if (a_lo >= -opt.stable_tol) {
    res.unstable = false;
    res.alpha_floor = a_lo;
    return res;
  }

  auto h = [&](double s) {
    const double v = s * s + op.alpha_only(s);
    res.h_evals.emplace_back(s, v);
    return v;
  };

  // alpha(s_lo) < 0 guarantees a root below once s^2 < |alpha|.
  double h_lo = s_lo * s_lo + a_lo;
  res.h_evals.emplace_back(s_lo, h_lo);
  for (int k = 0; k < 200 && h_lo >= 0; ++k) {
    s_lo *= 0.25;
    h_lo = h(s_lo);
  }
  if (h_lo >= 0) {
    throw NumericalError("growth_rate: could not find h < 0 above s = 0");
  }

  double s_hi = ceiling;
  double h_hi = h(s_hi);
  int doublings = 0;
  while (h_hi <= 0 && doublings < opt.max_doublings) {
    s_hi *= 2;
    ++doublings;
    h_hi = h(s_hi);
  }
  if (h_hi <= 0) {
    throw BracketFailureError(
        "growth_rate: s^2 + alpha(s) stayed negative up to the doubling cap");
  }

  // Bisection; h is strictly increasing (s^2 plus the increasing alpha).
  double mid = 0.5 * (s_lo + s_hi);
  for (int it = 0; it < 400; ++it) {
    mid = 0.5 * (s_lo + s_hi);
    const double hm = h(mid);
    if (hm < 0) {
      s_lo = mid;
    } else {
      s_hi = mid;
    }
    const bool width_ok = (s_hi - s_lo) <= opt.tol_rel * s_hi;
    if (width_ok && std::abs(hm) <= opt.fix_tol * (1 + mid * mid)) break;
  }

  const double lambda = 0.5 * (s_lo + s_hi);
  AlphaResult at_root = op.solve(lambda);
  res.unstable = true;
  res.lambda = lambda;
  res.s_star = lambda;
  res.alpha_at_star = at_root.alpha;
  res.psi = std::move(at_root.psi);
  res.degenerate = at_root.degenerate;
  return res;
}

GrowthResult growth_rate(const Mesh& mesh, const FluidConfig& cfg,
                         double xi_abs, const GrowthOptions& opt) {
  if (!(xi_abs > 0)) throw Error("growth_rate: xi_abs must be > 0");
  AlphaOperator op(mesh, cfg, xi_abs);
  return growth_rate(op, cfg, opt);
}

namespace {

int resolve_threads(int n_threads) {
  if (n_threads > 0) return n_threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

// Growth results for a set of magnitudes, parallel over magnitudes with a
// fixed output order. Failures are captured as messages.
struct MagnitudeResult {
  std::optional<GrowthResult> result;
  std::string error;
};

std::vector<MagnitudeResult> solve_magnitudes(const Mesh& mesh,
                                              const FluidConfig& cfg,
                                              const std::vector<double>& mags,
                                              const GrowthOptions& opt,
                                              int n_threads) {
  std::vector<MagnitudeResult> out(mags.size());
  const int workers =
      std::min<int>(resolve_threads(n_threads), static_cast<int>(mags.size()));
  if (workers <= 1) {
    for (size_t i = 0; i < mags.size(); ++i) {
      try {
        out[i].result = growth_rate(mesh, cfg, mags[i], opt);
      } catch (const Error& e) {
        out[i].error = e.what();
      }
    }
    return out;
  }
  std::atomic<size_t> next{0};
  auto work = [&]() {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= mags.size()) return;
      try {
        out[i].result = growth_rate(mesh, cfg, mags[i], opt);
      } catch (const Error& e) {
        out[i].error = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int t = 0; t < workers; ++t) pool.emplace_back(work);
  for (auto& th : pool) th.join();
  return out;
}

}  // namespace

std::vector<DispersionPoint> dispersion_curve(
    const Mesh& mesh, const FluidConfig& cfg,
    const std::vector<Frequency>& frequencies, const GrowthOptions& opt,
    int n_threads) {
  if (frequencies.empty()) {
    throw Error("dispersion_curve: frequency list is empty");
  }
  // Deduplicate by the exact magnitude key: lambda depends on |xi| only.
  std::map<double, size_t> mag_index;
  std::vector<double> mags;
  std::vector<size_t> freq_to_mag(frequencies.size());
  for (size_t i = 0; i < frequencies.size(); ++i) {
    if (!(frequencies[i].magnitude() > 0)) {
      throw Error("dispersion_curve: zero frequency");
    }
    const double key = frequencies[i].magnitude_key(cfg);
    auto [it, inserted] = mag_index.try_emplace(key, mags.size());
    if (inserted) mags.push_back(frequencies[i].magnitude());
    freq_to_mag[i] = it->second;
  }

  const auto solved = solve_magnitudes(mesh, cfg, mags, opt, n_threads);

  std::vector<DispersionPoint> out(frequencies.size());
  for (size_t i = 0; i < frequencies.size(); ++i) {
    out[i].xi = frequencies[i];
    const auto& m = solved[freq_to_mag[i]];
    out[i].result = m.result;
    out[i].error = m.error;
  }
  return out;
}

namespace {

// lambda(|xi|) treating Stable as 0; errors propagate.
double lambda_at(const Mesh& mesh, const FluidConfig& cfg, double k,
                 const GrowthOptions& opt) {
  const GrowthResult r = growth_rate(mesh, cfg, k, opt);
  return r.unstable ? r.lambda : 0.0;
}

}  // namespace

SharpRate sharp_rate(const Mesh& mesh, const FluidConfig& cfg,
                     const SharpRateOptions& opt) {
  const Regime regime = classify_regime(cfg);
  if (regime.label != RegimeLabel::UnstableNoST &&
      regime.label != RegimeLabel::UnstableST) {
    throw NotUnstableError("sharp_rate requires an unstable regime (got " +
                           to_string(regime.label) + ")");
  }

  SharpRate sr;
  sr.ceiling = lambda_ceiling(cfg);
  sr.sigma_minus_zero = cfg.sigma_minus == 0;

  const double min_spacing = std::min(1 / cfg.L1, 1 / cfg.L2);
  double scan_hi = 0;  // upper end of the continuous window actually scanned

  std::vector<Frequency> freqs;
  std::vector<DispersionPoint> points;

  if (!sr.sigma_minus_zero) {
    const double kc = xi_critical(cfg);
    freqs = lattice_frequencies(cfg, kc);
    // Strictly sub-critical lattice points only.
    std::erase_if(freqs, [&](const Frequency& f) {
      return f.magnitude() >= kc * (1 - 1e-12);
    });
    scan_hi = kc;
    if (!freqs.empty()) {
      points = dispersion_curve(mesh, cfg, freqs, opt.growth, opt.n_threads);
    }
    for (const auto& p : points) {
      if (!p.error.empty()) throw NumericalError(p.error);
      sr.scanned_xi.push_back(p.xi.magnitude());
      if (p.result->unstable && p.result->lambda > sr.lattice_max) {
        sr.lattice_max = p.result->lambda;
        sr.achieved_at = p.xi;
      }
    }
  } else {
    // Shell scan of increasing |xi| with the decreasing-shells stopping rule.
    sr.truncation.xi_cap = opt.cap_spacings * min_spacing;
    sr.truncation.consecutive_rule = 3;
    sr.truncation.fraction_rule = 0.5;
    std::vector<Frequency> all = lattice_frequencies(cfg, sr.truncation.xi_cap);
    // Distinct shells by exact magnitude key, ascending.
    std::vector<std::pair<double, Frequency>> shells;
    double last_key = -1;
    for (const auto& f : all) {
      const double key = f.magnitude_key(cfg);
      if (key != last_key) {
        shells.emplace_back(f.magnitude(), f);
        last_key = key;
      }
    }
    int decreasing = 0;
    double prev_lambda = -1;
    for (const auto& [k, f] : shells) {
      const GrowthResult r = growth_rate(mesh, cfg, k, opt.growth);
      ++sr.truncation.shells_scanned;
      sr.scanned_xi.push_back(k);
      scan_hi = k;
      const double lam = r.unstable ? r.lambda : 0.0;
      if (lam > sr.lattice_max) {
        sr.lattice_max = lam;
        sr.achieved_at = f;
      }
      decreasing = (prev_lambda >= 0 && lam < prev_lambda) ? decreasing + 1 : 0;
      prev_lambda = lam;
      if (decreasing >= sr.truncation.consecutive_rule &&
          lam < sr.truncation.fraction_rule * sr.lattice_max) {
        sr.truncation.applied = true;
        break;
      }
    }
    if (!sr.truncation.applied) sr.truncation.hit_cap = true;
  }

  // Continuous envelope over (0, scan_hi): coarse grid seeded with the
  // lattice samples, then golden-section refinement around the best point.
  std::vector<std::pair<double, double>> samples;  // (k, lambda)
  for (const auto& p : points) {
    if (p.result && p.result->unstable) {
      samples.emplace_back(p.xi.magnitude(), p.result->lambda);
    }
  }
  if (sr.sigma_minus_zero && sr.achieved_at) {
    samples.emplace_back(sr.achieved_at->magnitude(), sr.lattice_max);
  }
  if (scan_hi > 0) {
    std::vector<double> grid;
    for (int i = 1; i <= opt.coarse_points; ++i) {
      grid.push_back(scan_hi * i / (opt.coarse_points + 1));
    }
    std::vector<MagnitudeResult> coarse =
        solve_magnitudes(mesh, cfg, grid, opt.growth, opt.n_threads);
    for (size_t i = 0; i < grid.size(); ++i) {
      if (coarse[i].result) {
        samples.emplace_back(grid[i], coarse[i].result->unstable
                                          ? coarse[i].result->lambda
                                          : 0.0);
      }
    }
    std::sort(samples.begin(), samples.end());
    if (samples.empty()) return sr;
    size_t best = 0;
    for (size_t i = 1; i < samples.size(); ++i) {
      if (samples[i].second > samples[best].second) best = i;
    }
    sr.continuous_envelope = samples[best].second;
    sr.envelope_xi = samples[best].first;
    if (sr.continuous_envelope > 0) {
      double a = best > 0 ? samples[best - 1].first : samples[best].first / 2;
      double c = best + 1 < samples.size() ? samples[best + 1].first
                                           : std::min(scan_hi, 2 * samples[best].first);
      const double gr = (std::sqrt(5.0) - 1) / 2;
      double x1 = c - gr * (c - a), x2 = a + gr * (c - a);
      double f1 = lambda_at(mesh, cfg, x1, opt.growth);
      double f2 = lambda_at(mesh, cfg, x2, opt.growth);
      while (c - a > opt.golden_tol * c) {
        if (f1 >= f2) {
          c = x2;
          x2 = x1;
          f2 = f1;
          x1 = c - gr * (c - a);
          f1 = lambda_at(mesh, cfg, x1, opt.growth);
        } else {
          a = x1;
          x1 = x2;
          f1 = f2;
          x2 = a + gr * (c - a);
          f2 = lambda_at(mesh, cfg, x2, opt.growth);
        }
      }
      const double km = 0.5 * (a + c);
      const double fm = lambda_at(mesh, cfg, km, opt.growth);
      if (fm > sr.continuous_envelope) {
        sr.continuous_envelope = fm;
        sr.envelope_xi = km;
      }
      if (f1 > sr.continuous_envelope) {
        sr.continuous_envelope = f1;
        sr.envelope_xi = x1;
      }
      if (f2 > sr.continuous_envelope) {
        sr.continuous_envelope = f2;
        sr.envelope_xi = x2;
      }
    }
  }
  return sr;
}

}  // namespace rtspec
